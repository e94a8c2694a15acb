#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vflow/grid.hpp"

namespace vflow {

enum class Method { Picard, RungeKutta };

const char* to_string(Method method) noexcept;

/// Sampled solution of the initial value problem on a radial grid.
///
/// psi[0] = 0 and u[0] = r0 * psi1 with the signed psi1. The validity window
/// is the run of nodes r0 < r <= window_end on which the sign-normalised
/// solution stays in (0, delta].
struct Trajectory {
  RadialGrid grid;
  std::vector<double> psi;
  std::vector<double> u;  // r * psi'
  double psi1 = 0.0;
  std::size_t window_last = 0;  // index of window_end
  double window_end = 0.0;
  Method method = Method::Picard;

  double r0() const noexcept { return grid.r0(); }
  std::size_t size() const noexcept { return psi.size(); }
};

/// Index of the last node of the leading run 1..k with 0 < sign * psi <= delta;
/// 0 when node 1 already falls outside.
std::size_t validity_window(std::span<const double> psi, double sign, double delta);

}  // namespace vflow
