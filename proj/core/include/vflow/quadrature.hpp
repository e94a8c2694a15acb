#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "vflow/grid.hpp"

namespace vflow {

/// Product integration of the Volterra kernel tau * ln(r / tau) against data
/// sampled on a radial grid.
///
/// The data are interpolated linearly between nodes and the kernel is handled
/// through the split ln(r/tau) = ln(r/r0) - ln(tau/r0). Per-cell moments of
/// tau and tau ln(tau/r0) against the two hat functions are precomputed with
/// 4-point Gauss-Legendre, so every right endpoint is served by one prefix sum.
class KernelQuadrature {
 public:
  explicit KernelQuadrature(const RadialGrid& grid);

  /// out[i] = int_{r0}^{r_i} tau ln(r_i / tau) v(tau) dtau, out[0] = 0.
  std::vector<double> kernel_integrals(std::span<const double> values) const;

  /// out[i] = int_{r0}^{r_i} tau v(tau) dtau, out[0] = 0.
  std::vector<double> moment_integrals(std::span<const double> values) const;

  std::size_t size() const noexcept { return log_ratio_.size(); }

 private:
  struct CellWeights {
    double tau_left, tau_right;        // int tau * hat
    double taulog_left, taulog_right;  // int tau ln(tau/r0) * hat
  };
  std::vector<CellWeights> cells_;
  std::vector<double> log_ratio_;
};

/// Single right endpoint: int_{r0}^{nodes[r_index]} tau ln(nodes[r_index]/tau) values dtau.
/// Returns exactly 0 for r_index == 0.
double kernel_integral(const RadialGrid& grid, std::span<const double> values, std::size_t r_index);

}  // namespace vflow
