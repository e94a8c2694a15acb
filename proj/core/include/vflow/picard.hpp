#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vflow/grid.hpp"
#include "vflow/quadrature.hpp"
#include "vflow/trajectory.hpp"
#include "vflow/vorticity.hpp"

namespace vflow {

struct PicardOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200;
  bool allow_unvalidated = false;
  bool keep_iterates = false;
};

struct PicardDiagnostics {
  std::size_t iterations = 0;
  // Weighted-norm distance between consecutive iterates, measured on the
  // newer iterate's validity window.
  std::vector<double> weighted_deltas;
  bool converged = false;
  // Sign-normalised iterates psi_0, psi_1, ... when keep_iterates is set.
  std::vector<std::vector<double>> iterates;
};

struct PicardResult {
  Trajectory trajectory;
  PicardDiagnostics diagnostics;
};

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, PicardDiagnostics diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const PicardDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  PicardDiagnostics diagnostics_;
};

struct WeightedNorm {
  double value = 0.0;
  double argmax = 0.0;    // r*, leftmost maximiser
  std::size_t index = 0;  // node index of r*
};

/// sup over nodes 0 < i <= last of |x_i| / ln(r_i / r0). The value at r0 is 0 by
/// continuity; for x == 0 the maximiser is reported as the first node after r0.
WeightedNorm weighted_norm(std::span<const double> x, const RadialGrid& grid,
                           std::size_t last = std::numeric_limits<std::size_t>::max());

/// Picard iteration on
///   psi(r) = r0 psi1 ln(r/r0) - int_{r0}^{r} tau ln(r/tau) f(psi(tau)) dtau,
/// started from the inhomogeneous term and stopped once the weighted distance
/// between consecutive iterates drops to tol. Negative psi1 is solved as |psi1|
/// and the result negated.
PicardResult picard_solve(const VorticityModel& model, double r0, double psi1, const RadialGrid& grid,
                          const PicardOptions& options = {});

/// Builds a trajectory (u, validity window) from sign-normalised samples.
Trajectory make_trajectory(const VorticityModel& model, const RadialGrid& grid, double psi1,
                           std::span<const double> normalized_psi, Method method);

/// Iterate k of a run made with keep_iterates, as a trajectory.
Trajectory picard_iterate(const VorticityModel& model, const PicardResult& result, std::size_t k);

/// sup over window nodes of |psi - r0 psi1 ln(r/r0) + int tau ln(r/tau) f(psi)|.
double residual(const VorticityModel& model, const Trajectory& traj);

}  // namespace vflow
