#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vflow/grid.hpp"
#include "vflow/trajectory.hpp"
#include "vflow/vorticity.hpp"

namespace vflow {

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_init = 1e-6;
  double h_min = 1e-15;
  double h_max = 0.05;
  std::size_t max_steps = 10'000'000;

  /// Throws DomainError unless 0 < h_min <= h_init <= h_max and both tolerances are positive.
  void validate() const;
};

struct RkLog {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double final_step = 0.0;
};

struct RkResult {
  Trajectory trajectory;
  RkLog log;
};

struct StateRate {
  double dpsi = 0.0;
  double du = 0.0;
};

/// psi' = u / r, u' = -r f(psi).
StateRate rhs(const VorticityModel& model, double r, double psi, double u);

/// Dormand-Prince 5(4) with a PI step controller and the 4th-order continuous
/// extension, sampled onto output_grid. Integration starts at (psi, u) =
/// (0, r0 |psi1|) and the result is negated for psi1 < 0. The first step is
/// capped at 1e-4 (r_max - r0) to resolve the square-root layer at r0.
RkResult rk_solve(const VorticityModel& model, double r0, double psi1, double r_max,
                  const StepControl& ctrl, const RadialGrid& output_grid,
                  bool allow_unvalidated = false);

struct OrderProbeEntry {
  double tol = 0.0;
  double sup_error = 0.0;
};

struct OrderProbe {
  std::vector<OrderProbeEntry> entries;  // last entry is the reference (error 0)
  bool monotone = false;                 // errors strictly decrease with tol
};

/// Runs rk_solve at each tolerance (rel_tol = tol, abs_tol = 1e-2 tol) and
/// measures the sup deviation on the grid against the tightest run.
OrderProbe convergence_order_probe(const VorticityModel& model, double r0, double psi1,
                                   std::span<const double> tolerances, const RadialGrid& grid,
                                   const StepControl& base = {}, bool allow_unvalidated = false);

}  // namespace vflow
