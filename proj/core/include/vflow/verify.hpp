#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vflow/grid.hpp"
#include "vflow/picard.hpp"
#include "vflow/rk.hpp"
#include "vflow/trajectory.hpp"
#include "vflow/vorticity.hpp"

namespace vflow {

// Thresholds of the uniqueness verdict.
inline constexpr double kLowerBoundFloor = -1e-8;
inline constexpr double kContractionCeiling = 0.55;
inline constexpr double kCrossMethodCeiling = 1e-6;
// ln(r2 / r0) <= 1 - kLogStrictness keeps the log cap strict.
inline constexpr double kLogStrictness = 1e-9;

enum class BindingConstraint { LogCap, QuadraticCap };

const char* to_string(BindingConstraint binding) noexcept;

/// Right end r2 of the interval on which the weighted-norm argument contracts
/// by 1/2: ln(r/r0) < 1 and C / sqrt(r0 psi1) * (r^2 - r0^2) / 2 <= 1/2.
struct UniquenessWindow {
  double r0 = 1.0;
  double psi1 = 1.0;
  double holder_C = 1.0;
  double r2 = 1.0;
  double log_cap = 1.0;
  double quadratic_cap = 1.0;
  BindingConstraint binding = BindingConstraint::QuadraticCap;
  double window_end_effective = 1.0;  // min(r2, trajectory window ends)
};

UniquenessWindow compute_r2(double holder_C, double r0, double psi1);
UniquenessWindow compute_r2(const VorticityModel& model, double r0, double psi1);

/// Re-checks both defining constraints in floating point.
bool window_constraints_hold(const UniquenessWindow& window);

/// Intersects the effective window with a trajectory's validity window.
UniquenessWindow restrict_to(UniquenessWindow window, const Trajectory& traj);

/// min over window nodes r > r0 of psi(r) - r0 psi1 ln(r/r0). Throws
/// DomainError for psi1 <= 0 or an empty window.
double check_lower_bound(const Trajectory& traj, double r0, double psi1);

struct DeviationSample {
  double r = 0.0;
  double y = 0.0;
};

/// y(r) = |psi_a(r) - psi_b(r)| / ln(r/r0) at up to n_probe nodes whose offsets
/// from r0 shrink geometrically from the shared window end (capped at r_limit)
/// down to the first node. Ordered outermost first.
std::vector<DeviationSample> deviation_limit_trace(
    const Trajectory& a, const Trajectory& b, std::size_t n_probe,
    double r_limit = std::numeric_limits<double>::infinity());

/// True iff every inner sample is at most slack above its outer neighbour.
bool trace_non_increasing(std::span<const DeviationSample> trace, double slack);

struct ContractionProbe {
  // sup_r K int_{r0}^{r} tau y(tau) dtau / y(r*) with K = C / sqrt(r0 psi1):
  // the bound on sup y the integral inequality yields, as a fraction of y(r*).
  double ratio = 0.0;
  double y_star = 0.0;
  double r_star = 0.0;
  std::size_t nodes_checked = 0;
  // first node where K int tau y exceeds y(r*) / 2
  std::optional<double> first_violation;
  // max over nodes of |x(r)| / (K ln(r/r0) int tau y): how tight the node-wise
  // inequality is for this pair, and the first node where it fails by more than slack
  double inequality_tightness = 0.0;
  std::optional<double> first_inequality_violation;
};

/// Evaluates the integral inequality for x = psi_b - psi_a on the nodes of
/// (r0, window.window_end_effective]. Refuses (PreconditionError) when either
/// trajectory misses the lower bound by more than slack.
ContractionProbe contraction_probe(const VorticityModel& model, const Trajectory& a, const Trajectory& b,
                                   const UniquenessWindow& window, double slack = 1e-8);

struct SweepOptions {
  PicardOptions picard{1e-12, 200, false, false};
  std::size_t n_nodes = 1024;
};

struct SweepRow {
  double psi1 = 0.0;
  double dpsi1 = 0.0;    // |psi1 - psi1_first|
  double sup_dev = 0.0;  // sup over the common window of |psi - psi_first|
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by dpsi1
  std::vector<Trajectory> trajectories;  // input order
  double common_window_end = 0.0;
};

/// Empirical continuity in the initial slope: Picard solutions for each psi1
/// on a graded grid over [r0, r0 + r_span], compared against the first entry.
SweepResult continuity_sweep(const VorticityModel& model, double r0, std::span<const double> psi1_values,
                             double r_span, const SweepOptions& options = {});

struct VerifyOptions {
  PicardOptions picard{1e-10, 200, false, true};
  StepControl rk{};
  std::size_t n_probe = 12;
};

struct UniquenessReport {
  double r0 = 1.0;
  double psi1 = 1.0;
  HypothesisReport hypotheses;
  UniquenessWindow window;
  double picard_window_end = 0.0;
  double rk_window_end = 0.0;
  double lower_bound_margin = 0.0;
  double contraction_ratio = 0.0;  // contraction_probe on Picard iterates 1 and 2
  double picard_delta_ratio_max = 0.0;
  double cross_method_weighted_sup = 0.0;
  double residual = 0.0;
  double slack = 0.0;
  std::vector<DeviationSample> deviation_limit_trace;
  bool trace_non_increasing = false;
  std::vector<std::string> failed_checks;
  bool verdict = false;
};

/// Runs both solvers on grid and evaluates every check. Negative psi1 is
/// reduced to |psi1|. A model that fails its hypotheses yields a failed report
/// (sign_condition / holder_bound) without running the solvers, unless
/// options.picard.allow_unvalidated is set.
UniquenessReport verify_uniqueness(const VorticityModel& model, double r0, double psi1,
                                   const RadialGrid& grid, const VerifyOptions& options = {});

std::string to_key_value(const UniquenessReport& report);

/// Header `r,y`.
std::string trace_csv(std::span<const DeviationSample> trace);

}  // namespace vflow
