#include "vflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vflow/errors.hpp"
#include "vflow/io.hpp"
#include "vflow/quadrature.hpp"

namespace vflow {

const char* to_string(BindingConstraint binding) noexcept {
  return binding == BindingConstraint::LogCap ? "log_cap" : "quadratic_cap";
}

namespace {

double contraction_factor(const UniquenessWindow& w) {
  return w.holder_C / std::sqrt(w.r0 * w.psi1);
}

void require_positive_slope(double psi1, const char* who) {
  if (!(psi1 > 0.0)) throw DomainError(std::string(who) + ": psi1 must be positive (reflect first)");
}

void require_same_problem(const Trajectory& a, const Trajectory& b, const char* who) {
  if (a.r0() != b.r0() || a.psi1 != b.psi1) {
    throw DomainError(std::string(who) + ": trajectories solve different initial value problems");
  }
  if (!a.grid.same_nodes(b.grid)) throw DomainError(std::string(who) + ": trajectories use different grids");
}

}  // namespace

bool window_constraints_hold(const UniquenessWindow& w) {
  const double k = contraction_factor(w);
  return std::log(w.r2 / w.r0) < 1.0 && k * (w.r2 * w.r2 - w.r0 * w.r0) / 2.0 <= 0.5;
}

UniquenessWindow compute_r2(double holder_C, double r0, double psi1) {
  if (!(holder_C > 0.0)) throw DomainError("compute_r2: holder_C must be positive");
  if (!(r0 >= 1.0) || !std::isfinite(r0)) throw DomainError("compute_r2: r0 must be >= 1");
  require_positive_slope(psi1, "compute_r2");

  UniquenessWindow w;
  w.r0 = r0;
  w.psi1 = psi1;
  w.holder_C = holder_C;
  w.log_cap = r0 * std::exp(1.0 - kLogStrictness);
  w.quadratic_cap = std::sqrt(r0 * r0 + std::sqrt(r0 * psi1) / holder_C);
  if (w.log_cap < w.quadratic_cap) {
    w.r2 = w.log_cap;
    w.binding = BindingConstraint::LogCap;
  } else {
    w.r2 = w.quadratic_cap;
    w.binding = BindingConstraint::QuadraticCap;
  }
  // the closed form can land an ulp past the quadratic constraint
  while (w.r2 > r0 && !window_constraints_hold(w)) w.r2 = std::nextafter(w.r2, r0);
  w.window_end_effective = w.r2;
  return w;
}

UniquenessWindow compute_r2(const VorticityModel& model, double r0, double psi1) {
  return compute_r2(model.holder_C(), r0, psi1);
}

UniquenessWindow restrict_to(UniquenessWindow window, const Trajectory& traj) {
  window.window_end_effective = std::min(window.window_end_effective, traj.window_end);
  return window;
}

double check_lower_bound(const Trajectory& traj, double r0, double psi1) {
  require_positive_slope(psi1, "check_lower_bound");
  if (traj.r0() != r0) throw DomainError("check_lower_bound: trajectory does not start at r0");
  if (traj.window_last < 1) throw DomainError("check_lower_bound: empty validity window");
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= traj.window_last; ++i) {
    margin = std::min(margin, traj.psi[i] - r0 * psi1 * traj.grid.log_ratio(i));
  }
  return margin;
}

std::vector<DeviationSample> deviation_limit_trace(const Trajectory& a, const Trajectory& b,
                                                   std::size_t n_probe, double r_limit) {
  require_same_problem(a, b, "deviation_limit_trace");
  if (n_probe < 1) throw DomainError("deviation_limit_trace: n_probe must be >= 1");
  const RadialGrid& grid = a.grid;
  std::size_t last = std::min(a.window_last, b.window_last);
  if (std::isfinite(r_limit)) last = std::min(last, grid.last_index_at_or_below(r_limit));
  if (last < 1) throw DomainError("deviation_limit_trace: shared window is empty");

  auto sample = [&](std::size_t i) {
    return DeviationSample{grid.node(i), std::abs(a.psi[i] - b.psi[i]) / grid.log_ratio(i)};
  };

  std::vector<DeviationSample> trace;
  const double s_outer = grid.offset(last);
  const double s_inner = grid.offset(1);
  const auto offsets = grid.offsets();
  std::size_t previous = 0;
  for (std::size_t k = 0; k < n_probe; ++k) {
    const double t = n_probe == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n_probe - 1);
    const double target = s_outer * std::pow(s_inner / s_outer, t);
    auto it = std::lower_bound(offsets.begin() + 1, offsets.begin() + static_cast<std::ptrdiff_t>(last) + 1,
                               target);
    std::size_t i = static_cast<std::size_t>(it - offsets.begin());
    i = std::clamp<std::size_t>(i, 1, last);
    // nearest node in log scale
    if (i > 1 && std::log(target / offsets[i - 1]) < std::log(offsets[i] / target)) --i;
    if (i == previous) continue;
    trace.push_back(sample(i));
    previous = i;
  }
  return trace;
}

bool trace_non_increasing(std::span<const DeviationSample> trace, double slack) {
  for (std::size_t k = 1; k < trace.size(); ++k) {
    if (trace[k].y > trace[k - 1].y + slack) return false;
  }
  return true;
}

ContractionProbe contraction_probe(const VorticityModel& model, const Trajectory& a, const Trajectory& b,
                                   const UniquenessWindow& window, double slack) {
  require_same_problem(a, b, "contraction_probe");
  const double r0 = a.r0();
  const double psi1 = a.psi1;
  require_positive_slope(psi1, "contraction_probe");
  if (window.r0 != r0) throw DomainError("contraction_probe: window belongs to a different r0");

  const double margin_a = check_lower_bound(a, r0, psi1);
  const double margin_b = check_lower_bound(b, r0, psi1);
  if (margin_a < -slack || margin_b < -slack) {
    std::ostringstream msg;
    msg << "contraction_probe: lower bound violated (margins " << format_real(margin_a) << ", "
        << format_real(margin_b) << "); the integral inequality does not apply";
    throw PreconditionError(msg.str());
  }

  const RadialGrid& grid = a.grid;
  const std::size_t last = grid.last_index_at_or_below(window.window_end_effective);
  if (last < 1) throw DomainError("contraction_probe: window contains no node beyond r0");

  const double k = model.holder_C() / std::sqrt(r0 * psi1);
  std::vector<double> x(grid.size(), 0.0);
  std::vector<double> y(grid.size(), 0.0);
  for (std::size_t i = 1; i <= last; ++i) {
    x[i] = b.psi[i] - a.psi[i];
    y[i] = std::abs(x[i]) / grid.log_ratio(i);
  }
  const WeightedNorm star = weighted_norm(x, grid, last);
  const std::vector<double> tau_y = KernelQuadrature(grid).moment_integrals(y);

  ContractionProbe probe;
  probe.y_star = star.value;
  probe.r_star = star.argmax;
  probe.nodes_checked = last;
  for (std::size_t i = 1; i <= last; ++i) {
    const double bound = k * tau_y[i];
    if (star.value > 0.0) {
      probe.ratio = std::max(probe.ratio, bound / star.value);
      if (!probe.first_violation && bound > 0.5 * star.value * (1.0 + 1e-12)) {
        probe.first_violation = grid.node(i);
      }
    }
    const double rhs = bound * grid.log_ratio(i);
    if (rhs > 0.0) probe.inequality_tightness = std::max(probe.inequality_tightness, std::abs(x[i]) / rhs);
    if (!probe.first_inequality_violation && std::abs(x[i]) > rhs + slack) {
      probe.first_inequality_violation = grid.node(i);
    }
  }
  return probe;
}

SweepResult continuity_sweep(const VorticityModel& model, double r0, std::span<const double> psi1_values,
                             double r_span, const SweepOptions& options) {
  if (psi1_values.size() < 2) throw DomainError("continuity_sweep: need at least 2 values of psi1");
  if (!(r_span > 0.0) || !std::isfinite(r_span)) throw DomainError("continuity_sweep: r_span must be positive");
  const RadialGrid grid = RadialGrid::graded(r0, r0 + r_span, options.n_nodes);

  SweepResult result;
  std::size_t common = grid.size() - 1;
  for (double psi1 : psi1_values) {
    result.trajectories.push_back(picard_solve(model, r0, psi1, grid, options.picard).trajectory);
    common = std::min(common, result.trajectories.back().window_last);
  }
  result.common_window_end = grid.node(common);

  const Trajectory& first = result.trajectories.front();
  for (std::size_t k = 1; k < result.trajectories.size(); ++k) {
    const Trajectory& t = result.trajectories[k];
    double dev = 0.0;
    for (std::size_t i = 1; i <= common; ++i) dev = std::max(dev, std::abs(t.psi[i] - first.psi[i]));
    result.rows.push_back({psi1_values[k], std::abs(psi1_values[k] - psi1_values[0]), dev});
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& l, const SweepRow& r) { return l.dpsi1 < r.dpsi1; });
  return result;
}

UniquenessReport verify_uniqueness(const VorticityModel& model, double r0, double psi1,
                                   const RadialGrid& grid, const VerifyOptions& options) {
  UniquenessReport report;
  report.r0 = r0;
  report.psi1 = std::abs(psi1);
  report.hypotheses = model.hypotheses();
  report.slack = 10.0 * (options.picard.tol + options.rk.rel_tol);

  if (!model.validated()) {
    if (!(report.hypotheses.sign_margin > 0.0)) report.failed_checks.emplace_back("sign_condition");
    if (report.hypotheses.holder_sup > report.hypotheses.holder_C) report.failed_checks.emplace_back("holder_bound");
    if (report.failed_checks.empty()) report.failed_checks.emplace_back("sign_condition");
    if (!options.picard.allow_unvalidated) return report;
  }

  const double p = report.psi1;
  PicardOptions picard_opts = options.picard;
  picard_opts.keep_iterates = true;
  const PicardResult picard = picard_solve(model, r0, p, grid, picard_opts);
  const RkResult rk = rk_solve(model, r0, p, grid.back(), options.rk, grid, picard_opts.allow_unvalidated);
  const Trajectory& tp = picard.trajectory;
  const Trajectory& tr = rk.trajectory;
  report.picard_window_end = tp.window_end;
  report.rk_window_end = tr.window_end;

  report.window = restrict_to(restrict_to(compute_r2(model, r0, p), tp), tr);
  const std::size_t eff_last = grid.last_index_at_or_below(report.window.window_end_effective);

  report.lower_bound_margin = std::min(check_lower_bound(tp, r0, p), check_lower_bound(tr, r0, p));
  report.residual = residual(model, tp);

  const auto& iterates = picard.diagnostics.iterates;
  std::vector<double> deltas;
  std::vector<double> diff(grid.size());
  for (std::size_t k = 0; k + 1 < iterates.size(); ++k) {
    for (std::size_t i = 0; i < grid.size(); ++i) diff[i] = iterates[k + 1][i] - iterates[k][i];
    deltas.push_back(weighted_norm(diff, grid, eff_last).value);
  }
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    if (deltas[k - 1] > 0.0) {
      report.picard_delta_ratio_max = std::max(report.picard_delta_ratio_max, deltas[k] / deltas[k - 1]);
    }
  }

  const std::size_t first_iterate = iterates.size() >= 3 ? 1 : 0;
  const ContractionProbe probe =
      contraction_probe(model, picard_iterate(model, picard, first_iterate),
                        picard_iterate(model, picard, first_iterate + 1), report.window, report.slack);
  report.contraction_ratio = probe.ratio;

  std::vector<double> x(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) x[i] = tp.psi[i] - tr.psi[i];
  report.cross_method_weighted_sup = weighted_norm(x, grid, eff_last).value;

  report.deviation_limit_trace =
      deviation_limit_trace(tp, tr, options.n_probe, report.window.window_end_effective);
  report.trace_non_increasing = trace_non_increasing(report.deviation_limit_trace, report.slack);

  if (report.lower_bound_margin < kLowerBoundFloor) report.failed_checks.emplace_back("lower_bound");
  if (report.contraction_ratio > kContractionCeiling || report.picard_delta_ratio_max > kContractionCeiling) {
    report.failed_checks.emplace_back("contraction");
  }
  if (report.cross_method_weighted_sup > kCrossMethodCeiling) report.failed_checks.emplace_back("cross_method");
  if (!report.trace_non_increasing || report.deviation_limit_trace.back().y > kCrossMethodCeiling) {
    report.failed_checks.emplace_back("deviation_limit");
  }
  report.verdict = report.failed_checks.empty();
  return report;
}

std::string to_key_value(const UniquenessReport& report) {
  std::ostringstream out;
  auto line = [&](const char* key, double v) { out << key << " = " << format_real(v) << '\n'; };
  line("r0", report.r0);
  line("psi1", report.psi1);
  line("holder_C", report.hypotheses.holder_C);
  line("sign_margin", report.hypotheses.sign_margin);
  line("holder_sup", report.hypotheses.holder_sup);
  line("r2", report.window.r2);
  out << "binding_constraint = " << to_string(report.window.binding) << '\n';
  line("log_cap", report.window.log_cap);
  line("quadratic_cap", report.window.quadratic_cap);
  line("picard_window_end", report.picard_window_end);
  line("rk_window_end", report.rk_window_end);
  line("window_end_effective", report.window.window_end_effective);
  line("lower_bound_margin", report.lower_bound_margin);
  line("contraction_ratio", report.contraction_ratio);
  line("picard_delta_ratio_max", report.picard_delta_ratio_max);
  line("cross_method_weighted_sup", report.cross_method_weighted_sup);
  line("picard_residual", report.residual);
  line("slack", report.slack);
  out << "trace_non_increasing = " << (report.trace_non_increasing ? "true" : "false") << '\n';
  out << "failed_checks = ";
  for (std::size_t i = 0; i < report.failed_checks.size(); ++i) {
    out << (i ? "," : "") << report.failed_checks[i];
  }
  out << '\n' << "verdict = " << (report.verdict ? "true" : "false") << '\n';
  return out.str();
}

std::string trace_csv(std::span<const DeviationSample> trace) {
  std::ostringstream out;
  out << "r,y\n";
  for (const DeviationSample& s : trace) out << format_real(s.r) << ',' << format_real(s.y) << '\n';
  return out.str();
}

}  // namespace vflow
