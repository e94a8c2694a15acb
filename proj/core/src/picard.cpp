#include "vflow/picard.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vflow/errors.hpp"
#include "vflow/io.hpp"

namespace vflow {

const char* to_string(Method method) noexcept {
  return method == Method::Picard ? "picard" : "rk";
}

std::size_t validity_window(std::span<const double> psi, double sign, double delta) {
  std::size_t last = 0;
  for (std::size_t i = 1; i < psi.size(); ++i) {
    const double v = sign * psi[i];
    if (!(v > 0.0 && v <= delta)) break;
    last = i;
  }
  return last;
}

namespace {

void check_initial_data(double r0, double psi1) {
  if (!std::isfinite(r0) || !std::isfinite(psi1)) throw DomainError("initial data must be finite");
  if (r0 < 1.0) throw DomainError("initial data: r0 must be >= 1");
  if (psi1 == 0.0) throw DomainError("initial data: psi1 must be nonzero");
}

std::vector<double> apply_law(const VorticityModel& model, std::span<const double> psi) {
  std::vector<double> out(psi.size());
  std::transform(psi.begin(), psi.end(), out.begin(), [&](double p) { return model(p); });
  return out;
}

}  // namespace

WeightedNorm weighted_norm(std::span<const double> x, const RadialGrid& grid, std::size_t last) {
  if (grid.size() < 2 || x.size() < 2) throw DomainError("weighted_norm: need at least 2 nodes");
  if (x.size() != grid.size()) throw DomainError("weighted_norm: values do not match the grid");
  if (x[0] != 0.0) throw DomainError("weighted_norm: deviation must vanish at r0");
  last = std::min(last, grid.size() - 1);

  WeightedNorm out{0.0, grid.node(1), 1};
  for (std::size_t i = 1; i <= last; ++i) {
    const double y = std::abs(x[i]) / grid.log_ratio(i);
    if (y > out.value) out = WeightedNorm{y, grid.node(i), i};
  }
  return out;
}

Trajectory make_trajectory(const VorticityModel& model, const RadialGrid& grid, double psi1,
                           std::span<const double> normalized_psi, Method method) {
  const double sign = psi1 < 0.0 ? -1.0 : 1.0;
  const double slope = std::abs(psi1);
  const double r0 = grid.r0();

  KernelQuadrature quad(grid);
  const std::vector<double> forcing = apply_law(model, normalized_psi);
  const std::vector<double> moments = quad.moment_integrals(forcing);

  Trajectory traj{grid, {}, {}, psi1, 0, r0, method};
  traj.psi.resize(grid.size());
  traj.u.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    traj.psi[i] = sign * normalized_psi[i];
    traj.u[i] = sign * (r0 * slope - moments[i]);
  }
  traj.psi[0] = 0.0;
  traj.u[0] = r0 * psi1;
  traj.window_last = validity_window(normalized_psi, 1.0, model.delta());
  traj.window_end = grid.node(traj.window_last);
  return traj;
}

PicardResult picard_solve(const VorticityModel& model, double r0, double psi1, const RadialGrid& grid,
                          const PicardOptions& options) {
  check_initial_data(r0, psi1);
  if (grid.r0() != r0) throw DomainError("picard_solve: grid does not start at r0");
  if (!(options.tol > 0.0)) throw DomainError("picard_solve: tol must be positive");
  if (options.max_iter < 1) throw DomainError("picard_solve: max_iter must be >= 1");
  if (!model.validated() && !options.allow_unvalidated) {
    throw UnvalidatedModelError("picard_solve: vorticity model '" + model.name() +
                                "' failed its hypothesis checks");
  }

  const std::size_t n = grid.size();
  const double slope = std::abs(psi1);
  const double delta = model.delta();
  KernelQuadrature quad(grid);

  std::vector<double> inhomogeneous(n);
  for (std::size_t i = 0; i < n; ++i) inhomogeneous[i] = r0 * slope * grid.log_ratio(i);

  std::vector<double> psi = inhomogeneous;
  if (validity_window(psi, 1.0, delta) == 0) {
    throw WindowCollapseError("picard_solve: initial iterate leaves (0, delta] at the second node");
  }

  PicardDiagnostics diag;
  if (options.keep_iterates) diag.iterates.push_back(psi);

  std::vector<double> next(n);
  std::vector<double> diff(n);
  while (diag.iterations < options.max_iter) {
    const std::vector<double> kernel = quad.kernel_integrals(apply_law(model, psi));
    for (std::size_t i = 0; i < n; ++i) next[i] = inhomogeneous[i] - kernel[i];
    next[0] = 0.0;

    const std::size_t window = validity_window(next, 1.0, delta);
    if (window == 0) {
      throw WindowCollapseError("picard_solve: iterate leaves (0, delta] at the second node");
    }
    for (std::size_t i = 0; i < n; ++i) diff[i] = next[i] - psi[i];
    const double delta_k = weighted_norm(diff, grid, window).value;

    ++diag.iterations;
    diag.weighted_deltas.push_back(delta_k);
    psi.swap(next);
    if (options.keep_iterates) diag.iterates.push_back(psi);
    if (delta_k <= options.tol) {
      diag.converged = true;
      break;
    }
  }

  if (!diag.converged) {
    std::ostringstream msg;
    msg << "picard_solve: no convergence after " << diag.iterations << " iterations (last delta "
        << format_real(diag.weighted_deltas.back()) << ", tol " << format_real(options.tol) << ")";
    throw NonConvergenceError(msg.str(), std::move(diag));
  }

  PicardResult result{make_trajectory(model, grid, psi1, psi, Method::Picard), std::move(diag)};
  return result;
}

Trajectory picard_iterate(const VorticityModel& model, const PicardResult& result, std::size_t k) {
  const auto& iterates = result.diagnostics.iterates;
  if (k >= iterates.size()) throw DomainError("picard_iterate: iterate not recorded");
  return make_trajectory(model, result.trajectory.grid, result.trajectory.psi1, iterates[k],
                         Method::Picard);
}

double residual(const VorticityModel& model, const Trajectory& traj) {
  const RadialGrid& grid = traj.grid;
  const double r0 = grid.r0();
  const std::vector<double> kernel = KernelQuadrature(grid).kernel_integrals(apply_law(model, traj.psi));
  double worst = 0.0;
  for (std::size_t i = 1; i <= traj.window_last; ++i) {
    const double r = traj.psi[i] - r0 * traj.psi1 * grid.log_ratio(i) + kernel[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace vflow
