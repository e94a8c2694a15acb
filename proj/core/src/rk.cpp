#include "vflow/rk.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "vflow/errors.hpp"
#include "vflow/io.hpp"

namespace vflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// continuous extension
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

using State = std::array<double, 2>;

struct Dense {
  State r1, r2, r3, r4, r5;
  State at(double theta) const {
    const double t1 = 1.0 - theta;
    State y;
    for (int i = 0; i < 2; ++i) {
      y[i] = r1[i] + theta * (r2[i] + t1 * (r3[i] + theta * (r4[i] + t1 * r5[i])));
    }
    return y;
  }
};

}  // namespace

void StepControl::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("step control: tolerances must be positive");
  if (!(h_min > 0.0 && h_min <= h_init && h_init <= h_max)) {
    throw DomainError("step control: need 0 < h_min <= h_init <= h_max");
  }
  if (max_steps < 1) throw DomainError("step control: max_steps must be >= 1");
}

StateRate rhs(const VorticityModel& model, double r, double psi, double u) {
  if (!std::isfinite(r) || !std::isfinite(psi) || !std::isfinite(u)) {
    throw DomainError("rhs: non-finite state");
  }
  return {u / r, -r * model(psi)};
}

RkResult rk_solve(const VorticityModel& model, double r0, double psi1, double r_max,
                  const StepControl& ctrl, const RadialGrid& output_grid, bool allow_unvalidated) {
  if (!std::isfinite(r0) || !std::isfinite(psi1) || !std::isfinite(r_max)) {
    throw DomainError("rk_solve: non-finite input");
  }
  if (r0 < 1.0) throw DomainError("rk_solve: r0 must be >= 1");
  if (psi1 == 0.0) throw DomainError("rk_solve: psi1 must be nonzero");
  if (!(r_max > r0)) throw DomainError("rk_solve: r_max must exceed r0");
  if (output_grid.r0() != r0) throw DomainError("rk_solve: output grid does not start at r0");
  const double span = r_max - r0;
  if (output_grid.offset(output_grid.size() - 1) > span) {
    throw DomainError("rk_solve: output grid extends beyond r_max");
  }
  ctrl.validate();
  if (!model.validated() && !allow_unvalidated) {
    throw UnvalidatedModelError("rk_solve: vorticity model '" + model.name() +
                                "' failed its hypothesis checks");
  }

  const double sign = psi1 < 0.0 ? -1.0 : 1.0;
  const double slope = std::abs(psi1);

  // Independent variable is the offset s = r - r0, which keeps full precision
  // on the tiny steps next to r0.
  auto f = [&](double s, const State& y) -> State {
    const StateRate d = rhs(model, r0 + s, y[0], y[1]);
    return {d.dpsi, d.du};
  };
  auto axpy = [](const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [coef, k] : terms) {
      out[0] += h * coef * (*k)[0];
      out[1] += h * coef * (*k)[1];
    }
    return out;
  };

  const std::size_t n_out = output_grid.size();
  std::vector<double> psi(n_out, 0.0);
  std::vector<double> u(n_out, 0.0);
  psi[0] = 0.0;
  u[0] = r0 * slope;
  std::size_t next_out = 1;

  double s = 0.0;
  State y{0.0, r0 * slope};
  State k1 = f(s, y);
  double h = std::min({ctrl.h_init, 1e-4 * span, ctrl.h_max});
  double err_old = 1e-4;
  bool last_rejected = false;
  RkLog log;

  while (s < span) {
    if (log.accepted + log.rejected >= ctrl.max_steps) {
      std::ostringstream msg;
      msg << "rk_solve: step budget exhausted at r = " << format_real(r0 + s);
      throw StepSizeUnderflowError(msg.str(), r0 + s);
    }
    bool final_step = false;
    if (s + h >= span) {
      h = span - s;
      final_step = true;
    }
    if (h < ctrl.h_min && !final_step) {
      std::ostringstream msg;
      msg << "rk_solve: step size " << format_real(h) << " fell below h_min at r = " << format_real(r0 + s);
      throw StepSizeUnderflowError(msg.str(), r0 + s);
    }

    const State k2 = f(s + c2 * h, axpy(y, h, {{a21, &k1}}));
    const State k3 = f(s + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const State k4 = f(s + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State k5 = f(s + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State k6 = f(s + h, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State y_new = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const double s_new = final_step ? span : s + h;
    const State k7 = f(s_new, y_new);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double est = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err = std::max(err, std::abs(est) / scale);
    }

    if (!std::isfinite(err)) {
      ++log.rejected;
      h *= kFacMin;
      last_rejected = true;
      continue;
    }

    if (err <= 1.0) {
      Dense dense;
      for (int i = 0; i < 2; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        dense.r1[i] = y[i];
        dense.r2[i] = ydiff;
        dense.r3[i] = bspl;
        dense.r4[i] = ydiff - h * k7[i] - bspl;
        dense.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      while (next_out < n_out && output_grid.offset(next_out) <= s_new) {
        const double theta = (output_grid.offset(next_out) - s) / h;
        const State yo = theta >= 1.0 ? y_new : dense.at(theta);
        psi[next_out] = yo[0];
        u[next_out] = yo[1];
        ++next_out;
      }

      ++log.accepted;
      log.final_step = h;
      s = s_new;
      y = y_new;
      k1 = k7;

      double fac = std::pow(err, -kAlpha) * std::pow(err_old, kBeta);
      if (err == 0.0) fac = kFacMax;
      fac = std::clamp(kSafety * fac, kFacMin, kFacMax);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, ctrl.h_max);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++log.rejected;
      const double fac = std::max(kFacMin, kSafety * std::pow(err, -kAlpha));
      h *= fac;
      last_rejected = true;
    }
  }

  // any nodes at exactly r_max that rounding kept out of the last step
  for (; next_out < n_out; ++next_out) {
    psi[next_out] = y[0];
    u[next_out] = y[1];
  }

  Trajectory traj{output_grid, std::move(psi), std::move(u), psi1, 0, r0, Method::RungeKutta};
  traj.window_last = validity_window(traj.psi, 1.0, model.delta());
  traj.window_end = output_grid.node(traj.window_last);
  if (sign < 0.0) {
    for (double& v : traj.psi) v = -v;
    for (double& v : traj.u) v = -v;
  }
  return RkResult{std::move(traj), log};
}

OrderProbe convergence_order_probe(const VorticityModel& model, double r0, double psi1,
                                   std::span<const double> tolerances, const RadialGrid& grid,
                                   const StepControl& base, bool allow_unvalidated) {
  if (tolerances.size() < 2) throw DomainError("convergence_order_probe: need at least 2 tolerances");
  for (std::size_t i = 1; i < tolerances.size(); ++i) {
    if (!(tolerances[i] < tolerances[i - 1])) {
      throw DomainError("convergence_order_probe: tolerances must be decreasing");
    }
  }

  auto run = [&](double tol) {
    StepControl ctrl = base;
    ctrl.rel_tol = tol;
    ctrl.abs_tol = 1e-2 * tol;
    ctrl.h_min = std::min(ctrl.h_min, ctrl.h_init);
    return rk_solve(model, r0, psi1, grid.back(), ctrl, grid, allow_unvalidated).trajectory;
  };

  const Trajectory reference = run(tolerances.back());
  OrderProbe probe;
  for (std::size_t t = 0; t + 1 < tolerances.size(); ++t) {
    const Trajectory traj = run(tolerances[t]);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(traj.psi[i] - reference.psi[i]));
    }
    probe.entries.push_back({tolerances[t], worst});
  }
  probe.entries.push_back({tolerances.back(), 0.0});

  probe.monotone = true;
  for (std::size_t i = 1; i < probe.entries.size(); ++i) {
    if (!(probe.entries[i].sup_error < probe.entries[i - 1].sup_error)) probe.monotone = false;
  }
  return probe;
}

}  // namespace vflow
