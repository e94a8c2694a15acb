#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vflow/errors.hpp"
#include "vflow/verify.hpp"

using namespace vflow;

namespace {

PicardOptions with_iterates(double tol = 1e-10) {
  PicardOptions o;
  o.tol = tol;
  o.keep_iterates = true;
  return o;
}

Trajectory shifted(const Trajectory& t, double (*bump)(double s, double ln)) {
  Trajectory out = t;
  for (std::size_t i = 1; i < t.size(); ++i) out.psi[i] += bump(t.grid.offset(i), t.grid.log_ratio(i));
  return out;
}

}  // namespace

TEST_CASE("compute_r2") {
  SUBCASE("C = 1, r0 = psi1 = 1: quadratic cap sqrt 2") {
    const UniquenessWindow w = compute_r2(1.0, 1.0, 1.0);
    CHECK(w.binding == BindingConstraint::QuadraticCap);
    CHECK(std::abs(w.r2 - std::sqrt(2.0)) <= 1e-12);
    CHECK(window_constraints_hold(w));
    CHECK(w.window_end_effective == w.r2);
  }
  SUBCASE("small C: the log cap binds") {
    const UniquenessWindow w = compute_r2(0.01, 1.0, 1.0);
    CHECK(w.binding == BindingConstraint::LogCap);
    CHECK(w.quadratic_cap == doctest::Approx(std::sqrt(101.0)));
    CHECK(w.r2 == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    CHECK(std::log(w.r2) < 1.0);
  }
  SUBCASE("huge C collapses onto r0") {
    const UniquenessWindow w = compute_r2(1e300, 1.0, 1.0);
    CHECK(w.r2 == 1.0);
    CHECK(window_constraints_hold(w));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(compute_r2(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(compute_r2(1.0, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(compute_r2(1.0, 1.0, -1.0), DomainError);
  }
  SUBCASE("from a model") {
    CHECK(compute_r2(VorticityModel::classical(), 1.0, 1.0).r2 == compute_r2(1.0, 1.0, 1.0).r2);
  }
}

TEST_CASE("r2 satisfies both constraints and is the smaller cap (property)") {
  oracle::Gen gen(17);
  for (int trial = 0; trial < 5000; ++trial) {
    const double c = gen.log_uniform(1e-3, 1e3);
    const double r0 = gen.log_uniform(1.0, 1e3);
    const double psi1 = gen.log_uniform(1e-4, 1e2);
    const UniquenessWindow w = compute_r2(c, r0, psi1);
    CHECK(window_constraints_hold(w));
    // oracle: both caps from their closed forms
    const double log_cap = r0 * std::exp(1.0 - kLogStrictness);
    const double quad_cap = std::sqrt(r0 * r0 + std::sqrt(r0 * psi1) / c);
    const double cap = std::min(log_cap, quad_cap);
    CHECK(w.r2 <= cap);
    CHECK(w.r2 >= cap * (1.0 - 1e-14));
    CHECK(w.r2 >= r0);
  }
}

TEST_CASE("lower bound margin") {
  const auto g = RadialGrid::graded(1.0, 1.5, 1024);

  SUBCASE("classical") {
    const Trajectory t = picard_solve(VorticityModel::classical(), 1.0, 1.0, g).trajectory;
    CHECK(check_lower_bound(t, 1.0, 1.0) >= -1e-15);
  }
  SUBCASE("oscillatory") {
    const auto m = VorticityModel::oscillatory(std::sin(0.01), 0.02);
    const Trajectory t = picard_solve(m, 1.0, 1.0, g).trajectory;
    CHECK(check_lower_bound(t, 1.0, 1.0) >= kLowerBoundFloor);
  }
  SUBCASE("f == 0 sits exactly on the bound") {
    const auto m = VorticityModel::custom([](double) { return 0.0; }, 0.25);
    PicardOptions o;
    o.allow_unvalidated = true;
    const Trajectory t = picard_solve(m, 1.0, 1.0, g, o).trajectory;
    CHECK(std::abs(check_lower_bound(t, 1.0, 1.0)) <= 1e-15);
  }
  SUBCASE("a trajectory below the bound reports a negative margin") {
    Trajectory t = picard_solve(VorticityModel::classical(), 1.0, 1.0, g).trajectory;
    for (std::size_t i = 1; i < t.size(); ++i) t.psi[i] = t.grid.log_ratio(i) - 1e-6;
    CHECK(check_lower_bound(t, 1.0, 1.0) == doctest::Approx(-1e-6).epsilon(1e-9));
  }
  SUBCASE("preconditions") {
    const Trajectory t = picard_solve(VorticityModel::classical(), 1.0, 1.0, g).trajectory;
    CHECK_THROWS_AS(check_lower_bound(t, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(check_lower_bound(t, 1.1, 1.0), DomainError);
  }
}

TEST_CASE("lower bound is stable under the solver tolerance") {
  const auto m = VorticityModel::classical();
  const auto g = RadialGrid::graded(1.0, 1.5, 1024);
  PicardOptions loose;
  loose.tol = 1e-8;
  PicardOptions tight;
  tight.tol = 1e-12;
  const double a = check_lower_bound(picard_solve(m, 1.0, 1.0, g, loose).trajectory, 1.0, 1.0);
  const double b = check_lower_bound(picard_solve(m, 1.0, 1.0, g, tight).trajectory, 1.0, 1.0);
  CHECK(std::abs(a - b) <= 1e-8);
}

TEST_CASE("deviation-limit trace") {
  const auto m = VorticityModel::classical();
  const auto g = RadialGrid::graded(1.0, 1.5, 2048);
  const Trajectory p = picard_solve(m, 1.0, 1.0, g).trajectory;

  SUBCASE("identical trajectories") {
    const auto trace = deviation_limit_trace(p, p, 12);
    REQUIRE(!trace.empty());
    for (const auto& s : trace) CHECK(s.y == 0.0);
    CHECK(trace_non_increasing(trace, 0.0));
  }
  SUBCASE("ordering and probe count") {
    const auto trace = deviation_limit_trace(p, p, 12);
    CHECK(trace.size() <= 12);
    CHECK(trace.front().r == p.window_end);
    CHECK(trace.back().r == g.node(1));
    for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k].r < trace[k - 1].r);
    const auto capped = deviation_limit_trace(p, p, 12, 1.1);
    CHECK(capped.front().r <= 1.1);
  }
  SUBCASE("Picard against RK") {
    const Trajectory rk = rk_solve(m, 1.0, 1.0, 1.5, StepControl{}, g).trajectory;
    const auto trace = deviation_limit_trace(p, rk, 12);
    CHECK(trace_non_increasing(trace, 10.0 * (1e-10 + 1e-10)));
    CHECK(trace.back().y <= 1e-6);
  }
  SUBCASE("injected deviation (r - r0)^2 decays into r0") {
    const Trajectory b = shifted(p, [](double s, double) { return s * s; });
    const auto trace = deviation_limit_trace(p, b, 12);
    CHECK(trace_non_increasing(trace, 0.0));
    for (const auto& sample : trace) {
      const double s = sample.r - 1.0;
      CHECK(sample.y == doctest::Approx(s * s / std::log1p(s)).epsilon(1e-9));
    }
    CHECK(trace.back().y <= 1e-6);
  }
  SUBCASE("a deviation that grows towards r0 is flagged") {
    const Trajectory b = shifted(p, [](double s, double ln) { return ln * (1.0 - s); });
    CHECK_FALSE(trace_non_increasing(deviation_limit_trace(p, b, 12), 0.0));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(deviation_limit_trace(p, p, 0), DomainError);
    const Trajectory other = picard_solve(m, 1.0, 0.9, g).trajectory;
    CHECK_THROWS_AS(deviation_limit_trace(p, other, 12), DomainError);
  }
}

TEST_CASE("contraction probe") {
  const auto m = VorticityModel::classical();
  const UniquenessWindow w = compute_r2(m, 1.0, 1.0);

  SUBCASE("x == 0") {
    const auto g = RadialGrid::graded(1.0, w.r2, 1024);
    const Trajectory p = picard_solve(m, 1.0, 1.0, g).trajectory;
    const ContractionProbe probe = contraction_probe(m, p, p, restrict_to(w, p));
    CHECK(probe.ratio == 0.0);
    CHECK(probe.y_star == 0.0);
    CHECK_FALSE(probe.first_violation);
  }
  SUBCASE("consecutive iterates on [r0, min(r2, window_end)]") {
    const auto g = RadialGrid::graded(1.0, w.r2, 1024);
    const PicardResult res = picard_solve(m, 1.0, 1.0, g, with_iterates());
    const Trajectory a = picard_iterate(m, res, 1);
    const Trajectory b = picard_iterate(m, res, 2);
    const ContractionProbe probe = contraction_probe(m, a, b, restrict_to(w, res.trajectory));
    CHECK(probe.ratio <= 0.55);
    CHECK(probe.ratio > 0.0);
    CHECK(probe.y_star > 0.0);
    CHECK(probe.r_star > 1.0);
    CHECK_FALSE(probe.first_violation);
    CHECK(std::isfinite(probe.inequality_tightness));
  }
  SUBCASE("stretching the window to r = 2 breaks the factor 1/2") {
    // y == 1e-3 everywhere, so the ratio is K (r^2 - r0^2) / 2 and crosses 1/2 at sqrt 2
    const auto g = RadialGrid::graded(1.0, 2.0, 1024);
    const Trajectory a = picard_solve(m, 1.0, 1.0, g).trajectory;
    const Trajectory b = shifted(a, [](double, double ln) { return 1e-3 * ln; });
    UniquenessWindow wide = w;
    wide.window_end_effective = 2.0;
    const ContractionProbe probe = contraction_probe(m, a, b, wide);
    CHECK(probe.ratio == doctest::Approx(1.5).epsilon(1e-6));
    REQUIRE(probe.first_violation);
    CHECK(*probe.first_violation > w.r2);
    CHECK(*probe.first_violation < w.r2 + 1e-2);
    const ContractionProbe inside = contraction_probe(m, a, b, restrict_to(w, a));
    CHECK(inside.ratio <= 0.5);
    CHECK_FALSE(inside.first_violation);
  }
  SUBCASE("refuses trajectories below the lower bound") {
    const auto g = RadialGrid::graded(1.0, w.r2, 256);
    const Trajectory p = picard_solve(m, 1.0, 1.0, g).trajectory;
    Trajectory low = p;
    for (std::size_t i = 1; i < low.size(); ++i) low.psi[i] = 0.5 * g.log_ratio(i);
    CHECK_THROWS_AS(contraction_probe(m, p, low, restrict_to(w, p)), PreconditionError);
  }
}

TEST_CASE("continuity sweep") {
  const auto m = VorticityModel::classical();

  SUBCASE("repeated value") {
    const std::vector<double> v{1.0, 1.0};
    const SweepResult r = continuity_sweep(m, 1.0, v, 0.25);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].dpsi1 == 0.0);
    CHECK(r.rows[0].sup_dev == 0.0);
  }
  SUBCASE("small perturbations are monotone and roughly linear") {
    const std::vector<double> v{1.0, 1.01, 1.001};
    const SweepResult r = continuity_sweep(m, 1.0, v, 0.25);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.rows[0].dpsi1 == doctest::Approx(0.001));
    CHECK(r.rows[1].dpsi1 == doctest::Approx(0.01));
    CHECK(r.rows[0].sup_dev > 0.0);
    CHECK(r.rows[0].sup_dev < r.rows[1].sup_dev);
    const double ratio = (r.rows[1].sup_dev / r.rows[1].dpsi1) / (r.rows[0].sup_dev / r.rows[0].dpsi1);
    CHECK(ratio <= 3.0);
    CHECK(ratio >= 1.0 / 3.0);
    CHECK(r.trajectories.size() == 3);
    CHECK(r.common_window_end > 1.0);
  }
  SUBCASE("a large step stays finite") {
    const std::vector<double> v{1.0, 2.0};
    const SweepResult r = continuity_sweep(m, 1.0, v, 0.25);
    CHECK(std::isfinite(r.rows[0].sup_dev));
    CHECK(r.rows[0].sup_dev > 0.0);
  }
  SUBCASE("preconditions") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(continuity_sweep(m, 1.0, one, 0.25), DomainError);
    const std::vector<double> two{1.0, 1.1};
    CHECK_THROWS_AS(continuity_sweep(m, 1.0, two, 0.0), DomainError);
  }
}

TEST_CASE("verify_uniqueness") {
  const auto g = RadialGrid::graded(1.0, 1.5, 2048);

  SUBCASE("classical passes") {
    const UniquenessReport r = verify_uniqueness(VorticityModel::classical(), 1.0, 1.0, g);
    CHECK(r.verdict);
    CHECK(r.failed_checks.empty());
    CHECK(r.lower_bound_margin >= kLowerBoundFloor);
    CHECK(r.contraction_ratio <= kContractionCeiling);
    CHECK(r.picard_delta_ratio_max <= kContractionCeiling);
    CHECK(r.cross_method_weighted_sup <= kCrossMethodCeiling);
    CHECK(r.trace_non_increasing);
    CHECK(r.window.r2 == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.window.window_end_effective <= r.picard_window_end);
    CHECK(r.slack == doctest::Approx(2e-9));

    const std::string text = to_key_value(r);
    CHECK(text.find("verdict = true") != std::string::npos);
    CHECK(text.find("binding_constraint = quadratic_cap") != std::string::npos);
    CHECK(trace_csv(r.deviation_limit_trace).rfind("r,y\n", 0) == 0);
  }
  SUBCASE("negative slope is reduced to its magnitude") {
    const UniquenessReport r = verify_uniqueness(VorticityModel::classical(), 1.0, -1.0, g);
    CHECK(r.psi1 == 1.0);
    CHECK(r.verdict);
  }
  SUBCASE("a model violating the sign condition fails without solving") {
    const auto reversed = VorticityModel::custom([](double p) { return -oracle::classical_f(p); }, 0.25);
    const UniquenessReport r = verify_uniqueness(reversed, 1.0, 1.0, g);
    CHECK_FALSE(r.verdict);
    REQUIRE(!r.failed_checks.empty());
    CHECK(r.failed_checks.front() == "sign_condition");
    CHECK(r.deviation_limit_trace.empty());
  }
}
