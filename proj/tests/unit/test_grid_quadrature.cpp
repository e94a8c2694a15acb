#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vflow/errors.hpp"
#include "vflow/grid.hpp"
#include "vflow/quadrature.hpp"

using namespace vflow;

TEST_CASE("uniform grid") {
  const auto g = RadialGrid::uniform(1.0, 2.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.node(0) == 1.0);
  CHECK(g.back() == 2.0);
  CHECK(g.node(2) == doctest::Approx(1.5));
  CHECK(g.grading() == Grading::Uniform);
}

TEST_CASE("geometric grid spacing ratio is constant") {
  for (double ratio : {0.5, 0.9, 0.99}) {
    const auto g = RadialGrid::geometric(1.0, 1.5, 64, ratio);
    CHECK(g.node(0) == 1.0);
    CHECK(g.back() == 1.5);
    for (std::size_t i = 0; i + 2 < g.size(); ++i) {
      CHECK(g.spacing(i) / g.spacing(i + 1) == doctest::Approx(ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("graded grid hits the requested spread") {
  const auto g = RadialGrid::graded(1.0, 1.5, 2048);
  CHECK(g.spacing(g.size() - 2) / g.spacing(0) == doctest::Approx(RadialGrid::kDefaultSpread).epsilon(1e-9));
  CHECK(g.log_ratio(1) == doctest::Approx(std::log1p(g.offset(1))).epsilon(1e-15));
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(RadialGrid::uniform(0.5, 2.0, 10), DomainError);
  CHECK_THROWS_AS(RadialGrid::uniform(1.0, 1.0, 10), DomainError);
  CHECK_THROWS_AS(RadialGrid::uniform(1.0, 2.0, 2), DomainError);
  CHECK_THROWS_AS(RadialGrid::geometric(1.0, 2.0, 10, 1.0), DomainError);
  // a fixed ratio of 0.9 cannot be stretched over thousands of nodes
  CHECK_THROWS_AS(RadialGrid::geometric(1.0, 2.0, 8000, 0.9), DomainError);
}

TEST_CASE("last_index_at_or_below maps node radii back to their index") {
  const auto g = RadialGrid::graded(1.0, 1.5, 300);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.last_index_at_or_below(g.node(i)) == i);
  CHECK(g.last_index_at_or_below(0.5) == 0);
  CHECK(g.last_index_at_or_below(10.0) == g.size() - 1);
}

TEST_CASE("kernel_integral against closed forms") {
  SUBCASE("values == 1 on [1, 2]") {
    const double exact = 0.75 - 0.5 * std::log(2.0);
    CHECK(oracle::kernel_of_one(1.0, 2.0) == doctest::Approx(0.4034264).epsilon(1e-7));
    for (std::size_t n : {17u, 129u, 1025u}) {
      const auto g = RadialGrid::graded(1.0, 2.0, n);
      const std::vector<double> one(n, 1.0);
      CHECK(std::abs(kernel_integral(g, one, n - 1) - exact) < 1e-10);
    }
  }
  SUBCASE("r_index 0 and zero data") {
    const auto g = RadialGrid::uniform(1.0, 2.0, 9);
    const std::vector<double> v(9, 3.0);
    CHECK(kernel_integral(g, v, 0) == 0.0);
    const std::vector<double> zero(9, 0.0);
    CHECK(kernel_integral(g, zero, 8) == 0.0);
  }
  SUBCASE("every right endpoint, against Simpson") {
    const auto g = RadialGrid::graded(1.0, 1.8, 400);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::cos(g.node(i));
    const std::vector<double> all = KernelQuadrature(g).kernel_integrals(v);
    for (std::size_t i : {1u, 10u, 100u, 250u, 399u}) {
      const double r = g.node(i);
      const double ref = oracle::simpson([r](double t) { return t * std::log(r / t) * std::cos(t); }, 1.0, r, 20000);
      CHECK(all[i] == doctest::Approx(ref).epsilon(1e-5));
    }
  }
  SUBCASE("size mismatch") {
    const auto g = RadialGrid::uniform(1.0, 2.0, 9);
    const std::vector<double> v(5, 1.0);
    CHECK_THROWS_AS(kernel_integral(g, v, 3), DomainError);
  }
}

TEST_CASE("kernel_integral converges at second order for non-polynomial data") {
  double previous = 0.0;
  for (std::size_t n : {33u, 65u, 129u, 257u, 513u}) {
    const auto g = RadialGrid::graded(1.0, 2.0, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g.node(i) * g.node(i);
    const double err = std::abs(kernel_integral(g, v, n - 1) - oracle::kernel_of_tau_squared(2.0));
    if (previous > 0.0) CHECK(previous / err >= 3.8);
    previous = err;
  }
}

TEST_CASE("moment integrals") {
  const auto g = RadialGrid::uniform(1.0, 3.0, 11);
  const std::vector<double> one(11, 1.0);
  const auto m = KernelQuadrature(g).moment_integrals(one);
  CHECK(m[0] == 0.0);
  CHECK(m[10] == doctest::Approx((9.0 - 1.0) / 2.0).epsilon(1e-14));
}
