#include "cauchyreg/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace cauchyreg;
using std::numbers::pi;

TEST_CASE("damping factor") {
  const double l1 = pi * pi;
  CHECK(stability_factor(0.0, l1, 1.0) == 1.0);
  CHECK(stability_factor(0.1, l1, 1.0) ==
        doctest::Approx(std::exp(-pi) / (0.1 + std::exp(-pi))).epsilon(1e-15));
  CHECK(stability_factor(0.1, l1, 1.0) == doctest::Approx(0.3017433).epsilon(1e-6));
  CHECK_THROWS_AS(stability_factor(-1e-3, l1, 1.0), std::domain_error);

  double prev = 1.0;
  for (int p = 1; p <= 400; ++p) {
    const double q = stability_factor(1e-3, p * p * l1, 1.0);
    CHECK((q < prev || q == 0.0));
    CHECK(q >= 0.0);
    prev = q;
  }
}

TEST_CASE("regularized kernels at the endpoints") {
  const double l = 4 * pi * pi;
  CHECK(cosh_reg(0.0, l, 0.3, 1.0) == doctest::Approx(std::cosh(2 * pi * 0.3)).epsilon(1e-14));
  CHECK(sinh_reg(0.0, l, 0.3, 1.0) == doctest::Approx(std::sinh(2 * pi * 0.3)).epsilon(1e-14));
  const double q = stability_factor(1e-2, l, 1.0);
  CHECK(cosh_reg(1e-2, l, 0.0, 1.0) == doctest::Approx((q + 1) / 2).epsilon(1e-14));
  CHECK(sinh_reg(1e-2, l, 0.0, 1.0) == doctest::Approx((q - 1) / 2).epsilon(1e-14));
  CHECK(sinh_reg(1e-2, l, 0.0, 1.0) <= 0.0);
  CHECK(cosh_reg(1e-2, pi * pi, 0.5, 1.0) <= 10.0);
  CHECK_THROWS_AS(sinh_reg_diff(1e-2, l, 0.2, 0.3, 1.0), std::domain_error);
}

TEST_CASE("large modes stay finite") {
  const double l = std::pow(5000 * pi, 2);
  CHECK(std::isfinite(cosh_reg(1e-8, l, 1.0, 1.0)));
  CHECK(cosh_reg(1e-8, l, 1.0, 1.0) <= 1e8);
  CHECK(damped_growth(1e-8, l, 0.5, 1.0) <= 1e4);
}

TEST_CASE("gap to the unregularized kernel shrinks as epsilon does") {
  const double l = 9 * pi * pi, t = 0.6;
  double prev = INFINITY;
  for (int k = 1; k <= 12; ++k) {
    const double gap = std::abs(cosh_reg(std::pow(10.0, -k), l, t, 1.0) - std::cosh(3 * pi * t));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("kernel bounds hold on random samples") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> mode(1, 50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double T = 1.0, r1 = pi;
  int violations = 0;
  for (int k = 0; k < 100000; ++k) {
    const int p = mode(rng);
    const double eps = std::exp(std::log(1e-8) + unit(rng) * (std::log(0.5) - std::log(1e-8)));
    double s = unit(rng), t = unit(rng);
    if (s > t) std::swap(s, t);
    const double l = p * p * pi * pi, r = p * pi;
    const double slack = 1.0 + 1e-12;
    if (cosh_reg(eps, l, t, T) > slack * std::pow(eps, -t / T)) ++violations;
    if (sinh_reg(eps, l, t, T) / r > slack * std::pow(eps, -t / T) / r1) ++violations;
    if (sinh_reg_diff(eps, l, t, s, T) / r > slack * std::pow(eps, (s - t) / T) / r1) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("sobolev-scale bound") {
  const auto b = sobolev_bound(1.0, 0.0, 0.5, 1.0);
  CHECK(b.lhs == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(b.rhs == doctest::Approx(2.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(b.holds());
  CHECK(sobolev_bound(2.0, 1e6, 0.5, 1.0).lhs < 1e-11);
  CHECK_THROWS_AS(sobolev_bound(1.0, 0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(sobolev_bound(0.0, 0.0, 0.5, 1.0), std::domain_error);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 50000; ++k) {
    const double s = 5.0 * (1.0 - unit(rng));
    const double X = 100.0 * unit(rng);
    const double eps = std::exp(-30.0 * (1.0 - unit(rng)));
    if (!(eps > 0.0 && eps < 1.0)) continue;
    if (!sobolev_bound(s, X, eps, 1.0).holds()) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("contraction depth matches an integer search") {
  RegParams p;
  CHECK(picard_contraction_depth(p) == 1);  // K = 0

  p.lipschitz_K = 1.0;
  p.epsilon = 0.1;
  const double ratio = 1.0 / (pi * pi * 0.01);
  double term = 1.0;
  std::int64_t m = 0;
  do {
    ++m;
    term *= ratio / static_cast<double>(m);
  } while (term >= 1.0);
  CHECK(picard_contraction_depth(p) == m);
  CHECK(m > 1);

  p.epsilon = 1e-3;
  p.lipschitz_K = 0.5;
  p.horizon_T = 2.0;
  const double log_ratio2 = std::log(0.25 / (pi * pi * 1e-6) * 2.0 * 2.0);
  double log_term = 0.0;
  m = 0;
  do {
    ++m;
    log_term += log_ratio2 - std::log(static_cast<double>(m));
  } while (log_term >= 0.0);
  CHECK(picard_contraction_depth(p) == m);
}
