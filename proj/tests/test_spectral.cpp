#include "cauchyreg/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cauchyreg;
using std::numbers::pi;

namespace {

// <x^2 (1 - x), sqrt(2) sin(p pi x)> by integration by parts.
double cubic_coeff(int p) {
  const double sign = p % 2 == 0 ? 1.0 : -1.0;
  return std::sqrt(2.0) * (-4.0 * sign - 2.0) / (pi * pi * pi * p * p * p);
}

}  // namespace

TEST_CASE("dirichlet eigenvalues are p^2 pi^2") {
  const EigenBasis b = EigenBasis::dirichlet_sine(10);
  CHECK(b.eigenvalue(1) == doctest::Approx(9.8696044011).epsilon(1e-10));
  CHECK(b.eigenvalue(2) == doctest::Approx(4 * pi * pi).epsilon(1e-15));
  CHECK(b.eigenvalue(10) == doctest::Approx(100 * pi * pi).epsilon(1e-15));
  CHECK_THROWS_AS(b.eigenvalue(0), std::domain_error);
  CHECK_THROWS_AS(b(0, 0.5), std::domain_error);
}

TEST_CASE("basis rejects non-increasing or nonpositive spectra") {
  CHECK_THROWS_AS(EigenBasis(3, [](int) { return 1.0; }, [](int, double) { return 0.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(EigenBasis(2, [](int p) { return p - 1.0; }, [](int, double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("modified helmholtz shifts the spectrum") {
  const EigenBasis b = EigenBasis::modified_helmholtz(4, 2.0);
  CHECK(b.eigenvalue(3) == doctest::Approx(9 * pi * pi + 4.0));
  CHECK(b(3, 0.3) == doctest::Approx(EigenBasis::dirichlet_sine(4)(3, 0.3)));
}

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  const QuadratureRule r = gauss_legendre(5);
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.integrate([](double x) { return std::pow(x, 9); }) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(r.integrate([](double x) { return std::pow(x, 10); }) != doctest::Approx(1.0 / 11).epsilon(1e-12));
  for (int k = 0; k < 5; ++k) CHECK(r.nodes[k] + r.nodes[4 - k] == doctest::Approx(1.0));

  const QuadratureRule c = composite_gauss_legendre(7, 4, -1.0, 2.0);
  CHECK(c.nodes.size() == 28);
  CHECK(c.integrate([](double x) { return std::exp(x); }) ==
        doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("orthonormality under the default rule") {
  const EigenBasis b = EigenBasis::dirichlet_sine(6);
  const QuadratureRule r = default_rule(6);
  auto phi3 = [&](double x) { return b(3, x); };
  CHECK(forward_coeff(phi3, 3, r, b) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(forward_coeff(phi3, 2, r, b)) < 1e-13);
}

TEST_CASE("projection of x^2(1-x) matches the closed form") {
  const int N = 12;
  const EigenBasis b = EigenBasis::dirichlet_sine(N);
  auto f = [](double x) { return x * x * (1.0 - x); };
  const Eigen::VectorXd c = forward_coeffs(f, b, default_rule(N));
  const Eigen::VectorXd fine = forward_coeffs(f, b, composite_gauss_legendre(480, 8));
  for (int p = 1; p <= N; ++p) {
    CHECK(c[p - 1] == doctest::Approx(cubic_coeff(p)).epsilon(1e-12));
    CHECK(fine[p - 1] == doctest::Approx(cubic_coeff(p)).epsilon(1e-12));
  }
  CHECK(cubic_coeff(1) == doctest::Approx(0.091221114805547177).epsilon(1e-15));
}

TEST_CASE("parseval for x^2(1-x) gives 1/105") {
  double sum = 0.0;
  for (int p = 4000; p >= 1; --p) sum += cubic_coeff(p) * cubic_coeff(p);
  CHECK(sum == doctest::Approx(1.0 / 105.0).epsilon(1e-14));

  const int N = 60;
  const ModalProjector proj(EigenBasis::dirichlet_sine(N), default_rule(N));
  const Eigen::VectorXd c = proj.project(proj.sample([](double x) { return x * x * (1.0 - x); }));
  CHECK(c.squaredNorm() == doctest::Approx(1.0 / 105.0).epsilon(1e-9));
}

TEST_CASE("synthesize and project round trip") {
  const int N = 8;
  const ModalProjector proj(EigenBasis::dirichlet_sine(N), default_rule(N));
  Eigen::VectorXd c(N);
  for (int p = 0; p < N; ++p) c[p] = std::cos(1.0 + p) / (p + 1);
  const Eigen::VectorXd back = proj.project(proj.synthesize(c));
  CHECK((back - c).norm() < 1e-13);

  Eigen::VectorXd single = Eigen::VectorXd::Zero(N);
  single[0] = 1.0;
  CHECK(synthesize(single, 0.5, proj.basis()) == doctest::Approx(std::sqrt(2.0)));
  CHECK(synthesize(Eigen::VectorXd::Zero(N), 0.37, proj.basis()) == 0.0);
  CHECK_THROWS_AS(synthesize(c, 1.5, proj.basis()), std::domain_error);
  CHECK_THROWS_AS(synthesize(c, -0.1, proj.basis()), std::domain_error);
}
