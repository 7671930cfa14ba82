#include "cauchyreg/spectral.hpp"

#include <algorithm>
#include <utility>

namespace cauchyreg {

EigenBasis::EigenBasis(int mode_count, EigenvalueFn eigenvalue, BasisFn basis)
    : mode_count_(mode_count), eigenvalue_(std::move(eigenvalue)), basis_(std::move(basis)) {
  if (mode_count_ < 1) throw std::invalid_argument("EigenBasis: mode_count must be >= 1");
  double prev = eigenvalue_(1);
  if (!(prev > 0.0)) throw std::invalid_argument("EigenBasis: lambda_1 must be positive");
  for (int p = 2; p <= mode_count_; ++p) {
    const double lam = eigenvalue_(p);
    if (!(lam > prev)) {
      throw std::invalid_argument("EigenBasis: eigenvalues must be strictly increasing");
    }
    prev = lam;
  }
}

EigenBasis EigenBasis::dirichlet_sine(int mode_count) {
  constexpr double pi = std::numbers::pi;
  return EigenBasis(
      mode_count, [](int p) { return p * p * pi * pi; },
      [](int p, double x) { return std::numbers::sqrt2 * std::sin(p * pi * x); });
}

EigenBasis EigenBasis::modified_helmholtz(int mode_count, double k) {
  constexpr double pi = std::numbers::pi;
  const double shift = k * k;
  return EigenBasis(
      mode_count, [shift](int p) { return p * p * pi * pi + shift; },
      [](int p, double x) { return std::numbers::sqrt2 * std::sin(p * pi * x); });
}

double EigenBasis::eigenvalue(int p) const {
  if (p < 1) throw std::domain_error("eigenvalue: mode index must be >= 1, got " + std::to_string(p));
  return eigenvalue_(p);
}

double EigenBasis::operator()(int p, double x) const {
  if (p < 1) throw std::domain_error("basis: mode index must be >= 1, got " + std::to_string(p));
  return basis_(p, x);
}

Eigen::VectorXd EigenBasis::eigenvalues() const {
  Eigen::VectorXd out(mode_count_);
  for (int p = 1; p <= mode_count_; ++p) out[p - 1] = eigenvalue_(p);
  return out;
}

Eigen::MatrixXd EigenBasis::evaluate(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out(mode_count_, x.size());
  for (int p = 1; p <= mode_count_; ++p) {
    for (Eigen::Index k = 0; k < x.size(); ++k) out(p - 1, k) = basis_(p, x[k]);
  }
  return out;
}

EigenBasis EigenBasis::with_modes(int mode_count) const {
  return EigenBasis(mode_count, eigenvalue_, basis_);
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  rule.degree = 2 * n - 1;

  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  // Roots are symmetric; Newton on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(int panels, int order, double a, double b) {
  if (panels < 1) throw std::invalid_argument("composite_gauss_legendre: need at least one panel");
  const QuadratureRule ref = gauss_legendre(order, 0.0, 1.0);
  QuadratureRule rule;
  rule.degree = ref.degree;
  rule.nodes.resize(static_cast<Eigen::Index>(panels) * order);
  rule.weights.resize(rule.nodes.size());
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double left = a + k * h;
    rule.nodes.segment(k * order, order) = (left + h * ref.nodes.array()).matrix();
    rule.weights.segment(k * order, order) = h * ref.weights;
  }
  return rule;
}

QuadratureRule default_rule(int mode_count) {
  constexpr int order = 8;
  // Four panels per half-wave of sin(N pi x), so cubed fields projected on
  // phi_N (frequencies up to 4N) stay resolved.
  const int panels = std::max(16, 4 * mode_count);
  return composite_gauss_legendre(panels, order);
}

ModalProjector::ModalProjector(EigenBasis basis, QuadratureRule rule)
    : basis_(std::move(basis)), rule_(std::move(rule)) {
  samples_ = basis_.evaluate(rule_.nodes);
  weighted_ = samples_ * rule_.weights.asDiagonal();
}

}  // namespace cauchyreg
