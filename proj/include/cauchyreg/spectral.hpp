#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cauchyreg {

/// Eigenpairs (lambda_p, phi_p), p = 1..mode_count, of a positive self-adjoint
/// operator A on (0,1). Mode indices are 1-based everywhere in the public API;
/// vectors of coefficients store mode p at index p - 1.
class EigenBasis {
 public:
  using EigenvalueFn = std::function<double(int)>;
  using BasisFn = std::function<double(int, double)>;

  /// Throws std::invalid_argument unless lambda_1 > 0 and lambda_p is strictly
  /// increasing over the retained modes.
  EigenBasis(int mode_count, EigenvalueFn eigenvalue, BasisFn basis);

  /// A = -d^2/dx^2 with Dirichlet conditions: lambda_p = p^2 pi^2,
  /// phi_p(x) = sqrt(2) sin(p pi x).
  static EigenBasis dirichlet_sine(int mode_count);

  /// A = -d^2/dx^2 + k^2: same eigenfunctions, eigenvalues shifted by k^2.
  static EigenBasis modified_helmholtz(int mode_count, double k);

  int mode_count() const { return mode_count_; }

  /// lambda_p. Throws std::domain_error for p < 1.
  double eigenvalue(int p) const;
  double sqrt_eigenvalue(int p) const { return std::sqrt(eigenvalue(p)); }

  /// phi_p(x). Throws std::domain_error for p < 1.
  double operator()(int p, double x) const;

  /// lambda_1..lambda_N.
  Eigen::VectorXd eigenvalues() const;

  /// Matrix B with B(p-1, k) = phi_p(x_k).
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& x) const;

  /// Same operator, different truncation.
  EigenBasis with_modes(int mode_count) const;

 private:
  int mode_count_;
  EigenvalueFn eigenvalue_;
  BasisFn basis_;
};

/// Quadrature on [0,1]: integral f ~= sum_k weights[k] f(nodes[k]).
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  int degree = 0;  // exact for polynomials up to this degree

  template <typename F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < nodes.size(); ++k) acc += weights[k] * f(nodes[k]);
    return acc;
  }
};

/// n-point Gauss-Legendre rule mapped to [a,b].
QuadratureRule gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// `panels` equal panels on [a,b], each carrying an `order`-point Gauss-Legendre rule.
QuadratureRule composite_gauss_legendre(int panels, int order, double a = 0.0, double b = 1.0);

/// Default rule for an N-mode basis: 8-point Gauss panels, four panels per
/// half-wave of sin(N pi x), never fewer than 16 panels.
QuadratureRule default_rule(int mode_count);

/// <f, phi_p> under `rule`.
template <typename F>
double forward_coeff(F&& f, int p, const QuadratureRule& rule, const EigenBasis& basis) {
  if (p < 1) throw std::domain_error("forward_coeff: mode index must be >= 1");
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    const double x = rule.nodes[k];
    acc += rule.weights[k] * f(x) * basis(p, x);
  }
  return acc;
}

/// <f, phi_p> for p = 1..N.
template <typename F>
Eigen::VectorXd forward_coeffs(F&& f, const EigenBasis& basis, const QuadratureRule& rule) {
  Eigen::VectorXd samples(rule.nodes.size());
  for (Eigen::Index k = 0; k < samples.size(); ++k) samples[k] = f(rule.nodes[k]);
  return basis.evaluate(rule.nodes) * rule.weights.cwiseProduct(samples);
}

/// sum_p coeffs_p phi_p(x). Throws std::domain_error for x outside [0,1].
template <typename Derived>
typename Derived::Scalar synthesize(const Eigen::MatrixBase<Derived>& coeffs, double x,
                                    const EigenBasis& basis) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("synthesize: x = " + std::to_string(x) + " outside [0,1]");
  }
  typename Derived::Scalar acc(0);
  for (Eigen::Index p = 0; p < coeffs.size(); ++p) {
    acc += coeffs[p] * basis(static_cast<int>(p) + 1, x);
  }
  return acc;
}

/// Precomputed basis samples on a fixed quadrature rule, so that projecting a
/// sampled field and synthesizing a field from coefficients are both one
/// matrix-vector product.
class ModalProjector {
 public:
  ModalProjector(EigenBasis basis, QuadratureRule rule);

  const EigenBasis& basis() const { return basis_; }
  const QuadratureRule& rule() const { return rule_; }
  const Eigen::VectorXd& nodes() const { return rule_.nodes; }
  int mode_count() const { return basis_.mode_count(); }

  /// Coefficients <f, phi_p> from samples of f on nodes().
  Eigen::VectorXd project(const Eigen::VectorXd& samples) const { return weighted_ * samples; }

  /// Field values on nodes() of sum_p coeffs_p phi_p.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const {
    return samples_.transpose() * coeffs;
  }

  template <typename F>
  Eigen::VectorXd sample(F&& f) const {
    Eigen::VectorXd out(rule_.nodes.size());
    for (Eigen::Index k = 0; k < out.size(); ++k) out[k] = f(rule_.nodes[k]);
    return out;
  }

 private:
  EigenBasis basis_;
  QuadratureRule rule_;
  Eigen::MatrixXd samples_;   // N x nodes
  Eigen::MatrixXd weighted_;  // samples_ * diag(weights)
};

}  // namespace cauchyreg
