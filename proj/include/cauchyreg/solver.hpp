#pragma once

#include "cauchyreg/kernels.hpp"
#include "cauchyreg/model.hpp"
#include "cauchyreg/spectral.hpp"

#include <Eigen/Dense>

#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cauchyreg {

/// Uniform space-time grid: t_i = i T / M, i = 0..M; x_j = j / K, j = 0..K;
/// N retained modes.
struct Grid {
  int modes_N = 2;
  int time_steps_M = 12;
  int space_points_K = 20;
  double horizon_T = 1.0;

  double dt() const { return horizon_T / time_steps_M; }
  double time(int i) const { return horizon_T * i / time_steps_M; }
  double space(int j) const { return static_cast<double>(j) / space_points_K; }
  Eigen::VectorXd space_nodes() const;

  /// Index i with t_i == t up to 1e-12 relative; throws std::domain_error otherwise.
  int time_index(double t) const;

  void validate() const;
};

/// Mode-by-time coefficients of the regularized solution.
///
/// coeffs(p - 1, i) is the coefficient of the orthonormal eigenfunction
/// phi_p at t_i. For the Dirichlet sine basis, v(x, t_i) = sum_p coeffs(p-1, i)
/// sqrt(2) sin(p pi x); the coefficient w_{p,i} of the plain sin(p pi x)
/// expansion is sqrt(2) coeffs(p - 1, i) (see sine_coefficients()).
struct RegularizedSolution {
  Eigen::MatrixXd coeffs;
  Grid grid;
  RegParams params;
  EigenBasis basis = EigenBasis::dirichlet_sine(1);
  int iterations = 0;
  std::vector<double> residual_history;

  /// Linear interpolation between bracketing grid times; t in [0, T].
  Eigen::VectorXd coefficients_at(double t) const;
  double value(double x, int i) const { return synthesize(coeffs.col(i), x, basis); }
  /// v(x_j, t_i), j = 0..K.
  Eigen::VectorXd nodal_values(int i) const;
  /// Coefficients against sin(p pi x) instead of sqrt(2) sin(p pi x).
  Eigen::MatrixXd sine_coefficients() const { return std::numbers::sqrt2 * coeffs; }
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite coefficient appeared while marching.
class BlowUpError : public SolverError {
 public:
  BlowUpError(int mode, int step);
  int mode() const { return mode_; }
  int step() const { return step_; }

 private:
  int mode_;
  int step_;
};

/// Picard iteration hit max_iter without meeting the tolerance.
class DivergenceError : public SolverError {
 public:
  explicit DivergenceError(std::vector<double> history);
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

// --- unregularized mild solutions ------------------------------------------

/// cosh(sqrt(lambda_p) t) phi_p + sinh(sqrt(lambda_p) t) / sqrt(lambda_p) g_p.
/// Throws std::overflow_error if sqrt(lambda_N) t > 700.
Eigen::VectorXd mild_homogeneous(const Eigen::VectorXd& phi_coeffs, const Eigen::VectorXd& g_coeffs,
                                 double t, const EigenBasis& basis);

/// Homogeneous part plus int_0^t sinh(sqrt(lambda_p)(t-s)) / sqrt(lambda_p) f_p(s) ds,
/// the s-integral by composite Gauss-Legendre. `source_coeffs(s)` returns f_p(s), p = 1..N.
Eigen::VectorXd mild_inhomogeneous(const Eigen::VectorXd& phi_coeffs,
                                   const Eigen::VectorXd& g_coeffs,
                                   const std::function<Eigen::VectorXd(double)>& source_coeffs,
                                   double t, const EigenBasis& basis);

// --- regularized solution ----------------------------------------------------

/// Integrals of the regularized kernel sinh_eps(r (t_i - s)) / r over one time
/// step [t_{j-1}, t_j] with lag k = i - j, against 1 and against (s - t_{j-1}).
/// Exact: the kernel is a sum of two exponentials in s.
struct KernelMoments {
  double zeroth;
  double first;
};
KernelMoments kernel_moments(double eps, double lambda, int lag, double dt, double T);

/// Discretization of the regularized integral equation on a grid.
///
/// Column 0 is the projection of phi^eps. For i >= 1, column i is
///
///   cosh_eps(r_p t_i) phi_p + sinh_eps(r_p t_i) / r_p g_p
///     + sum_{j=1..i} int_{t_{j-1}}^{t_j} sinh_eps(r_p (t_i - s)) / r_p [S_p(s) + H_p(s)] ds
///
/// with r_p = sqrt(lambda_p), S the projected state part of the source and H
/// the projected forcing. H is linearly interpolated through the two Gauss
/// points of each step and integrated exactly against the kernel. S is
/// frozen at t_{j-1} by march() and linearly interpolated between t_{j-1}
/// and t_j by apply().
class RegularizedScheme {
 public:
  RegularizedScheme(SourceSpec source, CauchyData data, RegParams params, Grid grid,
                    std::optional<EigenBasis> basis = std::nullopt,
                    std::optional<QuadratureRule> rule = std::nullopt);

  /// Explicit time marching with the state term frozen at the left end of each step.
  Eigen::MatrixXd march() const;

  /// One application of the fixed-point map to an N x (M+1) coefficient matrix.
  Eigen::MatrixXd apply(const Eigen::MatrixXd& w) const;

  /// sup_i ||a(:, i) - b(:, i)||_2.
  static double sup_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

  RegularizedSolution wrap(Eigen::MatrixXd coeffs) const;

  const ModalProjector& projector() const { return projector_; }
  const Grid& grid() const { return grid_; }
  const RegParams& params() const { return params_; }
  const SourceSpec& source() const { return source_; }
  const Eigen::VectorXd& phi_coeffs() const { return phi_coeffs_; }
  const Eigen::VectorXd& g_coeffs() const { return g_coeffs_; }

 private:
  /// Projected state part at t_j of the field with the given coefficients.
  Eigen::VectorXd state_term(int j, const Eigen::VectorXd& coeffs) const;
  void check_finite(const Eigen::VectorXd& column, int step) const;

  SourceSpec source_;
  CauchyData data_;
  RegParams params_;
  Grid grid_;
  ModalProjector projector_;
  Eigen::VectorXd sqrt_lambda_;
  Eigen::VectorXd phi_coeffs_;
  Eigen::VectorXd g_coeffs_;
  Eigen::MatrixXd m0_;           // N x M, by lag
  Eigen::MatrixXd m1_;
  Eigen::MatrixXd fixed_part_;   // data + forcing contributions, N x (M+1)
  bool state_dependent_;
};

/// Time-marching approximation of the regularized solution. Throws
/// BlowUpError naming (p, i) on a non-finite coefficient.
RegularizedSolution regularized_march(const SourceSpec& source, const CauchyData& data,
                                      const RegParams& params, const Grid& grid,
                                      std::optional<EigenBasis> basis = std::nullopt);

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 200;
  std::optional<Eigen::MatrixXd> initial;  // defaults to zero
};

/// Fixed point of RegularizedScheme::apply by successive substitution, stopped
/// when the sup-in-time L^2 increment drops below tol. A source with no state
/// dependence makes the map constant and returns after one application.
/// Throws DivergenceError carrying the increment history if max_iter is hit.
RegularizedSolution picard_solve(const SourceSpec& source, const CauchyData& data,
                                 const RegParams& params, const Grid& grid,
                                 const PicardOptions& options = {},
                                 std::optional<EigenBasis> basis = std::nullopt);

/// Root t_eps in (0, T) of (T - t)^2 = eps^{2 - 2t/T}. Throws std::domain_error
/// unless 0 < eps < 1 and eps < T (otherwise the root leaves (0, T)).
double terminal_time(double eps, double T);

/// U^eps(t) = u^eps(t) on [0, T), U^eps(T) = u^eps(t_eps).
class TerminalSolution {
 public:
  TerminalSolution(RegularizedSolution solution, double t_eps);

  Eigen::VectorXd coefficients(double t) const;
  double value(double x, double t) const;
  double t_eps() const { return t_eps_; }
  const RegularizedSolution& solution() const { return solution_; }

 private:
  RegularizedSolution solution_;
  double t_eps_;
};

TerminalSolution assemble_terminal(RegularizedSolution solution, double t_eps);

}  // namespace cauchyreg
