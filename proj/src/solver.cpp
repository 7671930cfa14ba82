#include "cauchyreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace cauchyreg {

// --- grid and solution -------------------------------------------------------

Eigen::VectorXd Grid::space_nodes() const {
  Eigen::VectorXd x(space_points_K + 1);
  for (int j = 0; j <= space_points_K; ++j) x[j] = space(j);
  return x;
}

int Grid::time_index(double t) const {
  const double pos = t / horizon_T * time_steps_M;
  const double i = std::round(pos);
  if (!(std::abs(pos - i) <= 1e-12 * std::max(1.0, std::abs(pos))) || i < 0 || i > time_steps_M) {
    throw std::domain_error("Grid: t = " + std::to_string(t) + " is not a grid time");
  }
  return static_cast<int>(i);
}

void Grid::validate() const {
  if (modes_N < 1) throw std::invalid_argument("Grid: need at least one mode");
  if (time_steps_M < 1) throw std::invalid_argument("Grid: need at least one time step");
  if (space_points_K < 1) throw std::invalid_argument("Grid: need at least one space interval");
  if (!(horizon_T > 0.0)) throw std::invalid_argument("Grid: horizon must be positive");
}

Eigen::VectorXd RegularizedSolution::coefficients_at(double t) const {
  const double T = grid.horizon_T;
  if (!(t >= 0.0 && t <= T)) {
    throw std::domain_error("coefficients_at: t = " + std::to_string(t) + " outside [0, T]");
  }
  const double pos = t / grid.dt();
  const int i = std::min(static_cast<int>(pos), grid.time_steps_M - 1);
  const double frac = pos - i;
  return (1.0 - frac) * coeffs.col(i) + frac * coeffs.col(i + 1);
}

Eigen::VectorXd RegularizedSolution::nodal_values(int i) const {
  return basis.evaluate(grid.space_nodes()).transpose() * coeffs.col(i);
}

BlowUpError::BlowUpError(int mode, int step)
    : SolverError("non-finite coefficient at mode p = " + std::to_string(mode) + ", step i = " +
                  std::to_string(step)),
      mode_(mode),
      step_(step) {}

DivergenceError::DivergenceError(std::vector<double> history)
    : SolverError("Picard iteration did not converge in " + std::to_string(history.size()) +
                  " iterations"),
      history_(std::move(history)) {}

// --- unregularized mild solutions ------------------------------------------

namespace {

void check_growth(double t, const EigenBasis& basis, const char* who) {
  if (basis.sqrt_eigenvalue(basis.mode_count()) * t > 700.0) {
    throw std::overflow_error(std::string(who) + ": cosh(sqrt(lambda_N) t) overflows");
  }
}

}  // namespace

Eigen::VectorXd mild_homogeneous(const Eigen::VectorXd& phi_coeffs, const Eigen::VectorXd& g_coeffs,
                                 double t, const EigenBasis& basis) {
  check_growth(t, basis, "mild_homogeneous");
  const int N = basis.mode_count();
  Eigen::VectorXd out(N);
  for (int p = 1; p <= N; ++p) {
    const double r = basis.sqrt_eigenvalue(p);
    out[p - 1] = std::cosh(r * t) * phi_coeffs[p - 1] + std::sinh(r * t) / r * g_coeffs[p - 1];
  }
  return out;
}

Eigen::VectorXd mild_inhomogeneous(const Eigen::VectorXd& phi_coeffs,
                                   const Eigen::VectorXd& g_coeffs,
                                   const std::function<Eigen::VectorXd(double)>& source_coeffs,
                                   double t, const EigenBasis& basis) {
  Eigen::VectorXd out = mild_homogeneous(phi_coeffs, g_coeffs, t, basis);
  if (t == 0.0) return out;
  const QuadratureRule rule = composite_gauss_legendre(32, 8, 0.0, t);
  const int N = basis.mode_count();
  for (Eigen::Index k = 0; k < rule.nodes.size(); ++k) {
    const double s = rule.nodes[k];
    const Eigen::VectorXd f = source_coeffs(s);
    for (int p = 1; p <= N; ++p) {
      const double r = basis.sqrt_eigenvalue(p);
      out[p - 1] += rule.weights[k] * std::sinh(r * (t - s)) / r * f[p - 1];
    }
  }
  return out;
}

// --- kernel moments ------------------------------------------------------------

namespace {

// int_0^h e^{alpha + mu s} ds and int_0^h s e^{alpha + mu s} ds.
std::pair<double, double> exp_moments(double alpha, double mu, double h) {
  const double z = mu * h;
  if (std::abs(z) < 0.5) {
    // (e^z - 1)/z = sum z^n/(n+1)!,  int_0^1 u e^{zu} du = sum z^n/(n! (n+2)).
    double phi1 = 0.0, psi = 0.0, term = 1.0;
    for (int n = 0; n < 25; ++n) {
      phi1 += term / (n + 1);
      psi += term / (n + 2);
      term *= z / (n + 1);
    }
    const double ea = std::exp(alpha);
    return {ea * h * phi1, ea * h * h * psi};
  }
  const double end = std::exp(alpha + z);
  const double start = std::exp(alpha);
  const double e0 = (end - start) / mu;
  const double e1 = h * end / mu - e0 / mu;
  return {e0, e1};
}

}  // namespace

KernelMoments kernel_moments(double eps, double lambda, int lag, double dt, double T) {
  if (lag < 0) throw std::domain_error("kernel_moments: lag must be >= 0");
  if (!(dt > 0.0)) throw std::domain_error("kernel_moments: dt must be positive");
  const double r = std::sqrt(lambda);
  const double L = detail::log_eps_plus_exp_neg(eps, r * T);
  const double tau = (lag + 1) * dt;  // t_i - t_{j-1}
  // kernel(sigma) = [e^{-r(T - tau + sigma) - L} - e^{-r(tau - sigma)}] / (2r)
  const auto [a0, a1] = exp_moments(-r * (T - tau) - L, -r, dt);
  const auto [b0, b1] = exp_moments(-r * tau, r, dt);
  return {(a0 - b0) / (2.0 * r), (a1 - b1) / (2.0 * r)};
}

// --- scheme --------------------------------------------------------------------

RegularizedScheme::RegularizedScheme(SourceSpec source, CauchyData data, RegParams params,
                                     Grid grid, std::optional<EigenBasis> basis,
                                     std::optional<QuadratureRule> rule)
    : source_(std::move(source)),
      data_(std::move(data)),
      params_(params),
      grid_(grid),
      projector_(basis ? basis->with_modes(grid.modes_N) : EigenBasis::dirichlet_sine(grid.modes_N),
                 rule ? *rule : default_rule(grid.modes_N)) {
  params_.validate();
  grid_.validate();
  source_.validate();
  if (std::abs(params_.horizon_T - grid_.horizon_T) > 1e-14 * params_.horizon_T) {
    throw std::invalid_argument("RegularizedScheme: grid and params disagree on T");
  }
  if (!data_.phi || !data_.g) throw std::invalid_argument("RegularizedScheme: missing Cauchy data");
  state_dependent_ = source_.depends_on_state();

  const int N = grid_.modes_N;
  const int M = grid_.time_steps_M;
  const double T = grid_.horizon_T;
  const double eps = params_.epsilon;
  const double h = grid_.dt();
  const EigenBasis& B = projector_.basis();

  sqrt_lambda_.resize(N);
  for (int p = 1; p <= N; ++p) sqrt_lambda_[p - 1] = B.sqrt_eigenvalue(p);
  phi_coeffs_ = projector_.project(projector_.sample(data_.phi));
  g_coeffs_ = projector_.project(projector_.sample(data_.g));

  m0_.resize(N, M);
  m1_.resize(N, M);
  for (int p = 1; p <= N; ++p) {
    for (int k = 0; k < M; ++k) {
      const KernelMoments m = kernel_moments(eps, B.eigenvalue(p), k, h, T);
      m0_(p - 1, k) = m.zeroth;
      m1_(p - 1, k) = m.first;
    }
  }

  // Forcing on each step: linear through the two Gauss points, as intercept
  // at t_{j-1} and slope in s.
  Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(N, M);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(N, M);
  if (source_.forcing) {
    const double g = h / (2.0 * std::sqrt(3.0));
    const double sa = h / 2.0 - g;
    const double sb = h / 2.0 + g;
    for (int j = 1; j <= M; ++j) {
      const double t0 = grid_.time(j - 1);
      const Eigen::VectorXd fa = projector_.project(
          projector_.sample([&](double x) { return source_.forcing(t0 + sa, x); }));
      const Eigen::VectorXd fb = projector_.project(
          projector_.sample([&](double x) { return source_.forcing(t0 + sb, x); }));
      const Eigen::VectorXd slope = (fb - fa) / (sb - sa);
      h0.col(j - 1) = fa - sa * slope;
      h1.col(j - 1) = slope;
    }
  }

  fixed_part_.resize(N, M + 1);
  fixed_part_.col(0) = phi_coeffs_;
  for (int i = 1; i <= M; ++i) {
    const double t = grid_.time(i);
    for (int p = 1; p <= N; ++p) {
      const double lambda = B.eigenvalue(p);
      const double r = sqrt_lambda_[p - 1];
      double v = cosh_reg(eps, lambda, t, T) * phi_coeffs_[p - 1] +
                 sinh_reg(eps, lambda, t, T) / r * g_coeffs_[p - 1];
      for (int j = 1; j <= i; ++j) {
        v += m0_(p - 1, i - j) * h0(p - 1, j - 1) + m1_(p - 1, i - j) * h1(p - 1, j - 1);
      }
      fixed_part_(p - 1, i) = v;
    }
  }
}

Eigen::VectorXd RegularizedScheme::state_term(int j, const Eigen::VectorXd& coeffs) const {
  const double t = grid_.time(j);
  const Eigen::VectorXd u = projector_.synthesize(coeffs);
  return projector_.project(state_eval(source_, t, projector_.nodes(), u));
}

void RegularizedScheme::check_finite(const Eigen::VectorXd& column, int step) const {
  for (Eigen::Index p = 0; p < column.size(); ++p) {
    if (!std::isfinite(column[p])) throw BlowUpError(static_cast<int>(p) + 1, step);
  }
}

Eigen::MatrixXd RegularizedScheme::march() const {
  const int N = grid_.modes_N;
  const int M = grid_.time_steps_M;
  Eigen::MatrixXd w = fixed_part_;
  if (!state_dependent_) return w;
  Eigen::MatrixXd S(N, M);
  for (int i = 1; i <= M; ++i) {
    S.col(i - 1) = state_term(i - 1, w.col(i - 1));
    for (int j = 1; j <= i; ++j) {
      w.col(i) += m0_.col(i - j).cwiseProduct(S.col(j - 1));
    }
    check_finite(w.col(i), i);
  }
  return w;
}

Eigen::MatrixXd RegularizedScheme::apply(const Eigen::MatrixXd& w) const {
  const int N = grid_.modes_N;
  const int M = grid_.time_steps_M;
  if (w.rows() != N || w.cols() != M + 1) {
    throw std::invalid_argument("RegularizedScheme::apply: expected an N x (M+1) matrix");
  }
  Eigen::MatrixXd out = fixed_part_;
  if (!state_dependent_) return out;
  const double h = grid_.dt();
  Eigen::MatrixXd S(N, M + 1);
  for (int j = 0; j <= M; ++j) S.col(j) = state_term(j, w.col(j));
  for (int i = 1; i <= M; ++i) {
    for (int j = 1; j <= i; ++j) {
      const Eigen::VectorXd slope = (S.col(j) - S.col(j - 1)) / h;
      out.col(i) += m0_.col(i - j).cwiseProduct(S.col(j - 1)) + m1_.col(i - j).cwiseProduct(slope);
    }
    check_finite(out.col(i), i);
  }
  return out;
}

double RegularizedScheme::sup_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).colwise().norm().maxCoeff();
}

RegularizedSolution RegularizedScheme::wrap(Eigen::MatrixXd coeffs) const {
  RegularizedSolution sol;
  sol.coeffs = std::move(coeffs);
  sol.grid = grid_;
  sol.params = params_;
  sol.basis = projector_.basis();
  return sol;
}

RegularizedSolution regularized_march(const SourceSpec& source, const CauchyData& data,
                                      const RegParams& params, const Grid& grid,
                                      std::optional<EigenBasis> basis) {
  const RegularizedScheme scheme(source, data, params, grid, std::move(basis));
  RegularizedSolution sol = scheme.wrap(scheme.march());
  sol.iterations = 1;
  return sol;
}

RegularizedSolution picard_solve(const SourceSpec& source, const CauchyData& data,
                                 const RegParams& params, const Grid& grid,
                                 const PicardOptions& options, std::optional<EigenBasis> basis) {
  if (options.max_iter < 1) throw std::invalid_argument("picard_solve: max_iter must be >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  const RegularizedScheme scheme(source, data, params, grid, std::move(basis));
  const int N = grid.modes_N;
  const int M = grid.time_steps_M;
  Eigen::MatrixXd w = options.initial ? *options.initial : Eigen::MatrixXd::Zero(N, M + 1);
  std::vector<double> history;
  for (int it = 1; it <= options.max_iter; ++it) {
    Eigen::MatrixXd next;
    try {
      next = scheme.apply(w);
    } catch (const BlowUpError&) {
      history.push_back(std::numeric_limits<double>::infinity());
      throw DivergenceError(std::move(history));
    }
    const double d = RegularizedScheme::sup_distance(next, w);
    history.push_back(d);
    w = std::move(next);
    if (!source.depends_on_state() || d < options.tol) {
      RegularizedSolution sol = scheme.wrap(std::move(w));
      sol.iterations = it;
      sol.residual_history = std::move(history);
      return sol;
    }
  }
  throw DivergenceError(std::move(history));
}

// --- terminal time -------------------------------------------------------------

double terminal_time(double eps, double T) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("terminal_time: epsilon must lie in (0,1)");
  if (!(T > eps)) throw std::domain_error("terminal_time: no root in (0, T) unless T > epsilon");
  const double le = std::log(eps);
  // Strictly decreasing on [0, T): positive at 0, -> -inf at T.
  auto h = [&](double t) { return 2.0 * std::log(T - t) - (2.0 - 2.0 * t / T) * le; };
  double lo = 0.0, hi = T;
  for (int k = 0; k < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * T; ++k) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TerminalSolution::TerminalSolution(RegularizedSolution solution, double t_eps)
    : solution_(std::move(solution)), t_eps_(t_eps) {
  if (!(t_eps >= 0.0 && t_eps < solution_.grid.horizon_T)) {
    throw std::domain_error("TerminalSolution: t_eps must lie in [0, T)");
  }
}

Eigen::VectorXd TerminalSolution::coefficients(double t) const {
  const double T = solution_.grid.horizon_T;
  if (!(t >= 0.0 && t <= T)) throw std::domain_error("TerminalSolution: t outside [0, T]");
  return solution_.coefficients_at(t < T ? t : t_eps_);
}

double TerminalSolution::value(double x, double t) const {
  return synthesize(coefficients(t), x, solution_.basis);
}

TerminalSolution assemble_terminal(RegularizedSolution solution, double t_eps) {
  return TerminalSolution(std::move(solution), t_eps);
}

}  // namespace cauchyreg
