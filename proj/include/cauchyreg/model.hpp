#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>

namespace cauchyreg {

/// Cauchy data u(0) = phi, u_t(0) = g on [0,1].
struct CauchyData {
  std::function<double(double)> phi;
  std::function<double(double)> g;
};

enum class SourceKind { zero, time_only, global_lipschitz, composite };

std::string_view to_string(SourceKind kind);

/// Right-hand side f of u_tt = A u + f, split into a state-dependent part and
/// a forcing that depends on (t, x) only:
///
///   f(t, x, u) = m(t, x, u) * n(t, x, u) + h(t, x)
///
/// where m == 1 unless kind == composite. The split matters to the time
/// discretization: the forcing is integrated exactly in time while the state
/// part is sampled on the time grid.
struct SourceSpec {
  using StateFn = std::function<double(double t, double x, double u)>;
  using ForcingFn = std::function<double(double t, double x)>;

  SourceKind kind = SourceKind::zero;
  StateFn f;         // n(t, x, u); unset for zero and time_only
  StateFn a;         // m(t, x, u); composite only
  ForcingFn forcing; // h(t, x); optional for every kind except zero

  double lipschitz_K = 0.0;       // |n(t,x,w) - n(t,x,v)| <= K |w - v|
  double a_bound_M = 0.0;         // |m| <= M
  double a_lip_N = 0.0;           // |m(t,x,w) - m(t,x,v)| <= N |w - v|
  double source_at_zero_Q = 0.0;  // ||n(t, ., 0)|| <= Q

  bool depends_on_state() const {
    return kind == SourceKind::global_lipschitz || kind == SourceKind::composite;
  }

  /// m * n at a point; zero for zero and time_only sources.
  double state_part(double t, double x, double u) const;
  double forcing_part(double t, double x) const { return forcing ? forcing(t, x) : 0.0; }
  double operator()(double t, double x, double u) const {
    return state_part(t, x, u) + forcing_part(t, x);
  }

  /// Throws std::invalid_argument if the callables required by `kind` are missing.
  void validate() const;
};

SourceSpec zero_source();
SourceSpec time_only_source(SourceSpec::ForcingFn forcing);
SourceSpec lipschitz_source(SourceSpec::StateFn f, double K, SourceSpec::ForcingFn forcing = {});
SourceSpec composite_source(SourceSpec::StateFn a, SourceSpec::StateFn f, double M, double N,
                            double K, double Q, SourceSpec::ForcingFn forcing = {});

/// Pointwise f(t, x_k, u_k). Throws std::domain_error on non-finite u.
Eigen::VectorXd source_eval(const SourceSpec& spec, double t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u);

/// Pointwise state part only (the piece the solvers sample on the time grid).
Eigen::VectorXd state_eval(const SourceSpec& spec, double t, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u);

enum class BenchmarkVariant {
  lane_emden,  // u_tt + u_xx = u^3 / a^3 + G(x, t)
  composite,   // u_tt + u_xx = u^3 / (a^3 (1 + u^2)) + G_c(x, t)
};

/// Manufactured Lane-Emden benchmark on (0,1) x (0,1) with exact solution
/// u(x, t) = a t x^2 (1 - x), phi = 0, g = a x^2 (1 - x).
///
/// The composite variant multiplies the cubic by a(t, u) = 1 / (1 + u^2)
/// (|a| <= 1, Lipschitz constant 3 sqrt(3) / 8) and adjusts the forcing so
/// that the same u remains the exact solution.
class BenchmarkProblem {
 public:
  static constexpr std::string_view lane_emden_name = "benchmark-lane-emden";
  static constexpr std::string_view composite_name = "benchmark-composite";

  explicit BenchmarkProblem(double a, BenchmarkVariant variant = BenchmarkVariant::lane_emden);

  /// Lookup by name; throws std::invalid_argument for unknown names.
  static BenchmarkProblem by_name(std::string_view name, double a);

  double a() const { return a_; }
  BenchmarkVariant variant() const { return variant_; }
  std::string_view name() const;

  /// u^3 / a^3
  double cubic(double u) const;
  /// 2 a t (1 - 3x) - t^3 x^6 (1 - x)^3
  double forcing(double x, double t) const;
  /// Forcing of the active variant.
  double variant_forcing(double x, double t) const;

  double exact(double x, double t) const;
  double exact_tt(double /*x*/, double /*t*/) const { return 0.0; }
  double exact_xx(double x, double t) const;

  /// ||g||_{L^2(0,1)} = |a| / sqrt(105).
  double g_norm() const;
  CauchyData data() const;

  /// Bound on |u| used for the local Lipschitz constant: max|u_ex| + margin.
  double state_bound(double margin = 0.05) const;
  /// 3 R^2 / |a|^3, the Lipschitz constant of u^3/a^3 on |u| <= R.
  double effective_lipschitz(double R) const;

  /// Source of the active variant with the effective Lipschitz constant on |u| <= R.
  SourceSpec source(double R) const;
  SourceSpec source() const { return source(state_bound()); }

 private:
  double a_;
  BenchmarkVariant variant_;
};

double exact_eval(const BenchmarkProblem& prob, double x, double t);

/// u_tt + u_xx - f(t, x, u) at the exact solution, from analytic derivatives.
double forward_residual(const BenchmarkProblem& prob, double x, double t);

}  // namespace cauchyreg
