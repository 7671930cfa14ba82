#pragma once

// Regularized hyperbolic kernels.
//
// The unstable factors cosh(sqrt(lambda) t), sinh(sqrt(lambda) t) of the mild
// solution are replaced by
//
//   cosh_eps = (Q e^{sqrt(lambda) t} + e^{-sqrt(lambda) t}) / 2
//   sinh_eps = (Q e^{sqrt(lambda) t} - e^{-sqrt(lambda) t}) / 2
//   Q(eps, lambda) = e^{-sqrt(lambda) T} / (eps + e^{-sqrt(lambda) T})
//
// Q e^{sqrt(lambda) t} is always formed as e^{-sqrt(lambda)(T - t)} / (eps + e^{-sqrt(lambda) T})
// in log space, so nothing overflows for large modes when eps > 0; the value
// is bounded by eps^{-t/T}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cauchyreg {

/// Regularization and source constants. The `source_*` fields are only
/// consulted for composite a(t,u) f(t,u) sources.
struct RegParams {
  double epsilon = 1e-2;
  double horizon_T = 1.0;
  double lipschitz_K = 0.0;
  double source_sup_M = 0.0;
  double source_lip_N = 0.0;
  double apriori_P = 0.0;

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("RegParams: epsilon must be positive");
    if (!(horizon_T > 0.0)) throw std::invalid_argument("RegParams: horizon_T must be positive");
    if (lipschitz_K < 0.0 || source_sup_M < 0.0 || source_lip_N < 0.0 || apriori_P < 0.0) {
      throw std::invalid_argument("RegParams: constants must be nonnegative");
    }
  }
};

namespace detail {

inline void require_nonnegative_eps(double eps, const char* who) {
  if (!(eps >= 0.0)) throw std::domain_error(std::string(who) + ": epsilon must be >= 0");
}

/// log(eps + e^{-x}) for x >= 0 without overflow or cancellation.
template <typename Scalar>
Scalar log_eps_plus_exp_neg(Scalar eps, Scalar x) {
  using std::log;
  using std::log1p;
  using std::exp;
  if (eps == Scalar(0)) return -x;
  const Scalar le = log(eps);
  const Scalar hi = std::max(le, -x);
  const Scalar lo = std::min(le, -x);
  return hi + log1p(exp(lo - hi));
}

}  // namespace detail

/// Q(eps, lambda) = e^{-sqrt(lambda) T} / (eps + e^{-sqrt(lambda) T}), in (0, 1].
template <typename Scalar>
Scalar stability_factor(Scalar eps, Scalar lambda, Scalar T) {
  using std::exp;
  using std::sqrt;
  detail::require_nonnegative_eps(eps, "stability_factor");
  if (eps == Scalar(0)) return Scalar(1);
  // 1 / (1 + eps e^{sqrt(lambda) T}); exp overflow drives the result to 0 as it should.
  return Scalar(1) / (Scalar(1) + eps * exp(sqrt(lambda) * T));
}

/// Q(eps, lambda) e^{sqrt(lambda) t}.
template <typename Scalar>
Scalar damped_growth(Scalar eps, Scalar lambda, Scalar t, Scalar T) {
  using std::exp;
  using std::sqrt;
  detail::require_nonnegative_eps(eps, "damped_growth");
  const Scalar r = sqrt(lambda);
  return exp(-r * (T - t) - detail::log_eps_plus_exp_neg(eps, r * T));
}

template <typename Scalar>
Scalar cosh_reg(Scalar eps, Scalar lambda, Scalar t, Scalar T) {
  using std::exp;
  using std::sqrt;
  return (damped_growth(eps, lambda, t, T) + exp(-sqrt(lambda) * t)) / Scalar(2);
}

template <typename Scalar>
Scalar sinh_reg(Scalar eps, Scalar lambda, Scalar t, Scalar T) {
  using std::exp;
  using std::sqrt;
  return (damped_growth(eps, lambda, t, T) - exp(-sqrt(lambda) * t)) / Scalar(2);
}

/// sinh_eps(sqrt(lambda) (t - s)). Requires s <= t.
template <typename Scalar>
Scalar sinh_reg_diff(Scalar eps, Scalar lambda, Scalar t, Scalar s, Scalar T) {
  if (s > t) throw std::domain_error("sinh_reg_diff: requires s <= t");
  return sinh_reg(eps, lambda, t - s, T);
}

template <typename Scalar>
struct BoundPair {
  Scalar lhs;
  Scalar rhs;
  bool holds() const { return lhs <= rhs; }
};

/// Sobolev-scale rate bound for 0 < eps < 1, s > 0, X >= 0:
///   eps / ((1+X)^s (eps + e^{-T X}))  <=  C(s) (T / ln(1/eps))^s,
///   C(s) = s^s e^{1-s} (1 + T^{-s}).
template <typename Scalar>
BoundPair<Scalar> sobolev_bound(Scalar s, Scalar X, Scalar eps, Scalar T) {
  using std::exp;
  using std::log;
  using std::pow;
  if (!(eps > Scalar(0) && eps < Scalar(1))) {
    throw std::domain_error("sobolev_bound: epsilon must lie in (0,1)");
  }
  if (!(s > Scalar(0))) throw std::domain_error("sobolev_bound: s must be positive");
  if (!(X >= Scalar(0))) throw std::domain_error("sobolev_bound: X must be nonnegative");
  if (!(T > Scalar(0))) throw std::domain_error("sobolev_bound: T must be positive");
  // lhs = 1 / ((1+X)^s (1 + e^{-T X} / eps)), written to survive eps -> 0.
  const Scalar lhs =
      Scalar(1) / (pow(Scalar(1) + X, s) * (Scalar(1) + exp(-T * X - log(eps))));
  const Scalar c = pow(s, s) * exp(Scalar(1) - s) * (Scalar(1) + pow(T, -s));
  const Scalar rhs = c * pow(T / log(Scalar(1) / eps), s);
  return {lhs, rhs};
}

/// Smallest m >= 1 with (K^2 / (lambda_1 eps^2))^m (T C)^m / m! < 1, C = max(T, 1):
/// the power of the regularized fixed-point map that is a contraction.
/// Throws std::runtime_error if no m <= 10^6 qualifies.
inline std::int64_t picard_contraction_depth(const RegParams& params,
                                             double lambda1 = std::numbers::pi * std::numbers::pi) {
  if (!(params.epsilon > 0.0)) {
    throw std::domain_error("picard_contraction_depth: epsilon must be positive");
  }
  if (!(lambda1 > 0.0)) throw std::domain_error("picard_contraction_depth: lambda_1 must be positive");
  const double K = params.lipschitz_K;
  if (!(K >= 0.0)) throw std::domain_error("picard_contraction_depth: K must be nonnegative");
  if (K == 0.0) return 1;
  const double T = params.horizon_T;
  const double C = std::max(T, 1.0);
  const double log_ratio =
      2.0 * std::log(K) - std::log(lambda1) - 2.0 * std::log(params.epsilon) + std::log(T * C);
  constexpr std::int64_t cap = 1'000'000;
  for (std::int64_t m = 1; m <= cap; ++m) {
    const double log_term = static_cast<double>(m) * log_ratio - std::lgamma(static_cast<double>(m) + 1.0);
    if (log_term < 0.0) return m;
  }
  throw std::runtime_error("picard_contraction_depth: no contractive power up to m = 10^6");
}

}  // namespace cauchyreg
