#include "cauchyreg/model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace cauchyreg {

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::zero: return "zero";
    case SourceKind::time_only: return "time_only";
    case SourceKind::global_lipschitz: return "global_lipschitz";
    case SourceKind::composite: return "composite";
  }
  return "unknown";
}

double SourceSpec::state_part(double t, double x, double u) const {
  switch (kind) {
    case SourceKind::zero:
    case SourceKind::time_only: return 0.0;
    case SourceKind::global_lipschitz: return f(t, x, u);
    case SourceKind::composite: return a(t, x, u) * f(t, x, u);
  }
  return 0.0;
}

void SourceSpec::validate() const {
  switch (kind) {
    case SourceKind::zero:
      if (forcing) throw std::invalid_argument("SourceSpec: zero source carries a forcing");
      break;
    case SourceKind::time_only:
      if (!forcing) throw std::invalid_argument("SourceSpec: time_only source needs a forcing");
      break;
    case SourceKind::global_lipschitz:
      if (!f) throw std::invalid_argument("SourceSpec: global_lipschitz source needs f");
      break;
    case SourceKind::composite:
      if (!f || !a) throw std::invalid_argument("SourceSpec: composite source needs both a and f");
      break;
  }
  if (lipschitz_K < 0.0 || a_bound_M < 0.0 || a_lip_N < 0.0 || source_at_zero_Q < 0.0) {
    throw std::invalid_argument("SourceSpec: constants must be nonnegative");
  }
}

SourceSpec zero_source() { return SourceSpec{}; }

SourceSpec time_only_source(SourceSpec::ForcingFn forcing) {
  SourceSpec spec;
  spec.kind = SourceKind::time_only;
  spec.forcing = std::move(forcing);
  spec.validate();
  return spec;
}

SourceSpec lipschitz_source(SourceSpec::StateFn f, double K, SourceSpec::ForcingFn forcing) {
  SourceSpec spec;
  spec.kind = SourceKind::global_lipschitz;
  spec.f = std::move(f);
  spec.lipschitz_K = K;
  spec.forcing = std::move(forcing);
  spec.validate();
  return spec;
}

SourceSpec composite_source(SourceSpec::StateFn a, SourceSpec::StateFn f, double M, double N,
                            double K, double Q, SourceSpec::ForcingFn forcing) {
  SourceSpec spec;
  spec.kind = SourceKind::composite;
  spec.a = std::move(a);
  spec.f = std::move(f);
  spec.a_bound_M = M;
  spec.a_lip_N = N;
  spec.lipschitz_K = K;
  spec.source_at_zero_Q = Q;
  spec.forcing = std::move(forcing);
  spec.validate();
  return spec;
}

namespace {

void require_finite(const Eigen::VectorXd& u, const char* who) {
  if (!u.allFinite()) throw std::domain_error(std::string(who) + ": non-finite value in u field");
}

}  // namespace

Eigen::VectorXd source_eval(const SourceSpec& spec, double t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u) {
  require_finite(u, "source_eval");
  if (x.size() != u.size()) throw std::invalid_argument("source_eval: x and u differ in length");
  Eigen::VectorXd out(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) out[k] = spec(t, x[k], u[k]);
  return out;
}

Eigen::VectorXd state_eval(const SourceSpec& spec, double t, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) {
  require_finite(u, "state_eval");
  if (x.size() != u.size()) throw std::invalid_argument("state_eval: x and u differ in length");
  Eigen::VectorXd out(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) out[k] = spec.state_part(t, x[k], u[k]);
  return out;
}

// --- benchmark -------------------------------------------------------------

namespace {

double composite_multiplier(double u) { return 1.0 / (1.0 + u * u); }

// max |d/du (1 + u^2)^{-1}| = 2|u| / (1 + u^2)^2 at u = 1/sqrt(3).
const double composite_multiplier_lip = 3.0 * std::sqrt(3.0) / 8.0;

}  // namespace

BenchmarkProblem::BenchmarkProblem(double a, BenchmarkVariant variant) : a_(a), variant_(variant) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw std::invalid_argument("BenchmarkProblem: a must be a nonzero finite real");
  }
}

BenchmarkProblem BenchmarkProblem::by_name(std::string_view name, double a) {
  if (name == lane_emden_name) return BenchmarkProblem(a, BenchmarkVariant::lane_emden);
  if (name == composite_name) return BenchmarkProblem(a, BenchmarkVariant::composite);
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

std::string_view BenchmarkProblem::name() const {
  return variant_ == BenchmarkVariant::lane_emden ? lane_emden_name : composite_name;
}

double BenchmarkProblem::cubic(double u) const { return u * u * u / (a_ * a_ * a_); }

double BenchmarkProblem::forcing(double x, double t) const {
  const double w = x * x * x * x * x * x * (1.0 - x) * (1.0 - x) * (1.0 - x);
  return 2.0 * a_ * t * (1.0 - 3.0 * x) - t * t * t * w;
}

double BenchmarkProblem::variant_forcing(double x, double t) const {
  if (variant_ == BenchmarkVariant::lane_emden) return forcing(x, t);
  const double u = exact(x, t);
  return exact_xx(x, t) - composite_multiplier(u) * cubic(u);
}

double BenchmarkProblem::exact(double x, double t) const { return a_ * t * x * x * (1.0 - x); }

double BenchmarkProblem::exact_xx(double x, double t) const {
  return 2.0 * a_ * t * (1.0 - 3.0 * x);
}

double BenchmarkProblem::g_norm() const { return std::abs(a_) / std::sqrt(105.0); }

CauchyData BenchmarkProblem::data() const {
  const double a = a_;
  return CauchyData{[](double) { return 0.0; },
                    [a](double x) { return a * x * x * (1.0 - x); }};
}

double BenchmarkProblem::state_bound(double margin) const {
  return 4.0 * std::abs(a_) / 27.0 + margin;
}

double BenchmarkProblem::effective_lipschitz(double R) const {
  return 3.0 * R * R / std::abs(a_ * a_ * a_);
}

SourceSpec BenchmarkProblem::source(double R) const {
  const BenchmarkProblem self = *this;
  const double K = effective_lipschitz(R);
  auto cubic_fn = [self](double, double, double u) { return self.cubic(u); };
  auto forcing_fn = [self](double t, double x) { return self.variant_forcing(x, t); };
  if (variant_ == BenchmarkVariant::lane_emden) return lipschitz_source(cubic_fn, K, forcing_fn);
  return composite_source([](double, double, double u) { return composite_multiplier(u); },
                          cubic_fn, 1.0, composite_multiplier_lip, K, 0.0, forcing_fn);
}

double exact_eval(const BenchmarkProblem& prob, double x, double t) { return prob.exact(x, t); }

double forward_residual(const BenchmarkProblem& prob, double x, double t) {
  // u_tt + u_xx = f(u) + h  <=>  u_tt = A u + f(u) + h with A = -d^2/dx^2.
  const SourceSpec src = prob.source();
  const double u = prob.exact(x, t);
  return prob.exact_tt(x, t) + prob.exact_xx(x, t) - src(t, x, u);
}

}  // namespace cauchyreg
