#include "cauchyreg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace cauchyreg {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  return splitmix64(state);
}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256::uniform_pm1() {
  const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * unit - 1.0;
}

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::off: return "off";
    case NoiseKind::additive: return "additive";
    case NoiseKind::relative: return "relative";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "off") return NoiseKind::off;
  if (text == "additive") return NoiseKind::additive;
  if (text == "relative") return NoiseKind::relative;
  throw std::invalid_argument("unknown noise kind '" + std::string(text) + "'");
}

namespace {

Eigen::VectorXd draw(std::uint64_t seed, Eigen::Index count) {
  Xoshiro256 rng(seed);
  Eigen::VectorXd r(count);
  for (Eigen::Index j = 0; j < count; ++j) r[j] = rng.uniform_pm1();
  return r;
}

}  // namespace

Eigen::VectorXd perturb_additive(const Eigen::VectorXd& samples, const NoiseModel& model) {
  if (model.kind == NoiseKind::off) return samples;
  return samples + model.epsilon * draw(model.seed, samples.size());
}

Eigen::VectorXd perturb_relative(const Eigen::VectorXd& samples, const NoiseModel& model,
                                 double norm_f) {
  if (!(norm_f > 0.0)) throw std::domain_error("perturb_relative: norm_f must be positive");
  if (model.kind == NoiseKind::off) return samples;
  const Eigen::VectorXd r = draw(model.seed, samples.size());
  return samples.cwiseProduct((1.0 + model.epsilon * r.array() / norm_f).matrix());
}

NoisyField::NoisyField(std::function<double(double)> exact, NoiseModel model, int space_points_K,
                       double norm_f)
    : exact_(std::move(exact)), model_(model), K_(space_points_K), norm_f_(norm_f) {
  if (K_ < 1) throw std::invalid_argument("NoisyField: need at least one space interval");
  if (model_.kind == NoiseKind::relative && !(norm_f_ > 0.0)) {
    throw std::domain_error("NoisyField: relative noise needs a positive norm");
  }
  if (model_.epsilon < 0.0) throw std::invalid_argument("NoisyField: epsilon must be >= 0");
  draws_ = model_.kind == NoiseKind::off ? Eigen::VectorXd::Zero(K_ + 1) : draw(model_.seed, K_ + 1);
}

double NoisyField::interpolated_draw(double x) const {
  const double pos = std::clamp(x, 0.0, 1.0) * K_;
  const int j = std::min(static_cast<int>(pos), K_ - 1);
  const double frac = pos - j;
  return (1.0 - frac) * draws_[j] + frac * draws_[j + 1];
}

double NoisyField::operator()(double x) const {
  const double f = exact_(x);
  switch (model_.kind) {
    case NoiseKind::off: return f;
    case NoiseKind::additive: return f + model_.epsilon * interpolated_draw(x);
    case NoiseKind::relative: return f * (1.0 + model_.epsilon * interpolated_draw(x) / norm_f_);
  }
  return f;
}

Eigen::VectorXd NoisyField::nodal() const {
  Eigen::VectorXd out(K_ + 1);
  for (int j = 0; j <= K_; ++j) {
    const double x = static_cast<double>(j) / K_;
    const double f = exact_(x);
    switch (model_.kind) {
      case NoiseKind::off: out[j] = f; break;
      case NoiseKind::additive: out[j] = f + model_.epsilon * draws_[j]; break;
      case NoiseKind::relative: out[j] = f * (1.0 + model_.epsilon * draws_[j] / norm_f_); break;
    }
  }
  return out;
}

CauchyData NoisyData::as_cauchy_data() const {
  return CauchyData{[phi = phi](double x) { return phi(x); }, [g = g](double x) { return g(x); }};
}

NoisyData benchmark_noisy_data(const BenchmarkProblem& prob, double epsilon, std::uint64_t seed,
                               int space_points_K, NoiseKind g_kind) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("benchmark_noisy_data: epsilon must be >= 0");
  const CauchyData exact = prob.data();
  const NoiseKind phi_kind = g_kind == NoiseKind::off ? NoiseKind::off : NoiseKind::additive;
  NoisyField phi(exact.phi, NoiseModel{phi_kind, epsilon, derive_seed(seed, 0)}, space_points_K);
  NoisyField g(exact.g, NoiseModel{g_kind, epsilon, derive_seed(seed, 1)}, space_points_K,
               prob.g_norm());
  return NoisyData{std::move(phi), std::move(g)};
}

double discrete_l2(const Eigen::VectorXd& nodal) {
  if (nodal.size() < 2) throw std::invalid_argument("discrete_l2: need at least two nodes");
  const double dx = 1.0 / static_cast<double>(nodal.size() - 1);
  return std::sqrt(dx * nodal.squaredNorm());
}

}  // namespace cauchyreg
