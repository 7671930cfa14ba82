#pragma once

#include "cauchyreg/model.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string_view>

namespace cauchyreg {

/// SplitMix64 step; used for seeding and for deriving per-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// xoshiro256** (Blackman & Vigna), seeded through SplitMix64. Written out here
/// so that a seed produces the same stream on every platform and compiler.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform on [-1, 1): 53 random mantissa bits mapped affinely.
  double uniform_pm1();

 private:
  std::uint64_t s_[4];
};

enum class NoiseKind { off, additive, relative };

std::string_view to_string(NoiseKind kind);
/// "off" | "additive" | "relative"; throws std::invalid_argument otherwise.
NoiseKind parse_noise_kind(std::string_view text);

struct NoiseModel {
  NoiseKind kind = NoiseKind::additive;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

/// f(x_j) + eps r_j, r_j i.i.d. uniform on [-1,1] from the model's seed, in node order.
Eigen::VectorXd perturb_additive(const Eigen::VectorXd& samples, const NoiseModel& model);

/// f(x_j) (1 + eps r_j / norm_f). Throws std::domain_error if norm_f <= 0.
Eigen::VectorXd perturb_relative(const Eigen::VectorXd& samples, const NoiseModel& model,
                                 double norm_f);

/// A measured datum on [0,1]: the exact function perturbed by noise drawn
/// once per grid node x_j = j/K and interpolated linearly in between, so that
/// |noise(x)| <= max_j |r_j| everywhere. The exact part is evaluated directly;
/// only the noise is interpolated.
class NoisyField {
 public:
  NoisyField(std::function<double(double)> exact, NoiseModel model, int space_points_K,
             double norm_f = 1.0);

  double operator()(double x) const;

  /// Values at x_j = j/K, j = 0..K.
  Eigen::VectorXd nodal() const;
  const Eigen::VectorXd& draws() const { return draws_; }
  const NoiseModel& model() const { return model_; }
  int space_points() const { return K_; }

 private:
  double interpolated_draw(double x) const;

  std::function<double(double)> exact_;
  NoiseModel model_;
  int K_;
  double norm_f_;
  Eigen::VectorXd draws_;  // r_0..r_K, zero when kind == off
};

struct NoisyData {
  NoisyField phi;
  NoisyField g;

  CauchyData as_cauchy_data() const;
};

/// Benchmark measurements: phi^eps = phi + eps r (additive) and, for
/// g_kind == relative, g^eps = g (1 + eps r / ||g||) which for a = 1 is
/// g (1 + sqrt(105) eps r). g_kind == additive gives g + eps r; off leaves
/// both data exact. phi and g draw from independent streams of `seed`.
NoisyData benchmark_noisy_data(const BenchmarkProblem& prob, double epsilon, std::uint64_t seed,
                               int space_points_K, NoiseKind g_kind = NoiseKind::relative);

/// sqrt(dx * sum_j v_j^2) over nodal values on x_j = j/K.
double discrete_l2(const Eigen::VectorXd& nodal);

}  // namespace cauchyreg
