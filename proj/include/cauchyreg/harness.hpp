#pragma once

#include "cauchyreg/model.hpp"
#include "cauchyreg/noise.hpp"
#include "cauchyreg/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace cauchyreg {

enum class SolverKind { march, picard };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view text);

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view text);

struct ExperimentConfig {
  std::string problem = std::string(BenchmarkProblem::lane_emden_name);
  double a = 1.0;
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  std::uint64_t seed = 42;
  std::vector<int> modes{2};
  int time_steps_M = 12;
  int space_points_K = 20;
  double horizon_T = 1.0;
  NoiseKind noise = NoiseKind::relative;
  SolverKind solver = SolverKind::march;
  std::vector<double> times{0.25, 0.5, 0.75};

  /// Throws std::invalid_argument on epsilon outside (0,1), empty sweeps,
  /// nonpositive grid sizes or report times that are not grid times.
  void validate() const;

  BenchmarkProblem benchmark() const { return BenchmarkProblem::by_name(problem, a); }
  Grid grid(int modes_N) const { return Grid{modes_N, time_steps_M, space_points_K, horizon_T}; }
  RegParams params(double epsilon) const;
};

/// Defaults for each CLI subcommand.
ExperimentConfig table1_config();
ExperimentConfig table2_config();
ExperimentConfig rate_config();

/// Benchmark run for one (epsilon, N): noisy data from `seed`, then the chosen solver.
RegularizedSolution solve_benchmark(const ExperimentConfig& config, double epsilon, int modes_N,
                                    std::uint64_t seed);

/// sqrt(sum_{j=0..K} |v(x_j, t_i) - u(x_j, t_i)|^2), unnormalized.
double error_norm(const RegularizedSolution& sol, const std::function<double(double, double)>& exact,
                  double t);
/// error_norm * sqrt(1/K), a Riemann approximation of the L^2(0,1) error.
double weighted_error_norm(const RegularizedSolution& sol,
                           const std::function<double(double, double)>& exact, double t);

struct ErrorRow {
  double epsilon;
  int N;
  int M;
  int K;
  std::uint64_t seed;
  double t;
  double error;
  double weighted_error;
  double slope_fit = std::numeric_limits<double>::quiet_NaN();
  double slope_theory;
};

struct ErrorReport {
  ExperimentConfig config;
  std::vector<ErrorRow> rows;

  /// Row for (epsilon, N, t); throws std::out_of_range if absent.
  const ErrorRow& at(double epsilon, int N, double t) const;
};

/// Sweeps config.modes x config.epsilons and records errors at config.times.
/// slope_fit is filled per (N, t) when rate_fit succeeds and left NaN otherwise.
/// A solver failure is rethrown as SolverError naming the offending epsilon.
ErrorReport run_table(const ExperimentConfig& config);

class RateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RateFit {
  double slope;
  double intercept;
  int points_used;
};

/// Least squares of log E against log eps. Starting from the smallest epsilon,
/// points are dropped while E(eps) / E(next larger eps) > 0.9. Throws
/// RateFitError if fewer than three points remain.
RateFit rate_fit(const std::vector<double>& epsilons, const std::vector<double>& errors);
/// Same, on the weighted errors of `report` at (N, t).
RateFit rate_fit(const ErrorReport& report, int N, double t);

struct StabilityRow {
  double epsilon;
  std::uint64_t seed1;
  std::uint64_t seed2;
  double t;
  double lhs;
  double rhs;
  bool holds() const { return lhs <= rhs; }
};

/// ||v1(t_i) - v2(t_i)||^2 against
/// 3 exp(3 T^2 K^2 / lambda_1) eps^{-2 t_i / T} (||phi1 - phi2||^2 + ||g1 - g2||^2 / lambda_1)
/// at every grid time, with the effective K of the benchmark. N = config.modes.front().
std::vector<StabilityRow> stability_check(const ExperimentConfig& config, double epsilon,
                                          std::uint64_t seed1, std::uint64_t seed2);

struct CrossValidation {
  double epsilon;
  double difference;      // sup_i ||picard - march||
  double tol;
  double discretization;  // sup_i ||march(M) - march(2M)|| on the common grid
  int picard_iterations;
  bool agrees(double factor = 5.0) const;
};

/// Picard against march on the same data, N = config.modes.front().
CrossValidation cross_validate(const ExperimentConfig& config, double epsilon,
                               const PicardOptions& options = {});

std::string to_csv(const ErrorReport& report);
std::string to_json(const ErrorReport& report);
std::string to_csv(const std::vector<StabilityRow>& rows);
std::string to_json(const std::vector<StabilityRow>& rows, const ExperimentConfig& config);

/// Writes `stem`.csv or `stem`.json into `dir` (created if missing) and
/// returns the path. Throws std::runtime_error naming the path on failure.
std::filesystem::path emit(const ErrorReport& report, OutputFormat format,
                           const std::filesystem::path& dir, const std::string& stem);
std::filesystem::path write_text(const std::string& text, const std::filesystem::path& path);

/// Rows x, t, v, u_ex over the space-time grid of one solve.
std::string solution_grid_csv(const RegularizedSolution& sol, const BenchmarkProblem& prob);
std::string solution_grid_json(const RegularizedSolution& sol, const BenchmarkProblem& prob,
                               const ExperimentConfig& config, double t_eps);

/// "%.10e"
std::string format_real(double value);

}  // namespace cauchyreg
