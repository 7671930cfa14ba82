#include "cauchyreg/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cauchyreg {

std::string_view to_string(SolverKind kind) {
  return kind == SolverKind::march ? "march" : "picard";
}

SolverKind parse_solver_kind(std::string_view text) {
  if (text == "march") return SolverKind::march;
  if (text == "picard") return SolverKind::picard;
  throw std::invalid_argument("unknown solver '" + std::string(text) + "'");
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::csv ? "csv" : "json";
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

// --- configuration -----------------------------------------------------------

void ExperimentConfig::validate() const {
  BenchmarkProblem::by_name(problem, a);
  if (epsilons.empty()) throw std::invalid_argument("config: epsilon list is empty");
  for (double eps : epsilons) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw std::invalid_argument("config: epsilon " + format_real(eps) + " outside (0,1)");
    }
  }
  if (modes.empty()) throw std::invalid_argument("config: mode list is empty");
  for (int N : modes) grid(N).validate();
  if (times.empty()) throw std::invalid_argument("config: no report times");
  for (double t : times) grid(modes.front()).time_index(t);
}

RegParams ExperimentConfig::params(double epsilon) const {
  const SourceSpec src = benchmark().source();
  RegParams p;
  p.epsilon = epsilon;
  p.horizon_T = horizon_T;
  p.lipschitz_K = src.lipschitz_K;
  p.source_sup_M = src.a_bound_M;
  p.source_lip_N = src.a_lip_N;
  return p;
}

ExperimentConfig table1_config() { return ExperimentConfig{}; }

ExperimentConfig table2_config() {
  ExperimentConfig c;
  c.epsilons = {1e-4};
  c.modes = {2, 3, 4};
  return c;
}

ExperimentConfig rate_config() {
  ExperimentConfig c;
  c.epsilons = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  c.modes = {20};
  c.time_steps_M = 60;
  c.space_points_K = 80;
  c.noise = NoiseKind::off;
  return c;
}

RegularizedSolution solve_benchmark(const ExperimentConfig& config, double epsilon, int modes_N,
                                    std::uint64_t seed) {
  const BenchmarkProblem prob = config.benchmark();
  const NoisyData noisy =
      benchmark_noisy_data(prob, epsilon, seed, config.space_points_K, config.noise);
  const CauchyData data = noisy.as_cauchy_data();
  const SourceSpec src = prob.source();
  const RegParams params = config.params(epsilon);
  const Grid grid = config.grid(modes_N);
  if (config.solver == SolverKind::picard) return picard_solve(src, data, params, grid);
  return regularized_march(src, data, params, grid);
}

// --- errors ------------------------------------------------------------------

double error_norm(const RegularizedSolution& sol, const std::function<double(double, double)>& exact,
                  double t) {
  const int i = sol.grid.time_index(t);
  const Eigen::VectorXd v = sol.nodal_values(i);
  double acc = 0.0;
  for (int j = 0; j <= sol.grid.space_points_K; ++j) {
    const double d = v[j] - exact(sol.grid.space(j), sol.grid.time(i));
    acc += d * d;
  }
  return std::sqrt(acc);
}

double weighted_error_norm(const RegularizedSolution& sol,
                           const std::function<double(double, double)>& exact, double t) {
  return error_norm(sol, exact, t) / std::sqrt(static_cast<double>(sol.grid.space_points_K));
}

const ErrorRow& ErrorReport::at(double epsilon, int N, double t) const {
  for (const ErrorRow& row : rows) {
    if (row.epsilon == epsilon && row.N == N && std::abs(row.t - t) < 1e-12) return row;
  }
  throw std::out_of_range("ErrorReport: no row for epsilon " + format_real(epsilon) + ", N " +
                          std::to_string(N) + ", t " + format_real(t));
}

ErrorReport run_table(const ExperimentConfig& config) {
  config.validate();
  const BenchmarkProblem prob = config.benchmark();
  auto exact = [&prob](double x, double t) { return prob.exact(x, t); };
  ErrorReport report{config, {}};
  for (int N : config.modes) {
    for (double eps : config.epsilons) {
      RegularizedSolution sol;
      try {
        sol = solve_benchmark(config, eps, N, config.seed);
      } catch (const SolverError& e) {
        throw SolverError("epsilon " + format_real(eps) + ": " + e.what());
      }
      for (double t : config.times) {
        report.rows.push_back(ErrorRow{eps, N, config.time_steps_M, config.space_points_K,
                                       config.seed, t, error_norm(sol, exact, t),
                                       weighted_error_norm(sol, exact, t),
                                       std::numeric_limits<double>::quiet_NaN(),
                                       1.0 - t / config.horizon_T});
      }
    }
    for (double t : config.times) {
      double slope = std::numeric_limits<double>::quiet_NaN();
      try {
        slope = rate_fit(report, N, t).slope;
      } catch (const RateFitError&) {
      }
      for (ErrorRow& row : report.rows) {
        if (row.N == N && row.t == t) row.slope_fit = slope;
      }
    }
  }
  return report;
}

// --- rate fit ----------------------------------------------------------------

RateFit rate_fit(const std::vector<double>& epsilons, const std::vector<double>& errors) {
  if (epsilons.size() != errors.size()) {
    throw std::invalid_argument("rate_fit: epsilon and error lists differ in length");
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < epsilons.size(); ++k) {
    if (!(epsilons[k] > 0.0) || !(errors[k] > 0.0)) {
      throw std::invalid_argument("rate_fit: epsilon and error must be positive");
    }
    pts.emplace_back(epsilons[k], errors[k]);
  }
  std::sort(pts.begin(), pts.end());  // ascending epsilon
  std::size_t first = 0;
  while (pts.size() - first >= 2 && pts[first].second / pts[first + 1].second > 0.9) ++first;
  const std::size_t n = pts.size() - first;
  if (n < 3) {
    throw RateFitError("rate_fit: only " + std::to_string(n) +
                       " points below the saturation floor, need 3");
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t k = first; k < pts.size(); ++k) {
    sx += std::log(pts[k].first);
    sy += std::log(pts[k].second);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = first; k < pts.size(); ++k) {
    const double dx = std::log(pts[k].first) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(pts[k].second) - my);
  }
  const double slope = sxy / sxx;
  return RateFit{slope, my - slope * mx, static_cast<int>(n)};
}

RateFit rate_fit(const ErrorReport& report, int N, double t) {
  std::vector<double> eps, err;
  for (const ErrorRow& row : report.rows) {
    if (row.N == N && std::abs(row.t - t) < 1e-12) {
      eps.push_back(row.epsilon);
      err.push_back(row.weighted_error);
    }
  }
  return rate_fit(eps, err);
}

// --- stability ---------------------------------------------------------------

std::vector<StabilityRow> stability_check(const ExperimentConfig& config, double epsilon,
                                          std::uint64_t seed1, std::uint64_t seed2) {
  config.validate();
  const int N = config.modes.front();
  const BenchmarkProblem prob = config.benchmark();
  const NoisyData d1 = benchmark_noisy_data(prob, epsilon, seed1, config.space_points_K, config.noise);
  const NoisyData d2 = benchmark_noisy_data(prob, epsilon, seed2, config.space_points_K, config.noise);
  const RegularizedSolution s1 = solve_benchmark(config, epsilon, N, seed1);
  const RegularizedSolution s2 = solve_benchmark(config, epsilon, N, seed2);

  // Panels aligned with the noise nodes: the integrands are polynomials on each.
  const QuadratureRule rule = composite_gauss_legendre(config.space_points_K, 6);
  const double dphi = rule.integrate([&](double x) {
    const double d = d1.phi(x) - d2.phi(x);
    return d * d;
  });
  const double dg = rule.integrate([&](double x) {
    const double d = d1.g(x) - d2.g(x);
    return d * d;
  });

  const double T = config.horizon_T;
  const double K = config.params(epsilon).lipschitz_K;
  const double lambda1 = s1.basis.eigenvalue(1);
  const double front = 3.0 * std::exp(3.0 * T * T * K * K / lambda1) * (dphi + dg / lambda1);

  std::vector<StabilityRow> rows;
  for (int i = 0; i <= config.time_steps_M; ++i) {
    const double t = s1.grid.time(i);
    const double lhs = (s1.coeffs.col(i) - s2.coeffs.col(i)).squaredNorm();
    const double rhs = front * std::pow(epsilon, -2.0 * t / T);
    rows.push_back(StabilityRow{epsilon, seed1, seed2, t, lhs, rhs});
  }
  return rows;
}

// --- cross validation --------------------------------------------------------

bool CrossValidation::agrees(double factor) const {
  return difference <= factor * std::max(tol, discretization);
}

CrossValidation cross_validate(const ExperimentConfig& config, double epsilon,
                               const PicardOptions& options) {
  config.validate();
  const int N = config.modes.front();
  const BenchmarkProblem prob = config.benchmark();
  const NoisyData noisy =
      benchmark_noisy_data(prob, epsilon, config.seed, config.space_points_K, config.noise);
  const CauchyData data = noisy.as_cauchy_data();
  const SourceSpec src = prob.source();
  const RegParams params = config.params(epsilon);
  const Grid grid = config.grid(N);
  Grid fine = grid;
  fine.time_steps_M *= 2;

  const RegularizedSolution coarse = regularized_march(src, data, params, grid);
  const RegularizedSolution refined = regularized_march(src, data, params, fine);
  const RegularizedSolution picard = picard_solve(src, data, params, grid, options);

  Eigen::MatrixXd refined_on_coarse(N, grid.time_steps_M + 1);
  for (int i = 0; i <= grid.time_steps_M; ++i) refined_on_coarse.col(i) = refined.coeffs.col(2 * i);

  return CrossValidation{epsilon,
                         RegularizedScheme::sup_distance(picard.coeffs, coarse.coeffs),
                         options.tol,
                         RegularizedScheme::sup_distance(coarse.coeffs, refined_on_coarse),
                         picard.iterations};
}

// --- emission ----------------------------------------------------------------

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", value);
  return buf;
}

namespace {

nlohmann::ordered_json real_or_null(double value) {
  if (std::isnan(value)) return nullptr;
  return value;
}

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = c.problem;
  j["a"] = c.a;
  j["epsilon"] = c.epsilons;
  j["seed"] = c.seed;
  j["modes"] = c.modes;
  j["time_steps"] = c.time_steps_M;
  j["space_points"] = c.space_points_K;
  j["horizon"] = c.horizon_T;
  j["noise"] = std::string(to_string(c.noise));
  j["solver"] = std::string(to_string(c.solver));
  j["times"] = c.times;
  return j;
}

}  // namespace

std::string to_csv(const ErrorReport& report) {
  std::ostringstream out;
  out << "epsilon,N,M,K,seed,t,error,slope_fit,slope_theory\n";
  for (const ErrorRow& r : report.rows) {
    out << format_real(r.epsilon) << ',' << r.N << ',' << r.M << ',' << r.K << ',' << r.seed << ','
        << format_real(r.t) << ',' << format_real(r.error) << ',' << format_real(r.slope_fit) << ','
        << format_real(r.slope_theory) << '\n';
  }
  return out.str();
}

std::string to_json(const ErrorReport& report) {
  nlohmann::ordered_json j;
  j["config"] = config_json(report.config);
  j["rows"] = nlohmann::ordered_json::array();
  for (const ErrorRow& r : report.rows) {
    nlohmann::ordered_json row;
    row["epsilon"] = r.epsilon;
    row["N"] = r.N;
    row["M"] = r.M;
    row["K"] = r.K;
    row["seed"] = r.seed;
    row["t"] = r.t;
    row["error"] = r.error;
    row["slope_fit"] = real_or_null(r.slope_fit);
    row["slope_theory"] = r.slope_theory;
    row["error_weighted"] = r.weighted_error;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  out << "epsilon,seed1,seed2,t,lhs,rhs,holds\n";
  for (const StabilityRow& r : rows) {
    out << format_real(r.epsilon) << ',' << r.seed1 << ',' << r.seed2 << ',' << format_real(r.t)
        << ',' << format_real(r.lhs) << ',' << format_real(r.rhs) << ',' << (r.holds() ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<StabilityRow>& rows, const ExperimentConfig& config) {
  nlohmann::ordered_json j;
  j["config"] = config_json(config);
  j["rows"] = nlohmann::ordered_json::array();
  for (const StabilityRow& r : rows) {
    nlohmann::ordered_json row;
    row["epsilon"] = r.epsilon;
    row["seed1"] = r.seed1;
    row["seed2"] = r.seed2;
    row["t"] = r.t;
    row["lhs"] = r.lhs;
    row["rhs"] = r.rhs;
    row["holds"] = r.holds();
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::filesystem::path write_text(const std::string& text, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for " + path.string());
  return path;
}

std::filesystem::path emit(const ErrorReport& report, OutputFormat format,
                           const std::filesystem::path& dir, const std::string& stem) {
  const std::string text = format == OutputFormat::csv ? to_csv(report) : to_json(report);
  return write_text(text, dir / (stem + "." + std::string(to_string(format))));
}

std::string solution_grid_csv(const RegularizedSolution& sol, const BenchmarkProblem& prob) {
  std::ostringstream out;
  out << "x,t,v,u_ex\n";
  for (int i = 0; i <= sol.grid.time_steps_M; ++i) {
    const Eigen::VectorXd v = sol.nodal_values(i);
    const double t = sol.grid.time(i);
    for (int j = 0; j <= sol.grid.space_points_K; ++j) {
      const double x = sol.grid.space(j);
      out << format_real(x) << ',' << format_real(t) << ',' << format_real(v[j]) << ','
          << format_real(prob.exact(x, t)) << '\n';
    }
  }
  return out.str();
}

std::string solution_grid_json(const RegularizedSolution& sol, const BenchmarkProblem& prob,
                               const ExperimentConfig& config, double t_eps) {
  nlohmann::ordered_json j;
  j["config"] = config_json(config);
  j["t_eps"] = t_eps;
  j["rows"] = nlohmann::ordered_json::array();
  for (int i = 0; i <= sol.grid.time_steps_M; ++i) {
    const Eigen::VectorXd v = sol.nodal_values(i);
    const double t = sol.grid.time(i);
    for (int k = 0; k <= sol.grid.space_points_K; ++k) {
      const double x = sol.grid.space(k);
      j["rows"].push_back({{"x", x}, {"t", t}, {"v", v[k]}, {"u_ex", prob.exact(x, t)}});
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace cauchyreg
