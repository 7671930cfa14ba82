// Acceptance suite: one PASS/FAIL line per criterion.

#include "cauchyreg/harness.hpp"
#include "cauchyreg/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace cauchyreg;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s %2d %s: %s [%.2fs of %.0fs]%s\n", pass ? "PASS" : "FAIL", id, name,
              out.detail.c_str(), secs, budget_s, in_time ? "" : " over budget");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Reference errors for the epsilon sweep (N = 2) and the mode sweep, columns t = 1/4, 1/2, 3/4.
constexpr double kTable1[5][3] = {
    {2.6038073148e-01, 3.6697975496e-01, 6.3238102008e-01},
    {3.4823150118e-02, 5.7702326175e-02, 8.6516725190e-02},
    {1.2765356426e-02, 2.1897073639e-02, 3.2397554936e-02},
    {6.5571743949e-03, 1.3001169841e-02, 1.9598409706e-02},
    {6.3529040819e-03, 1.2704207763e-02, 1.9055362258e-02},
};
constexpr double kTable2N4Half = 3.8073451089e-03;
constexpr double kTimes[3] = {0.25, 0.5, 0.75};

// Uniform on [lo, hi) from the library generator.
double uniform(Xoshiro256& rng, double lo, double hi) {
  return lo + (hi - lo) * 0.5 * (rng.uniform_pm1() + 1.0);
}

Outcome kernel_bounds() {
  Xoshiro256 rng(20240101);
  const double T = 1.0, r1 = pi;
  const int samples = 100000;
  int violations = 0;
  for (int k = 0; k < samples; ++k) {
    const int p = 1 + static_cast<int>(uniform(rng, 0.0, 50.0));
    const double eps = std::exp(uniform(rng, std::log(1e-8), std::log(0.5)));
    double s = uniform(rng, 0.0, T), t = uniform(rng, 0.0, T);
    if (s > t) std::swap(s, t);
    const double r = p * pi, l = r * r;
    if (!(cosh_reg(eps, l, t, T) <= std::pow(eps, -t / T))) ++violations;
    if (!(sinh_reg(eps, l, t, T) / r <= std::pow(eps, -t / T) / r1)) ++violations;
    if (!(sinh_reg_diff(eps, l, t, s, T) / r <= std::pow(eps, (s - t) / T) / r1)) ++violations;
  }
  return {violations == 0, std::to_string(samples) + " samples x 3 bounds, " +
                               std::to_string(violations) + " violations"};
}

Outcome sobolev() {
  Xoshiro256 rng(77);
  const int samples = 200000;
  int violations = 0;
  for (int k = 0; k < samples; ++k) {
    const double s = 5.0 - uniform(rng, 0.0, 5.0);  // (0, 5]
    const double X = uniform(rng, 0.0, 100.0);
    // Half the draws uniform on (0,1), half log-uniform down to 1e-300.
    double eps = k % 2 ? uniform(rng, 0.0, 1.0) : std::exp(uniform(rng, std::log(1e-300), 0.0));
    if (!(eps > 0.0 && eps < 1.0)) eps = 0.5;
    if (!sobolev_bound(s, X, eps, 1.0).holds()) ++violations;
  }
  return {violations == 0,
          std::to_string(samples) + " samples, " + std::to_string(violations) + " violations"};
}

Outcome forward_identity() {
  double worst = 0.0;
  for (double a : {1.0, 2.0, -1.0}) {
    const BenchmarkProblem b(a);
    for (int i = 1; i <= 50; ++i) {
      for (int j = 1; j <= 50; ++j) {
        worst = std::max(worst, std::abs(forward_residual(b, i / 51.0, j / 51.0)));
      }
    }
  }
  return {worst < 1e-10, fmt("max |residual| = %.3e (tol 1e-10)", worst)};
}

Outcome table1() {
  const ErrorReport r = run_table(table1_config());
  double worst_ratio = 1.0;
  std::string where;
  bool monotone = true;
  for (int c = 0; c < 3; ++c) {
    for (int k = 0; k < 5; ++k) {
      const double e = r.at(r.config.epsilons[k], 2, kTimes[c]).error;
      const double q = std::max(e / kTable1[k][c], kTable1[k][c] / e);
      if (q > worst_ratio) {
        worst_ratio = q;
        where = "eps=" + fmt("%.0e", r.config.epsilons[k]) + " t=" + fmt("%.2f", kTimes[c]) +
                " got " + fmt("%.4e", e) + " vs " + fmt("%.4e", kTable1[k][c]);
      }
      if (k > 0 && e > r.at(r.config.epsilons[k - 1], 2, kTimes[c]).error) monotone = false;
    }
  }
  double sat_gap = 0.0;
  for (double t : kTimes) {
    const double e4 = r.at(1e-4, 2, t).error, e5 = r.at(1e-5, 2, t).error;
    sat_gap = std::max(sat_gap, std::abs(e4 - e5) / std::max(e4, e5));
  }
  const bool pass = worst_ratio <= 3.0 && monotone && sat_gap <= 0.10;
  return {pass, fmt("worst factor %.3f (limit 3", worst_ratio) + ", " + where +
                    "); monotone " + (monotone ? "yes" : "no") +
                    fmt("; 1e-4/1e-5 gap %.2f%% (limit 10%%)", 100 * sat_gap)};
}

Outcome table2() {
  const ErrorReport r = run_table(table2_config());
  bool strict = true;
  for (double t : kTimes) {
    strict = strict && r.at(1e-4, 3, t).error < r.at(1e-4, 2, t).error &&
             r.at(1e-4, 4, t).error < r.at(1e-4, 3, t).error;
  }
  const double e = r.at(1e-4, 4, 0.5).error;
  const double q = std::max(e / kTable2N4Half, kTable2N4Half / e);
  return {strict && q <= 3.0, std::string("strict decrease in N: ") + (strict ? "yes" : "no") +
                                  fmt("; N=4 t=1/2 error %.4e", e) +
                                  fmt(" vs 3.8073e-03, factor %.3f (limit 3)", q)};
}

Outcome rate(const std::string& problem, double window) {
  ExperimentConfig c = rate_config();
  c.problem = problem;
  const ErrorReport r = run_table(c);
  bool pass = true;
  std::string detail;
  const std::vector<double> ts = window < 0.2 ? std::vector<double>{0.25, 0.5} : std::vector<double>{0.5};
  for (double t : ts) {
    const RateFit f = rate_fit(r, 20, t);
    const bool ok = std::abs(f.slope - (1.0 - t)) <= window;
    pass = pass && ok;
    detail += fmt("t=%.2f", t) + fmt(" slope %.3f", f.slope) + fmt(" vs %.2f", 1.0 - t) +
              fmt(" +- %.2f", window) + (ok ? " ok" : " OUT") + "; ";
  }
  for (double t : {0.25, 0.5, 0.75}) {
    if (std::find(ts.begin(), ts.end(), t) == ts.end()) {
      detail += fmt("(t=%.2f", t) + fmt(" slope %.3f, not scored) ", rate_fit(r, 20, t).slope);
    }
  }
  return {pass, detail};
}

Outcome terminal() {
  double worst_res = 0.0;
  bool below = true;
  for (int k = 1; k <= 8; ++k) {
    const double eps = std::pow(10.0, -k);
    const double t = terminal_time(eps, 1.0);
    worst_res = std::max(worst_res, std::abs((1 - t) * (1 - t) - std::pow(eps, 2 - 2 * t)));
    below = below && (1 - t) < std::sqrt(1.0 / std::log(1.0 / eps));
  }
  return {worst_res < 1e-12 && below, fmt("max residual %.3e (tol 1e-12)", worst_res) +
                                         "; T - t_eps < sqrt(T/ln(1/eps)): " + (below ? "yes" : "no")};
}

Outcome stability() {
  const ExperimentConfig c = table1_config();
  int checked = 0, violations = 0;
  double worst = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    for (std::uint64_t k = 0; k < 20; ++k) {
      for (const StabilityRow& row : stability_check(c, eps, 1000 + 2 * k, 1001 + 2 * k)) {
        ++checked;
        if (!row.holds()) ++violations;
        if (row.rhs > 0) worst = std::max(worst, row.lhs / row.rhs);
      }
    }
  }
  return {violations == 0, std::to_string(checked) + " (eps, pair, t_i) checks, " +
                               std::to_string(violations) + " violations" +
                               fmt(", max lhs/rhs %.3e", worst)};
}

Outcome cross_validation() {
  ExperimentConfig c = table1_config();
  c.modes = {4};
  bool pass = true;
  std::string detail;
  for (double eps : {1e-2, 1e-3}) {
    const CrossValidation x = cross_validate(c, eps);
    pass = pass && x.agrees(5.0);
    detail += fmt("eps=%.0e", eps) + fmt(" |picard-march| %.3e", x.difference) +
              fmt(" <= 5 x %.3e", std::max(x.tol, x.discretization)) +
              (x.agrees(5.0) ? " ok; " : " OUT; ");
  }
  return {pass, detail};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "cauchyreg_acceptance";
  std::filesystem::remove_all(dir);
  auto bytes = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int compared = 0;
  bool same = true;
  for (const auto& [stem, cfg] : {std::pair{std::string("table1"), table1_config()},
                                  std::pair{std::string("table2"), table2_config()},
                                  std::pair{std::string("rate"), rate_config()}}) {
    for (OutputFormat f : {OutputFormat::csv, OutputFormat::json}) {
      const std::string a = bytes(emit(run_table(cfg), f, dir / "a", stem));
      const std::string b = bytes(emit(run_table(cfg), f, dir / "b", stem));
      same = same && !a.empty() && a == b;
      ++compared;
    }
  }
  const ExperimentConfig c = table1_config();
  const std::string s1 = to_csv(stability_check(c, 1e-2, 1, 2));
  const std::string s2 = to_csv(stability_check(c, 1e-2, 1, 2));
  same = same && s1 == s2;
  ++compared;
  std::filesystem::remove_all(dir);
  return {same, std::to_string(compared) + " output pairs compared, " +
                    (same ? "all byte-identical" : "MISMATCH")};
}

}  // namespace

int main() {
  run(1, "kernel bounds", 5, kernel_bounds);
  run(2, "sobolev bound", 2, sobolev);
  run(3, "forward identity", 1, forward_identity);
  run(4, "epsilon sweep reproduction", 30, table1);
  run(5, "mode sweep reproduction", 30, table2);
  run(6, "rate law", 300, [] { return rate(std::string(BenchmarkProblem::lane_emden_name), 0.15); });
  run(7, "terminal time", 1, terminal);
  run(8, "stability in data", 60, stability);
  run(9, "solver cross-validation", 60, cross_validation);
  run(10, "composite source rate", 300, [] { return rate(std::string(BenchmarkProblem::composite_name), 0.2); });
  run(11, "determinism", 120, determinism);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
