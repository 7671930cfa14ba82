#include "cauchyreg/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace cauchyreg;

namespace {

struct Flags {
  std::vector<double> epsilons;
  std::vector<int> modes;
  int time_steps = 0;
  int space_points = 0;
  std::uint64_t seed = 0;
  std::uint64_t seed2 = 0;
  std::string noise;
  std::string solver;
  std::string problem;
  double a = 1.0;
  std::string out;
  std::string format = "csv";
};

void fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  std::exit(code);
}

void deliver(const std::string& text, const Flags& flags, const std::string& stem) {
  if (flags.out.empty()) {
    std::cout << text;
    return;
  }
  const auto path = write_text(text, std::filesystem::path(flags.out) / (stem + "." + flags.format));
  std::cout << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Cauchy problem for u_tt = Au + f(t,u): experiments and reports"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; keys are the long flag names");

  Flags f;
  std::vector<CLI::Option*> opts;
  auto* o_eps = app.add_option("--epsilon", f.epsilons, "noise level / regularization sweep")
                    ->delimiter(',');
  auto* o_modes = app.add_option("--modes", f.modes, "retained modes N (a list for table2)")
                      ->delimiter(',');
  auto* o_M = app.add_option("--time-steps", f.time_steps, "time steps M")->check(CLI::PositiveNumber);
  auto* o_K = app.add_option("--space-points", f.space_points,
                             "space intervals K; noise is drawn once per node x_j = j/K, so "
                             "changing K changes which random numbers land where")
                  ->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", f.seed, "noise seed (default 42)");
  auto* o_seed2 = app.add_option("--seed2", f.seed2, "second seed for stability (default seed+1)");
  auto* o_noise = app.add_option("--noise", f.noise, "treatment of g: relative, additive or off")
                      ->check(CLI::IsMember({"additive", "relative", "off"}));
  auto* o_solver = app.add_option("--solver", f.solver, "march or picard")
                       ->check(CLI::IsMember({"march", "picard"}));
  auto* o_problem = app.add_option("--problem", f.problem,
                                   "benchmark-lane-emden or benchmark-composite")
                        ->check(CLI::IsMember({std::string(BenchmarkProblem::lane_emden_name),
                                               std::string(BenchmarkProblem::composite_name)}));
  auto* o_a = app.add_option("--a", f.a, "benchmark amplitude a");
  app.add_option("--out", f.out, "output directory (stdout if omitted)");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* table1 = app.add_subcommand("table1", "epsilon sweep at N = 2")->fallthrough();
  auto* table2 = app.add_subcommand("table2", "mode sweep N = 2, 3, 4 at epsilon = 1e-4")->fallthrough();
  auto* rate = app.add_subcommand("rate", "noise-free epsilon sweep and log-log slope fit")->fallthrough();
  auto* stability = app.add_subcommand("stability", "continuous dependence on data, two seeds")->fallthrough();
  auto* solve = app.add_subcommand("solve", "one run; emits x, t, v, u_ex and the terminal time")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("usage", e.what(), 2);
  }

  try {
    ExperimentConfig config;
    if (*table2) {
      config = table2_config();
    } else if (*rate) {
      config = rate_config();
    } else if (*stability) {
      config.epsilons = {1e-1, 1e-2, 1e-3};
    } else if (*solve) {
      config.epsilons = {1e-4};
    }
    if (o_eps->count()) config.epsilons = f.epsilons;
    if (o_modes->count()) config.modes = f.modes;
    if (o_M->count()) config.time_steps_M = f.time_steps;
    if (o_K->count()) config.space_points_K = f.space_points;
    if (o_seed->count()) config.seed = f.seed;
    if (o_noise->count()) config.noise = parse_noise_kind(f.noise);
    if (o_solver->count()) config.solver = parse_solver_kind(f.solver);
    if (o_problem->count()) config.problem = f.problem;
    if (o_a->count()) config.a = f.a;
    config.validate();
    const OutputFormat format = parse_output_format(f.format);

    if (*table1 || *table2 || *rate) {
      const ErrorReport report = run_table(config);
      const std::string stem = *table1 ? "table1" : *table2 ? "table2" : "rate";
      deliver(format == OutputFormat::csv ? to_csv(report) : to_json(report), f, stem);
    } else if (*stability) {
      const std::uint64_t seed2 = o_seed2->count() ? f.seed2 : config.seed + 1;
      std::vector<StabilityRow> rows;
      for (double eps : config.epsilons) {
        const auto part = stability_check(config, eps, config.seed, seed2);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      deliver(format == OutputFormat::csv ? to_csv(rows) : to_json(rows, config), f, "stability");
      for (const StabilityRow& r : rows) {
        if (!r.holds()) fail("stability", "lhs > rhs at epsilon " + format_real(r.epsilon) +
                                              ", t " + format_real(r.t), 3);
      }
    } else if (*solve) {
      const double eps = config.epsilons.front();
      const BenchmarkProblem prob = config.benchmark();
      const RegularizedSolution sol = solve_benchmark(config, eps, config.modes.front(), config.seed);
      const double t_eps = terminal_time(eps, config.horizon_T);
      if (format == OutputFormat::csv) {
        deliver(solution_grid_csv(sol, prob), f, "solve");
        std::cerr << "t_eps=" << format_real(t_eps) << '\n';
      } else {
        deliver(solution_grid_json(sol, prob, config, t_eps), f, "solve");
      }
    }
  } catch (const SolverError& e) {
    fail("solver", e.what(), 1);
  } catch (const RateFitError& e) {
    fail("rate_fit", e.what(), 1);
  } catch (const std::invalid_argument& e) {
    fail("config", e.what(), 2);
  } catch (const std::exception& e) {
    fail("runtime", e.what(), 1);
  }
  return 0;
}
