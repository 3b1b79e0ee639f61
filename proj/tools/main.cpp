#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "mptd/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace mptd::cli;

  CLI::App app{"Off-policy TD prediction benchmarks and saddle-point analysis"};
  app.require_subcommand(1);

  FlagOverrides flags;
  auto add_flags = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "JSON config file");
    sub->add_option("--benchmark", flags.benchmarks, "Benchmark ids or env .json files, comma separated");
    sub->add_option("--algorithm", flags.algorithms, "Algorithm ids, comma separated");
    sub->add_option("--seed", flags.seed, "Seed for run");
    sub->add_option("--alpha", flags.alpha, "Primary step size");
    sub->add_option("--beta", flags.beta, "Auxiliary step size");
    sub->add_option("--horizon", flags.horizon, "Steps per trajectory");
    sub->add_option("--out", flags.out_dir, "Output directory");
    sub->add_option("--jobs", flags.jobs, "Worker threads");
  };

  const std::pair<const char*, const char*> commands[] = {
      {"analyze", "Exact spectral analysis; writes analysis.csv"},
      {"run", "One trajectory; writes run_<benchmark>_<algorithm>_seed<n>.csv"},
      {"tune", "Grid search on tuning seeds; writes tuned.json"},
      {"evaluate", "Evaluation seeds at tuned step sizes; writes summary.csv and curves.csv"},
      {"sweep", "Step-size robustness sweep; writes sweep.csv"},
      {"report", "Markdown tables from summary.csv"},
  };
  for (const auto& [name, help] : commands) add_flags(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    const CliConfig cfg = load_config(command, flags);
    if (command == "analyze") cmd_analyze(cfg, std::cout);
    else if (command == "run") cmd_run(cfg, std::cout);
    else if (command == "tune") cmd_tune(cfg, std::cout);
    else if (command == "evaluate") cmd_evaluate(cfg, std::cout);
    else if (command == "sweep") cmd_sweep(cfg, std::cout);
    else cmd_report(cfg, std::cout);
  } catch (const mptd::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
