#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mptd/benchmarks.hpp"
#include "mptd/env_json.hpp"
#include "mptd/error.hpp"

namespace mptd::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + key + "': " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw UsageError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void apply_json(CliConfig& cfg, const json& j, std::optional<int>& sweep_horizon) {
  check_keys(j,
             {"benchmarks", "algorithms", "horizon", "n_tuning_seeds", "n_eval_seeds",
              "record_stride", "jobs", "tuning_seed_base", "eval_seed_base", "seed",
              "alpha_grid", "beta_grid", "reg", "divergence_bound", "alpha", "beta",
              "out", "sweep"},
             "config");
  ExperimentConfig& ex = cfg.experiment;
  if (j.contains("benchmarks")) cfg.benchmarks = get_as<std::vector<std::string>>(j, "benchmarks");
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& name : get_as<std::vector<std::string>>(j, "algorithms")) {
      cfg.algorithms.push_back(parse_algorithm(name));
    }
  }
  if (j.contains("horizon")) ex.horizon = get_as<int>(j, "horizon");
  if (j.contains("n_tuning_seeds")) ex.n_tuning_seeds = get_as<int>(j, "n_tuning_seeds");
  if (j.contains("n_eval_seeds")) ex.n_eval_seeds = get_as<int>(j, "n_eval_seeds");
  if (j.contains("record_stride")) ex.record_stride = get_as<int>(j, "record_stride");
  if (j.contains("jobs")) ex.jobs = get_as<int>(j, "jobs");
  if (j.contains("tuning_seed_base")) ex.tuning_seed_base = get_as<std::uint64_t>(j, "tuning_seed_base");
  if (j.contains("eval_seed_base")) ex.eval_seed_base = get_as<std::uint64_t>(j, "eval_seed_base");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("alpha_grid")) ex.alpha_grid = get_as<std::vector<double>>(j, "alpha_grid");
  if (j.contains("beta_grid")) ex.beta_grid = get_as<std::vector<double>>(j, "beta_grid");
  if (j.contains("reg")) ex.reg = get_as<double>(j, "reg");
  if (j.contains("divergence_bound")) ex.divergence_bound = get_as<double>(j, "divergence_bound");
  if (j.contains("alpha")) cfg.alpha = get_as<double>(j, "alpha");
  if (j.contains("beta")) cfg.beta = get_as<double>(j, "beta");
  if (j.contains("out")) cfg.out_dir = get_as<std::string>(j, "out");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    check_keys(s, {"alpha_grid", "beta", "reg", "n_seeds", "seed_base", "horizon"}, "sweep");
    SweepConfig& sw = cfg.sweep;
    if (s.contains("alpha_grid")) sw.alpha_grid = get_as<std::vector<double>>(s, "alpha_grid");
    if (s.contains("beta")) sw.beta = get_as<double>(s, "beta");
    if (s.contains("reg")) sw.reg = get_as<double>(s, "reg");
    if (s.contains("n_seeds")) sw.n_seeds = get_as<int>(s, "n_seeds");
    if (s.contains("seed_base")) sw.seed_base = get_as<std::uint64_t>(s, "seed_base");
    if (s.contains("horizon")) sweep_horizon = get_as<int>(s, "horizon");
  }
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

CliConfig load_config(const std::string& command, const FlagOverrides& flags) {
  CliConfig cfg;
  cfg.command = command;
  for (BenchmarkId id : all_benchmarks()) cfg.benchmarks.push_back(to_string(id));
  cfg.algorithms = all_algorithms();

  std::optional<int> sweep_horizon;
  if (flags.config_path) {
    json j;
    try {
      j = json::parse(read_file(*flags.config_path));
    } catch (const json::parse_error& e) {
      throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    apply_json(cfg, j, sweep_horizon);
  }

  if (flags.benchmarks) cfg.benchmarks = split_list(*flags.benchmarks);
  if (flags.algorithms) {
    cfg.algorithms.clear();
    for (const auto& name : split_list(*flags.algorithms)) {
      cfg.algorithms.push_back(parse_algorithm(name));
    }
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.alpha) cfg.alpha = *flags.alpha;
  if (flags.beta) cfg.beta = *flags.beta;
  if (flags.horizon) {
    cfg.experiment.horizon = *flags.horizon;
    sweep_horizon = *flags.horizon;
  }
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.jobs) cfg.experiment.jobs = *flags.jobs;

  cfg.sweep.horizon = sweep_horizon.value_or(cfg.experiment.horizon);
  cfg.sweep.jobs = cfg.experiment.jobs;
  cfg.sweep.divergence_bound = cfg.experiment.divergence_bound;

  for (const auto& b : cfg.benchmarks) {
    if (!ends_with(b, ".json")) parse_benchmark(b);
  }
  if (cfg.experiment.horizon < 0) throw UsageError("horizon must be non-negative");
  if (cfg.experiment.jobs <= 0) throw UsageError("jobs must be positive");
  return cfg;
}

NamedEnv load_env(const std::string& entry) {
  if (ends_with(entry, ".json")) {
    BenchmarkEnv env = env_from_json(read_file(entry));
    std::string name = env.name;
    return {std::move(name), std::move(env)};
  }
  return {entry, make_benchmark(entry)};
}

}  // namespace mptd::cli
