#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "mptd/csv.hpp"
#include "mptd/error.hpp"
#include "mptd/saddle.hpp"

namespace mptd::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTunedFile = "tuned.json";

fs::path out_path(const CliConfig& cfg, const std::string& file) {
  return fs::path(cfg.out_dir) / file;
}

void ensure_out_dir(const CliConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec || !fs::is_directory(cfg.out_dir)) {
    throw UsageError("cannot create output directory '" + cfg.out_dir + "'");
  }
}

std::string human(double x) {
  if (!std::isfinite(x)) return format_double(x);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

json read_tuned(const CliConfig& cfg) {
  const fs::path path = out_path(cfg, kTunedFile);
  if (!fs::exists(path)) return json::object();
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(path.string() + " is not valid JSON: " + e.what());
  }
}

std::optional<StepSizes> tuned_entry(const json& tuned, const std::string& bench,
                                     Algorithm alg, double reg) {
  const std::string name = to_string(alg);
  if (!tuned.contains(bench) || !tuned.at(bench).contains(name)) return std::nullopt;
  const json& e = tuned.at(bench).at(name);
  return step_sizes_for(alg, e.at("alpha").get<double>(), e.at("beta").get<double>(), reg);
}

// Rank used to keep merged CSVs in a canonical order.
int benchmark_rank(const std::string& name) {
  const auto& ids = all_benchmarks();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (to_string(ids[i]) == name) return static_cast<int>(i);
  }
  return static_cast<int>(ids.size());
}

int algorithm_rank(const std::string& name) {
  const auto& algs = all_algorithms();
  for (std::size_t i = 0; i < algs.size(); ++i) {
    if (to_string(algs[i]) == name) return static_cast<int>(i);
  }
  return static_cast<int>(algs.size());
}

using CellKey = std::tuple<int, std::string, int, std::string>;

CellKey cell_key(const std::string& bench, const std::string& alg) {
  return {benchmark_rank(bench), bench, algorithm_rank(alg), alg};
}

// Replaces every (benchmark, algorithm) block of `path` that `fresh` also
// covers, keeps the rest, and rewrites the file in canonical order.
void merge_csv(const fs::path& path, const CsvTable& fresh) {
  std::map<CellKey, std::vector<std::vector<std::string>>> blocks;
  auto add = [&](const CsvTable& t, bool overwrite) {
    const std::size_t b = t.column("benchmark");
    const std::size_t a = t.column("algorithm");
    std::map<CellKey, bool> cleared;
    for (const auto& row : t.rows) {
      const CellKey key = cell_key(row[b], row[a]);
      if (overwrite && !cleared[key]) {
        blocks[key].clear();
        cleared[key] = true;
      }
      blocks[key].push_back(row);
    }
  };
  if (fs::exists(path)) {
    CsvTable old = read_csv_file(path.string());
    if (old.header == fresh.header) add(old, false);
  }
  add(fresh, true);
  CsvTable merged;
  merged.header = fresh.header;
  for (auto& [key, rows] : blocks) {
    for (auto& row : rows) merged.rows.push_back(std::move(row));
  }
  write_csv_file(path.string(), merged);
}

}  // namespace

void cmd_analyze(const CliConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  const json tuned = read_tuned(cfg);
  const std::vector<double> grid = default_contraction_grid();

  CsvTable table;
  table.header = {"name",           "metric",     "lambda_min_B", "kappa_B",
                  "quad_factor",    "op_norm_K",  "hurwitz_margin", "alpha_best",
                  "q_best",         "q_at_tuned", "condition_verdict"};
  for (const std::string& entry : cfg.benchmarks) {
    const NamedEnv ne = load_env(entry);
    const MeanMatrices mm = build_mean_matrices(ne.env);
    const KeyMatrixReport kc = key_matrix(mm, Metric::C);
    const KeyMatrixReport kh = key_matrix(mm, Metric::H);
    const KeyConditionVerdict verdict = check_key_condition(kc, kh);
    const std::string verdict_text =
        verdict.singular ? "singular" : (verdict.holds ? "holds" : "fails");

    RateReport rates[2];
    for (Metric m : {Metric::C, Metric::H}) {
      const Algorithm mp = m == Metric::C ? Algorithm::gtd2_mp : Algorithm::sthtd_mp;
      std::optional<double> alpha;
      if (auto ss = tuned_entry(tuned, ne.name, mp, cfg.experiment.reg)) alpha = ss->alpha;
      const RateReport rr = rate_report(mm, m, grid, alpha);
      rates[m == Metric::C ? 0 : 1] = rr;
      const KeyMatrixReport& kr = m == Metric::C ? kc : kh;
      table.rows.push_back({ne.name, to_string(m), format_double(kr.lambda_min),
                            format_double(kr.condition_number),
                            format_double(kr.quadratic_factor),
                            format_double(rr.operator_norm),
                            format_double(rr.hurwitz_margin), format_double(rr.alpha_best),
                            format_double(rr.q_best), format_double(rr.q), verdict_text});
    }

    std::string conclusion;
    if (verdict.singular) {
      conclusion = "singular; inconclusive";
    } else if (rates[1].q_best < rates[0].q_best) {
      conclusion = "STHTD-MP faster";
    } else {
      conclusion = "GTD2-MP faster";
    }
    log << ne.name << ": " << conclusion << " (q_C=" << human(rates[0].q_best)
        << ", q_H=" << human(rates[1].q_best) << ")\n";
  }
  write_csv_file(out_path(cfg, "analysis.csv").string(), table);
}

void cmd_run(const CliConfig& cfg, std::ostream& log) {
  if (cfg.benchmarks.size() != 1 || cfg.algorithms.size() != 1) {
    throw UsageError("run needs exactly one --benchmark and one --algorithm");
  }
  if (!cfg.alpha) throw UsageError("run needs --alpha");
  ensure_out_dir(cfg);
  const NamedEnv ne = load_env(cfg.benchmarks.front());
  const Algorithm alg = cfg.algorithms.front();
  const StepSizes ss = step_sizes_for(alg, *cfg.alpha, cfg.beta.value_or(*cfg.alpha),
                                      cfg.experiment.reg);
  const RunOptions options{cfg.experiment.divergence_bound, cfg.experiment.record_stride};
  const RunResult run = run_trajectory(ne.env, EvaluationTarget::for_env(ne.env), alg, ss,
                                       cfg.experiment.horizon, cfg.seed, options);
  const std::vector<int> steps =
      recorded_steps(cfg.experiment.horizon, cfg.experiment.record_stride);

  CsvTable table;
  table.header = {"step", "rmsve"};
  for (std::size_t k = 0; k < steps.size(); ++k) {
    table.rows.push_back({std::to_string(steps[k]), format_double(run.rmsve_series[k])});
  }
  const std::string file = "run_" + ne.name + "_" + to_string(alg) + "_seed" +
                           std::to_string(cfg.seed) + ".csv";
  write_csv_file(out_path(cfg, file).string(), table);
  const RunSummary s = summarize(run);
  log << ne.name << "/" << to_string(alg) << " seed " << cfg.seed << ": auc "
      << human(s.auc) << ", final " << human(s.final)
      << (s.diverged ? " (diverged)" : "") << "\n";
}

void cmd_tune(const CliConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  json tuned = read_tuned(cfg);
  for (const std::string& entry : cfg.benchmarks) {
    const NamedEnv ne = load_env(entry);
    for (Algorithm alg : cfg.algorithms) {
      ExperimentConfig ex = cfg.experiment;
      ex.algorithm = alg;
      const TuneResult tr = tune(ne.env, ex);
      tuned[ne.name][to_string(alg)] = {{"alpha", tr.best.alpha},
                                        {"beta", tr.best.beta},
                                        {"objective", format_double(tr.objective)},
                                        {"warning", tr.all_non_finite}};
      log << ne.name << "/" << to_string(alg) << ": alpha " << human(tr.best.alpha);
      if (uses_beta(alg)) log << ", beta " << human(tr.best.beta);
      log << ", objective " << human(tr.objective);
      if (tr.all_non_finite) log << " (warning: every grid point diverged)";
      log << "\n";
    }
  }
  std::ofstream out(out_path(cfg, kTunedFile), std::ios::binary | std::ios::trunc);
  out << tuned.dump(2) << "\n";
  if (!out) throw UsageError("cannot write tuned.json");
}

void cmd_evaluate(const CliConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  const json tuned = read_tuned(cfg);
  CsvTable summary;
  summary.header = {"benchmark", "algorithm",  "alpha",      "beta",      "auc_mean",
                    "auc_std",   "final_mean", "final_std",  "n_diverged"};
  CsvTable curves;
  curves.header = {"benchmark", "algorithm", "step", "rmsve_mean", "rmsve_std"};

  for (const std::string& entry : cfg.benchmarks) {
    const NamedEnv ne = load_env(entry);
    for (Algorithm alg : cfg.algorithms) {
      StepSizes ss;
      if (cfg.alpha) {
        ss = step_sizes_for(alg, *cfg.alpha, cfg.beta.value_or(*cfg.alpha),
                            cfg.experiment.reg);
      } else if (auto t = tuned_entry(tuned, ne.name, alg, cfg.experiment.reg)) {
        ss = *t;
      } else {
        throw UsageError("no step sizes for " + ne.name + "/" + to_string(alg) +
                         ": run tune first or pass --alpha");
      }
      ExperimentConfig ex = cfg.experiment;
      ex.algorithm = alg;
      const EvaluationResult er = evaluate(ne.env, ex, ss);
      const std::string an = to_string(alg);
      summary.rows.push_back({ne.name, an, format_double(ss.alpha), format_double(ss.beta),
                              format_double(er.auc.mean), format_double(er.auc.std),
                              format_double(er.final.mean), format_double(er.final.std),
                              std::to_string(er.auc.n_diverged)});
      for (std::size_t k = 0; k < er.steps.size(); ++k) {
        curves.rows.push_back({ne.name, an, std::to_string(er.steps[k]),
                               format_double(er.curve_mean[k]),
                               format_double(er.curve_std[k])});
      }
      log << ne.name << "/" << an << ": auc " << human(er.auc.mean) << " +- "
          << human(er.auc.std) << ", final " << human(er.final.mean) << " +- "
          << human(er.final.std) << ", diverged " << er.auc.n_diverged << "/"
          << er.auc.n << "\n";
    }
  }
  merge_csv(out_path(cfg, "summary.csv"), summary);
  merge_csv(out_path(cfg, "curves.csv"), curves);
}

void cmd_sweep(const CliConfig& cfg, std::ostream& log) {
  ensure_out_dir(cfg);
  CsvTable table;
  table.header = {"benchmark", "algorithm", "alpha", "auc_mean", "auc_std", "n_diverged"};
  for (const std::string& entry : cfg.benchmarks) {
    const NamedEnv ne = load_env(entry);
    for (Algorithm alg : cfg.algorithms) {
      SweepConfig sw = cfg.sweep;
      if (cfg.alpha) sw.alpha_grid = {*cfg.alpha};
      if (cfg.beta) sw.beta = *cfg.beta;
      for (const SweepCell& cell : robustness_sweep(ne.env, alg, sw)) {
        table.rows.push_back({ne.name, to_string(alg), format_double(cell.alpha),
                              format_double(cell.auc.mean), format_double(cell.auc.std),
                              std::to_string(cell.auc.n_diverged)});
        log << ne.name << "/" << to_string(alg) << " alpha " << human(cell.alpha)
            << ": auc " << human(cell.auc.mean) << " +- " << human(cell.auc.std)
            << ", diverged " << cell.auc.n_diverged << "/" << cell.auc.n << "\n";
      }
    }
  }
  merge_csv(out_path(cfg, "sweep.csv"), table);
}

void cmd_report(const CliConfig& cfg, std::ostream& log) {
  const fs::path path = out_path(cfg, "summary.csv");
  if (!fs::exists(path)) throw UsageError("no summary.csv in '" + cfg.out_dir + "'");
  const CsvTable t = read_csv_file(path.string());
  if (t.rows.empty()) throw UsageError(path.string() + " has no rows");

  const std::size_t cb = t.column("benchmark");
  const std::size_t ca = t.column("algorithm");
  std::vector<std::string> benches;
  std::vector<std::string> algs;
  for (const auto& row : t.rows) {
    if (std::find(benches.begin(), benches.end(), row[cb]) == benches.end()) {
      benches.push_back(row[cb]);
    }
    if (std::find(algs.begin(), algs.end(), row[ca]) == algs.end()) algs.push_back(row[ca]);
  }
  auto find_row = [&](const std::string& b, const std::string& a) -> const std::vector<std::string>* {
    for (const auto& row : t.rows) {
      if (row[cb] == b && row[ca] == a) return &row;
    }
    return nullptr;
  };
  // Best per environment is always the argmin of auc_mean; NaN never wins.
  std::map<std::string, std::string> best;
  const std::size_t c_auc = t.column("auc_mean");
  for (const auto& b : benches) {
    double best_value = std::numeric_limits<double>::quiet_NaN();
    for (const auto& a : algs) {
      const auto* row = find_row(b, a);
      if (!row) continue;
      const double v = parse_double((*row)[c_auc]);
      if (std::isnan(v)) continue;
      if (std::isnan(best_value) || v < best_value) {
        best_value = v;
        best[b] = a;
      }
    }
  }

  std::ostringstream md;
  auto table = [&](const std::string& title, const std::string& mean_col,
                   const std::string& std_col) {
    const std::size_t cm = t.column(mean_col);
    const std::size_t cs = t.column(std_col);
    md << "### " << title << "\n\n| Method |";
    for (const auto& b : benches) md << " " << b << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < benches.size(); ++i) md << "---|";
    md << "\n";
    for (const auto& a : algs) {
      md << "| " << a << " |";
      for (const auto& b : benches) {
        const auto* row = find_row(b, a);
        if (!row) {
          md << " - |";
          continue;
        }
        std::string cell = human(parse_double((*row)[cm])) + " ± " +
                           human(parse_double((*row)[cs]));
        if (best.count(b) && best[b] == a) cell = "**" + cell + "**";
        md << " " << cell << " |";
      }
      md << "\n";
    }
    md << "\n";
  };
  table("Steady-state AUC (mean ± std)", "auc_mean", "auc_std");
  table("Final RMSVE (mean ± std)", "final_mean", "final_std");

  std::ofstream out(out_path(cfg, "report.md"), std::ios::binary | std::ios::trunc);
  out << md.str();
  if (!out) throw UsageError("cannot write report.md");
  log << md.str();
}

}  // namespace mptd::cli
