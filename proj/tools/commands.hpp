#pragma once

#include <iosfwd>

#include "config.hpp"

namespace mptd::cli {

// Each command writes its artifacts under cfg.out_dir and a short
// human-readable log to `log`.
void cmd_analyze(const CliConfig& cfg, std::ostream& log);
void cmd_run(const CliConfig& cfg, std::ostream& log);
void cmd_tune(const CliConfig& cfg, std::ostream& log);
void cmd_evaluate(const CliConfig& cfg, std::ostream& log);
void cmd_sweep(const CliConfig& cfg, std::ostream& log);
void cmd_report(const CliConfig& cfg, std::ostream& log);

}  // namespace mptd::cli
