#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace vflow::cli {

enum ExitStatus : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kSolverError = 3,
};

int cmd_integrate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_validate_model(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line (args excludes the program name). Subcommands:
/// integrate, verify, sweep, validate-model.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vflow::cli
