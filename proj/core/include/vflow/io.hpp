#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vflow/picard.hpp"
#include "vflow/rk.hpp"
#include "vflow/trajectory.hpp"

namespace vflow {

/// 17 significant digits, round-trip safe.
std::string format_real(double value);

/// Header `r,psi,u`, one row per node.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
std::string trajectory_csv(const Trajectory& traj);

/// `iterations = N`, `converged = true|false`, then `delta_k = value` for k = 1..N.
std::string picard_diagnostics_text(const PicardDiagnostics& diag);

/// accepted/rejected step counts and the final step size.
std::string rk_log_text(const RkLog& log);

/// Writes to a sibling temporary file and renames it over path, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vflow
