#include "vflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

namespace vflow {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "r,psi,u\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out << format_real(traj.grid.node(i)) << ',' << format_real(traj.psi[i]) << ','
        << format_real(traj.u[i]) << '\n';
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  return out.str();
}

std::string picard_diagnostics_text(const PicardDiagnostics& diag) {
  std::ostringstream out;
  out << "iterations = " << diag.iterations << '\n'
      << "converged = " << (diag.converged ? "true" : "false") << '\n';
  for (std::size_t k = 0; k < diag.weighted_deltas.size(); ++k) {
    out << "delta_" << (k + 1) << " = " << format_real(diag.weighted_deltas[k]) << '\n';
  }
  return out.str();
}

std::string rk_log_text(const RkLog& log) {
  std::ostringstream out;
  out << "accepted_steps = " << log.accepted << '\n'
      << "rejected_steps = " << log.rejected << '\n'
      << "final_step = " << format_real(log.final_step) << '\n';
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vflow
