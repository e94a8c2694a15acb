#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vflow/grid.hpp"
#include "vflow/picard.hpp"
#include "vflow/rk.hpp"
#include "vflow/vorticity.hpp"

namespace vflow::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSection {
  std::string law = "classical";  // classical | oscillatory | custom
  double delta = 0.25;
  std::optional<double> c1;  // defaults to sin(c2 / 2)
  double c2 = 0.02;
  std::string custom_law = "zero";  // zero | linear | reversed
  std::optional<double> holder_C;
  bool allow_unvalidated = false;
};

struct GridSection {
  std::size_t n_nodes = 2048;
  std::string grading = "geometric";  // geometric | uniform
  std::optional<double> ratio;        // geometric only; default from RadialGrid::kDefaultSpread
};

enum class SolverKind { Picard, RungeKutta };

struct SolverSection {
  SolverKind kind = SolverKind::Picard;
  PicardOptions picard{};
  StepControl rk{};
};

struct SweepSection {
  std::vector<double> psi1;
  std::optional<double> r_span;  // defaults to r_max - r0
};

/// Flat `key = value` config with [model], [ic], [grid], [solver] and [sweep]
/// sections; r_max and output may sit at the top level.
struct RunConfig {
  ModelSection model;
  double r0 = 1.0;
  double psi1 = 1.0;
  GridSection grid;
  SolverSection solver;
  std::optional<double> r_max;  // defaults to r0 + 0.5
  std::string output = "out";
  SweepSection sweep;

  double effective_r_max() const { return r_max.value_or(r0 + 0.5); }
};

/// Strict parse: unknown sections or keys and malformed numbers throw ConfigError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Checks the numeric constraints of the parsed config (r0 >= 1, psi1 != 0, ...).
void validate(const RunConfig& config);

/// Throws ConfigError for inconsistent model constants.
VorticityModel build_model(const ModelSection& model);

RadialGrid build_grid(const RunConfig& config);

std::vector<double> parse_real_list(const std::string& text);

}  // namespace vflow::cli
