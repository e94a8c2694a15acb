#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "vflow/errors.hpp"

namespace vflow::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError("config: '" + key + "' expects a finite number, got '" + raw + "'");
  }
  return value;
}

std::size_t parse_count(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + raw + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + raw + "'");
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"model", {"model", "delta", "c1", "c2", "custom_law", "holder_C", "allow_unvalidated"}},
      {"ic", {"r0", "psi1"}},
      {"grid", {"n_nodes", "grading", "ratio", "r_max"}},
      {"solver", {"method", "tol", "max_iter", "rel_tol", "abs_tol", "h_init", "h_min", "h_max"}},
      {"sweep", {"psi1", "r_span"}},
  };
  return keys;
}

void apply(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const std::string qualified = section.empty() ? key : section + "." + key;
  if (section.empty()) {
    if (key == "r_max") cfg.r_max = parse_real(qualified, value);
    else if (key == "output") cfg.output = trim(value);
    else throw ConfigError("config: unknown top-level key '" + key + "'");
    return;
  }
  const auto it = allowed_keys().find(section);
  if (it == allowed_keys().end()) throw ConfigError("config: unknown section [" + section + "]");
  if (!it->second.count(key)) throw ConfigError("config: unknown key '" + qualified + "'");

  if (section == "model") {
    if (key == "model") cfg.model.law = trim(value);
    else if (key == "delta") cfg.model.delta = parse_real(qualified, value);
    else if (key == "c1") cfg.model.c1 = parse_real(qualified, value);
    else if (key == "c2") cfg.model.c2 = parse_real(qualified, value);
    else if (key == "custom_law") cfg.model.custom_law = trim(value);
    else if (key == "holder_C") cfg.model.holder_C = parse_real(qualified, value);
    else if (key == "allow_unvalidated") cfg.model.allow_unvalidated = parse_bool(qualified, value);
  } else if (section == "ic") {
    if (key == "r0") cfg.r0 = parse_real(qualified, value);
    else cfg.psi1 = parse_real(qualified, value);
  } else if (section == "grid") {
    if (key == "n_nodes") cfg.grid.n_nodes = parse_count(qualified, value);
    else if (key == "grading") cfg.grid.grading = trim(value);
    else if (key == "ratio") cfg.grid.ratio = parse_real(qualified, value);
    else cfg.r_max = parse_real(qualified, value);
  } else if (section == "solver") {
    auto& s = cfg.solver;
    if (key == "method") {
      const std::string m = trim(value);
      if (m == "picard") s.kind = SolverKind::Picard;
      else if (m == "rk") s.kind = SolverKind::RungeKutta;
      else throw ConfigError("config: solver.method must be picard or rk, got '" + m + "'");
    } else if (key == "tol") s.picard.tol = parse_real(qualified, value);
    else if (key == "max_iter") s.picard.max_iter = parse_count(qualified, value);
    else if (key == "rel_tol") s.rk.rel_tol = parse_real(qualified, value);
    else if (key == "abs_tol") s.rk.abs_tol = parse_real(qualified, value);
    else if (key == "h_init") s.rk.h_init = parse_real(qualified, value);
    else if (key == "h_min") s.rk.h_min = parse_real(qualified, value);
    else if (key == "h_max") s.rk.h_max = parse_real(qualified, value);
  } else if (section == "sweep") {
    if (key == "psi1") cfg.sweep.psi1 = parse_real_list(value);
    else cfg.sweep.r_span = parse_real(qualified, value);
  }
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    values.push_back(parse_real("psi1 list", item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig cfg;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      apply(cfg, "", name, node.data());
    } else {
      for (const auto& [key, leaf] : node) apply(cfg, name, key, leaf.data());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

void validate(const RunConfig& c) {
  if (c.r0 < 1.0) throw ConfigError("config: r0 must be >= 1");
  if (c.psi1 == 0.0) throw ConfigError("config: psi1 must be nonzero");
  if (!(c.effective_r_max() > c.r0)) throw ConfigError("config: r_max must exceed r0");
  if (!(c.model.delta > 0.0)) throw ConfigError("config: model.delta must be positive");
  if (c.grid.n_nodes < 3) throw ConfigError("config: grid.n_nodes must be >= 3");
  if (c.grid.grading != "geometric" && c.grid.grading != "uniform") {
    throw ConfigError("config: grid.grading must be geometric or uniform");
  }
  if (c.grid.ratio && !(*c.grid.ratio > 0.0 && *c.grid.ratio < 1.0)) {
    throw ConfigError("config: grid.ratio must lie in (0, 1)");
  }
  if (!(c.solver.picard.tol > 0.0)) throw ConfigError("config: solver.tol must be positive");
  if (c.solver.picard.max_iter < 1) throw ConfigError("config: solver.max_iter must be >= 1");
  try {
    c.solver.rk.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.sweep.r_span && !(*c.sweep.r_span > 0.0)) throw ConfigError("config: sweep.r_span must be positive");
  for (double v : c.sweep.psi1) {
    if (v == 0.0) throw ConfigError("config: sweep.psi1 values must be nonzero");
  }
}

VorticityModel build_model(const ModelSection& m) {
  try {
    if (m.law == "classical") return VorticityModel::classical(m.delta);
    if (m.law == "oscillatory") {
      const double c1 = m.c1.value_or(std::sin(m.c2 / 2.0));
      return VorticityModel::oscillatory(c1, m.c2, m.delta);
    }
    if (m.law == "custom") {
      VorticityFn fn;
      if (m.custom_law == "zero") {
        fn = [](double) { return 0.0; };
      } else if (m.custom_law == "linear") {
        fn = [](double psi) { return -psi; };
      } else if (m.custom_law == "reversed") {
        fn = [](double psi) { return psi == 0.0 ? 0.0 : std::copysign(std::sqrt(std::abs(psi)), psi) - psi; };
      } else {
        throw ConfigError("config: model.custom_law must be zero, linear or reversed");
      }
      return VorticityModel::custom(std::move(fn), m.delta, m.holder_C, "custom:" + m.custom_law);
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("config: model.model must be classical, oscillatory or custom, got '" + m.law + "'");
}

RadialGrid build_grid(const RunConfig& c) {
  const double r_max = c.effective_r_max();
  try {
    if (c.grid.grading == "uniform") return RadialGrid::uniform(c.r0, r_max, c.grid.n_nodes);
    if (c.grid.ratio) return RadialGrid::geometric(c.r0, r_max, c.grid.n_nodes, *c.grid.ratio);
    return RadialGrid::graded(c.r0, r_max, c.grid.n_nodes);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace vflow::cli
