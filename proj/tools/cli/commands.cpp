#include "commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "svg_plot.hpp"
#include "vflow/errors.hpp"
#include "vflow/io.hpp"
#include "vflow/picard.hpp"
#include "vflow/rk.hpp"
#include "vflow/verify.hpp"

namespace vflow::cli {

namespace fs = std::filesystem;

namespace {

void prepare_output(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.output, ec);
  if (ec) throw ConfigError("cannot create output directory '" + config.output + "': " + ec.message());
}

fs::path out_path(const RunConfig& config, const char* name) { return fs::path(config.output) / name; }

// Runs body, mapping exceptions onto the exit-status contract.
template <class Body>
int guarded(const char* command, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << command << ": " << e.what() << '\n';
    return kConfigError;
  } catch (const NonConvergenceError& e) {
    err << command << ": solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const StepSizeUnderflowError& e) {
    err << command << ": solver error: " << e.what() << '\n';
    return kSolverError;
  } catch (const std::exception& e) {
    err << command << ": solver error: " << e.what() << '\n';
    return kSolverError;
  }
}

PicardOptions picard_options(const RunConfig& c) {
  PicardOptions o = c.solver.picard;
  o.allow_unvalidated = c.model.allow_unvalidated;
  return o;
}

}  // namespace

int cmd_integrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("integrate", err, [&] {
    validate(config);
    const VorticityModel model = build_model(config.model);
    const RadialGrid grid = build_grid(config);
    const double r_max = config.effective_r_max();

    std::string log_name;
    std::string log_text;
    auto solve = [&]() -> Trajectory {
      if (config.solver.kind == SolverKind::Picard) {
        PicardResult res = picard_solve(model, config.r0, config.psi1, grid, picard_options(config));
        log_name = "diagnostics.txt";
        log_text = picard_diagnostics_text(res.diagnostics);
        return std::move(res.trajectory);
      }
      RkResult res = rk_solve(model, config.r0, config.psi1, r_max, config.solver.rk, grid,
                              config.model.allow_unvalidated);
      log_name = "run_log.txt";
      log_text = rk_log_text(res.log);
      return std::move(res.trajectory);
    };
    const Trajectory traj = solve();

    const std::string csv = trajectory_csv(traj);
    prepare_output(config);
    write_file_atomic(out_path(config, "traj.csv"), csv);
    write_file_atomic(out_path(config, log_name.c_str()), log_text);
    out << "method = " << to_string(traj.method) << '\n'
        << "window_end = " << format_real(traj.window_end) << '\n'
        << "psi_at_r_max = " << format_real(traj.psi.back()) << '\n';
    return kOk;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("verify", err, [&] {
    validate(config);
    const VorticityModel model = build_model(config.model);
    const RadialGrid grid = build_grid(config);

    VerifyOptions options;
    options.picard = picard_options(config);
    options.picard.keep_iterates = true;
    options.rk = config.solver.rk;
    const UniquenessReport report = verify_uniqueness(model, config.r0, config.psi1, grid, options);

    const std::string report_text = to_key_value(report);
    prepare_output(config);
    write_file_atomic(out_path(config, "report.txt"), report_text);
    if (!report.deviation_limit_trace.empty()) {
      write_file_atomic(out_path(config, "trace.csv"), trace_csv(report.deviation_limit_trace));
    }
    out << report_text;
    if (!report.verdict) {
      err << "verify: failed checks:";
      for (const std::string& name : report.failed_checks) err << ' ' << name;
      err << '\n';
      return kCheckFailed;
    }
    return kOk;
  });
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("sweep", err, [&] {
    validate(config);
    if (config.sweep.psi1.size() < 2) throw ConfigError("sweep: at least two psi1 values are required");
    const VorticityModel model = build_model(config.model);

    SweepOptions options;
    options.picard = picard_options(config);
    options.n_nodes = config.grid.n_nodes;
    const double r_span = config.sweep.r_span.value_or(config.effective_r_max() - config.r0);
    const SweepResult sweep = continuity_sweep(model, config.r0, config.sweep.psi1, r_span, options);

    std::ostringstream csv;
    csv << "dpsi1,sup_dev\n";
    for (const SweepRow& row : sweep.rows) csv << format_real(row.dpsi1) << ',' << format_real(row.sup_dev) << '\n';

    std::vector<Series> series;
    for (const Trajectory& t : sweep.trajectories) {
      series.push_back({"psi1 = " + format_real(t.psi1).substr(0, 8), t.grid.nodes(), t.psi});
    }
    const std::string svg = render_svg(series, "Trajectories (empirical continuity sweep)", "r", "psi");

    prepare_output(config);
    write_file_atomic(out_path(config, "sweep.csv"), csv.str());
    write_file_atomic(out_path(config, "sweep.svg"), svg);
    out << "common_window_end = " << format_real(sweep.common_window_end) << '\n' << csv.str();
    return kOk;
  });
}

int cmd_validate_model(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded("validate-model", err, [&] {
    if (!(config.model.delta > 0.0)) throw ConfigError("config: model.delta must be positive");
    const VorticityModel model = build_model(config.model);
    const std::string text = to_key_value(model.hypotheses());
    prepare_output(config);
    write_file_atomic(out_path(config, "model_report.txt"), text);
    out << "model = " << model.name() << '\n' << text;
    if (!model.validated()) {
      err << "validate-model: hypotheses not satisfied\n";
      return kCheckFailed;
    }
    return kOk;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Lipschitz radial vorticity IVP solver and uniqueness verifier", "vflow"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<double> r0, psi1, tol;
  std::optional<std::string> model;
  std::string psi1_list;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (key = value with sections)");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--r0", r0, "Initial radius r0 >= 1");
    sub->add_option("--psi1", psi1, "Initial slope psi'(r0), nonzero");
    sub->add_option("--model", model, "classical | oscillatory | custom");
    sub->add_option("--tol", tol, "Picard tolerance and RK relative tolerance");
  };

  CLI::App* integrate = app.add_subcommand("integrate", "Solve the IVP and write traj.csv");
  CLI::App* verify = app.add_subcommand("verify", "Run both solvers and every uniqueness check");
  CLI::App* sweep = app.add_subcommand("sweep", "Empirical continuity sweep over psi1 values");
  CLI::App* validate_model = app.add_subcommand("validate-model", "Check the vorticity hypotheses");
  for (CLI::App* sub : {integrate, verify, sweep, validate_model}) add_common(sub);
  sweep->add_option("--psi1-list", psi1_list, "Comma-separated psi1 values");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "vflow: " << e.what() << '\n';
    return kConfigError;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
    if (out_dir) config.output = *out_dir;
    if (r0) config.r0 = *r0;
    if (psi1) config.psi1 = *psi1;
    if (model) config.model.law = *model;
    if (tol) {
      config.solver.picard.tol = *tol;
      config.solver.rk.rel_tol = *tol;
    }
    if (!psi1_list.empty()) config.sweep.psi1 = parse_real_list(psi1_list);
  } catch (const ConfigError& e) {
    err << "vflow: " << e.what() << '\n';
    return kConfigError;
  }

  if (integrate->parsed()) return cmd_integrate(config, out, err);
  if (verify->parsed()) return cmd_verify(config, out, err);
  if (sweep->parsed()) return cmd_sweep(config, out, err);
  return cmd_validate_model(config, out, err);
}

}  // namespace vflow::cli
