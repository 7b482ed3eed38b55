#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldslab/analysis.hpp"
#include "ldslab/mps.hpp"
#include "ldslab/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  std::string subcommand;
  fs::path config_path;
  fs::path timeseries_path;
  fs::path out_dir;
  std::vector<std::string> formulations;
  std::string solver_override;
  int reps_override = -1;
  long long seed_override = -1;
  bool identity = false;
};

struct LoadedInputs {
  ldslab::SystemConfig config;
  ldslab::TimeSeriesTable ts;
  ldslab::PeriodMapping mapping;
  double load_seconds = 0.0;
  double aggregate_seconds = 0.0;
};

std::vector<ldslab::Formulation> resolve_formulations(const std::vector<std::string>& names) {
  std::vector<ldslab::Formulation> result;
  for (const std::string& name : names) {
    if (name == "all") {
      for (ldslab::Formulation f : ldslab::kAllFormulations) result.push_back(f);
      continue;
    }
    const auto f = ldslab::parse_formulation(name);
    if (!f) {
      throw ldslab::DomainError(
          "unknown formulation '" + name +
          "' (expected explicit-hourly, implicit-hourly, implicit-minmax, original or all)");
    }
    result.push_back(*f);
  }
  return result;
}

LoadedInputs load_inputs(const Invocation& inv) {
  using clock = std::chrono::steady_clock;
  LoadedInputs inputs;

  const auto load_start = clock::now();
  inputs.config = ldslab::load_config(inv.config_path);
  if (inv.reps_override > 0) inputs.config.aggregation.num_representatives = inv.reps_override;
  if (inv.seed_override >= 0) {
    inputs.config.aggregation.seed = static_cast<std::uint64_t>(inv.seed_override);
  }
  if (!inv.solver_override.empty()) {
    if (inv.solver_override == "reference") {
      inputs.config.solver.backend = ldslab::SolverBackend::reference;
    } else if (inv.solver_override == "external") {
      inputs.config.solver.backend = ldslab::SolverBackend::external;
    } else {
      throw ldslab::DomainError("--solver must be 'reference' or 'external'");
    }
  }
  if (const char* cmd = std::getenv("LDSLAB_SOLVER_CMD"); cmd != nullptr && *cmd != '\0') {
    inputs.config.solver.command_template = cmd;
  }

  inputs.ts = ldslab::load_timeseries(inv.timeseries_path, inputs.config);
  const ldslab::ValidationReport validation = ldslab::validate_inputs(inputs.config, inputs.ts);
  if (!validation.ok()) {
    std::string message = "input validation failed:";
    for (const ldslab::ValidationIssue& issue : validation.issues) {
      message += "\n  [" + issue.code + "] " + issue.message;
    }
    throw ldslab::DomainError(message);
  }
  inputs.load_seconds = std::chrono::duration<double>(clock::now() - load_start).count();

  const auto agg_start = clock::now();
  if (inv.identity) {
    inputs.mapping = ldslab::identity_mapping(inputs.config.horizon.num_periods(),
                                              inputs.config.horizon.steps_per_period);
  } else {
    inputs.mapping = ldslab::aggregate(inputs.config, inputs.ts);
  }
  inputs.aggregate_seconds = std::chrono::duration<double>(clock::now() - agg_start).count();
  return inputs;
}

json manifest_skeleton(const Invocation& inv, const LoadedInputs& inputs) {
  json manifest;
  manifest["tool"] = "ldslab";
  manifest["version"] = ldslab::kVersion;
  manifest["subcommand"] = inv.subcommand;
  manifest["inputs"]["config"] = inv.config_path.string();
  manifest["inputs"]["timeseries"] = inv.timeseries_path.string();
  manifest["aggregation"]["seed"] = inputs.config.aggregation.seed;
  manifest["aggregation"]["num_representatives"] = inputs.config.aggregation.num_representatives;
  manifest["aggregation"]["identity_mapping"] = inv.identity;
  manifest["solver"]["backend"] =
      inputs.config.solver.backend == ldslab::SolverBackend::reference ? "reference" : "external";
  manifest["solver"]["command_template"] = inputs.config.solver.command_template;
  manifest["solver"]["time_limit_s"] = inputs.config.solver.time_limit_s;
  manifest["timings"]["load_s"] = inputs.load_seconds;
  manifest["timings"]["aggregate_s"] = inputs.aggregate_seconds;
  return manifest;
}

void write_manifest(const json& manifest, const fs::path& out_dir) {
  std::ofstream out(out_dir / "manifest.json");
  if (!out) {
    throw ldslab::IoError("cannot write manifest to '" + (out_dir / "manifest.json").string() +
                          "'");
  }
  out << manifest.dump(2) << "\n";
}

int run(const Invocation& inv) {
  fs::create_directories(inv.out_dir);

  if (inv.subcommand == "aggregate") {
    const LoadedInputs inputs = load_inputs(inv);
    ldslab::write_mapping_csv(inputs.mapping, inv.out_dir / "mapping.csv",
                              inv.out_dir / "representatives.csv");
    json manifest = manifest_skeleton(inv, inputs);
    manifest["outputs"] = {"mapping.csv", "representatives.csv"};
    write_manifest(manifest, inv.out_dir);
    std::cout << "wrote " << (inv.out_dir / "mapping.csv").string() << " ("
              << inputs.mapping.num_representatives << " representatives over "
              << inputs.mapping.num_periods << " periods)\n";
    return 0;
  }

  const LoadedInputs inputs = load_inputs(inv);
  const std::vector<ldslab::Formulation> formulations = resolve_formulations(inv.formulations);
  if (inv.subcommand != "compare" && formulations.size() != 1) {
    throw ldslab::DomainError("subcommand '" + inv.subcommand +
                              "' needs exactly one --formulation");
  }

  if (inv.subcommand == "export-mps") {
    ldslab::BaseModel base = ldslab::build_base_model(inputs.config, inputs.ts, inputs.mapping);
    ldslab::apply_formulation(base.model, base.handles, inputs.mapping, inputs.config,
                              formulations.front());
    const fs::path mps_path = inv.out_dir / "model.mps";
    ldslab::write_mps(base.model, mps_path);
    json manifest = manifest_skeleton(inv, inputs);
    manifest["formulation"] = ldslab::formulation_name(formulations.front());
    manifest["outputs"] = {"model.mps"};
    write_manifest(manifest, inv.out_dir);
    std::cout << "wrote " << mps_path.string() << "\n";
    return 0;
  }

  if (inv.subcommand == "compare") {
    const ldslab::ComparisonReport report =
        ldslab::compare_formulations(inputs.config, inputs.ts, inputs.mapping, formulations,
                                     inputs.config.solver, inv.out_dir / "solver_work");
    ldslab::write_report_csv(report, inv.out_dir / "report.csv");
    json manifest = manifest_skeleton(inv, inputs);
    json names = json::array();
    for (ldslab::Formulation f : formulations) names.push_back(ldslab::formulation_name(f));
    manifest["formulations"] = names;
    manifest["outputs"] = {"report.csv"};
    write_manifest(manifest, inv.out_dir);
    std::cout << ldslab::report_csv_string(report);
    return 0;
  }

  // solve / validate-soc share the build-solve-reconstruct pipeline.
  const ldslab::Formulation formulation = formulations.front();
  ldslab::BaseModel base = ldslab::build_base_model(inputs.config, inputs.ts, inputs.mapping);
  const ldslab::LdsHandles lds = ldslab::apply_formulation(base.model, base.handles,
                                                           inputs.mapping, inputs.config,
                                                           formulation);
  const ldslab::ModelStats stats = ldslab::model_stats(base.model, base.build_seconds);
  const ldslab::Solution solution =
      ldslab::solve_model(base.model, inputs.config.solver, inv.out_dir / "solver_work");

  json manifest = manifest_skeleton(inv, inputs);
  manifest["formulation"] = ldslab::formulation_name(formulation);
  manifest["model"]["rows"] = stats.num_rows;
  manifest["model"]["vars"] = stats.num_vars;
  manifest["model"]["nonzeros"] = stats.num_nonzeros;
  manifest["timings"]["build_s"] = base.build_seconds;
  manifest["timings"]["solve_s"] = solution.solve_seconds;
  manifest["solution"]["status"] = std::string(ldslab::to_string(solution.status));

  if (solution.status != ldslab::SolveStatus::optimal) {
    write_manifest(manifest, inv.out_dir);
    std::cerr << "solver finished with status " << ldslab::to_string(solution.status) << "\n";
    return 2;
  }
  manifest["solution"]["objective"] = solution.objective;

  json outputs = json::array();
  int total_violations = 0;
  for (const ldslab::LdsStorageHandles& handles : lds.storages) {
    const ldslab::Storage& params = inputs.config.storages[handles.storage];
    const ldslab::SocTrajectory traj = ldslab::reconstruct_soc(
        solution, formulation, handles, base.handles.storages[handles.storage], inputs.mapping,
        params, inputs.config.horizon.dt_hours);
    const fs::path traj_path = inv.out_dir / ("soc_" + params.name + ".csv");
    ldslab::write_trajectory_csv(traj, traj_path);
    outputs.push_back(traj_path.filename().string());

    if (inv.subcommand == "validate-soc") {
      const ldslab::StorageViolations violations = ldslab::count_violations(traj, traj.capacity);
      total_violations += violations.count_over + violations.count_under;
      json entry;
      entry["storage"] = params.name;
      entry["capacity"] = traj.capacity;
      entry["count_over"] = violations.count_over;
      entry["count_under"] = violations.count_under;
      entry["max_over"] = violations.max_over;
      entry["max_under"] = violations.max_under;
      entry["steps"] = violations.steps;
      manifest["violations"].push_back(entry);
      std::cout << params.name << ": " << violations.count_over << " over, "
                << violations.count_under << " under (C* = " << traj.capacity << ")\n";
    }
  }

  if (inv.subcommand == "validate-soc") {
    std::ofstream csv(inv.out_dir / "violations.csv");
    csv << "storage,count_over,count_under,max_over,max_under\n";
    for (const auto& entry : manifest["violations"]) {
      csv << entry["storage"].get<std::string>() << "," << entry["count_over"] << ","
          << entry["count_under"] << "," << entry["max_over"] << "," << entry["max_under"]
          << "\n";
    }
    outputs.push_back("violations.csv");
    manifest["total_violations"] = total_violations;
  }

  manifest["outputs"] = outputs;
  write_manifest(manifest, inv.out_dir);
  std::cout << "status optimal, objective " << solution.objective << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-expansion LP lab for long-duration storage formulations"};
  app.set_version_flag("--version", ldslab::kVersion);
  app.require_subcommand(1);

  Invocation inv;
  auto add_common = [&](CLI::App* sub, bool needs_ts = true) {
    sub->add_option("--config", inv.config_path, "System config (TOML)")->required();
    if (needs_ts) {
      sub->add_option("--ts", inv.timeseries_path, "Timeseries CSV")->required();
    }
    sub->add_option("-o,--out", inv.out_dir, "Output directory")->required();
    sub->add_option("--reps", inv.reps_override, "Override aggregation.num_representatives");
    sub->add_option("--seed", inv.seed_override, "Override aggregation.seed");
    sub->add_flag("--identity-mapping", inv.identity,
                  "Use the identity mapping (full resolution) instead of clustering");
  };
  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--solver", inv.solver_override, "Solver backend: reference|external");
  };
  auto add_formulation = [&](CLI::App* sub, bool multiple) {
    auto* opt = sub->add_option("--formulation", inv.formulations,
                                "explicit-hourly|implicit-hourly|implicit-minmax|original|all");
    if (!multiple) opt->expected(1);
    opt->required();
  };

  CLI::App* aggregate = app.add_subcommand("aggregate", "Cluster periods and write the mapping");
  add_common(aggregate);

  CLI::App* solve = app.add_subcommand("solve", "Build and solve one formulation");
  add_common(solve);
  add_solver(solve);
  add_formulation(solve, false);

  CLI::App* compare = app.add_subcommand("compare", "Run several formulations side by side");
  add_common(compare);
  add_solver(compare);
  add_formulation(compare, true);

  CLI::App* validate = app.add_subcommand("validate-soc", "Solve, reconstruct and audit SOC");
  add_common(validate);
  add_solver(validate);
  add_formulation(validate, false);

  CLI::App* export_mps = app.add_subcommand("export-mps", "Write the model as free-format MPS");
  add_common(export_mps);
  add_formulation(export_mps, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  inv.subcommand = app.get_subcommands().front()->get_name();

  try {
    return run(inv);
  } catch (const ldslab::SizeLimit& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ldslab::NumericalError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ldslab::SpawnError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ldslab::ExitCodeError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    if (!e.stderr_text().empty()) std::cerr << e.stderr_text();
    return 2;
  } catch (const ldslab::SolutionParseError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ldslab::Timeout& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const ldslab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
