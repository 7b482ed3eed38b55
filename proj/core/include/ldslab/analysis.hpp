#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ldslab/lds.hpp"
#include "ldslab/simplex.hpp"
#include "ldslab/subprocess_solver.hpp"

namespace ldslab {

// Full-horizon storage content: values[h] for h = 1..H plus the post-horizon
// wrap value at the end.
struct SocTrajectory {
  std::string storage;
  std::vector<double> values;  // length H + 1
  double capacity = 0.0;       // installed energy capacity C* from the solution
};

struct StorageViolations {
  std::string storage;
  int count_over = 0;
  int count_under = 0;
  double max_over = 0.0;   // largest SOC - C* among violations
  double max_under = 0.0;  // largest -SOC among violations
  std::vector<int> steps;  // 1-based violating horizon steps
};

struct ViolationReport {
  std::vector<StorageViolations> storages;
  int total() const;
};

// Rebuilds the full-horizon SOC of one storage from a solved model. The
// reconstruction rule is the formulation's own: variable copy for
// explicit-hourly, level/deviation superposition for implicit-hourly, and the
// first-step/chain recursion for min-max and original.
SocTrajectory reconstruct_soc(const Solution& solution, Formulation formulation,
                              const LdsStorageHandles& lds, const CemStorageHandles& cem,
                              const PeriodMapping& mapping, const Storage& params, double dt);

// Audits steps 1..H (the wrap value is excluded); the tolerance is
// tol_rel * max(1, C_star).
StorageViolations count_violations(const SocTrajectory& traj, double c_star,
                                   double tol_rel = 1e-6);

// Rows a formulation adds per LDS storage, as a closed form in (N, T, W).
std::int64_t count_rows_closed_form(Formulation f, int num_periods, int steps_per_period,
                                    int num_representatives);

struct ComparisonEntry {
  Formulation formulation = Formulation::explicit_hourly;
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;
  std::int64_t rows = 0;
  std::int64_t vars = 0;
  std::int64_t nonzeros = 0;
  double build_seconds = 0.0;
  double solve_seconds = 0.0;
  int violations = 0;
  double lds_energy_capacity = 0.0;
  std::string error;  // non-empty when status == error
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
};

// Dispatches to the built-in simplex or the external command adapter.
Solution solve_model(const LpModel& model, const SolverSettings& solver,
                     const std::filesystem::path& workdir);

// Clone base + apply + solve + reconstruct + audit, one entry per requested
// formulation in request order; per-formulation solver errors are recorded as
// status=error entries without aborting the rest.
ComparisonReport compare_formulations(const SystemConfig& config, const TimeSeriesTable& ts,
                                      const PeriodMapping& mapping,
                                      std::span<const Formulation> formulations,
                                      const SolverSettings& solver,
                                      const std::filesystem::path& workdir = ".");

// CSV with header formulation,status,objective,rows,vars,nonzeros,build_s,
// solve_s,violations,lds_energy_capacity; floats use 9 significant digits.
void write_report_csv(const ComparisonReport& report, const std::filesystem::path& path);
std::string report_csv_string(const ComparisonReport& report);

// Per-storage trajectory `step,soc`; the wrap value appears as step H + 1.
void write_trajectory_csv(const SocTrajectory& traj, const std::filesystem::path& path);

}  // namespace ldslab
