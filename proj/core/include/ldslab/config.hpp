#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ldslab/errors.hpp"

namespace ldslab {

enum class GeneratorKind { thermal, vre };

struct Generator {
  std::string name;
  std::string zone;
  GeneratorKind kind = GeneratorKind::thermal;
  double capex = 0.0;    // $/kW-yr
  double varcost = 0.0;  // $/kWh
  std::string availability_series;  // vre only: timeseries column name
};

struct Storage {
  std::string name;
  std::string zone;
  bool is_lds = false;
  double capex_energy = 0.0;  // $/kWh-yr
  double capex_power = 0.0;   // $/kW-yr
  double eta_cha = 1.0;       // (0, 1]
  double eta_dis = 1.0;       // (0, 1]
  double eta_sdc = 0.0;       // [0, 1)
};

struct Line {
  std::string from_zone;
  std::string to_zone;
  double capex = 0.0;  // $/kW-yr
};

struct Horizon {
  int total_steps = 0;       // H
  int steps_per_period = 0;  // T
  double dt_hours = 1.0;

  int num_periods() const { return total_steps / steps_per_period; }
};

struct AggregationSettings {
  int num_representatives = 1;
  std::uint64_t seed = 1;
};

enum class SolverBackend { reference, external };

struct SolverSettings {
  SolverBackend backend = SolverBackend::reference;
  std::string command_template;  // external backend: must contain {mps} and {sol}
  double time_limit_s = 0.0;     // <= 0 means no limit
};

struct SystemConfig {
  std::vector<std::string> zones;
  std::vector<Generator> generators;
  std::vector<Storage> storages;
  std::vector<Line> lines;
  Horizon horizon;
  AggregationSettings aggregation;
  double nse_penalty = 0.0;  // $/kWh value of lost load
  SolverSettings solver;
};

// Loads and validates a config file (flat TOML; see README for the grammar).
// Throws ParseError / SchemaError / DomainError naming the offending key.
SystemConfig load_config(const std::filesystem::path& path);
SystemConfig parse_config(const std::string& text);

// Debug dump; load_config(save_config(c)) reproduces c exactly.
std::string dump_config(const SystemConfig& config);
void save_config(const SystemConfig& config, const std::filesystem::path& path);

bool operator==(const SystemConfig& a, const SystemConfig& b);

}  // namespace ldslab
