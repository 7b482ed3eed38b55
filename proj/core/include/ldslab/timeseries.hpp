#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ldslab/config.hpp"

namespace ldslab {

// Column-oriented table of input series, every column of length H. Demand
// columns are keyed "demand.<zone>" [kW]; availability columns lie in [0, 1].
class TimeSeriesTable {
 public:
  void add_column(const std::string& name, std::vector<double> values);

  bool has_column(const std::string& name) const { return index_of(name) >= 0; }
  const std::vector<double>& column(const std::string& name) const;
  int index_of(const std::string& name) const;

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  std::size_t length() const { return columns_.empty() ? 0 : columns_.front().size(); }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

// Reads an RFC-4180 CSV with header `step,<column>,...`; `step` is 1-based and
// strictly increasing. Availability columns referenced by the config are
// range-checked to [0, 1], demand columns to >= 0.
TimeSeriesTable load_timeseries(const std::filesystem::path& path, const SystemConfig& config);
TimeSeriesTable parse_timeseries(const std::string& text, const SystemConfig& config);

struct ValidationIssue {
  std::string code;     // short machine-readable tag, e.g. "unknown zone"
  std::string message;  // human-readable detail
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Pure cross-check of a config against its timeseries; issues are data, not
// exceptions. ok() implies the base model builder cannot fail structurally.
ValidationReport validate_inputs(const SystemConfig& config, const TimeSeriesTable& ts);

}  // namespace ldslab
