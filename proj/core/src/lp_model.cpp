#include "ldslab/lp_model.hpp"

#include <algorithm>
#include <cmath>

namespace ldslab {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::unbounded:
      return "unbounded";
    case SolveStatus::limit:
      return "limit";
    case SolveStatus::error:
      return "error";
  }
  return "error";
}

int LpModel::add_variable(const std::string& name, double lower, double upper,
                          double objective) {
  if (lower > upper) {
    throw InvertedBounds("variable '" + name + "': lower bound exceeds upper bound");
  }
  if (var_index_.contains(name)) {
    throw DuplicateName("variable '" + name + "' already exists");
  }
  const int handle = static_cast<int>(variables_.size());
  variables_.push_back(Variable{name, lower, upper, objective});
  var_index_.emplace(name, handle);
  return handle;
}

int LpModel::add_row(const std::string& name, RowSense sense, double rhs,
                     std::span<const RowCoeff> coeffs) {
  if (row_index_.contains(name)) {
    throw DuplicateName("row '" + name + "' already exists");
  }
  Row row;
  row.name = name;
  row.sense = sense;
  row.rhs = rhs;
  row.coeffs.reserve(coeffs.size());
  for (const RowCoeff& c : coeffs) {
    if (c.var < 0 || c.var >= num_vars()) {
      throw UnknownVariable("row '" + name + "' references variable handle " +
                            std::to_string(c.var));
    }
    row.coeffs.push_back(c);
  }
  std::stable_sort(row.coeffs.begin(), row.coeffs.end(),
                   [](const RowCoeff& a, const RowCoeff& b) { return a.var < b.var; });
  // Merge repeated handles by summation.
  std::vector<RowCoeff> merged;
  merged.reserve(row.coeffs.size());
  for (const RowCoeff& c : row.coeffs) {
    if (!merged.empty() && merged.back().var == c.var) {
      merged.back().value += c.value;
    } else {
      merged.push_back(c);
    }
  }
  row.coeffs = std::move(merged);

  const int handle = static_cast<int>(rows_.size());
  rows_.push_back(std::move(row));
  row_index_.emplace(name, handle);
  return handle;
}

int LpModel::find_variable(const std::string& name) const {
  auto it = var_index_.find(name);
  return it == var_index_.end() ? -1 : it->second;
}

int LpModel::find_row(const std::string& name) const {
  auto it = row_index_.find(name);
  return it == row_index_.end() ? -1 : it->second;
}

ModelStats model_stats(const LpModel& model, double build_seconds) {
  ModelStats stats;
  stats.num_rows = model.num_rows();
  stats.num_vars = model.num_vars();
  stats.build_seconds = build_seconds;
  for (const Row& row : model.rows()) {
    stats.num_nonzeros += static_cast<std::int64_t>(row.coeffs.size());
  }
  return stats;
}

double objective_value(const LpModel& model, std::span<const double> x) {
  double total = 0.0;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < vars.size() && j < x.size(); ++j) {
    total += vars[j].objective * x[j];
  }
  return total;
}

}  // namespace ldslab
