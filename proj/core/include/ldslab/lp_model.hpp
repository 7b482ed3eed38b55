#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ldslab/errors.hpp"

namespace ldslab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { less_equal, greater_equal, equal };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double objective = 0.0;
};

struct RowCoeff {
  int var = -1;
  double value = 0.0;
};

struct Row {
  std::string name;
  RowSense sense = RowSense::less_equal;
  double rhs = 0.0;
  std::vector<RowCoeff> coeffs;  // sorted by var index, one entry per variable
};

enum class SolveStatus { optimal, infeasible, unbounded, limit, error };

std::string_view to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::error;
  double objective = 0.0;
  std::vector<double> values;  // one per variable when present, else empty
  double solve_seconds = 0.0;

  bool has_values() const { return !values.empty(); }
};

struct ModelStats {
  std::int64_t num_rows = 0;
  std::int64_t num_vars = 0;
  std::int64_t num_nonzeros = 0;
  double build_seconds = 0.0;
};

// Sparse minimization LP assembled row by row. Variable and row names are
// unique; coefficients naming the same variable twice within one row are
// summed at insertion.
class LpModel {
 public:
  int add_variable(const std::string& name, double lower, double upper,
                   double objective);
  int add_row(const std::string& name, RowSense sense, double rhs,
              std::span<const RowCoeff> coeffs);

  int num_vars() const { return static_cast<int>(variables_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Row>& rows() const { return rows_; }
  const Variable& variable(int index) const { return variables_.at(index); }
  const Row& row(int index) const { return rows_.at(index); }

  // Returns -1 when the name is unknown.
  int find_variable(const std::string& name) const;
  int find_row(const std::string& name) const;

  std::string name = "ldslab";

 private:
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
};

ModelStats model_stats(const LpModel& model, double build_seconds = 0.0);

// Objective value c.x of a candidate point (no feasibility check).
double objective_value(const LpModel& model, std::span<const double> x);

}  // namespace ldslab
