#include "ldslab/simplex.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace ldslab {

namespace {

// One column of the standard-form problem, mapped back to the original space
// as x[orig] = base + sign * y.
struct ColumnMap {
  int orig = -1;    // -1 for slack/surplus/artificial columns
  double sign = 1.0;
};

class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double& rhs(int i) { return at(i, cols_); }
  double rhs(int i) const { return at(i, cols_); }
  // Row index rows_ holds the reduced costs of the active phase.
  double& cost(int j) { return at(rows_, j); }
  double cost(int j) const { return at(rows_, j); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int pivot_row, int pivot_col) {
    const double p = at(pivot_row, pivot_col);
    const double inv = 1.0 / p;
    double* prow = &data_[static_cast<std::size_t>(pivot_row) * (cols_ + 1)];
    for (int j = 0; j <= cols_; ++j) prow[j] *= inv;
    prow[pivot_col] = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == pivot_row) continue;
      double* row = &data_[static_cast<std::size_t>(i) * (cols_ + 1)];
      const double factor = row[pivot_col];
      if (factor == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) row[j] -= factor * prow[j];
      row[pivot_col] = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

enum class StepOutcome { improved, optimal, unbounded, bad_pivot };

}  // namespace

Solution solve_reference(const LpModel& model, const SimplexOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (model.num_rows() > options.max_rows) {
    throw SizeLimit("model has " + std::to_string(model.num_rows()) +
                    " rows, reference solver cap is " + std::to_string(options.max_rows));
  }

  const auto& vars = model.variables();
  const auto& rows = model.rows();
  const int num_orig = static_cast<int>(vars.size());

  // Standard-form transform. Finite lower bounds are shifted out, variables
  // with only a finite upper bound are mirrored, free variables are split.
  // Finite upper bounds after shifting become extra <= rows.
  std::vector<double> x_base(num_orig, 0.0);
  std::vector<ColumnMap> columns;
  std::vector<int> shifted_col(num_orig, -1);  // primary column of each variable
  struct BoundRow {
    int col;
    double limit;
  };
  std::vector<BoundRow> bound_rows;

  for (int j = 0; j < num_orig; ++j) {
    const Variable& v = vars[j];
    const bool lo_finite = std::isfinite(v.lower);
    const bool up_finite = std::isfinite(v.upper);
    if (lo_finite && up_finite && v.lower == v.upper) {
      x_base[j] = v.lower;  // fixed; folded into the right-hand sides
      continue;
    }
    if (lo_finite) {
      x_base[j] = v.lower;
      shifted_col[j] = static_cast<int>(columns.size());
      columns.push_back(ColumnMap{j, 1.0});
      if (up_finite) {
        bound_rows.push_back(BoundRow{shifted_col[j], v.upper - v.lower});
      }
    } else if (up_finite) {
      x_base[j] = v.upper;
      shifted_col[j] = static_cast<int>(columns.size());
      columns.push_back(ColumnMap{j, -1.0});
    } else {
      shifted_col[j] = static_cast<int>(columns.size());
      columns.push_back(ColumnMap{j, 1.0});
      columns.push_back(ColumnMap{j, -1.0});
    }
  }
  const int num_struct = static_cast<int>(columns.size());

  // Assemble all rows (model rows then bound rows) with rhs >= 0.
  struct StdRow {
    std::vector<std::pair<int, double>> entries;  // (column, coefficient)
    RowSense sense;
    double rhs;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(rows.size() + bound_rows.size());
  double rhs_scale = 1.0;
  for (const Row& row : rows) {
    StdRow sr;
    sr.sense = row.sense;
    sr.rhs = row.rhs;
    for (const RowCoeff& c : row.coeffs) {
      const Variable& v = vars[c.var];
      if (shifted_col[c.var] < 0) {
        sr.rhs -= c.value * x_base[c.var];  // fixed variable
        continue;
      }
      sr.rhs -= c.value * x_base[c.var];
      const int col = shifted_col[c.var];
      sr.entries.emplace_back(col, c.value * columns[col].sign);
      if (std::isinf(v.lower) && std::isinf(v.upper)) {
        sr.entries.emplace_back(col + 1, c.value * columns[col + 1].sign);
      }
    }
    std_rows.push_back(std::move(sr));
  }
  for (const BoundRow& br : bound_rows) {
    StdRow sr;
    sr.sense = RowSense::less_equal;
    sr.rhs = br.limit;
    sr.entries.emplace_back(br.col, 1.0);
    std_rows.push_back(std::move(sr));
  }
  for (StdRow& sr : std_rows) {
    if (sr.rhs < 0.0) {
      sr.rhs = -sr.rhs;
      for (auto& [col, value] : sr.entries) value = -value;
      if (sr.sense == RowSense::less_equal) {
        sr.sense = RowSense::greater_equal;
      } else if (sr.sense == RowSense::greater_equal) {
        sr.sense = RowSense::less_equal;
      }
    }
    rhs_scale = std::max(rhs_scale, std::abs(sr.rhs));
  }

  const int m = static_cast<int>(std_rows.size());
  int num_slack = 0;
  int num_artificial = 0;
  for (const StdRow& sr : std_rows) {
    if (sr.sense == RowSense::less_equal) {
      ++num_slack;
    } else if (sr.sense == RowSense::greater_equal) {
      ++num_slack;
      ++num_artificial;
    } else {
      ++num_artificial;
    }
  }
  const int n = num_struct + num_slack + num_artificial;
  const int artificial_begin = num_struct + num_slack;

  Tableau tab(m, n);
  std::vector<int> basis(m, -1);
  // (row, coefficient) of each slack/artificial column, for rebuilding basis
  // columns from the original data later.
  std::vector<std::pair<int, double>> unit_column(n - num_struct);
  {
    int slack = num_struct;
    int artificial = artificial_begin;
    for (int i = 0; i < m; ++i) {
      const StdRow& sr = std_rows[i];
      for (const auto& [col, value] : sr.entries) tab.at(i, col) += value;
      tab.rhs(i) = sr.rhs;
      if (sr.sense == RowSense::less_equal) {
        tab.at(i, slack) = 1.0;
        unit_column[slack - num_struct] = {i, 1.0};
        basis[i] = slack++;
      } else if (sr.sense == RowSense::greater_equal) {
        tab.at(i, slack) = -1.0;
        unit_column[slack - num_struct] = {i, -1.0};
        ++slack;
        tab.at(i, artificial) = 1.0;
        unit_column[artificial - num_struct] = {i, 1.0};
        basis[i] = artificial++;
      } else {
        tab.at(i, artificial) = 1.0;
        unit_column[artificial - num_struct] = {i, 1.0};
        basis[i] = artificial++;
      }
    }
  }

  auto is_artificial = [&](int col) { return col >= artificial_begin; };

  // Column-major view of the original standard-form matrix; used to rebuild
  // the tableau from scratch against the current basis.
  std::vector<std::vector<std::pair<int, double>>> orig_cols(n);
  for (int r = 0; r < m; ++r) {
    for (const auto& [col, value] : std_rows[r].entries) {
      orig_cols[col].emplace_back(r, value);
    }
  }
  for (int j = num_struct; j < n; ++j) {
    orig_cols[j].push_back(unit_column[j - num_struct]);
  }

  // Dense LU with partial pivoting over the current basis matrix.
  struct BasisLu {
    int m = 0;
    std::vector<double> data;
    std::vector<int> perm;

    bool factor() {
      for (int k = 0; k < m; ++k) {
        int pivot_row = k;
        double pivot_mag = std::abs(data[static_cast<std::size_t>(perm[k]) * m + k]);
        for (int r = k + 1; r < m; ++r) {
          const double mag = std::abs(data[static_cast<std::size_t>(perm[r]) * m + k]);
          if (mag > pivot_mag) {
            pivot_mag = mag;
            pivot_row = r;
          }
        }
        if (pivot_mag < 1e-12) return false;
        std::swap(perm[k], perm[pivot_row]);
        const double pivot = data[static_cast<std::size_t>(perm[k]) * m + k];
        const double* prow = &data[static_cast<std::size_t>(perm[k]) * m];
        for (int r = k + 1; r < m; ++r) {
          double* row = &data[static_cast<std::size_t>(perm[r]) * m];
          const double factor_value = row[k] / pivot;
          row[k] = factor_value;
          if (factor_value == 0.0) continue;
          for (int c = k + 1; c < m; ++c) row[c] -= factor_value * prow[c];
        }
      }
      return true;
    }

    void solve(std::vector<double>& rhs, std::vector<double>& out) const {
      for (int k = 0; k < m; ++k) {
        const double* row = nullptr;
        for (int r = k + 1; r < m; ++r) {
          row = &data[static_cast<std::size_t>(perm[r]) * m];
          rhs[perm[r]] -= row[k] * rhs[perm[k]];
        }
      }
      for (int k = m - 1; k >= 0; --k) {
        const double* row = &data[static_cast<std::size_t>(perm[k]) * m];
        double value = rhs[perm[k]];
        for (int c = k + 1; c < m; ++c) value -= row[c] * out[c];
        out[k] = value / row[k];
      }
    }
  };

  auto factor_basis = [&](BasisLu& lu) -> bool {
    lu.m = m;
    lu.data.assign(static_cast<std::size_t>(m) * m, 0.0);
    lu.perm.resize(m);
    for (int r = 0; r < m; ++r) lu.perm[r] = r;
    for (int i = 0; i < m; ++i) {
      for (const auto& [r, value] : orig_cols[basis[i]]) {
        lu.data[static_cast<std::size_t>(r) * m + i] += value;
      }
    }
    return lu.factor();
  };

  // Dantzig pricing by default; after a degenerate stall the entering choice
  // falls back to Bland's rule until the objective moves again, which keeps
  // the method cycle-free and deterministic.
  int stalled_iterations = 0;
  int pivots_since_refactor = 0;
  int risky_pivots = 0;  // pivots small enough to amplify roundoff

  // Rebuilds the whole tableau (columns, rhs, reduced costs) from the
  // original data for the current basis; drops the error accumulated by the
  // elementary pivots. Returns false when the basis matrix is too singular.
  auto refactorize = [&](bool phase_one) -> bool {
    if (m == 0) return false;
    BasisLu lu;
    if (!factor_basis(lu)) return false;

    std::vector<int> pos_of_col(n, -1);
    for (int i = 0; i < m; ++i) pos_of_col[basis[i]] = i;
    std::vector<double> rhs(m), column(m);
    for (int j = 0; j < n; ++j) {
      if (pos_of_col[j] >= 0) {
        for (int i = 0; i < m; ++i) tab.at(i, j) = 0.0;
        tab.at(pos_of_col[j], j) = 1.0;
        continue;
      }
      std::fill(rhs.begin(), rhs.end(), 0.0);
      for (const auto& [r, value] : orig_cols[j]) rhs[r] += value;
      lu.solve(rhs, column);
      for (int i = 0; i < m; ++i) tab.at(i, j) = column[i];
    }
    std::fill(rhs.begin(), rhs.end(), 0.0);
    for (int r = 0; r < m; ++r) rhs[r] = std_rows[r].rhs;
    lu.solve(rhs, column);
    for (int i = 0; i < m; ++i) tab.rhs(i) = column[i];

    auto column_cost = [&](int j) -> double {
      if (phase_one) return is_artificial(j) ? 1.0 : 0.0;
      if (j < num_struct) return vars[columns[j].orig].objective * columns[j].sign;
      return 0.0;
    };
    for (int j = 0; j <= n; ++j) tab.cost(j) = 0.0;
    for (int j = 0; j < n; ++j) tab.cost(j) = column_cost(j);
    for (int i = 0; i < m; ++i) {
      const double c = column_cost(basis[i]);
      if (c == 0.0) continue;
      for (int j = 0; j <= n; ++j) tab.at(m, j) -= c * tab.at(i, j);
    }
    pivots_since_refactor = 0;
    risky_pivots = 0;
    return true;
  };

  Solution result;
  std::int64_t iterations = 0;
  bool hit_limit = false;

  auto simplex_step = [&](bool allow_artificial_entering) -> StepOutcome {
    const bool blands_rule = stalled_iterations > 40;
    int entering = -1;
    double most_negative = -options.feas_tol;
    for (int j = 0; j < n; ++j) {
      if (!allow_artificial_entering && is_artificial(j)) continue;
      if (tab.cost(j) < most_negative) {
        entering = j;
        if (blands_rule) break;
        most_negative = tab.cost(j);
      }
    }
    if (entering < 0) return StepOutcome::optimal;

    // Ratio test. Entries below the eligibility floor are not pivot
    // candidates; among near-tied ratios the normal mode takes the largest
    // pivot for stability, Bland mode the lowest basis index.
    const double eligibility = std::max(options.pivot_tol, 1e-9);
    int leaving = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      const double a = tab.at(i, entering);
      if (a <= eligibility) continue;
      const double ratio = std::max(tab.rhs(i), 0.0) / a;
      if (leaving < 0 || ratio < best_ratio - 1e-9 * (1.0 + best_ratio)) {
        leaving = i;
        best_ratio = ratio;
        continue;
      }
      if (ratio <= best_ratio + 1e-9 * (1.0 + best_ratio)) {
        const bool better = blands_rule ? basis[i] < basis[leaving]
                                        : std::abs(a) > std::abs(tab.at(leaving, entering));
        if (better) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leaving < 0) return StepOutcome::unbounded;
    const double pivot_value = std::abs(tab.at(leaving, entering));
    if (pivot_value < options.pivot_tol) return StepOutcome::bad_pivot;
    if (pivot_value < 1e-3) ++risky_pivots;
    ++pivots_since_refactor;
    const double objective_before = tab.rhs(m);
    tab.pivot(leaving, entering);
    basis[leaving] = entering;
    if (std::abs(tab.rhs(m) - objective_before) >
        options.feas_tol * (1.0 + std::abs(objective_before))) {
      stalled_iterations = 0;
    } else {
      ++stalled_iterations;
    }
    return StepOutcome::improved;
  };

  auto run_phase = [&](bool phase_one) -> StepOutcome {
    while (true) {
      if (++iterations > options.max_iterations ||
          (options.time_limit_s > 0.0 && elapsed() > options.time_limit_s)) {
        hit_limit = true;
        return StepOutcome::optimal;
      }
      if (iterations % 256 == 0) refactorize(phase_one);
      const StepOutcome outcome = simplex_step(phase_one);
      if (outcome == StepOutcome::improved) continue;
      // Accumulated pivot error can fake both exits; confirm against a
      // freshly refactorized tableau when the pivot history warrants it.
      const bool suspect = outcome == StepOutcome::unbounded || risky_pivots > 0 ||
                           pivots_since_refactor >= 256;
      if (suspect && (outcome == StepOutcome::optimal || outcome == StepOutcome::unbounded)) {
        if (refactorize(phase_one)) {
          const StepOutcome confirmed = simplex_step(phase_one);
          if (confirmed == StepOutcome::improved) continue;
          return confirmed;
        }
      }
      return outcome;
    }
  };

  // Phase 1: minimize the sum of artificials.
  if (num_artificial > 0) {
    for (int i = 0; i < m; ++i) {
      if (!is_artificial(basis[i])) continue;
      for (int j = 0; j <= n; ++j) tab.at(m, j) -= tab.at(i, j);
    }
    for (int j = artificial_begin; j < n; ++j) tab.cost(j) += 1.0;

    const StepOutcome outcome = run_phase(true);
    if (outcome == StepOutcome::bad_pivot) {
      throw NumericalError("phase-1 pivot below tolerance");
    }
    if (hit_limit) {
      result.status = SolveStatus::limit;
      result.solve_seconds = elapsed();
      return result;
    }
    const double infeasibility = -tab.rhs(m);
    if (infeasibility > 1e-7 * (1.0 + rhs_scale)) {
      if (outcome == StepOutcome::unbounded) {
        // The phase-1 objective is bounded below by zero; reaching this
        // means the reduced costs have degraded numerically.
        throw NumericalError("phase-1 ratio test failed at infeasibility " +
                             std::to_string(infeasibility));
      }
      result.status = SolveStatus::infeasible;
      result.solve_seconds = elapsed();
      return result;
    }
    // Drive the basic artificials out when a safely-sized structural pivot
    // exists; rows where none exists are redundant and keep the artificial
    // basic at zero.
    for (int i = 0; i < m; ++i) {
      if (!is_artificial(basis[i])) continue;
      tab.rhs(i) = 0.0;
      int best_col = -1;
      double best_mag = 1e-8;
      for (int j = 0; j < artificial_begin; ++j) {
        const double mag = std::abs(tab.at(i, j));
        if (mag > best_mag) {
          best_mag = mag;
          best_col = j;
        }
      }
      if (best_col >= 0) {
        tab.pivot(i, best_col);
        basis[i] = best_col;
      }
    }
  }

  // Phase 2: original objective over the structural and slack columns. The
  // refactorization also rebuilds the cost row; the incremental rebuild is
  // the fallback for a singular basis.
  if (!refactorize(false)) {
    for (int j = 0; j <= n; ++j) tab.cost(j) = 0.0;
    for (int j = 0; j < num_struct; ++j) {
      tab.cost(j) = vars[columns[j].orig].objective * columns[j].sign;
    }
    for (int i = 0; i < m; ++i) {
      const int col = basis[i];
      if (col >= num_struct) continue;
      const double c = vars[columns[col].orig].objective * columns[col].sign;
      if (c == 0.0) continue;
      for (int j = 0; j <= n; ++j) tab.at(m, j) -= c * tab.at(i, j);
    }
  }

  const StepOutcome outcome = run_phase(false);
  if (outcome == StepOutcome::bad_pivot) {
    throw NumericalError("phase-2 pivot below tolerance");
  }

  // Recover the basic values. After long degenerate pivot sequences the
  // tableau numbers can drift, so for a finished solve the final basis
  // system B y = b is re-solved from the original data with a fresh LU;
  // the tableau values are the fallback when that factorization fails.
  std::vector<double> basic_values(m);
  for (int i = 0; i < m; ++i) basic_values[i] = std::max(tab.rhs(i), 0.0);
  if (outcome == StepOutcome::optimal && !hit_limit && m > 0) {
    BasisLu lu;
    if (factor_basis(lu)) {
      std::vector<double> rhs(m);
      for (int r = 0; r < m; ++r) rhs[r] = std_rows[r].rhs;
      lu.solve(rhs, basic_values);
    }
  }

  std::vector<double> x = x_base;
  for (int i = 0; i < m; ++i) {
    const int col = basis[i];
    if (col >= num_struct) continue;
    x[columns[col].orig] += columns[col].sign * basic_values[i];
  }

  if (outcome == StepOutcome::unbounded) {
    result.status = SolveStatus::unbounded;
  } else if (hit_limit) {
    result.status = SolveStatus::limit;
    result.values = std::move(x);
    result.objective = objective_value(model, result.values);
  } else {
    // The optimal point must satisfy the model within the documented
    // tolerances; a worse residual means the tableau degraded.
    double worst_row = 0.0;
    for (const Row& row : rows) {
      double lhs = 0.0;
      for (const RowCoeff& c : row.coeffs) lhs += c.value * x[c.var];
      double violation = 0.0;
      if (row.sense == RowSense::less_equal) violation = lhs - row.rhs;
      if (row.sense == RowSense::greater_equal) violation = row.rhs - lhs;
      if (row.sense == RowSense::equal) violation = std::abs(lhs - row.rhs);
      worst_row = std::max(worst_row, violation / (1.0 + std::abs(row.rhs)));
    }
    if (worst_row > 1e-7) {
      throw NumericalError("solution residual " + std::to_string(worst_row) +
                           " exceeds the feasibility tolerance");
    }
    result.status = SolveStatus::optimal;
    result.values = std::move(x);
    result.objective = objective_value(model, result.values);
  }
  result.solve_seconds = elapsed();
  return result;
}

}  // namespace ldslab
