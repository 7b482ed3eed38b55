#pragma once

#include <cstdint>

#include "ldslab/lp_model.hpp"

namespace ldslab {

struct SimplexOptions {
  int max_rows = 5000;                     // refuse larger models (SizeLimit)
  std::int64_t max_iterations = 5000000;   // backstop; exceeding -> status limit
  double time_limit_s = 0.0;               // <= 0 means no limit
  double feas_tol = 1e-9;
  double pivot_tol = 1e-11;
};

// Two-phase primal simplex on a dense tableau of the standard-form transform,
// Bland's rule throughout. Deterministic for a given model.
Solution solve_reference(const LpModel& model, const SimplexOptions& options = {});

}  // namespace ldslab
