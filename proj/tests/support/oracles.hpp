#pragma once

// Small independent oracles used to freeze expected values:
//   - greedy per-step dispatch (valid when capacities are free and storage absent)
//   - exhaustive k-means (global optimum by assignment enumeration)
//   - 2-variable LP solved by vertex enumeration

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ldslab/aggregation.hpp"
#include "ldslab/config.hpp"
#include "ldslab/lp_model.hpp"
#include "ldslab/timeseries.hpp"

namespace testsupport {

// Least-varcost dispatch per step. Requires zero capex everywhere and no
// storages so that the steps decouple.
inline double greedy_dispatch_objective(const ldslab::SystemConfig& config,
                                        const ldslab::TimeSeriesTable& ts,
                                        const ldslab::PeriodMapping& mapping) {
  const int T = config.horizon.steps_per_period;
  double total = 0.0;
  for (int w = 0; w < mapping.num_representatives; ++w) {
    for (int t = 0; t < T; ++t) {
      const std::size_t h = static_cast<std::size_t>(mapping.designated[w]) * T + t;
      for (const std::string& zone : config.zones) {
        const double demand = ts.column("demand." + zone)[h];
        double cheapest = config.nse_penalty;
        for (const ldslab::Generator& g : config.generators) {
          if (g.zone != zone) continue;
          double avail = 1.0;
          if (g.kind == ldslab::GeneratorKind::vre) avail = ts.column(g.availability_series)[h];
          if (avail > 0.0) cheapest = std::min(cheapest, g.varcost);
        }
        total += mapping.weight[w] * config.horizon.dt_hours * demand * cheapest;
      }
    }
  }
  return total;
}

// Global k-means optimum over all cluster assignments (every cluster used).
inline double exhaustive_kmeans_inertia(const ldslab::FeatureMatrix& features, int k) {
  const std::size_t N = features.rows;
  const std::size_t D = features.cols;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assignment(N, 0);
  const std::size_t combos = static_cast<std::size_t>(std::pow(double(k), double(N)));
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    for (std::size_t n = 0; n < N; ++n) {
      assignment[n] = static_cast<int>(c % k);
      c /= k;
    }
    std::vector<int> counts(k, 0);
    for (int a : assignment) ++counts[a];
    if (std::any_of(counts.begin(), counts.end(), [](int x) { return x == 0; })) continue;

    std::vector<double> centroid(static_cast<std::size_t>(k) * D, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t d = 0; d < D; ++d) centroid[assignment[n] * D + d] += features.at(n, d);
    }
    for (int cl = 0; cl < k; ++cl) {
      for (std::size_t d = 0; d < D; ++d) centroid[cl * D + d] /= counts[cl];
    }
    double inertia = 0.0;
    for (std::size_t n = 0; n < N; ++n) {
      for (std::size_t d = 0; d < D; ++d) {
        const double diff = features.at(n, d) - centroid[assignment[n] * D + d];
        inertia += diff * diff;
      }
    }
    best = std::min(best, inertia);
  }
  return best;
}

struct VertexOracleResult {
  bool feasible = false;
  double objective = 0.0;
};

// Minimizes a 2-variable LP by enumerating constraint-intersection vertices.
// Bounds must make the feasible set a (possibly empty) polytope.
inline VertexOracleResult vertex_enumerate_2d(const ldslab::LpModel& model) {
  struct Halfplane {
    double a, b, rhs;  // a x + b y <= rhs
  };
  std::vector<Halfplane> planes;
  std::vector<Halfplane> equalities;
  for (const ldslab::Row& row : model.rows()) {
    double a = 0.0, b = 0.0;
    for (const ldslab::RowCoeff& c : row.coeffs) {
      if (c.var == 0) a += c.value;
      if (c.var == 1) b += c.value;
    }
    switch (row.sense) {
      case ldslab::RowSense::less_equal:
        planes.push_back({a, b, row.rhs});
        break;
      case ldslab::RowSense::greater_equal:
        planes.push_back({-a, -b, -row.rhs});
        break;
      case ldslab::RowSense::equal:
        planes.push_back({a, b, row.rhs});
        planes.push_back({-a, -b, -row.rhs});
        break;
    }
  }
  for (int j = 0; j < 2; ++j) {
    const ldslab::Variable& v = model.variable(j);
    if (std::isfinite(v.lower)) {
      planes.push_back({j == 0 ? -1.0 : 0.0, j == 1 ? -1.0 : 0.0, -v.lower});
    }
    if (std::isfinite(v.upper)) {
      planes.push_back({j == 0 ? 1.0 : 0.0, j == 1 ? 1.0 : 0.0, v.upper});
    }
  }

  VertexOracleResult result;
  const double c0 = model.variable(0).objective;
  const double c1 = model.variable(1).objective;
  auto consider = [&](double x, double y) {
    for (const Halfplane& p : planes) {
      if (p.a * x + p.b * y > p.rhs + 1e-7 * (1.0 + std::abs(p.rhs))) return;
    }
    const double obj = c0 * x + c1 * y;
    if (!result.feasible || obj < result.objective) {
      result.feasible = true;
      result.objective = obj;
    }
  };
  for (std::size_t i = 0; i < planes.size(); ++i) {
    for (std::size_t j = i + 1; j < planes.size(); ++j) {
      const double det = planes[i].a * planes[j].b - planes[j].a * planes[i].b;
      if (std::abs(det) < 1e-12) continue;
      const double x = (planes[i].rhs * planes[j].b - planes[j].rhs * planes[i].b) / det;
      const double y = (planes[i].a * planes[j].rhs - planes[j].a * planes[i].rhs) / det;
      consider(x, y);
    }
  }
  return result;
}

}  // namespace testsupport
