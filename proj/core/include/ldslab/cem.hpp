#pragma once

#include <string>
#include <vector>

#include "ldslab/aggregation.hpp"
#include "ldslab/lp_model.hpp"

namespace ldslab {

// Variable handles of the base capacity-expansion model. Operating variables
// are indexed [w * T + t] over representative periods.
struct CemGeneratorHandles {
  int capacity = -1;
  std::vector<int> generation;
};

struct CemStorageHandles {
  int energy_capacity = -1;  // C
  int power_capacity = -1;   // P (shared by charge and discharge)
  std::vector<int> charge;
  std::vector<int> discharge;
  std::vector<int> soc_cyclic;  // non-LDS only: per-representative cyclic SOC
};

struct CemLineHandles {
  int capacity = -1;
  std::vector<int> flow_forward;  // from -> to
  std::vector<int> flow_reverse;  // to -> from
};

struct CemHandles {
  int num_representatives = 0;  // W
  int steps_per_period = 0;     // T
  std::vector<CemGeneratorHandles> generators;
  std::vector<CemStorageHandles> storages;
  std::vector<CemLineHandles> lines;
  std::vector<std::vector<int>> nse;  // [zone][w * T + t]
};

struct BaseModel {
  LpModel model;
  CemHandles handles;
  double build_seconds = 0.0;
};

// Builds balance, capacity-limit and cost structure over representative
// periods. Long-duration storages get no inter/intra SOC constraints here;
// short-duration storages get the standard cyclic per-representative SOC.
BaseModel build_base_model(const SystemConfig& config, const TimeSeriesTable& ts,
                           const PeriodMapping& mapping);

// Demand of zone `zone` at step t of representative w, read from the
// designated period's slice of the original series. 0-based w and t.
double representative_demand(const TimeSeriesTable& ts, const PeriodMapping& mapping,
                             const std::string& zone, int w, int t);

}  // namespace ldslab
