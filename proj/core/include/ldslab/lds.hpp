#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ldslab/cem.hpp"

namespace ldslab {

enum class Formulation {
  explicit_hourly,   // per-step SOC over the full horizon
  implicit_hourly,   // intra-period deviations + inter-period levels, hourly bounds
  implicit_minmax,   // intra-period levels + inter-period levels + extremal deviations
  original_relaxed,  // min-max structure without the extremal bounding rows
};

std::string_view formulation_name(Formulation f);
std::optional<Formulation> parse_formulation(std::string_view name);
inline constexpr Formulation kAllFormulations[] = {
    Formulation::explicit_hourly, Formulation::implicit_hourly, Formulation::implicit_minmax,
    Formulation::original_relaxed};

// Per-storage handles into the model a formulation was applied to. Which
// vectors are populated depends on the formulation tag.
struct LdsStorageHandles {
  int storage = -1;                // index into SystemConfig::storages
  std::vector<int> soc_hourly;     // explicit-hourly: one per horizon step
  std::vector<int> soc_intra;      // [w * T + t]
  std::vector<int> soc_inter;      // [n]
  std::vector<int> net_change;     // [w]
  std::vector<int> max_positive;   // [w] (min-max only)
  std::vector<int> max_negative;   // [w] (min-max only)
};

struct LdsHandles {
  Formulation formulation = Formulation::explicit_hourly;
  std::vector<LdsStorageHandles> storages;  // one entry per LDS storage
};

// Applies a formulation to one storage; throws NotLds for non-LDS storages
// and MissingDesignated when the mapping lacks designated periods needed by
// the min-max and original formulations.
LdsStorageHandles apply_formulation_to_storage(LpModel& model, const CemHandles& cem,
                                               const PeriodMapping& mapping,
                                               const SystemConfig& config,
                                               std::size_t storage_index, Formulation f);

// Applies a formulation to every LDS storage of the config.
LdsHandles apply_formulation(LpModel& model, const CemHandles& cem,
                             const PeriodMapping& mapping, const SystemConfig& config,
                             Formulation f);

LdsHandles apply_explicit_hourly(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config);
LdsHandles apply_implicit_hourly(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config);
LdsHandles apply_implicit_minmax(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config);
LdsHandles apply_original_relaxed(LpModel& model, const CemHandles& cem,
                                  const PeriodMapping& mapping, const SystemConfig& config);

}  // namespace ldslab
