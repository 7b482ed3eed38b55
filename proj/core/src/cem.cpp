#include "ldslab/cem.hpp"

#include <chrono>

namespace ldslab {

namespace {

std::string wt_suffix(int w, int t) {
  return "_w" + std::to_string(w + 1) + "_t" + std::to_string(t + 1);
}

}  // namespace

double representative_demand(const TimeSeriesTable& ts, const PeriodMapping& mapping,
                             const std::string& zone, int w, int t) {
  if (w < 0 || w >= mapping.num_representatives || t < 0 || t >= mapping.steps_per_period) {
    throw IndexError("representative_demand: (w, t) = (" + std::to_string(w + 1) + ", " +
                     std::to_string(t + 1) + ") outside W x T");
  }
  const std::vector<double>& demand = ts.column("demand." + zone);
  const std::size_t h = static_cast<std::size_t>(mapping.designated[w]) *
                            static_cast<std::size_t>(mapping.steps_per_period) +
                        static_cast<std::size_t>(t);
  if (h >= demand.size()) {
    throw IndexError("representative_demand: step " + std::to_string(h + 1) +
                     " outside the horizon");
  }
  return demand[h];
}

BaseModel build_base_model(const SystemConfig& config, const TimeSeriesTable& ts,
                           const PeriodMapping& mapping) {
  const auto start = std::chrono::steady_clock::now();

  const int T = config.horizon.steps_per_period;
  const int W = mapping.num_representatives;
  if (mapping.steps_per_period != T ||
      mapping.num_periods * mapping.steps_per_period != config.horizon.total_steps) {
    throw MappingMismatch("mapping covers " +
                          std::to_string(mapping.num_periods * mapping.steps_per_period) +
                          " steps, config horizon has " +
                          std::to_string(config.horizon.total_steps));
  }

  BaseModel base;
  LpModel& model = base.model;
  CemHandles& handles = base.handles;
  handles.num_representatives = W;
  handles.steps_per_period = T;

  const double dt = config.horizon.dt_hours;
  const int steps = W * T;
  auto weighted = [&](int w, double per_step_cost) {
    return mapping.weight[w] * dt * per_step_cost;
  };

  // Investment and operating variables.
  for (const Generator& g : config.generators) {
    CemGeneratorHandles gh;
    gh.capacity = model.add_variable("cap_" + g.name, 0.0, kInfinity, g.capex);
    gh.generation.resize(steps);
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        gh.generation[w * T + t] = model.add_variable("gen_" + g.name + wt_suffix(w, t), 0.0,
                                                      kInfinity, weighted(w, g.varcost));
      }
    }
    handles.generators.push_back(std::move(gh));
  }

  for (const Storage& s : config.storages) {
    CemStorageHandles sh;
    sh.energy_capacity = model.add_variable("ecap_" + s.name, 0.0, kInfinity, s.capex_energy);
    sh.power_capacity = model.add_variable("pcap_" + s.name, 0.0, kInfinity, s.capex_power);
    sh.charge.resize(steps);
    sh.discharge.resize(steps);
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        sh.charge[w * T + t] =
            model.add_variable("cha_" + s.name + wt_suffix(w, t), 0.0, kInfinity, 0.0);
        sh.discharge[w * T + t] =
            model.add_variable("dis_" + s.name + wt_suffix(w, t), 0.0, kInfinity, 0.0);
      }
    }
    if (!s.is_lds) {
      sh.soc_cyclic.resize(steps);
      for (int w = 0; w < W; ++w) {
        for (int t = 0; t < T; ++t) {
          sh.soc_cyclic[w * T + t] =
              model.add_variable("soc_" + s.name + wt_suffix(w, t), 0.0, kInfinity, 0.0);
        }
      }
    }
    handles.storages.push_back(std::move(sh));
  }

  for (std::size_t l = 0; l < config.lines.size(); ++l) {
    const Line& line = config.lines[l];
    const std::string tag =
        "line" + std::to_string(l + 1) + "_" + line.from_zone + "_" + line.to_zone;
    CemLineHandles lh;
    lh.capacity = model.add_variable("cap_" + tag, 0.0, kInfinity, line.capex);
    lh.flow_forward.resize(steps);
    lh.flow_reverse.resize(steps);
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        lh.flow_forward[w * T + t] =
            model.add_variable("fwd_" + tag + wt_suffix(w, t), 0.0, kInfinity, 0.0);
        lh.flow_reverse[w * T + t] =
            model.add_variable("rev_" + tag + wt_suffix(w, t), 0.0, kInfinity, 0.0);
      }
    }
    handles.lines.push_back(std::move(lh));
  }

  handles.nse.resize(config.zones.size());
  for (std::size_t z = 0; z < config.zones.size(); ++z) {
    handles.nse[z].resize(steps);
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        handles.nse[z][w * T + t] =
            model.add_variable("nse_" + config.zones[z] + wt_suffix(w, t), 0.0, kInfinity,
                               weighted(w, config.nse_penalty));
      }
    }
  }

  // Zone balance: generation + discharge - charge + line inflow - outflow
  // + nse = demand at the designated period's step.
  for (std::size_t z = 0; z < config.zones.size(); ++z) {
    const std::string& zone = config.zones[z];
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        const int step = w * T + t;
        std::vector<RowCoeff> coeffs;
        for (std::size_t g = 0; g < config.generators.size(); ++g) {
          if (config.generators[g].zone == zone) {
            coeffs.push_back({handles.generators[g].generation[step], 1.0});
          }
        }
        for (std::size_t s = 0; s < config.storages.size(); ++s) {
          if (config.storages[s].zone == zone) {
            coeffs.push_back({handles.storages[s].discharge[step], 1.0});
            coeffs.push_back({handles.storages[s].charge[step], -1.0});
          }
        }
        for (std::size_t l = 0; l < config.lines.size(); ++l) {
          if (config.lines[l].to_zone == zone) {
            coeffs.push_back({handles.lines[l].flow_forward[step], 1.0});
            coeffs.push_back({handles.lines[l].flow_reverse[step], -1.0});
          }
          if (config.lines[l].from_zone == zone) {
            coeffs.push_back({handles.lines[l].flow_forward[step], -1.0});
            coeffs.push_back({handles.lines[l].flow_reverse[step], 1.0});
          }
        }
        coeffs.push_back({handles.nse[z][step], 1.0});
        model.add_row("bal_" + zone + wt_suffix(w, t), RowSense::equal,
                      representative_demand(ts, mapping, zone, w, t), coeffs);
      }
    }
  }

  // Generation capacity: gen <= cap * availability(designated step).
  for (std::size_t g = 0; g < config.generators.size(); ++g) {
    const Generator& gen = config.generators[g];
    const std::vector<double>* availability = nullptr;
    if (gen.kind == GeneratorKind::vre) {
      availability = &ts.column(gen.availability_series);
    }
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        const int step = w * T + t;
        double avail = 1.0;
        if (availability) {
          const std::size_t h = static_cast<std::size_t>(mapping.designated[w]) * T + t;
          avail = (*availability)[h];
        }
        const RowCoeff coeffs[] = {{handles.generators[g].generation[step], 1.0},
                                   {handles.generators[g].capacity, -avail}};
        model.add_row("gcap_" + gen.name + wt_suffix(w, t), RowSense::less_equal, 0.0, coeffs);
      }
    }
  }

  // Storage power limits and the cyclic SOC of short-duration storages.
  for (std::size_t s = 0; s < config.storages.size(); ++s) {
    const Storage& stor = config.storages[s];
    const CemStorageHandles& sh = handles.storages[s];
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        const int step = w * T + t;
        const RowCoeff cha[] = {{sh.charge[step], 1.0}, {sh.power_capacity, -1.0}};
        model.add_row("pcha_" + stor.name + wt_suffix(w, t), RowSense::less_equal, 0.0, cha);
        const RowCoeff dis[] = {{sh.discharge[step], 1.0}, {sh.power_capacity, -1.0}};
        model.add_row("pdis_" + stor.name + wt_suffix(w, t), RowSense::less_equal, 0.0, dis);
      }
    }
    if (stor.is_lds) continue;
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        const int step = w * T + t;
        const int prev = w * T + (t == 0 ? T - 1 : t - 1);  // cyclic within the period
        const RowCoeff balance[] = {{sh.soc_cyclic[step], 1.0},
                                    {sh.soc_cyclic[prev], -(1.0 - stor.eta_sdc)},
                                    {sh.charge[step], -stor.eta_cha * dt},
                                    {sh.discharge[step], dt / stor.eta_dis}};
        model.add_row("scyc_" + stor.name + wt_suffix(w, t), RowSense::equal, 0.0, balance);
        const RowCoeff cap[] = {{sh.soc_cyclic[step], 1.0}, {sh.energy_capacity, -1.0}};
        model.add_row("scap_" + stor.name + wt_suffix(w, t), RowSense::less_equal, 0.0, cap);
      }
    }
  }

  // Line capacity limits.
  for (std::size_t l = 0; l < config.lines.size(); ++l) {
    const Line& line = config.lines[l];
    const std::string tag =
        "line" + std::to_string(l + 1) + "_" + line.from_zone + "_" + line.to_zone;
    for (int w = 0; w < W; ++w) {
      for (int t = 0; t < T; ++t) {
        const int step = w * T + t;
        const RowCoeff fwd[] = {{handles.lines[l].flow_forward[step], 1.0},
                                {handles.lines[l].capacity, -1.0}};
        model.add_row("fcap_" + tag + wt_suffix(w, t), RowSense::less_equal, 0.0, fwd);
        const RowCoeff rev[] = {{handles.lines[l].flow_reverse[step], 1.0},
                                {handles.lines[l].capacity, -1.0}};
        model.add_row("rcap_" + tag + wt_suffix(w, t), RowSense::less_equal, 0.0, rev);
      }
    }
  }

  base.build_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return base;
}

}  // namespace ldslab
