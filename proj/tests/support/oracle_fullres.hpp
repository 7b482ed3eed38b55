#pragma once

// Independent full-resolution oracle: builds the un-aggregated LP over all H
// steps directly from the config and timeseries, with its own bookkeeping,
// and solves it with the reference simplex. Long-duration storages chain
// their content cyclically over the whole horizon; short-duration storages
// chain cyclically within each period.

#include <string>
#include <vector>

#include "ldslab/config.hpp"
#include "ldslab/simplex.hpp"
#include "ldslab/timeseries.hpp"

namespace testsupport {

struct FullresOracle {
  ldslab::LpModel model;
  std::vector<std::vector<int>> soc;  // [storage][h], content at the start of step h
  std::vector<int> storage_capacity;  // [storage]
};

inline FullresOracle build_fullres_oracle(const ldslab::SystemConfig& config,
                                          const ldslab::TimeSeriesTable& ts) {
  using namespace ldslab;
  FullresOracle oracle;
  LpModel& lp = oracle.model;
  const int H = config.horizon.total_steps;
  const int T = config.horizon.steps_per_period;
  const double dt = config.horizon.dt_hours;

  const std::size_t nz = config.zones.size();
  const std::size_t ng = config.generators.size();
  const std::size_t ns = config.storages.size();
  const std::size_t nl = config.lines.size();

  std::vector<int> gen_cap(ng), stor_e(ns), stor_p(ns), line_cap(nl);
  std::vector<std::vector<int>> gen(ng, std::vector<int>(H));
  std::vector<std::vector<int>> cha(ns, std::vector<int>(H)), dis(ns, std::vector<int>(H));
  std::vector<std::vector<int>> fwd(nl, std::vector<int>(H)), rev(nl, std::vector<int>(H));
  std::vector<std::vector<int>> nse(nz, std::vector<int>(H));
  oracle.soc.assign(ns, std::vector<int>(H));
  oracle.storage_capacity.resize(ns);

  for (std::size_t g = 0; g < ng; ++g) {
    gen_cap[g] = lp.add_variable("FK" + std::to_string(g), 0, kInfinity,
                                 config.generators[g].capex);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    stor_e[s] = lp.add_variable("FE" + std::to_string(s), 0, kInfinity,
                                config.storages[s].capex_energy);
    stor_p[s] = lp.add_variable("FP" + std::to_string(s), 0, kInfinity,
                                config.storages[s].capex_power);
    oracle.storage_capacity[s] = stor_e[s];
  }
  for (std::size_t l = 0; l < nl; ++l) {
    line_cap[l] = lp.add_variable("FL" + std::to_string(l), 0, kInfinity,
                                  config.lines[l].capex);
  }
  for (int h = 0; h < H; ++h) {
    const std::string hs = "_" + std::to_string(h);
    for (std::size_t g = 0; g < ng; ++g) {
      gen[g][h] = lp.add_variable("Fg" + std::to_string(g) + hs, 0, kInfinity,
                                  dt * config.generators[g].varcost);
    }
    for (std::size_t s = 0; s < ns; ++s) {
      cha[s][h] = lp.add_variable("Fc" + std::to_string(s) + hs, 0, kInfinity, 0);
      dis[s][h] = lp.add_variable("Fd" + std::to_string(s) + hs, 0, kInfinity, 0);
      oracle.soc[s][h] = lp.add_variable("Fs" + std::to_string(s) + hs, 0, kInfinity, 0);
    }
    for (std::size_t l = 0; l < nl; ++l) {
      fwd[l][h] = lp.add_variable("Ff" + std::to_string(l) + hs, 0, kInfinity, 0);
      rev[l][h] = lp.add_variable("Fr" + std::to_string(l) + hs, 0, kInfinity, 0);
    }
    for (std::size_t z = 0; z < nz; ++z) {
      nse[z][h] = lp.add_variable("Fn" + std::to_string(z) + hs, 0, kInfinity,
                                  dt * config.nse_penalty);
    }
  }

  for (int h = 0; h < H; ++h) {
    const std::string hs = "_" + std::to_string(h);
    for (std::size_t z = 0; z < nz; ++z) {
      std::vector<RowCoeff> c;
      for (std::size_t g = 0; g < ng; ++g) {
        if (config.generators[g].zone == config.zones[z]) c.push_back({gen[g][h], 1});
      }
      for (std::size_t s = 0; s < ns; ++s) {
        if (config.storages[s].zone == config.zones[z]) {
          c.push_back({dis[s][h], 1});
          c.push_back({cha[s][h], -1});
        }
      }
      for (std::size_t l = 0; l < nl; ++l) {
        if (config.lines[l].to_zone == config.zones[z]) {
          c.push_back({fwd[l][h], 1});
          c.push_back({rev[l][h], -1});
        }
        if (config.lines[l].from_zone == config.zones[z]) {
          c.push_back({fwd[l][h], -1});
          c.push_back({rev[l][h], 1});
        }
      }
      c.push_back({nse[z][h], 1});
      lp.add_row("FB" + std::to_string(z) + hs, RowSense::equal,
                 ts.column("demand." + config.zones[z])[h], c);
    }
    for (std::size_t g = 0; g < ng; ++g) {
      double avail = 1.0;
      if (config.generators[g].kind == GeneratorKind::vre) {
        avail = ts.column(config.generators[g].availability_series)[h];
      }
      const RowCoeff c[] = {{gen[g][h], 1}, {gen_cap[g], -avail}};
      lp.add_row("FG" + std::to_string(g) + hs, RowSense::less_equal, 0, c);
    }
    for (std::size_t s = 0; s < ns; ++s) {
      const Storage& st = config.storages[s];
      const RowCoeff pc[] = {{cha[s][h], 1}, {stor_p[s], -1}};
      lp.add_row("FPc" + std::to_string(s) + hs, RowSense::less_equal, 0, pc);
      const RowCoeff pd[] = {{dis[s][h], 1}, {stor_p[s], -1}};
      lp.add_row("FPd" + std::to_string(s) + hs, RowSense::less_equal, 0, pd);

      // Content chaining: LDS wraps over the whole horizon, short-duration
      // storage wraps inside its own period.
      int next;
      if (st.is_lds) {
        next = (h + 1) % H;
      } else {
        const int period = h / T;
        next = period * T + (h + 1 - period * T) % T;
      }
      const RowCoeff chain[] = {{oracle.soc[s][next], 1},
                                {oracle.soc[s][h], -(1.0 - st.eta_sdc)},
                                {cha[s][h], -st.eta_cha * dt},
                                {dis[s][h], dt / st.eta_dis}};
      lp.add_row("FS" + std::to_string(s) + hs, RowSense::equal, 0, chain);
      const RowCoeff cap[] = {{oracle.soc[s][h], 1}, {stor_e[s], -1}};
      lp.add_row("FC" + std::to_string(s) + hs, RowSense::less_equal, 0, cap);
    }
    for (std::size_t l = 0; l < nl; ++l) {
      const RowCoeff cf[] = {{fwd[l][h], 1}, {line_cap[l], -1}};
      lp.add_row("FLf" + std::to_string(l) + hs, RowSense::less_equal, 0, cf);
      const RowCoeff cr[] = {{rev[l][h], 1}, {line_cap[l], -1}};
      lp.add_row("FLr" + std::to_string(l) + hs, RowSense::less_equal, 0, cr);
    }
  }
  return oracle;
}

inline ldslab::Solution solve_fullres_oracle(const ldslab::SystemConfig& config,
                                             const ldslab::TimeSeriesTable& ts) {
  FullresOracle oracle = build_fullres_oracle(config, ts);
  return ldslab::solve_reference(oracle.model);
}

}  // namespace testsupport
