#include "ldslab/lds.hpp"

#include <cmath>

namespace ldslab {

std::string_view formulation_name(Formulation f) {
  switch (f) {
    case Formulation::explicit_hourly:
      return "explicit-hourly";
    case Formulation::implicit_hourly:
      return "implicit-hourly";
    case Formulation::implicit_minmax:
      return "implicit-minmax";
    case Formulation::original_relaxed:
      return "original";
  }
  return "explicit-hourly";
}

std::optional<Formulation> parse_formulation(std::string_view name) {
  if (name == "explicit-hourly") return Formulation::explicit_hourly;
  if (name == "implicit-hourly") return Formulation::implicit_hourly;
  if (name == "implicit-minmax") return Formulation::implicit_minmax;
  if (name == "original") return Formulation::original_relaxed;
  return std::nullopt;
}

namespace {

struct StorageContext {
  const Storage* params;
  const CemStorageHandles* cem;
  std::string tag;     // variable/row name stem
  int N, T, W, H;
  double dt;
  double keep;         // 1 - eta_sdc
  double cha_gain;     // eta_cha * dt
  double dis_loss;     // dt / eta_dis
};

std::string wt(int w, int t) {
  return "_w" + std::to_string(w + 1) + "_t" + std::to_string(t + 1);
}

// Eqs. tracking the full-horizon SOC step by step, with the wraparound step
// closing the cycle, and SOC <= C rows.
void build_explicit(LpModel& model, const PeriodMapping& mapping, const StorageContext& ctx,
                    LdsStorageHandles& out) {
  out.soc_hourly.resize(ctx.H);
  for (int h = 0; h < ctx.H; ++h) {
    out.soc_hourly[h] =
        model.add_variable("socx_" + ctx.tag + "_h" + std::to_string(h + 1), 0.0, kInfinity, 0.0);
  }
  for (int n = 0; n < ctx.N; ++n) {
    const int w = mapping.rep_of[n];
    for (int t = 0; t < ctx.T; ++t) {
      const int h = n * ctx.T + t;
      const int next = (h + 1) % ctx.H;
      const int step = w * ctx.T + t;
      const RowCoeff balance[] = {{out.soc_hourly[next], 1.0},
                                  {out.soc_hourly[h], -ctx.keep},
                                  {ctx.cem->charge[step], -ctx.cha_gain},
                                  {ctx.cem->discharge[step], ctx.dis_loss}};
      model.add_row("socb_" + ctx.tag + "_h" + std::to_string(h + 1), RowSense::equal, 0.0,
                    balance);
    }
  }
  for (int h = 0; h < ctx.H; ++h) {
    const RowCoeff cap[] = {{out.soc_hourly[h], 1.0}, {ctx.cem->energy_capacity, -1.0}};
    model.add_row("socc_" + ctx.tag + "_h" + std::to_string(h + 1), RowSense::less_equal, 0.0,
                  cap);
  }
}

// Intra-period deviations (zero at t=1 via a variable fix) superposed on
// inter-period levels, with hourly bound rows over every input period.
// Deviations live on the begin-of-step grid: the balance into grid point t
// carries the flows of step t-1, and the chain rows carry the final step's
// flows, so every flow of the period is accounted for exactly once.
void build_implicit_hourly(LpModel& model, const PeriodMapping& mapping,
                           const StorageContext& ctx, LdsStorageHandles& out) {
  out.soc_intra.resize(ctx.W * ctx.T);
  out.soc_inter.resize(ctx.N);
  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 0; t < ctx.T; ++t) {
      const double lo = t == 0 ? 0.0 : -kInfinity;
      const double hi = t == 0 ? 0.0 : kInfinity;
      out.soc_intra[w * ctx.T + t] =
          model.add_variable("soci_" + ctx.tag + wt(w, t), lo, hi, 0.0);
    }
  }
  for (int n = 0; n < ctx.N; ++n) {
    out.soc_inter[n] = model.add_variable("socn_" + ctx.tag + "_n" + std::to_string(n + 1),
                                          -kInfinity, kInfinity, 0.0);
  }

  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 1; t < ctx.T; ++t) {
      const int step = w * ctx.T + t;
      const RowCoeff balance[] = {{out.soc_intra[step], 1.0},
                                  {out.soc_intra[step - 1], -ctx.keep},
                                  {ctx.cem->charge[step - 1], -ctx.cha_gain},
                                  {ctx.cem->discharge[step - 1], ctx.dis_loss}};
      model.add_row("ihb_" + ctx.tag + wt(w, t), RowSense::equal, 0.0, balance);
    }
  }
  for (int n = 0; n < ctx.N; ++n) {
    // Inter-period chaining; the net change is the last grid deviation plus
    // the final step's flows, and the last row closes the cycle.
    const int next = (n + 1) % ctx.N;
    const int w = mapping.rep_of[n];
    const int last = w * ctx.T + ctx.T - 1;
    const RowCoeff chain[] = {{out.soc_inter[next], 1.0},
                              {out.soc_inter[n], -1.0},
                              {out.soc_intra[last], -ctx.keep},
                              {ctx.cem->charge[last], -ctx.cha_gain},
                              {ctx.cem->discharge[last], ctx.dis_loss}};
    model.add_row("ihn_" + ctx.tag + "_n" + std::to_string(n + 1), RowSense::equal, 0.0, chain);
  }
  for (int n = 0; n < ctx.N; ++n) {
    const int w = mapping.rep_of[n];
    for (int t = 0; t < ctx.T; ++t) {
      const double decay = std::pow(ctx.keep, t + 1);
      const RowCoeff upper[] = {{out.soc_inter[n], decay},
                                {out.soc_intra[w * ctx.T + t], 1.0},
                                {ctx.cem->energy_capacity, -1.0}};
      model.add_row("ihhi_" + ctx.tag + "_n" + std::to_string(n + 1) + "_t" + std::to_string(t + 1),
                    RowSense::less_equal, 0.0, upper);
      const RowCoeff lower[] = {{out.soc_inter[n], decay},
                                {out.soc_intra[w * ctx.T + t], 1.0}};
      model.add_row("ihlo_" + ctx.tag + "_n" + std::to_string(n + 1) + "_t" + std::to_string(t + 1),
                    RowSense::greater_equal, 0.0, lower);
    }
  }
}

// Shared structure of the min-max and original formulations: intra-period
// levels bounded to [0, C], inter-period chaining through net changes, and
// the designated-period anchor rows.
void build_minmax_core(LpModel& model, const PeriodMapping& mapping, const StorageContext& ctx,
                       bool inter_nonnegative, LdsStorageHandles& out) {
  out.soc_intra.resize(ctx.W * ctx.T);
  out.soc_inter.resize(ctx.N);
  out.net_change.resize(ctx.W);
  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 0; t < ctx.T; ++t) {
      out.soc_intra[w * ctx.T + t] =
          model.add_variable("soci_" + ctx.tag + wt(w, t), 0.0, kInfinity, 0.0);
    }
  }
  for (int n = 0; n < ctx.N; ++n) {
    out.soc_inter[n] = model.add_variable("socn_" + ctx.tag + "_n" + std::to_string(n + 1),
                                          inter_nonnegative ? 0.0 : -kInfinity, kInfinity, 0.0);
  }
  for (int w = 0; w < ctx.W; ++w) {
    out.net_change[w] = model.add_variable("dsoc_" + ctx.tag + "_w" + std::to_string(w + 1),
                                           -kInfinity, kInfinity, 0.0);
  }

  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 1; t < ctx.T; ++t) {
      const int step = w * ctx.T + t;
      const RowCoeff balance[] = {{out.soc_intra[step], 1.0},
                                  {out.soc_intra[step - 1], -ctx.keep},
                                  {ctx.cem->charge[step], -ctx.cha_gain},
                                  {ctx.cem->discharge[step], ctx.dis_loss}};
      model.add_row("mmb_" + ctx.tag + wt(w, t), RowSense::equal, 0.0, balance);
    }
  }
  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 0; t < ctx.T; ++t) {
      const RowCoeff cap[] = {{out.soc_intra[w * ctx.T + t], 1.0},
                              {ctx.cem->energy_capacity, -1.0}};
      model.add_row("mmcap_" + ctx.tag + wt(w, t), RowSense::less_equal, 0.0, cap);
    }
  }
  for (int n = 0; n < ctx.N; ++n) {
    const int next = (n + 1) % ctx.N;
    const RowCoeff chain[] = {{out.soc_inter[next], 1.0},
                              {out.soc_inter[n], -1.0},
                              {out.net_change[mapping.rep_of[n]], -1.0}};
    model.add_row("mmn_" + ctx.tag + "_n" + std::to_string(n + 1), RowSense::equal, 0.0, chain);
  }
  for (int w = 0; w < ctx.W; ++w) {
    const int anchor = mapping.designated[w];
    const RowCoeff link[] = {{out.soc_inter[anchor], 1.0},
                             {out.soc_intra[w * ctx.T + ctx.T - 1], -1.0},
                             {out.net_change[w], 1.0}};
    model.add_row("mmlink_" + ctx.tag + "_w" + std::to_string(w + 1), RowSense::equal, 0.0,
                  link);
    const RowCoeff start[] = {{out.soc_intra[w * ctx.T], 1.0},
                              {out.soc_inter[anchor], -ctx.keep},
                              {ctx.cem->charge[w * ctx.T], -ctx.cha_gain},
                              {ctx.cem->discharge[w * ctx.T], ctx.dis_loss}};
    model.add_row("mmstart_" + ctx.tag + "_w" + std::to_string(w + 1), RowSense::equal, 0.0,
                  start);
  }
}

void build_implicit_minmax(LpModel& model, const PeriodMapping& mapping,
                           const StorageContext& ctx, LdsStorageHandles& out) {
  build_minmax_core(model, mapping, ctx, /*inter_nonnegative=*/false, out);

  out.max_positive.resize(ctx.W);
  out.max_negative.resize(ctx.W);
  for (int w = 0; w < ctx.W; ++w) {
    // Sign bounds stand in for the zero deviation at t=1.
    out.max_positive[w] = model.add_variable("dpos_" + ctx.tag + "_w" + std::to_string(w + 1),
                                             0.0, kInfinity, 0.0);
    out.max_negative[w] = model.add_variable("dneg_" + ctx.tag + "_w" + std::to_string(w + 1),
                                             -kInfinity, 0.0, 0.0);
  }
  for (int w = 0; w < ctx.W; ++w) {
    for (int t = 1; t < ctx.T; ++t) {
      const RowCoeff pos[] = {{out.max_positive[w], 1.0},
                              {out.soc_intra[w * ctx.T + t], -1.0},
                              {out.soc_intra[w * ctx.T], 1.0}};
      model.add_row("mmpos_" + ctx.tag + wt(w, t), RowSense::greater_equal, 0.0, pos);
      const RowCoeff neg[] = {{out.max_negative[w], 1.0},
                              {out.soc_intra[w * ctx.T + t], -1.0},
                              {out.soc_intra[w * ctx.T], 1.0}};
      model.add_row("mmneg_" + ctx.tag + wt(w, t), RowSense::less_equal, 0.0, neg);
    }
  }
  for (int n = 0; n < ctx.N; ++n) {
    const int w = mapping.rep_of[n];
    const RowCoeff high[] = {{out.soc_inter[n], ctx.keep},
                             {ctx.cem->charge[w * ctx.T], ctx.cha_gain},
                             {ctx.cem->discharge[w * ctx.T], -ctx.dis_loss},
                             {out.max_positive[w], 1.0},
                             {ctx.cem->energy_capacity, -1.0}};
    model.add_row("mmhi_" + ctx.tag + "_n" + std::to_string(n + 1), RowSense::less_equal, 0.0,
                  high);
    const RowCoeff low[] = {{out.soc_inter[n], ctx.keep},
                            {ctx.cem->charge[w * ctx.T], ctx.cha_gain},
                            {ctx.cem->discharge[w * ctx.T], -ctx.dis_loss},
                            {out.max_negative[w], 1.0}};
    model.add_row("mmlo_" + ctx.tag + "_n" + std::to_string(n + 1), RowSense::greater_equal, 0.0,
                  low);
  }
}

void build_original(LpModel& model, const PeriodMapping& mapping, const StorageContext& ctx,
                    LdsStorageHandles& out) {
  build_minmax_core(model, mapping, ctx, /*inter_nonnegative=*/true, out);
  for (int n = 0; n < ctx.N; ++n) {
    const RowCoeff cap[] = {{out.soc_inter[n], 1.0}, {ctx.cem->energy_capacity, -1.0}};
    model.add_row("ogcap_" + ctx.tag + "_n" + std::to_string(n + 1), RowSense::less_equal, 0.0,
                  cap);
  }
}

}  // namespace

LdsStorageHandles apply_formulation_to_storage(LpModel& model, const CemHandles& cem,
                                               const PeriodMapping& mapping,
                                               const SystemConfig& config,
                                               std::size_t storage_index, Formulation f) {
  const Storage& params = config.storages.at(storage_index);
  if (!params.is_lds) {
    throw NotLds("storage '" + params.name + "' is not flagged as long-duration");
  }
  StorageContext ctx;
  ctx.params = &params;
  ctx.cem = &cem.storages.at(storage_index);
  ctx.tag = params.name;
  ctx.N = mapping.num_periods;
  ctx.T = mapping.steps_per_period;
  ctx.W = mapping.num_representatives;
  ctx.H = ctx.N * ctx.T;
  ctx.dt = config.horizon.dt_hours;
  ctx.keep = 1.0 - params.eta_sdc;
  ctx.cha_gain = params.eta_cha * ctx.dt;
  ctx.dis_loss = ctx.dt / params.eta_dis;

  if (f == Formulation::implicit_minmax || f == Formulation::original_relaxed) {
    if (mapping.designated.size() != static_cast<std::size_t>(ctx.W)) {
      throw MissingDesignated("mapping lacks designated periods for its representatives");
    }
    for (int w = 0; w < ctx.W; ++w) {
      const int n = mapping.designated[w];
      if (n < 0 || n >= ctx.N || mapping.rep_of[n] != w) {
        throw MissingDesignated("representative " + std::to_string(w + 1) +
                                " has no valid designated period");
      }
    }
  }

  LdsStorageHandles out;
  out.storage = static_cast<int>(storage_index);
  switch (f) {
    case Formulation::explicit_hourly:
      build_explicit(model, mapping, ctx, out);
      break;
    case Formulation::implicit_hourly:
      build_implicit_hourly(model, mapping, ctx, out);
      break;
    case Formulation::implicit_minmax:
      build_implicit_minmax(model, mapping, ctx, out);
      break;
    case Formulation::original_relaxed:
      build_original(model, mapping, ctx, out);
      break;
  }
  return out;
}

LdsHandles apply_formulation(LpModel& model, const CemHandles& cem, const PeriodMapping& mapping,
                             const SystemConfig& config, Formulation f) {
  LdsHandles handles;
  handles.formulation = f;
  for (std::size_t s = 0; s < config.storages.size(); ++s) {
    if (!config.storages[s].is_lds) continue;
    handles.storages.push_back(apply_formulation_to_storage(model, cem, mapping, config, s, f));
  }
  return handles;
}

LdsHandles apply_explicit_hourly(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config) {
  return apply_formulation(model, cem, mapping, config, Formulation::explicit_hourly);
}

LdsHandles apply_implicit_hourly(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config) {
  return apply_formulation(model, cem, mapping, config, Formulation::implicit_hourly);
}

LdsHandles apply_implicit_minmax(LpModel& model, const CemHandles& cem,
                                 const PeriodMapping& mapping, const SystemConfig& config) {
  return apply_formulation(model, cem, mapping, config, Formulation::implicit_minmax);
}

LdsHandles apply_original_relaxed(LpModel& model, const CemHandles& cem,
                                  const PeriodMapping& mapping, const SystemConfig& config) {
  return apply_formulation(model, cem, mapping, config, Formulation::original_relaxed);
}

}  // namespace ldslab
