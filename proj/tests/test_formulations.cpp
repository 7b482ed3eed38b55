#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ldslab/analysis.hpp"
#include "ldslab/cem.hpp"
#include "ldslab/lds.hpp"
#include "ldslab/simplex.hpp"
#include "support/instances.hpp"
#include "support/lp_check.hpp"
#include "support/oracle_fullres.hpp"
#include "support/paths.hpp"

using namespace ldslab;

namespace {

struct Fixture {
  SystemConfig config;
  TimeSeriesTable ts;
  PeriodMapping mapping;
  BaseModel base;
};

Fixture load_fixA() {
  Fixture f;
  f.config = load_config(testsupport::fixture_dir() / "fixA.toml");
  f.ts = load_timeseries(testsupport::fixture_dir() / "fixA.csv", f.config);
  f.mapping = aggregate(f.config, f.ts);
  f.base = build_base_model(f.config, f.ts, f.mapping);
  return f;
}

struct Delta {
  int rows;
  int vars;
};

Delta apply_and_measure(const Fixture& f, Formulation formulation, LpModel* out = nullptr,
                        LdsHandles* handles_out = nullptr) {
  LpModel model = f.base.model;
  LdsHandles handles = apply_formulation(model, f.base.handles, f.mapping, f.config, formulation);
  Delta d{model.num_rows() - f.base.model.num_rows(),
          model.num_vars() - f.base.model.num_vars()};
  if (out) *out = std::move(model);
  if (handles_out) *handles_out = std::move(handles);
  return d;
}

double solve_objective(const LpModel& model) {
  const Solution solution = solve_reference(model);
  REQUIRE(solution.status == SolveStatus::optimal);
  return solution.objective;
}

// Synthetic W=2 mapping with alternating assignment over N periods.
PeriodMapping alternating_mapping(int N, int T) {
  PeriodMapping mapping;
  mapping.num_periods = N;
  mapping.steps_per_period = T;
  mapping.num_representatives = 2;
  mapping.rep_of.resize(N);
  for (int n = 0; n < N; ++n) mapping.rep_of[n] = n % 2;
  mapping.designated = {0, 1};
  mapping.weight = {(N + 1) / 2, N / 2};
  return mapping;
}

}  // namespace

TEST_CASE("variable and row counts per formulation (N=4, T=4, W=2)") {
  Fixture f = load_fixA();
  REQUIRE(f.mapping.num_representatives == 2);

  const Delta explicit_d = apply_and_measure(f, Formulation::explicit_hourly);
  CHECK(explicit_d.vars == 16);
  CHECK(explicit_d.rows == 32);

  const Delta ih = apply_and_measure(f, Formulation::implicit_hourly);
  CHECK(ih.vars == 12);  // |W|T + N
  CHECK(ih.rows == 42);  // |W|(T-1) + N + 2NT

  const Delta mm = apply_and_measure(f, Formulation::implicit_minmax);
  CHECK(mm.vars == 18);  // |W|T + N + 3|W|
  CHECK(mm.rows == 42);  // |W|(4T-1) + 3N

  const Delta og = apply_and_measure(f, Formulation::original_relaxed);
  CHECK(og.vars == 14);  // |W|T + N + |W|
  CHECK(og.rows == 26);  // |W|(2T+1) + 2N
}

TEST_CASE("min-max is strictly smallest at N=8, T=4, W=2") {
  testsupport::TestInstance inst =
      testsupport::make_instance(42, {.zones = 1, .num_periods = 8, .steps_per_period = 4});
  const PeriodMapping mapping = alternating_mapping(8, 4);
  BaseModel base = build_base_model(inst.config, inst.ts, mapping);

  auto delta_rows = [&](Formulation formulation) {
    LpModel model = base.model;
    apply_formulation(model, base.handles, mapping, inst.config, formulation);
    return model.num_rows() - base.model.num_rows();
  };
  const int mm = delta_rows(Formulation::implicit_minmax);
  const int ih = delta_rows(Formulation::implicit_hourly);
  const int ex = delta_rows(Formulation::explicit_hourly);
  CHECK(mm == 54);
  CHECK(ih == 78);
  CHECK(ex == 64);
  CHECK(mm < ex);
  CHECK(ex < ih);
}

TEST_CASE("explicit rows accept any constant SOC when flows are zero") {
  Fixture f = load_fixA();
  LpModel model;
  LdsHandles handles;
  apply_and_measure(f, Formulation::explicit_hourly, &model, &handles);

  std::vector<double> x(model.num_vars(), 0.0);
  const LdsStorageHandles& sh = handles.storages[0];
  const int cap = f.base.handles.storages[0].energy_capacity;
  for (double level : {0.0, 3.5, 10.0}) {
    for (int h : sh.soc_hourly) x[h] = level;
    x[cap] = 10.0;  // C >= level
    double worst = 0.0;
    for (int r = f.base.model.num_rows(); r < model.num_rows(); ++r) {
      const Row& row = model.row(r);
      double lhs = 0.0;
      for (const RowCoeff& c : row.coeffs) lhs += c.value * x[c.var];
      switch (row.sense) {
        case RowSense::less_equal:
          worst = std::max(worst, lhs - row.rhs);
          break;
        case RowSense::greater_equal:
          worst = std::max(worst, row.rhs - lhs);
          break;
        case RowSense::equal:
          worst = std::max(worst, std::abs(lhs - row.rhs));
          break;
      }
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("implicit-hourly zero-flow case pins deviations at zero") {
  Fixture f = load_fixA();
  LpModel model;
  LdsHandles handles;
  apply_and_measure(f, Formulation::implicit_hourly, &model, &handles);
  const LdsStorageHandles& sh = handles.storages[0];

  // SOC_intra == 0, SOC_inter == constant c: rows reduce to 0 <= c <= C.
  std::vector<double> x(model.num_vars(), 0.0);
  x[f.base.handles.storages[0].energy_capacity] = 8.0;
  for (int n : sh.soc_inter) x[n] = 8.0;  // upper boundary
  double worst = 0.0;
  for (int r = f.base.model.num_rows(); r < model.num_rows(); ++r) {
    const Row& row = model.row(r);
    double lhs = 0.0;
    for (const RowCoeff& c : row.coeffs) lhs += c.value * x[c.var];
    if (row.sense == RowSense::less_equal) worst = std::max(worst, lhs - row.rhs);
    if (row.sense == RowSense::greater_equal) worst = std::max(worst, row.rhs - lhs);
    if (row.sense == RowSense::equal) worst = std::max(worst, std::abs(lhs - row.rhs));
  }
  CHECK(worst <= 1e-12);

  // c above C must violate the upper bound rows.
  for (int n : sh.soc_inter) x[n] = 9.0;
  bool violated = false;
  for (int r = f.base.model.num_rows(); r < model.num_rows(); ++r) {
    const Row& row = model.row(r);
    if (row.sense != RowSense::less_equal) continue;
    double lhs = 0.0;
    for (const RowCoeff& c : row.coeffs) lhs += c.value * x[c.var];
    if (lhs > row.rhs + 1e-12) violated = true;
  }
  CHECK(violated);
}

TEST_CASE("intra deviation at the first step is fixed to zero (implicit-hourly)") {
  Fixture f = load_fixA();
  LpModel model;
  LdsHandles handles;
  apply_and_measure(f, Formulation::implicit_hourly, &model, &handles);
  const LdsStorageHandles& sh = handles.storages[0];
  const int T = f.mapping.steps_per_period;
  for (int w = 0; w < f.mapping.num_representatives; ++w) {
    const Variable& first = model.variable(sh.soc_intra[w * T]);
    CHECK(first.lower == 0.0);
    CHECK(first.upper == 0.0);
    const Variable& later = model.variable(sh.soc_intra[w * T + 1]);
    CHECK(later.lower == -kInfinity);
    CHECK(later.upper == kInfinity);
  }
}

TEST_CASE("FIX-A frozen reference values") {
  // Computed once with the independent full-resolution oracle and frozen;
  // FIX-A's period pairs are exact duplicates, so the aggregated optimum
  // coincides with the full-resolution one.
  constexpr double kFixAObjective = 17570.0637567435;
  constexpr double kFixACapacity = 463.2417851888;

  Fixture f = load_fixA();
  const Solution oracle = testsupport::solve_fullres_oracle(f.config, f.ts);
  REQUIRE(oracle.status == SolveStatus::optimal);
  CHECK(oracle.objective == doctest::Approx(kFixAObjective).epsilon(1e-9));

  LpModel model;
  apply_and_measure(f, Formulation::explicit_hourly, &model);
  const Solution solution = solve_reference(model);
  REQUIRE(solution.status == SolveStatus::optimal);
  CHECK(solution.objective == doctest::Approx(kFixAObjective).epsilon(1e-6));
  CHECK(solution.values[f.base.handles.storages[0].energy_capacity] ==
        doctest::Approx(kFixACapacity).epsilon(1e-6));
}

TEST_CASE("explicit formulation with identity mapping matches the full-resolution oracle") {
  Fixture f = load_fixA();
  const PeriodMapping identity = identity_mapping(4, 4);
  BaseModel base = build_base_model(f.config, f.ts, identity);
  LpModel model = base.model;
  apply_formulation(model, base.handles, identity, f.config, Formulation::explicit_hourly);

  const double objective = solve_objective(model);
  const Solution oracle = testsupport::solve_fullres_oracle(f.config, f.ts);
  REQUIRE(oracle.status == SolveStatus::optimal);
  CHECK(objective ==
        doctest::Approx(oracle.objective).epsilon(1e-6).scale(1.0 + std::abs(oracle.objective)));
}

TEST_CASE("the three correct formulations agree on FIX-A; storage is actually used") {
  Fixture f = load_fixA();
  LpModel explicit_model, ih_model, mm_model, og_model;
  apply_and_measure(f, Formulation::explicit_hourly, &explicit_model);
  apply_and_measure(f, Formulation::implicit_hourly, &ih_model);
  apply_and_measure(f, Formulation::implicit_minmax, &mm_model);
  apply_and_measure(f, Formulation::original_relaxed, &og_model);

  const Solution ex = solve_reference(explicit_model);
  REQUIRE(ex.status == SolveStatus::optimal);
  const double scale = 1.0 + std::abs(ex.objective);
  CHECK(solve_objective(ih_model) == doctest::Approx(ex.objective).epsilon(1e-6).scale(scale));
  CHECK(solve_objective(mm_model) == doctest::Approx(ex.objective).epsilon(1e-6).scale(scale));
  CHECK(solve_objective(og_model) <= ex.objective + 1e-9 * scale);

  // The fixture is only meaningful if the store participates.
  CHECK(ex.values[f.base.handles.storages[0].energy_capacity] > 1.0);
}

TEST_CASE("relaxation ordering holds on randomized instances") {
  for (std::uint64_t seed = 500; seed < 506; ++seed) {
    testsupport::TestInstance inst = testsupport::make_instance(
        seed, {.zones = 1, .num_periods = 6, .steps_per_period = 4});
    const PeriodMapping mapping = aggregate(inst.config, inst.ts);
    BaseModel base = build_base_model(inst.config, inst.ts, mapping);

    LpModel mm = base.model;
    apply_formulation(mm, base.handles, mapping, inst.config, Formulation::implicit_minmax);
    LpModel og = base.model;
    apply_formulation(og, base.handles, mapping, inst.config, Formulation::original_relaxed);

    const double mm_obj = solve_objective(mm);
    const double og_obj = solve_objective(og);
    CHECK(og_obj <= mm_obj + 1e-9 * (1.0 + std::abs(mm_obj)));
  }
}

TEST_CASE("non-LDS storages are rejected") {
  Fixture f = load_fixA();
  f.config.storages[0].is_lds = false;
  BaseModel base = build_base_model(f.config, f.ts, f.mapping);
  LpModel model = base.model;
  CHECK_THROWS_AS(apply_formulation_to_storage(model, base.handles, f.mapping, f.config, 0,
                                               Formulation::explicit_hourly),
                  NotLds);
  // The whole-model applier simply skips it.
  const LdsHandles handles =
      apply_formulation(model, base.handles, f.mapping, f.config, Formulation::explicit_hourly);
  CHECK(handles.storages.empty());
  CHECK(model.num_rows() == base.model.num_rows());
}

TEST_CASE("min-max requires designated periods") {
  Fixture f = load_fixA();
  PeriodMapping broken = f.mapping;
  broken.designated.clear();
  LpModel model = f.base.model;
  CHECK_THROWS_AS(
      apply_formulation(model, f.base.handles, broken, f.config, Formulation::implicit_minmax),
      MissingDesignated);
  broken = f.mapping;
  broken.designated[0] = broken.designated[1];
  LpModel model2 = f.base.model;
  CHECK_THROWS_AS(
      apply_formulation(model2, f.base.handles, broken, f.config, Formulation::original_relaxed),
      MissingDesignated);
}

TEST_CASE("formulation names round-trip") {
  for (Formulation f : kAllFormulations) {
    const auto parsed = parse_formulation(formulation_name(f));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == f);
  }
  CHECK_FALSE(parse_formulation("bogus").has_value());
}
