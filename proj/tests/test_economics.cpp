#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "essize/economics.hpp"

using essize::ParameterError;
namespace econ = essize::econ;
namespace sizing = essize::sizing;

namespace {

econ::EconScenario defaults_with_lambda(double lambda) {
    econ::EconScenario s;
    s.lambda = lambda;
    return s;
}

}  // namespace

TEST_CASE("segment and case names round-trip") {
    for (auto s : {econ::Segment::residential, econ::Segment::small_ci, econ::Segment::large_ci})
        CHECK(econ::segment_from_name(econ::segment_name(s)) == s);
    for (auto c : {econ::ScenarioCase::grid_only, econ::ScenarioCase::ess_only,
                   econ::ScenarioCase::shared})
        CHECK(econ::case_from_name(econ::case_name(c)) == c);
    CHECK_THROWS_AS((void)econ::segment_from_name("industrial"), ParameterError);
    CHECK_THROWS_AS((void)econ::case_from_name("hybrid"), ParameterError);
}

TEST_CASE("default tariff book carries the published survey values") {
    const auto t = econ::TariffBook::defaults();
    CHECK_NOTHROW(t.validate());
    CHECK(t.tou_rates[0][0][0] == doctest::Approx(0.25));   // residential summer peak
    CHECK(t.tou_rates[0][1][0] == doctest::Approx(0.13));   // residential winter peak
    CHECK(t.tou_rates[0][0][1] == doctest::Approx(0.06));   // residential off-peak
    CHECK(t.outage_cost[2][2] == doctest::Approx(10.12));   // large C&I, 1 h
    CHECK(t.power_quality_cost[1][1] == doctest::Approx(2.52));  // small C&I, high
    CHECK(t.demand_charges[1][0][0] == doctest::Approx(15.0));   // small C&I summer
}

TEST_CASE("tariff book validation rejects inverted rates") {
    auto t = econ::TariffBook::defaults();
    t.tou_rates[0][0][1] = 0.30;  // off-peak above the 0.25 peak
    CHECK_THROWS_AS(t.validate(), ParameterError);
    t = econ::TariffBook::defaults();
    t.outage_cost[0][0] = -1.0;
    CHECK_THROWS_AS(t.validate(), ParameterError);
}

TEST_CASE("scenario validation") {
    econ::EconScenario s;
    CHECK_NOTHROW(s.validate());
    s.grid_headroom = 1.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = econ::EconScenario{};
    s.efficiency = 0.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = econ::EconScenario{};
    s.epsilon = 1.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = econ::EconScenario{};
    s.summer_fraction = 1.5;
    CHECK_THROWS_AS(s.validate(), ParameterError);
    s = econ::EconScenario{};
    s.lambda = 0.0;
    CHECK_THROWS_AS(s.validate(), ParameterError);
}

TEST_CASE("grid-only cost at the default operating point") {
    // lambda = 0.25: fleet mean 3.6 kW, 75 kWh/month through the peak window.
    // Energy 75 * 0.19, quality 6 * 3.6 * 0.10 / 12, outage buckets for
    // 88 min/yr resolve to one 1 h + one 30 min event = $3.20/kW-yr.
    const auto t = econ::TariffBook::defaults();
    const auto cost = econ::scenario_cost(defaults_with_lambda(0.25), t);
    CHECK(cost.energy_grid == doctest::Approx(14.25).epsilon(1e-12));
    CHECK(cost.quality == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(cost.reliability == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(cost.energy_storage == 0.0);
    CHECK(cost.storage_capital == 0.0);
    CHECK(cost.total == doctest::Approx(15.39).epsilon(1e-12));
}

TEST_CASE("grid-only cost at higher usage frequencies") {
    const auto t = econ::TariffBook::defaults();
    CHECK(econ::scenario_cost(defaults_with_lambda(0.45), t).total ==
          doctest::Approx(23.881034482758623).epsilon(1e-12));
    CHECK(econ::scenario_cost(defaults_with_lambda(0.65), t).total ==
          doctest::Approx(30.31363636363636).epsilon(1e-12));
}

TEST_CASE("storage-only cost at the default operating point") {
    const auto t = econ::TariffBook::defaults();
    auto s = defaults_with_lambda(0.25);
    s.scenario_case = econ::ScenarioCase::ess_only;
    const auto cost = econ::scenario_cost(s, t);
    // 75 kWh grossed up by eta = 0.9 at the 0.06 off-peak rate, plus 1500/12.
    CHECK(cost.energy_storage == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(cost.storage_capital == doctest::Approx(125.0).epsilon(1e-12));
    CHECK(cost.total == doctest::Approx(130.0).epsilon(1e-12));

    s.lambda = 0.45;
    CHECK(econ::scenario_cost(s, t).total ==
          doctest::Approx(132.75862068965517).epsilon(1e-12));
    s.lambda = 0.65;
    CHECK(econ::scenario_cost(s, t).total ==
          doctest::Approx(134.84848484848484).epsilon(1e-12));
}

TEST_CASE("outage bucket decomposition") {
    const auto t = econ::TariffBook::defaults();
    const double m = 3.6;  // lambda = 0.25 fleet mean

    auto s = defaults_with_lambda(0.25);
    s.interruption_minutes_per_year = 45.0;  // tie between 30 and 60 -> larger
    CHECK(econ::scenario_cost(s, t).reliability == doctest::Approx(m * 2.60 / 12.0).epsilon(1e-12));
    s.interruption_minutes_per_year = 10.0;  // one 15-min event
    CHECK(econ::scenario_cost(s, t).reliability == doctest::Approx(m * 0.05 / 12.0).epsilon(1e-12));
    s.interruption_minutes_per_year = 7.0;  // below half the smallest bucket
    CHECK(econ::scenario_cost(s, t).reliability == 0.0);
    s.interruption_minutes_per_year = 180.0;  // 2 h + 1 h
    CHECK(econ::scenario_cost(s, t).reliability ==
          doctest::Approx(m * (3.95 + 2.60) / 12.0).epsilon(1e-12));
}

TEST_CASE("season mix moves the energy rate") {
    const auto t = econ::TariffBook::defaults();
    auto s = defaults_with_lambda(0.25);
    s.summer_fraction = 1.0;
    // 75 kWh at the pure summer rate 0.25.
    CHECK(econ::scenario_cost(s, t).energy_grid == doctest::Approx(18.75).epsilon(1e-12));
    s.summer_fraction = 0.0;
    CHECK(econ::scenario_cost(s, t).energy_grid == doctest::Approx(9.75).epsilon(1e-12));
}

TEST_CASE("cost breakdown items always sum to the total") {
    const auto t = econ::TariffBook::defaults();
    for (auto c : {econ::ScenarioCase::grid_only, econ::ScenarioCase::ess_only,
                   econ::ScenarioCase::shared}) {
        auto s = defaults_with_lambda(0.25);
        s.scenario_case = c;
        s.n_users = 3;
        const auto cost = econ::scenario_cost(s, t);
        CHECK(cost.total == doctest::Approx(cost.energy_grid + cost.energy_storage +
                                            cost.quality + cost.reliability +
                                            cost.storage_capital)
                                .epsilon(1e-15));
    }
}

TEST_CASE("shared case at one user carries the full storage cost") {
    const auto t = econ::TariffBook::defaults();
    auto s = defaults_with_lambda(0.25);
    s.scenario_case = econ::ScenarioCase::shared;
    s.n_users = 1;
    const auto shared = econ::scenario_cost(s, t);
    // The standalone store anchors the capital scaling: at n = 1 the user pays
    // the whole 1500/yr.
    CHECK(shared.storage_capital == doctest::Approx(125.0).epsilon(1e-9));
    CHECK(shared.total > econ::scenario_cost(defaults_with_lambda(0.25), t).total);
}

TEST_CASE("annualized storage cost") {
    CHECK(econ::annualized_storage_cost(1000.0, 10, 0.0) == doctest::Approx(100.0));
    // One year at 10%: the full principal plus one interest payment.
    CHECK(econ::annualized_storage_cost(1000.0, 1, 0.10) == doctest::Approx(1100.0).epsilon(1e-12));
    // The default scenario's $1500/yr corresponds to this capex over 15 years.
    CHECK(econ::annualized_storage_cost(11408.50, 15, 0.10) ==
          doctest::Approx(1499.9185836195854).epsilon(1e-12));
    CHECK_THROWS_AS((void)econ::annualized_storage_cost(-1.0, 10, 0.1), ParameterError);
    CHECK_THROWS_AS((void)econ::annualized_storage_cost(1000.0, 0, 0.1), ParameterError);
    CHECK_THROWS_AS((void)econ::annualized_storage_cost(1000.0, 10, 1.0), ParameterError);
}

TEST_CASE("breakeven population at the default usage frequency") {
    const auto t = econ::TariffBook::defaults();
    const auto res = econ::breakeven_population(defaults_with_lambda(0.25), t);
    CHECK(res.found);
    CHECK(res.population == 30);
    CHECK(res.grid_only_cost == doctest::Approx(15.39).epsilon(1e-12));
    CHECK(res.shared_cost_at < res.grid_only_cost);
    CHECK(res.shared_cost_before >= res.grid_only_cost);
}

TEST_CASE("breakeven population shrinks at higher usage frequency") {
    const auto t = econ::TariffBook::defaults();
    const auto heavy = econ::breakeven_population(defaults_with_lambda(0.65), t);
    CHECK(heavy.found);
    CHECK(heavy.population == 14);
}

TEST_CASE("breakeven scan respects the population cap") {
    const auto t = econ::TariffBook::defaults();
    const auto res = econ::breakeven_population(defaults_with_lambda(0.25), t,
                                               sizing::Engine::spectral, 5);
    CHECK_FALSE(res.found);
    CHECK(res.population == 5);
    CHECK(res.shared_cost_at > res.grid_only_cost);
}
