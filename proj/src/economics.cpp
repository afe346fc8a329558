#include "essize/economics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "essize/spectral.hpp"

namespace essize::econ {

namespace {

constexpr double kMonths = 12.0;

std::size_t seg_index(Segment s) { return static_cast<std::size_t>(s); }

// Seasonal blend of the segment's TOU rates.
double peak_rate(const TariffBook& t, const EconScenario& s) {
    const auto& seg = t.tou_rates[seg_index(s.segment)];
    return s.summer_fraction * seg[0][0] + (1.0 - s.summer_fraction) * seg[1][0];
}

double offpeak_rate(const TariffBook& t, const EconScenario& s) {
    const auto& seg = t.tou_rates[seg_index(s.segment)];
    return s.summer_fraction * seg[0][1] + (1.0 - s.summer_fraction) * seg[1][1];
}

// Mean demand of one user's appliance fleet (kW).
double user_mean_kw(const EconScenario& s) {
    const double p = s.lambda / (s.lambda + 1.0);
    return static_cast<double>(s.appliances_per_user) * s.peak_demand_per_appliance * p;
}

// Peak-window energy one user consumes per month (kWh).
double user_month_kwh(const EconScenario& s) {
    return user_mean_kw(s) * s.peak_hours * s.peak_days_per_year / kMonths;
}

// Annual outage cost per kW: the yearly interruption minutes split into
// tariff buckets, each event rounded to the nearest bucket.
double outage_cost_per_kw(const TariffBook& t, const EconScenario& s) {
    const auto& costs = t.outage_cost[seg_index(s.segment)];
    double remaining = s.interruption_minutes_per_year;
    double cost = 0.0;
    const double smallest = kOutageBucketMinutes.front();
    while (remaining >= 0.5 * smallest) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < kOutageBucketMinutes.size(); ++j) {
            const double d_best = std::abs(kOutageBucketMinutes[best] - remaining);
            const double d_j = std::abs(kOutageBucketMinutes[j] - remaining);
            if (d_j < d_best || (d_j == d_best && kOutageBucketMinutes[j] > kOutageBucketMinutes[best]))
                best = j;
        }
        cost += costs[best];
        remaining -= kOutageBucketMinutes[best];
    }
    return cost;
}

// Normalized storage size for a fleet of `appliances` On/Off sources at grid
// power C (kW), via the requested sizing engine.
double fleet_storage(const EconScenario& s, std::int64_t appliances, double grid_kw,
                     sizing::Engine sizer) {
    const model::Population pop({model::ConsumerClass(s.lambda, 1.0, s.peak_demand_per_appliance)},
                                {appliances});
    return sizing::epsilon_outage_capacity(pop, grid_kw, s.epsilon, sizer).storage;
}

// Expected aggregate power above C for a fleet of `appliances` sources (kW).
double expected_excess_kw(const EconScenario& s, std::int64_t appliances, double grid_kw) {
    const model::ConsumerClass cls(s.lambda, 1.0, s.peak_demand_per_appliance);
    const auto pi = model::stationary_distribution(appliances, cls);
    double excess = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        const double load = static_cast<double>(i) * s.peak_demand_per_appliance;
        if (load > grid_kw) excess += pi[i] * (load - grid_kw);
    }
    return excess;
}

CostBreakdown shared_cost(const EconScenario& s, const TariffBook& t, sizing::Engine sizer,
                          double reference_storage) {
    const double m = user_mean_kw(s);
    const double n = static_cast<double>(s.n_users);
    const double grid_kw = s.grid_headroom * n * m;
    const std::int64_t fleet = s.n_users * s.appliances_per_user;

    const double excess = expected_excess_kw(s, fleet, grid_kw);
    const double hours = s.peak_hours * s.peak_days_per_year / kMonths;
    const double grid_kwh = (n * m - excess) / n * hours;     // per user per month
    const double storage_kwh = excess / n * hours;

    const double b = fleet_storage(s, fleet, grid_kw, sizer);

    CostBreakdown out;
    out.energy_grid = grid_kwh * peak_rate(t, s);
    out.energy_storage = storage_kwh / s.efficiency * offpeak_rate(t, s);
    out.storage_capital =
        s.storage_annual_cost * (b / reference_storage) / n / kMonths;
    out.total = out.energy_grid + out.energy_storage + out.quality + out.reliability +
                out.storage_capital;
    return out;
}

// Standalone single-user storage size at the same headroom and target;
// anchors the linear capital scaling so that n_users = 1 recovers the full
// storage_annual_cost.
double reference_storage(const EconScenario& s, sizing::Engine sizer) {
    const double grid_kw = s.grid_headroom * user_mean_kw(s);
    return fleet_storage(s, s.appliances_per_user, grid_kw, sizer);
}

}  // namespace

std::string segment_name(Segment s) {
    switch (s) {
        case Segment::residential: return "residential";
        case Segment::small_ci: return "small_ci";
        case Segment::large_ci: return "large_ci";
    }
    return "unknown";
}

Segment segment_from_name(const std::string& name) {
    if (name == "residential") return Segment::residential;
    if (name == "small_ci") return Segment::small_ci;
    if (name == "large_ci") return Segment::large_ci;
    throw ParameterError("unknown segment '" + name + "'");
}

std::string case_name(ScenarioCase c) {
    switch (c) {
        case ScenarioCase::grid_only: return "grid_only";
        case ScenarioCase::ess_only: return "ess_only";
        case ScenarioCase::shared: return "shared";
    }
    return "unknown";
}

ScenarioCase case_from_name(const std::string& name) {
    if (name == "grid_only") return ScenarioCase::grid_only;
    if (name == "ess_only") return ScenarioCase::ess_only;
    if (name == "shared") return ScenarioCase::shared;
    throw ParameterError("unknown scenario case '" + name + "'");
}

TariffBook TariffBook::defaults() {
    TariffBook t;
    t.power_quality_cost = {{{0.10, 0.60}, {0.42, 2.52}, {1.42, 14.00}}};
    t.outage_cost = {{{0.05, 0.60, 2.60, 3.95},
                      {8.65, 16.01, 23.37, 48.91},
                      {4.79, 7.46, 10.12, 17.96}}};
    t.tou_rates = {{{{{0.25, 0.06}, {0.13, 0.06}}},
                    {{{0.18, 0.05}, {0.12, 0.05}}},
                    {{{0.06, 0.04}, {0.05, 0.04}}}}};
    t.demand_charges = {{{{{0.00, 0.00}, {0.00, 0.00}}},
                         {{{15.00, 15.00}, {8.00, 8.00}}},
                         {{{12.00, 12.00}, {10.00, 10.00}}}}};
    return t;
}

void TariffBook::validate() const {
    for (const auto& row : power_quality_cost)
        for (double v : row)
            if (!(v >= 0.0)) throw ParameterError("power-quality cost entries must be >= 0");
    for (const auto& row : outage_cost)
        for (double v : row)
            if (!(v >= 0.0)) throw ParameterError("outage cost entries must be >= 0");
    for (const auto& seg : tou_rates)
        for (const auto& season : seg) {
            if (!(season[0] >= 0.0) || !(season[1] >= 0.0))
                throw ParameterError("TOU rates must be >= 0");
            if (season[0] < season[1])
                throw ParameterError("TOU peak rate below off-peak rate");
        }
    for (const auto& seg : demand_charges)
        for (const auto& season : seg)
            if (!(season[0] >= 0.0) || !(season[1] >= 0.0))
                throw ParameterError("demand charges must be >= 0");
}

void EconScenario::validate() const {
    if (appliances_per_user < 1) throw ParameterError("appliances_per_user must be >= 1");
    if (!(peak_demand_per_appliance > 0.0))
        throw ParameterError("peak_demand_per_appliance must be positive");
    if (!(peak_days_per_year > 0.0)) throw ParameterError("peak_days_per_year must be positive");
    if (!(peak_hours > 0.0)) throw ParameterError("peak_hours must be positive");
    if (!(interruption_minutes_per_year >= 0.0))
        throw ParameterError("interruption_minutes_per_year must be >= 0");
    if (!(storage_annual_cost >= 0.0))
        throw ParameterError("storage_annual_cost must be >= 0");
    if (project_years < 1) throw ParameterError("project_years must be >= 1");
    if (!(discount_rate >= 0.0 && discount_rate < 1.0))
        throw ParameterError("discount_rate must lie in [0,1)");
    if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
    if (n_users < 1) throw ParameterError("n_users must be >= 1");
    if (!(grid_headroom > 1.0))
        throw ParameterError("grid_headroom must exceed 1 (grid above mean demand)");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        throw ParameterError("efficiency must lie in (0,1]");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0,1)");
    if (!(summer_fraction >= 0.0 && summer_fraction <= 1.0))
        throw ParameterError("summer_fraction must lie in [0,1]");
    if (!(quality_events_per_year >= 0.0))
        throw ParameterError("quality_events_per_year must be >= 0");
}

CostBreakdown scenario_cost(const EconScenario& s, const TariffBook& t, sizing::Engine sizer) {
    s.validate();
    t.validate();
    const double m = user_mean_kw(s);
    const double month_kwh = user_month_kwh(s);

    CostBreakdown out;
    switch (s.scenario_case) {
        case ScenarioCase::grid_only: {
            out.energy_grid = month_kwh * peak_rate(t, s);
            out.quality = s.quality_events_per_year * m *
                          t.power_quality_cost[seg_index(s.segment)][0] / kMonths;
            out.reliability = m * outage_cost_per_kw(t, s) / kMonths;
            out.total = out.energy_grid + out.energy_storage + out.quality + out.reliability +
                        out.storage_capital;
            return out;
        }
        case ScenarioCase::ess_only: {
            out.energy_storage = month_kwh / s.efficiency * offpeak_rate(t, s);
            out.storage_capital = s.storage_annual_cost / kMonths;
            out.total = out.energy_grid + out.energy_storage + out.quality + out.reliability +
                        out.storage_capital;
            return out;
        }
        case ScenarioCase::shared:
            return shared_cost(s, t, sizer, reference_storage(s, sizer));
    }
    throw ParameterError("unknown scenario case");
}

BreakevenResult breakeven_population(const EconScenario& s, const TariffBook& t,
                                     sizing::Engine sizer, std::int64_t max_population) {
    s.validate();
    t.validate();
    if (max_population < 1) throw ParameterError("max_population must be >= 1");

    EconScenario grid = s;
    grid.scenario_case = ScenarioCase::grid_only;
    grid.n_users = 1;
    const double grid_cost = scenario_cost(grid, t, sizer).total;

    EconScenario shared = s;
    shared.scenario_case = ScenarioCase::shared;
    const double b_ref = reference_storage(shared, sizer);

    BreakevenResult out;
    out.grid_only_cost = grid_cost;
    out.shared_cost_before = std::numeric_limits<double>::quiet_NaN();

    double previous = std::numeric_limits<double>::infinity();
    for (std::int64_t n = 1; n <= max_population; ++n) {
        shared.n_users = n;
        const double cost = shared_cost(shared, t, sizer, b_ref).total;
        if (cost > previous + 1e-7)
            throw NumericalError("shared cost rose from " + std::to_string(previous) + " to " +
                                 std::to_string(cost) + " at population " + std::to_string(n) +
                                 "; breakeven scan assumes it decreases");
        if (cost < grid_cost) {
            out.found = true;
            out.population = n;
            out.shared_cost_at = cost;
            out.shared_cost_before = previous;  // infinity only when n == 1
            if (n == 1) out.shared_cost_before = std::numeric_limits<double>::quiet_NaN();
            return out;
        }
        previous = cost;
    }
    out.shared_cost_at = previous;  // cost at the cap, for reporting
    out.population = max_population;
    return out;
}

double annualized_storage_cost(double capex, int years, double rate) {
    if (years < 1) throw ParameterError("years must be >= 1, got " + std::to_string(years));
    if (!(rate >= 0.0 && rate < 1.0))
        throw ParameterError("rate must lie in [0,1), got " + std::to_string(rate));
    if (!(capex >= 0.0)) throw ParameterError("capex must be >= 0, got " + std::to_string(capex));
    if (rate == 0.0) return capex / years;
    const double growth = std::expm1(years * std::log1p(rate));  // (1+r)^y - 1
    return capex * rate * (growth + 1.0) / growth;
}

}  // namespace essize::econ
