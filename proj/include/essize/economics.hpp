#pragma once

#include <array>
#include <cstdint>

#include "essize/sizing.hpp"

namespace essize::econ {

enum class Segment { residential, small_ci, large_ci };
enum class ScenarioCase { grid_only, ess_only, shared };

[[nodiscard]] std::string segment_name(Segment s);
[[nodiscard]] Segment segment_from_name(const std::string& name);
[[nodiscard]] std::string case_name(ScenarioCase c);
[[nodiscard]] ScenarioCase case_from_name(const std::string& name);

// Tariff data by customer segment. Demand charges are carried as data only;
// no cost model consumes them (billing them needs a load profile).
struct TariffBook {
    // $/kW per event, columns {average, high}
    std::array<std::array<double, 2>, 3> power_quality_cost{};
    // $/kW per event, columns {15 min, 30 min, 1 h, 2 h}
    std::array<std::array<double, 4>, 3> outage_cost{};
    // $/kWh, [segment][season {summer, winter}][period {peak, off_peak}]
    std::array<std::array<std::array<double, 2>, 2>, 3> tou_rates{};
    // $/kW-month, same layout as tou_rates (data only)
    std::array<std::array<std::array<double, 2>, 2>, 3> demand_charges{};

    // Published U.S. survey averages.
    [[nodiscard]] static TariffBook defaults();
    void validate() const;
};

inline constexpr std::array<double, 4> kOutageBucketMinutes = {15.0, 30.0, 60.0, 120.0};

// One cost-comparison scenario. Durations are hours, powers kW, money USD.
// Time is normalized so one mean On period is the unit (mu = 1); lambda is
// the per-appliance usage frequency in those units.
struct EconScenario {
    ScenarioCase scenario_case = ScenarioCase::grid_only;
    Segment segment = Segment::residential;
    std::int64_t appliances_per_user = 15;
    double peak_demand_per_appliance = 1.2;  // kW
    double peak_days_per_year = 250.0;
    double peak_hours = 1.0;                  // peak window length per day
    double interruption_minutes_per_year = 88.0;
    double storage_annual_cost = 1500.0;      // $/yr for one standalone store
    int project_years = 15;
    double discount_rate = 0.10;
    double lambda = 0.25;
    std::int64_t n_users = 1;
    double grid_headroom = 1.20;              // shared-case C = headroom * mean demand
    double efficiency = 0.9;                  // round-trip, grosses off-peak intake
    double epsilon = 0.001;                   // shared-case outage target
    double summer_fraction = 0.5;             // season mix for TOU averaging
    double quality_events_per_year = 6.0;

    void validate() const;
};

// Per-user per-month cost, itemized; items always sum to total exactly.
struct CostBreakdown {
    double energy_grid = 0.0;      // peak-window energy bought at the peak rate
    double energy_storage = 0.0;   // energy routed through storage, off-peak rate
    double quality = 0.0;          // power-quality events (grid-only case)
    double reliability = 0.0;      // outage events (grid-only case)
    double storage_capital = 0.0;  // annualized storage cost share
    double total = 0.0;
};

[[nodiscard]] CostBreakdown scenario_cost(const EconScenario& s, const TariffBook& t,
                                          sizing::Engine sizer = sizing::Engine::spectral);

struct BreakevenResult {
    bool found = false;
    std::int64_t population = 0;     // smallest n with shared < grid-only
    double grid_only_cost = 0.0;
    double shared_cost_at = 0.0;     // shared cost at the breakeven population
    double shared_cost_before = 0.0; // at population - 1 (NaN when population == 1)
};

// Scan n upward until the shared case beats grid-only; the scan verifies the
// claimed monotone decrease of the shared cost as it goes.
[[nodiscard]] BreakevenResult breakeven_population(const EconScenario& s, const TariffBook& t,
                                                   sizing::Engine sizer = sizing::Engine::spectral,
                                                   std::int64_t max_population = 10000);

// Capital-recovery annualization of an upfront cost; rate 0 degrades to
// straight-line capex / years.
[[nodiscard]] double annualized_storage_cost(double capex, int years, double rate);

}  // namespace essize::econ
