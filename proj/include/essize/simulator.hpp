#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "essize/source_model.hpp"

namespace essize::sim {

// How round-trip efficiency enters the deficit dynamics. symmetric scales the
// rate by eta in both directions; charge_only leaves deficit growth (store
// discharge) unscaled and applies eta to recovery only.
enum class EtaMode { symmetric, charge_only };

struct SimConfig {
    model::Population population;
    double grid_power = 0.0;
    double efficiency = 1.0;  // round-trip eta in (0, 1]
    EtaMode eta_mode = EtaMode::symmetric;
    double horizon = 0.0;     // simulated time per replication
    double warmup = -1.0;     // discarded initial time; negative = 10% of horizon
    int replications = 1;
    std::uint64_t seed = 0;
};

struct SurvivorEstimate {
    double level = 0.0;
    double estimate = 0.0;   // across-replication mean of time fraction S > level
    double std_error = 0.0;  // across-replication standard error
    int replications = 0;
};

struct SimulationSummary {
    std::vector<SurvivorEstimate> survivors;
    Eigen::VectorXd occupancy;     // time-averaged state occupancy, mean over reps
    Eigen::VectorXd occupancy_se;  // per-state standard error
    double mean_deficit = 0.0;
    double mean_square_deficit = 0.0;
    bool stable = true;            // mean demand < grid power
    std::int64_t events = 0;       // CTMC transitions across all replications
};

// Event-driven simulation of the composite On/Off chain with a piecewise-
// linear storage deficit reflected at zero (infinite upper buffer). Exact
// per-segment occupation times; no time discretization. Deterministic given
// the seed; replication streams are independent of execution order.
[[nodiscard]] SimulationSummary simulate(const SimConfig& cfg,
                                         const std::vector<double>& levels = {});

// Survivor estimates with standard errors; requires >= 2 replications.
[[nodiscard]] std::vector<SurvivorEstimate> estimate_survivor(
    const SimConfig& cfg, const std::vector<double>& levels);

}  // namespace essize::sim
