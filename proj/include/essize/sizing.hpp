#pragma once

#include <string>

#include "essize/source_model.hpp"
#include "essize/spectral.hpp"

namespace essize::sizing {

enum class Engine { spectral, effective_demand, closed_form };

[[nodiscard]] std::string engine_name(Engine e);
[[nodiscard]] Engine engine_from_name(const std::string& name);

// Result of a storage-sizing query. achieved is the survivor probability
// re-evaluated at the returned size; for the effective_demand engine it is
// only computed when the state space is small enough for an exact check
// (NaN otherwise).
struct SizingResult {
    double storage = 0.0;
    Engine engine = Engine::spectral;
    double achieved = 0.0;
    int iterations = 0;
    double bracket = 0.0;
    bool converged = true;
};

// Result of the inverse problem (minimum grid power for given storage).
struct CapacityResult {
    double grid_power = 0.0;
    Engine engine = Engine::spectral;
    double achieved = 0.0;
    int iterations = 0;
    double bracket = 0.0;
    bool converged = true;
};

// Smallest storage B with P(S > B) <= epsilon at the given grid power.
// The spectral engine reuses one eigensolution across a log-space bisection
// in B; the closed_form engine requires a single one-source class.
[[nodiscard]] SizingResult epsilon_outage_capacity(const model::Population& pop,
                                                   double grid_power, double epsilon,
                                                   Engine engine = Engine::spectral,
                                                   const spectral::SolveOptions& opts = {});

// Smallest grid power C with P(S > storage) <= epsilon. storage = 0 reduces
// to the stationary-load quantile (the deficit process degenerates there;
// the limit of small positive storage is different and strictly larger).
[[nodiscard]] CapacityResult min_grid_power(const model::Population& pop, double storage,
                                            double epsilon, Engine engine = Engine::spectral,
                                            const spectral::SolveOptions& opts = {});

// 1 - B(epsilon) / B_peak where B_peak = max(aggregate peak - C, 0) times the
// support duration: the saving relative to provisioning for full simultaneity.
[[nodiscard]] double peak_savings(const model::Population& pop, double grid_power,
                                  double epsilon, double support_duration,
                                  Engine engine = Engine::spectral,
                                  const spectral::SolveOptions& opts = {});

}  // namespace essize::sizing
