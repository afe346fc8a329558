#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "essize/source_model.hpp"

namespace essize::effdemand {

// Exponential tail-rate target tying outage probability to storage size:
// zeta = log(epsilon) / storage, always negative.
struct DecayParameter {
    double zeta = 0.0;
    double epsilon = 0.0;
    double storage = 0.0;

    static DecayParameter from_target(double epsilon, double storage);

    // Susceptibility reparameterization 1 - e^zeta, in (0,1).
    [[nodiscard]] double xi() const;
};

// Per-source deterministic demand surrogate omega(zeta):
//   [zeta R + mu + lambda - sqrt((zeta R + mu - lambda)^2 + 4 lambda mu)] / (2 zeta)
// for zeta < 0, continued analytically to the mean demand at zeta = 0.
// Always strictly between the source's mean and peak demand for finite zeta<0.
[[nodiscard]] double effective_demand(const model::ConsumerClass& cls, double zeta);
[[nodiscard]] double effective_demand(const model::ConsumerClass& cls,
                                      const DecayParameter& d);

struct AdmissionDecision {
    bool admit = false;         // sum_k omega_k N_k <= C (closed set)
    bool strict_admit = false;  // same sum, strict inequality (conservative set)
    double total_demand = 0.0;  // sum_k omega_k N_k
    double margin = 0.0;        // C - total_demand
};

// Admission test for a population against grid power C, storage B and outage
// target epsilon.
[[nodiscard]] AdmissionDecision admissible(const model::Population& pop, double grid_power,
                                           double storage, double epsilon);

// For a two-class population: the staircase of maximal class-2 counts
// (n1, max n2) for n1 = 0 .. floor(C / omega_1). Nonincreasing in n1.
[[nodiscard]] std::vector<std::pair<std::int64_t, std::int64_t>> admission_region(
    const model::Population& two_classes, double grid_power, double storage, double epsilon);

// Smallest storage B making the population admissible at grid power C and
// target epsilon, by bisection on the monotone admission predicate.
// Returns 0 when C covers the aggregate peak; throws InfeasibleError when C
// is at or below the aggregate mean demand.
[[nodiscard]] double min_storage(const model::Population& pop, double grid_power,
                                 double epsilon);

}  // namespace essize::effdemand
