#pragma once

#include <cstdint>
#include <vector>

#include "essize/errors.hpp"

namespace essize::closedform {

// Parameters of the large-population tail approximation, normalized so that
// mu = 1 and the per-source peak is 1. sigma is grid power per source.
struct AsymptoticParams {
    double lambda = 0.0;
    double sigma = 0.0;
    std::int64_t n_users = 0;

    AsymptoticParams(double lambda_, double sigma_, std::int64_t n_users_);

    // Headroom above the per-source mean demand.
    [[nodiscard]] double upsilon() const { return sigma - lambda / (1.0 + lambda); }
};

// Finite-support law of a fluctuating (per-source, normalized) grid power.
struct CapacityPoint {
    double capacity = 0.0;
    double probability = 0.0;
};

struct CapacityDistribution {
    std::vector<CapacityPoint> points;

    explicit CapacityDistribution(std::vector<CapacityPoint> points_);
};

// P(S > b) for one two-state source with On/Off ratio chi, normalized grid
// share c in (0,1) and normalized storage b:
//   [chi / (c (1+chi))] * exp((chi/c - 1/(1-c)) b).
[[nodiscard]] double single_user_overflow(double chi, double c, double b);

// Smallest b with single_user_overflow(chi, c, b) <= eps; 0 when even an
// empty store meets the target.
[[nodiscard]] double single_user_capacity(double chi, double c, double eps);

// Mixture of single_user_overflow over a finite capacity law.
[[nodiscard]] double single_user_overflow_random_capacity(double chi,
                                                          const CapacityDistribution& dist,
                                                          double b);

// Large-population tail approximation at level x (normalized units),
// evaluated exactly as printed in its source, clamped to [0, 1].
// Diagnostic-grade: compare against the exact solver before trusting it —
// the exponent is known to degrade for large populations.
[[nodiscard]] double asymptotic_survivor(const AsymptoticParams& p, double x);

// Unit conversion between normalized storage (peak-demand x unit-time units)
// and physical energy.
[[nodiscard]] double to_physical_energy(double b_normalized, double peak_kw, double unit_hours);
[[nodiscard]] double to_normalized_energy(double b_kwh, double peak_kw, double unit_hours);

}  // namespace essize::closedform
