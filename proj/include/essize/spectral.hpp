#pragma once

#include <complex>
#include <string>

#include <Eigen/Core>

#include "essize/source_model.hpp"

namespace essize::spectral {

// Per-state net inflow d_s = loads[s] - C. If the requested grid power sits
// (numerically) on a state load the solver nudges C upward until every drift
// is bounded away from zero; both values are kept for reporting.
struct DriftTable {
    Eigen::VectorXd drifts;
    double grid_power = 0.0;       // value actually used
    double requested_power = 0.0;  // value the caller asked for
    int perturbation_steps = 0;    // 0 means no nudge was needed
};

// Solver metadata for diagnostics and regression tracking.
struct Diagnostics {
    std::vector<std::complex<double>> all_eigenvalues;
    double zero_eigenvalue_magnitude = 0.0;  // |Re z| of the classified zero
    double max_residual = 0.0;               // worst retained pair, relative to ||M||_inf
    double condition_number = 1.0;           // boundary-condition system, equilibrated
    double boundary_backward_error = 0.0;    // normwise, for the coefficient solve
    double generator_inf_norm = 0.0;
    int retained_terms = 0;

    [[nodiscard]] std::string to_json() const;
};

// Stationary deficit distribution of the fluid model at a fixed grid power:
//   F(x) = pi + sum_i alpha_i phi_i exp(z_i x),   Re z_i < 0,
// with one transient term per positive-drift state. survivor_weights caches
// alpha_i (1^T phi_i) so tail evaluations cost O(terms).
struct SpectralSolution {
    Eigen::VectorXd stationary;
    Eigen::VectorXd loads;
    DriftTable drift;
    Eigen::VectorXcd eigenvalues;      // retained (negative real part) only
    Eigen::MatrixXcd eigenvectors;     // column i is phi_i over states
    Eigen::VectorXcd coefficients;     // alpha_i
    Eigen::VectorXcd survivor_weights; // alpha_i * sum(phi_i)
    Diagnostics diagnostics;
};

struct SolveOptions {
    // Dense eigensolve refuses larger models; raise deliberately if you have
    // the memory and patience (cost grows with the cube of the state count).
    Eigen::Index max_states = 6000;
};

// Solve the stationary boundary-value problem dF/dx D = F M for the model at
// the given grid power. Throws StabilityError when mean demand >= grid power,
// CapacityError when the model exceeds max_states, NumericalError /
// ConditioningError when a numeric contract fails.
[[nodiscard]] SpectralSolution solve(const model::FluidModel& m, double grid_power,
                                     const SolveOptions& opts = {});

// P(S > level). Strictly decreasing in level, in [0, 1].
[[nodiscard]] double survivor_probability(const SpectralSolution& sol, double level);

// Per-state F_s(level) = P(S <= level, state s).
[[nodiscard]] Eigen::VectorXd cdf(const SpectralSolution& sol, double level);

// Stationary probability of states whose load exceeds the (used) grid power.
[[nodiscard]] double overload_probability(const SpectralSolution& sol);

}  // namespace essize::spectral
