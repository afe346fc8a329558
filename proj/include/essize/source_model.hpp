#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "essize/errors.hpp"

namespace essize::model {

// One appliance/consumer type: a two-state Markov source that draws
// peak_demand while On. Off->On rate lambda, On->Off rate mu.
struct ConsumerClass {
    double lambda = 0.0;       // Off -> On rate (1 / unit time)
    double mu = 0.0;           // On -> Off rate (1 / unit time)
    double peak_demand = 0.0;  // power while On (kW; 1.0 in normalized mode)

    ConsumerClass() = default;
    ConsumerClass(double lambda_, double mu_, double peak_demand_);

    // lambda / mu: mean On-to-Off duration ratio.
    [[nodiscard]] double chi() const { return lambda / mu; }
    // Stationary probability of the On state: lambda / (lambda + mu).
    [[nodiscard]] double on_probability() const { return lambda / (lambda + mu); }
    // Long-run average draw of one source.
    [[nodiscard]] double mean_demand() const { return peak_demand * on_probability(); }
};

// A set of consumer classes with per-class counts.
struct Population {
    std::vector<ConsumerClass> classes;
    std::vector<std::int64_t> counts;

    Population() = default;
    Population(std::vector<ConsumerClass> classes_, std::vector<std::int64_t> counts_);

    [[nodiscard]] std::size_t num_classes() const { return classes.size(); }
    [[nodiscard]] std::int64_t total_users() const;
    // Sum over classes of N_k R_k lambda_k/(lambda_k+mu_k).
    [[nodiscard]] double mean_demand() const;
    // Sum over classes of N_k R_k (all sources On).
    [[nodiscard]] double peak_demand() const;
    // Product of (N_k + 1); saturates at 2^62 instead of overflowing.
    [[nodiscard]] std::uint64_t state_space_size() const;
};

// Composite CTMC over occupancy tuples (n_1..n_K): generator, per-state
// aggregate load and stationary probability. States are enumerated in
// mixed-radix order with n_1 varying fastest, so index decoding is
//   n_k(s) = (s / stride_k) mod (N_k + 1).
struct FluidModel {
    Population population;
    Eigen::SparseMatrix<double, Eigen::RowMajor> generator;
    Eigen::VectorXd loads;       // per-state aggregate demand (kW)
    Eigen::VectorXd stationary;  // product-binomial probabilities

    [[nodiscard]] Eigen::Index num_states() const { return loads.size(); }
    // Occupancy of class k in state s.
    [[nodiscard]] std::int64_t occupancy(Eigen::Index state, std::size_t k) const;

private:
    std::vector<std::int64_t> strides_;
    friend FluidModel build_generator_multi(const Population&, std::uint64_t);
};

inline constexpr std::uint64_t kDefaultStateCap = 200000;

// Binomial(N, lambda/(lambda+mu)) over occupancy 0..N, computed in log space.
[[nodiscard]] std::vector<double> stationary_distribution(std::int64_t n_users,
                                                          const ConsumerClass& cls);

// Birth-death chain of n_users identical sources.
[[nodiscard]] FluidModel build_generator_single(std::int64_t n_users,
                                                const ConsumerClass& cls);

// General K-class chain; transition rates (N_k - n_k) lambda_k up and
// n_k mu_k down in each coordinate.
[[nodiscard]] FluidModel build_generator_multi(const Population& pop,
                                               std::uint64_t state_cap = kDefaultStateCap);

[[nodiscard]] double mean_demand(const Population& pop);

}  // namespace essize::model
