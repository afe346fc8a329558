#include "essize/source_model.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace essize::model {

namespace {

void check_class(const ConsumerClass& c) {
    if (!(c.lambda > 0.0) || !std::isfinite(c.lambda))
        throw ParameterError("lambda must be positive and finite, got " + std::to_string(c.lambda));
    if (!(c.mu > 0.0) || !std::isfinite(c.mu))
        throw ParameterError("mu must be positive and finite, got " + std::to_string(c.mu));
    if (!(c.peak_demand > 0.0) || !std::isfinite(c.peak_demand))
        throw ParameterError("peak_demand must be positive and finite, got " +
                             std::to_string(c.peak_demand));
}

}  // namespace

ConsumerClass::ConsumerClass(double lambda_, double mu_, double peak_demand_)
    : lambda(lambda_), mu(mu_), peak_demand(peak_demand_) {
    check_class(*this);
}

Population::Population(std::vector<ConsumerClass> classes_, std::vector<std::int64_t> counts_)
    : classes(std::move(classes_)), counts(std::move(counts_)) {
    if (classes.size() != counts.size())
        throw ParameterError("classes and counts lengths differ: " +
                             std::to_string(classes.size()) + " vs " +
                             std::to_string(counts.size()));
    if (classes.empty()) throw ParameterError("population needs at least one class");
    for (const auto& c : classes) check_class(c);
    for (auto n : counts)
        if (n < 0) throw ParameterError("counts must be nonnegative, got " + std::to_string(n));
}

std::int64_t Population::total_users() const {
    std::int64_t total = 0;
    for (auto n : counts) total += n;
    return total;
}

double Population::mean_demand() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k)
        sum += static_cast<double>(counts[k]) * classes[k].mean_demand();
    return sum;
}

double Population::peak_demand() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < classes.size(); ++k)
        sum += static_cast<double>(counts[k]) * classes[k].peak_demand;
    return sum;
}

std::uint64_t Population::state_space_size() const {
    constexpr std::uint64_t kSaturate = std::uint64_t{1} << 62;
    std::uint64_t size = 1;
    for (auto n : counts) {
        const auto radix = static_cast<std::uint64_t>(n) + 1;
        if (size > kSaturate / radix) return kSaturate;
        size *= radix;
    }
    return size;
}

std::int64_t FluidModel::occupancy(Eigen::Index state, std::size_t k) const {
    const auto radix = population.counts[k] + 1;
    return (static_cast<std::int64_t>(state) / strides_[k]) % radix;
}

std::vector<double> stationary_distribution(std::int64_t n_users, const ConsumerClass& cls) {
    check_class(cls);
    if (n_users < 1)
        throw ParameterError("n_users must be >= 1, got " + std::to_string(n_users));
    const double p = cls.on_probability();
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const auto n = static_cast<std::size_t>(n_users);
    std::vector<double> pi(n + 1);
    double total = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double log_binom = std::lgamma(static_cast<double>(n) + 1.0) -
                                 std::lgamma(static_cast<double>(i) + 1.0) -
                                 std::lgamma(static_cast<double>(n - i) + 1.0);
        pi[i] = std::exp(log_binom + static_cast<double>(i) * log_p +
                         static_cast<double>(n - i) * log_q);
        total += pi[i];
    }
    for (auto& v : pi) v /= total;  // absorb rounding so the sum is exactly 1
    return pi;
}

FluidModel build_generator_multi(const Population& pop, std::uint64_t state_cap) {
    Population checked(pop.classes, pop.counts);  // revalidate (aggregate may be hand-built)
    const std::uint64_t size = checked.state_space_size();
    if (size > state_cap)
        throw CapacityError("state space has " + std::to_string(size) +
                            " states, cap is " + std::to_string(state_cap));

    const std::size_t K = checked.num_classes();
    const auto S = static_cast<Eigen::Index>(size);

    FluidModel m;
    m.population = checked;
    m.strides_.resize(K);
    std::int64_t stride = 1;
    for (std::size_t k = 0; k < K; ++k) {
        m.strides_[k] = stride;
        stride *= checked.counts[k] + 1;
    }

    std::vector<std::vector<double>> per_class_pi(K);
    for (std::size_t k = 0; k < K; ++k) {
        if (checked.counts[k] > 0)
            per_class_pi[k] = stationary_distribution(checked.counts[k], checked.classes[k]);
        else
            per_class_pi[k] = {1.0};
    }

    m.loads = Eigen::VectorXd::Zero(S);
    m.stationary = Eigen::VectorXd::Zero(S);

    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(S) * (2 * K + 1));
    std::vector<std::int64_t> occ(K);

    for (Eigen::Index s = 0; s < S; ++s) {
        double load = 0.0;
        double pi = 1.0;
        for (std::size_t k = 0; k < K; ++k) {
            occ[k] = (s / m.strides_[k]) % (checked.counts[k] + 1);
            load += static_cast<double>(occ[k]) * checked.classes[k].peak_demand;
            pi *= per_class_pi[k][static_cast<std::size_t>(occ[k])];
        }
        m.loads[s] = load;
        m.stationary[s] = pi;

        double out_rate = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double up = static_cast<double>(checked.counts[k] - occ[k]) * checked.classes[k].lambda;
            const double down = static_cast<double>(occ[k]) * checked.classes[k].mu;
            if (up > 0.0) {
                entries.emplace_back(s, s + m.strides_[k], up);
                out_rate += up;
            }
            if (down > 0.0) {
                entries.emplace_back(s, s - m.strides_[k], down);
                out_rate += down;
            }
        }
        if (out_rate > 0.0) entries.emplace_back(s, s, -out_rate);
    }

    m.generator.resize(S, S);
    m.generator.setFromTriplets(entries.begin(), entries.end());
    return m;
}

FluidModel build_generator_single(std::int64_t n_users, const ConsumerClass& cls) {
    if (n_users < 1)
        throw ParameterError("n_users must be >= 1, got " + std::to_string(n_users));
    return build_generator_multi(Population({cls}, {n_users}));
}

double mean_demand(const Population& pop) { return pop.mean_demand(); }

}  // namespace essize::model
