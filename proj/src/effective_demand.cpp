#include "essize/effective_demand.hpp"

#include <cmath>
#include <string>

namespace essize::effdemand {

DecayParameter DecayParameter::from_target(double epsilon, double storage) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    if (!(storage > 0.0) || !std::isfinite(storage))
        throw ParameterError("storage must be positive and finite, got " +
                             std::to_string(storage));
    DecayParameter d;
    d.epsilon = epsilon;
    d.storage = storage;
    d.zeta = std::log(epsilon) / storage;
    return d;
}

double DecayParameter::xi() const { return -std::expm1(zeta); }

double effective_demand(const model::ConsumerClass& cls, double zeta) {
    if (zeta > 0.0)
        throw DomainError("zeta must be nonpositive, got " + std::to_string(zeta));
    const double lambda = cls.lambda;
    const double mu = cls.mu;
    const double R = cls.peak_demand;
    if (zeta == 0.0) return lambda * R / (lambda + mu);  // analytic limit
    const double a = zeta * R + mu - lambda;
    return (zeta * R + mu + lambda - std::sqrt(a * a + 4.0 * lambda * mu)) / (2.0 * zeta);
}

double effective_demand(const model::ConsumerClass& cls, const DecayParameter& d) {
    return effective_demand(cls, d.zeta);
}

AdmissionDecision admissible(const model::Population& pop, double grid_power, double storage,
                             double epsilon) {
    if (!(grid_power > 0.0))
        throw ParameterError("grid_power must be positive, got " + std::to_string(grid_power));
    const DecayParameter d = DecayParameter::from_target(epsilon, storage);
    double total = 0.0;
    for (std::size_t k = 0; k < pop.num_classes(); ++k)
        total += static_cast<double>(pop.counts[k]) * effective_demand(pop.classes[k], d.zeta);
    AdmissionDecision out;
    out.total_demand = total;
    out.margin = grid_power - total;
    out.admit = total <= grid_power;
    out.strict_admit = total < grid_power;
    return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> admission_region(
    const model::Population& two_classes, double grid_power, double storage, double epsilon) {
    if (two_classes.num_classes() != 2)
        throw UnsupportedError("admission region needs exactly 2 classes, got " +
                               std::to_string(two_classes.num_classes()));
    const DecayParameter d = DecayParameter::from_target(epsilon, storage);
    const double w1 = effective_demand(two_classes.classes[0], d.zeta);
    const double w2 = effective_demand(two_classes.classes[1], d.zeta);
    // tiny nudge keeps exact boundary points inside the (closed) region
    const auto chop = [](double x) {
        return static_cast<std::int64_t>(std::floor(x + 1e-9));
    };
    std::vector<std::pair<std::int64_t, std::int64_t>> stairs;
    const std::int64_t n1_max = chop(grid_power / w1);
    stairs.reserve(static_cast<std::size_t>(n1_max) + 1);
    for (std::int64_t n1 = 0; n1 <= n1_max; ++n1) {
        const double left = grid_power - w1 * static_cast<double>(n1);
        stairs.emplace_back(n1, chop(left / w2));
    }
    return stairs;
}

double min_storage(const model::Population& pop, double grid_power, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    const double mean = pop.mean_demand();
    const double peak = pop.peak_demand();
    if (grid_power >= peak) return 0.0;  // full simultaneity covered
    if (!(mean < grid_power))
        throw InfeasibleError("grid power " + std::to_string(grid_power) +
                              " at or below mean demand " + std::to_string(mean) +
                              "; no finite storage suffices");

    const auto admit = [&](double b) {
        return admissible(pop, grid_power, b, epsilon).admit;
    };

    double lo = 1e-6;
    if (admit(lo)) return lo;
    double hi = 1.0;
    while (!admit(hi)) {
        hi *= 2.0;
        if (hi > std::ldexp(1.0, 40))
            throw NumericalError("no admissible storage found below 2^40");
    }
    if (hi > 1.0) lo = hi / 2.0;
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (admit(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace essize::effdemand
