#include "essize/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "essize/closed_forms.hpp"
#include "essize/effective_demand.hpp"

namespace essize::sizing {

namespace {

constexpr double kBracketTol = 1e-6;
constexpr int kMaxIterations = 200;
constexpr Eigen::Index kExactCheckStateCap = 1500;

double exact_survivor_if_small(const model::Population& pop, double grid_power, double level,
                               const spectral::SolveOptions& opts) {
    if (pop.state_space_size() > static_cast<std::uint64_t>(kExactCheckStateCap))
        return std::numeric_limits<double>::quiet_NaN();
    const auto m = model::build_generator_multi(pop);
    const auto sol = spectral::solve(m, grid_power, opts);
    return spectral::survivor_probability(sol, level);
}

// Smallest state load c with P(load > c) <= epsilon under the stationary law.
double stationary_load_quantile(const model::FluidModel& m, double epsilon) {
    std::vector<std::pair<double, double>> by_load(static_cast<std::size_t>(m.num_states()));
    for (Eigen::Index s = 0; s < m.num_states(); ++s)
        by_load[static_cast<std::size_t>(s)] = {m.loads[s], m.stationary[s]};
    std::sort(by_load.begin(), by_load.end());
    double tail = 0.0;
    // walk loads downward, accumulating P(load > candidate)
    double quantile = by_load.back().first;
    for (auto it = by_load.rbegin(); it != by_load.rend(); ++it) {
        if (tail > epsilon) break;
        quantile = it->first;
        tail += it->second;
    }
    return quantile;
}

}  // namespace

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::spectral: return "spectral";
        case Engine::effective_demand: return "effective_demand";
        case Engine::closed_form: return "closed_form";
    }
    return "unknown";
}

Engine engine_from_name(const std::string& name) {
    if (name == "spectral") return Engine::spectral;
    if (name == "effective_demand") return Engine::effective_demand;
    if (name == "closed_form") return Engine::closed_form;
    throw ParameterError("unknown engine '" + name +
                         "'; expected spectral, effective_demand or closed_form");
}

SizingResult epsilon_outage_capacity(const model::Population& pop, double grid_power,
                                     double epsilon, Engine engine,
                                     const spectral::SolveOptions& opts) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0,1), got " + std::to_string(epsilon));

    SizingResult out;
    out.engine = engine;

    if (engine == Engine::effective_demand) {
        const double mean = pop.mean_demand();
        if (!(mean < grid_power))
            throw StabilityError("mean demand " + std::to_string(mean) +
                                 " must be below grid power " + std::to_string(grid_power));
        out.storage = effdemand::min_storage(pop, grid_power, epsilon);
        out.bracket = kBracketTol;
        out.achieved =
            exact_survivor_if_small(pop, grid_power, out.storage, opts);
        return out;
    }

    if (engine == Engine::closed_form) {
        if (pop.num_classes() != 1 || pop.counts[0] != 1)
            throw UnsupportedError("closed_form engine handles exactly one source of one "
                                   "class; use spectral for populations");
        const auto& cls = pop.classes[0];
        const double c = grid_power / cls.peak_demand;
        if (c >= 1.0) {  // grid covers the peak outright
            out.storage = 0.0;
            out.achieved = 0.0;
            return out;
        }
        const double b_norm = closedform::single_user_capacity(cls.chi(), c, epsilon);
        out.storage = b_norm * cls.peak_demand / cls.mu;
        out.achieved = closedform::single_user_overflow(cls.chi(), c, b_norm);
        return out;
    }

    const auto m = model::build_generator_multi(pop);
    const auto sol = spectral::solve(m, grid_power, opts);

    const double at_zero = spectral::survivor_probability(sol, 0.0);
    if (at_zero <= epsilon) {
        out.storage = 0.0;
        out.achieved = at_zero;
        return out;
    }

    double lo = 1e-9;  // survivor there is within roundoff of its value at 0
    double hi = 1.0;
    while (spectral::survivor_probability(sol, hi) > epsilon) {
        hi *= 2.0;
        if (hi > std::ldexp(1.0, 40))
            throw NumericalError("no storage below 2^40 reaches the target probability");
    }
    if (hi > 1.0) lo = hi / 2.0;

    int iter = 0;
    while (hi - lo > kBracketTol && iter < kMaxIterations) {
        const double mid = std::exp(0.5 * (std::log(lo) + std::log(hi)));
        (spectral::survivor_probability(sol, mid) <= epsilon ? hi : lo) = mid;
        ++iter;
    }
    out.storage = hi;
    out.achieved = spectral::survivor_probability(sol, hi);
    out.iterations = iter;
    out.bracket = hi - lo;
    out.converged = (hi - lo) <= kBracketTol;
    return out;
}

CapacityResult min_grid_power(const model::Population& pop, double storage, double epsilon,
                              Engine engine, const spectral::SolveOptions& opts) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ParameterError("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    if (!(storage >= 0.0))
        throw ParameterError("storage must be nonnegative, got " + std::to_string(storage));
    if (engine == Engine::closed_form)
        throw UnsupportedError("closed_form engine does not support the inverse problem");

    CapacityResult out;
    out.engine = engine;

    if (storage == 0.0) {
        // Degenerate case: with no storage the outage event is instantaneous
        // overload, answered by the stationary-load quantile.
        const auto m = model::build_generator_multi(pop);
        out.grid_power = stationary_load_quantile(m, epsilon);
        double tail = 0.0;
        for (Eigen::Index s = 0; s < m.num_states(); ++s)
            if (m.loads[s] > out.grid_power) tail += m.stationary[s];
        out.achieved = tail;
        return out;
    }

    if (engine == Engine::effective_demand) {
        const double zeta = std::log(epsilon) / storage;
        double total = 0.0;
        for (std::size_t k = 0; k < pop.num_classes(); ++k)
            total += static_cast<double>(pop.counts[k]) *
                     effdemand::effective_demand(pop.classes[k], zeta);
        out.grid_power = total;
        out.achieved = exact_survivor_if_small(pop, total, storage, opts);
        return out;
    }

    const auto m = model::build_generator_multi(pop);
    const double mean = pop.mean_demand();
    const double peak = pop.peak_demand();

    const auto feasible = [&](double c) {
        return spectral::survivor_probability(spectral::solve(m, c, opts), storage) <= epsilon;
    };

    double hi = peak;
    if (!feasible(hi))
        throw InfeasibleError("target " + std::to_string(epsilon) +
                              " unreachable even at peak grid power " + std::to_string(peak));
    double lo = mean;  // never evaluated; the solver requires C > mean
    int iter = 0;
    while (hi - lo > kBracketTol && iter < kMaxIterations) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
        ++iter;
    }
    out.grid_power = hi;
    out.achieved = spectral::survivor_probability(spectral::solve(m, hi, opts), storage);
    out.iterations = iter;
    out.bracket = hi - lo;
    out.converged = (hi - lo) <= kBracketTol;
    return out;
}

double peak_savings(const model::Population& pop, double grid_power, double epsilon,
                    double support_duration, Engine engine,
                    const spectral::SolveOptions& opts) {
    if (!(support_duration > 0.0))
        throw ParameterError("support_duration must be positive, got " +
                             std::to_string(support_duration));
    const double shortfall = std::max(pop.peak_demand() - grid_power, 0.0);
    const double b_peak = shortfall * support_duration;
    if (b_peak == 0.0)
        throw DomainError("grid power covers the aggregate peak; savings undefined");
    const double b = epsilon_outage_capacity(pop, grid_power, epsilon, engine, opts).storage;
    return 1.0 - b / b_peak;
}

}  // namespace essize::sizing
