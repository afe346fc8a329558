#include "essize/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace essize::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [0,1) from the top 53 bits; avoids distribution objects so the
// stream is identical across standard libraries.
double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& eng, double rate) {
    return -std::log1p(-uniform01(eng)) / rate;
}

void check_config(const SimConfig& cfg) {
    if (cfg.population.total_users() == 0)
        throw DegenerateError("population has no consumers; the chain never moves");
    if (!(cfg.grid_power > 0.0))
        throw ParameterError("grid_power must be positive, got " +
                             std::to_string(cfg.grid_power));
    if (!(cfg.efficiency > 0.0 && cfg.efficiency <= 1.0))
        throw ParameterError("efficiency must lie in (0,1], got " +
                             std::to_string(cfg.efficiency));
    if (!(cfg.horizon > 0.0))
        throw ParameterError("horizon must be positive, got " + std::to_string(cfg.horizon));
    if (cfg.replications < 1)
        throw ParameterError("replications must be >= 1, got " +
                             std::to_string(cfg.replications));
    const double warmup = cfg.warmup < 0.0 ? 0.1 * cfg.horizon : cfg.warmup;
    if (!(cfg.horizon > warmup))
        throw ParameterError("horizon " + std::to_string(cfg.horizon) +
                             " must exceed warmup " + std::to_string(warmup));
    if (cfg.population.state_space_size() > model::kDefaultStateCap)
        throw CapacityError("state space has " +
                            std::to_string(cfg.population.state_space_size()) +
                            " states, occupancy tracking cap is " +
                            std::to_string(model::kDefaultStateCap));
}

struct Accumulator {
    std::vector<double> time_above;  // per requested level
    Eigen::VectorXd occupancy;
    double deficit_integral = 0.0;
    double deficit_sq_integral = 0.0;
    double measured = 0.0;  // accounted time (horizon - warmup)
};

// Deficit over one sojourn: linear at `rate` from `d0`, absorbed at zero when
// decreasing. Accounts only the part of [t0, t1) past the warmup point.
void account_segment(Accumulator& acc, const std::vector<double>& levels,
                     Eigen::Index state, double d0, double rate, double t0, double t1,
                     double warmup) {
    if (t1 <= warmup) return;
    if (t0 < warmup) {
        d0 = std::max(d0 + rate * (warmup - t0), 0.0);
        t0 = warmup;
    }
    const double span = t1 - t0;
    if (span <= 0.0) return;
    acc.measured += span;
    acc.occupancy[state] += span;

    // duration of the strictly linear part (before absorption at zero)
    const double linear = rate < 0.0 ? std::min(span, d0 / -rate) : span;
    const double d1 = d0 + rate * linear;
    acc.deficit_integral += linear * 0.5 * (d0 + d1);
    acc.deficit_sq_integral += linear * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;

    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double x = levels[i];
        double above;
        if (rate > 0.0) {
            above = x <= d0 ? span : span - std::min(span, (x - d0) / rate);
        } else if (rate < 0.0) {
            above = x >= d0 ? 0.0 : std::min(span, (d0 - x) / -rate);
        } else {
            above = d0 > x ? span : 0.0;
        }
        acc.time_above[i] += above;
    }
}

}  // namespace

SimulationSummary simulate(const SimConfig& cfg, const std::vector<double>& levels) {
    check_config(cfg);
    for (double x : levels)
        if (!(x >= 0.0))
            throw DomainError("levels must be nonnegative, got " + std::to_string(x));

    const auto& pop = cfg.population;
    const std::size_t K = pop.num_classes();
    const auto S = static_cast<Eigen::Index>(pop.state_space_size());
    const double warmup = cfg.warmup < 0.0 ? 0.1 * cfg.horizon : cfg.warmup;
    const double eta = cfg.efficiency;

    std::vector<std::int64_t> strides(K);
    {
        std::int64_t stride = 1;
        for (std::size_t k = 0; k < K; ++k) {
            strides[k] = stride;
            stride *= pop.counts[k] + 1;
        }
    }

    const int R = cfg.replications;
    const auto L = levels.size();
    std::vector<std::vector<double>> survivor_by_rep(static_cast<std::size_t>(R),
                                                     std::vector<double>(L, 0.0));
    Eigen::MatrixXd occupancy_by_rep(S, R);
    std::vector<double> mean_by_rep(static_cast<std::size_t>(R), 0.0);
    std::vector<double> meansq_by_rep(static_cast<std::size_t>(R), 0.0);
    std::int64_t events = 0;

    for (int rep = 0; rep < R; ++rep) {
        std::mt19937_64 eng(
            splitmix64(cfg.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(rep) + 1))));

        // start from a stationary sample: per-class binomial occupancies
        std::vector<std::int64_t> occ(K);
        for (std::size_t k = 0; k < K; ++k) {
            const double p = pop.classes[k].on_probability();
            std::int64_t n_on = 0;
            for (std::int64_t i = 0; i < pop.counts[k]; ++i)
                if (uniform01(eng) < p) ++n_on;
            occ[k] = n_on;
        }

        Accumulator acc;
        acc.time_above.assign(L, 0.0);
        acc.occupancy = Eigen::VectorXd::Zero(S);

        double t = 0.0;
        double deficit = 0.0;
        while (t < cfg.horizon) {
            double load = 0.0;
            double total_rate = 0.0;
            Eigen::Index state = 0;
            for (std::size_t k = 0; k < K; ++k) {
                load += static_cast<double>(occ[k]) * pop.classes[k].peak_demand;
                total_rate += static_cast<double>(pop.counts[k] - occ[k]) * pop.classes[k].lambda +
                              static_cast<double>(occ[k]) * pop.classes[k].mu;
                state += static_cast<Eigen::Index>(occ[k] * strides[k]);
            }
            const double net = load - cfg.grid_power;
            double rate;
            if (cfg.eta_mode == EtaMode::symmetric)
                rate = eta * net;
            else
                rate = net > 0.0 ? net : eta * net;

            const double sojourn = exponential(eng, total_rate);
            const double t_end = std::min(t + sojourn, cfg.horizon);
            account_segment(acc, levels, state, deficit, rate, t, t_end, warmup);
            deficit = std::max(deficit + rate * (t_end - t), 0.0);
            t += sojourn;
            if (t >= cfg.horizon) break;

            // pick the transition proportionally to its rate
            double pick = uniform01(eng) * total_rate;
            bool moved = false;
            for (std::size_t k = 0; k < K && !moved; ++k) {
                const double up = static_cast<double>(pop.counts[k] - occ[k]) * pop.classes[k].lambda;
                if (pick < up) {
                    ++occ[k];
                    moved = true;
                    break;
                }
                pick -= up;
                const double down = static_cast<double>(occ[k]) * pop.classes[k].mu;
                if (pick < down) {
                    --occ[k];
                    moved = true;
                    break;
                }
                pick -= down;
            }
            if (!moved) {
                // roundoff pushed the draw past the last slot; take the last
                // transition with positive rate
                for (std::size_t k = K; k-- > 0;) {
                    if (occ[k] > 0) {
                        --occ[k];
                        break;
                    }
                    if (occ[k] < pop.counts[k]) {
                        ++occ[k];
                        break;
                    }
                }
            }
            ++events;
        }

        const auto r = static_cast<std::size_t>(rep);
        for (std::size_t i = 0; i < L; ++i)
            survivor_by_rep[r][i] = acc.time_above[i] / acc.measured;
        occupancy_by_rep.col(rep) = acc.occupancy / acc.measured;
        mean_by_rep[r] = acc.deficit_integral / acc.measured;
        meansq_by_rep[r] = acc.deficit_sq_integral / acc.measured;
    }

    SimulationSummary out;
    out.stable = pop.mean_demand() < cfg.grid_power;
    out.events = events;
    out.survivors.resize(L);
    for (std::size_t i = 0; i < L; ++i) {
        double mean = 0.0;
        for (int rep = 0; rep < R; ++rep) mean += survivor_by_rep[static_cast<std::size_t>(rep)][i];
        mean /= R;
        double var = 0.0;
        for (int rep = 0; rep < R; ++rep) {
            const double d = survivor_by_rep[static_cast<std::size_t>(rep)][i] - mean;
            var += d * d;
        }
        out.survivors[i].level = levels[i];
        out.survivors[i].estimate = mean;
        out.survivors[i].std_error =
            R > 1 ? std::sqrt(var / (R - 1) / R) : 0.0;
        out.survivors[i].replications = R;
    }
    out.occupancy = occupancy_by_rep.rowwise().mean();
    out.occupancy_se = Eigen::VectorXd::Zero(S);
    if (R > 1) {
        for (Eigen::Index s = 0; s < S; ++s) {
            double var = 0.0;
            for (int rep = 0; rep < R; ++rep) {
                const double d = occupancy_by_rep(s, rep) - out.occupancy[s];
                var += d * d;
            }
            out.occupancy_se[s] = std::sqrt(var / (R - 1) / R);
        }
    }
    double mean_def = 0.0, mean_sq = 0.0;
    for (int rep = 0; rep < R; ++rep) {
        mean_def += mean_by_rep[static_cast<std::size_t>(rep)];
        mean_sq += meansq_by_rep[static_cast<std::size_t>(rep)];
    }
    out.mean_deficit = mean_def / R;
    out.mean_square_deficit = mean_sq / R;
    return out;
}

std::vector<SurvivorEstimate> estimate_survivor(const SimConfig& cfg,
                                                const std::vector<double>& levels) {
    if (cfg.replications < 2)
        throw EstimatorError("standard errors need at least 2 replications, got " +
                             std::to_string(cfg.replications));
    return simulate(cfg, levels).survivors;
}

}  // namespace essize::sim
