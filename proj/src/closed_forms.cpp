#include "essize/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace essize::closedform {

namespace {

void check_chi(double chi) {
    if (!(chi > 0.0) || !std::isfinite(chi))
        throw ParameterError("chi must be positive and finite, got " + std::to_string(chi));
}

void check_stable(double chi, double c) {
    if (!(c > 0.0 && c < 1.0))
        throw DomainError("normalized capacity must lie in (0,1), got " + std::to_string(c));
    if (!(chi / (1.0 + chi) < c))
        throw StabilityError("mean demand " + std::to_string(chi / (1.0 + chi)) +
                             " must be below capacity " + std::to_string(c));
}

}  // namespace

AsymptoticParams::AsymptoticParams(double lambda_, double sigma_, std::int64_t n_users_)
    : lambda(lambda_), sigma(sigma_), n_users(n_users_) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ParameterError("lambda must be positive and finite, got " + std::to_string(lambda));
    if (!(sigma > 0.0 && sigma < 1.0))
        throw ParameterError("sigma must lie in (0,1), got " + std::to_string(sigma));
    if (n_users < 1)
        throw ParameterError("n_users must be >= 1, got " + std::to_string(n_users));
    if (!(upsilon() > 0.0))
        throw StabilityError("sigma " + std::to_string(sigma) +
                             " is not above the per-source mean demand " +
                             std::to_string(lambda / (1.0 + lambda)));
}

CapacityDistribution::CapacityDistribution(std::vector<CapacityPoint> points_)
    : points(std::move(points_)) {
    if (points.empty()) throw ParameterError("capacity law needs at least one support point");
    double total = 0.0;
    for (const auto& pt : points) {
        if (!(pt.probability >= 0.0))
            throw ParameterError("support probability must be nonnegative, got " +
                                 std::to_string(pt.probability));
        if (!(pt.capacity > 0.0))
            throw ParameterError("support capacity must be positive, got " +
                                 std::to_string(pt.capacity));
        total += pt.probability;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw ParameterError("support probabilities sum to " + std::to_string(total) +
                             ", expected 1");
}

double single_user_overflow(double chi, double c, double b) {
    check_chi(chi);
    check_stable(chi, c);
    if (!(b >= 0.0))
        throw DomainError("storage level must be nonnegative, got " + std::to_string(b));
    const double z1 = chi / c - 1.0 / (1.0 - c);
    return chi / (c * (1.0 + chi)) * std::exp(z1 * b);
}

double single_user_capacity(double chi, double c, double eps) {
    check_chi(chi);
    check_stable(chi, c);
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError("target probability must lie in (0,1), got " + std::to_string(eps));
    const double at_zero = chi / (c * (1.0 + chi));
    if (eps >= at_zero) return 0.0;  // empty store already meets the target
    return c * (1.0 - c) / (chi - chi * c - c) * std::log(eps * c * (1.0 + chi) / chi);
}

double single_user_overflow_random_capacity(double chi, const CapacityDistribution& dist,
                                            double b) {
    check_chi(chi);
    for (const auto& pt : dist.points)
        if (!(pt.capacity < 1.0) || !(chi / (1.0 + chi) < pt.capacity))
            throw StabilityError("support point c = " + std::to_string(pt.capacity) +
                                 " is unstable for chi = " + std::to_string(chi));
    double mix = 0.0;
    for (const auto& pt : dist.points)
        mix += pt.probability * single_user_overflow(chi, pt.capacity, b);
    return mix;
}

double asymptotic_survivor(const AsymptoticParams& p, double x) {
    if (!(x >= 0.0))
        throw DomainError("level must be nonnegative, got " + std::to_string(x));
    const double lam = p.lambda;
    const double sg = p.sigma;
    const double n = static_cast<double>(p.n_users);
    const double mix = sg + lam * (1.0 - sg);

    const double f = std::log(sg / (lam * (1.0 - sg))) -
                     2.0 * (sg * (1.0 + lam) - lam) / mix;
    if (!(f > 0.0))
        throw DomainError("helper f(sigma) = " + std::to_string(f) +
                          " is not positive; approximation undefined here");
    const double u = (sg * (1.0 + lam) - lam) / (sg * (1.0 - lam));
    if (!(u > 0.0))
        throw DomainError("helper u = " + std::to_string(u) +
                          " is not positive; approximation undefined here");
    // The +/- sigma*log(sigma) pair below cancels as printed in the source
    // material; kept verbatim (no silent correction).
    const double phi = sg * std::log(sg) + (1.0 - sg) * std::log(1.0 - sg) -
                       sg * std::log(sg) + std::log(1.0 + lam);
    const double z = (1.0 - lam) + lam * (1.0 - 2.0 * sg) / mix;
    const double psi = (2.0 * sg - 1.0) * std::pow(sg * (1.0 + lam) - lam, 3) /
                       (sg * std::pow(1.0 - sg, 2) * std::pow(mix, 3));
    const double g = z + 0.5 * mix * psi * (1.0 - sg) / f;

    const double prefactor = 0.5 * std::sqrt(u / (std::numbers::pi * f * mix * n));
    const double value = prefactor * std::exp(-n * phi - g * x) *
                         std::exp(-2.0 * std::sqrt(f * mix * n * x));
    return std::clamp(value, 0.0, 1.0);
}

double to_physical_energy(double b_normalized, double peak_kw, double unit_hours) {
    if (!(peak_kw > 0.0) || !(unit_hours > 0.0))
        throw ParameterError("peak power and unit time must be positive");
    return b_normalized * peak_kw * unit_hours;
}

double to_normalized_energy(double b_kwh, double peak_kw, double unit_hours) {
    if (!(peak_kw > 0.0) || !(unit_hours > 0.0))
        throw ParameterError("peak power and unit time must be positive");
    return b_kwh / (peak_kw * unit_hours);
}

}  // namespace essize::closedform
