#include "essize/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <json.hpp>

namespace essize::spectral {

namespace {

constexpr double kDriftWindow = 1e-6;   // relative width of the degenerate band
constexpr double kZeroTol = 1e-10;      // zero-eigenvalue classification, times scale
constexpr double kResidualTol = 1e-8;   // eigenpair residual, times ||M||_inf
constexpr double kImagTol = 1e-9;       // allowed imaginary residue in probabilities
constexpr double kBackwardErrorTol = 1e-12;  // boundary solve, normwise backward error
constexpr int kMaxPerturbSteps = 8;

double generator_inf_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& M) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        double row = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(M, r); it; ++it)
            row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

}  // namespace

std::string Diagnostics::to_json() const {
    nlohmann::json j;
    auto& eig = j["eigenvalues"] = nlohmann::json::array();
    for (const auto& z : all_eigenvalues)
        eig.push_back({{"re", z.real()}, {"im", z.imag()}});
    j["zero_eigenvalue_magnitude"] = zero_eigenvalue_magnitude;
    j["max_residual"] = max_residual;
    j["condition_number"] = condition_number;
    j["boundary_backward_error"] = boundary_backward_error;
    j["generator_inf_norm"] = generator_inf_norm;
    j["retained_terms"] = retained_terms;
    return j.dump();
}

SpectralSolution solve(const model::FluidModel& m, double grid_power, const SolveOptions& opts) {
    const Eigen::Index S = m.num_states();
    if (S > opts.max_states)
        throw CapacityError("model has " + std::to_string(S) +
                            " states, dense solver cap is " + std::to_string(opts.max_states));
    if (!(grid_power > 0.0) || !std::isfinite(grid_power))
        throw ParameterError("grid_power must be positive and finite, got " +
                             std::to_string(grid_power));

    const double mean = m.population.mean_demand();
    if (!(mean < grid_power))
        throw StabilityError("mean demand " + std::to_string(mean) +
                             " must be below grid power " + std::to_string(grid_power));

    SpectralSolution sol;
    sol.stationary = m.stationary;
    sol.loads = m.loads;
    sol.drift.requested_power = grid_power;

    // Nudge C upward until no drift sits inside the degenerate band; the exact
    // zero-drift case makes the ODE singular and near-zero drifts poison the
    // scaled eigenproblem.
    double C = grid_power;
    Eigen::VectorXd d = m.loads.array() - C;
    int steps = 0;
    while (d.cwiseAbs().minCoeff() < kDriftWindow * std::max(1.0, C)) {
        C += kDriftWindow * std::max(1.0, C);
        d = m.loads.array() - C;
        if (++steps >= kMaxPerturbSteps)
            throw NumericalError("could not move grid power off state loads after " +
                                 std::to_string(steps) + " nudges");
    }
    sol.drift.grid_power = C;
    sol.drift.drifts = d;
    sol.drift.perturbation_steps = steps;

    std::vector<Eigen::Index> pos_drift;
    for (Eigen::Index s = 0; s < S; ++s)
        if (d[s] > 0.0) pos_drift.push_back(s);

    const double m_norm = generator_inf_norm(m.generator);
    sol.diagnostics.generator_inf_norm = m_norm;

    if (pos_drift.empty()) {
        // Grid covers the peak: the deficit never leaves zero.
        sol.eigenvalues.resize(0);
        sol.eigenvectors.resize(S, 0);
        sol.coefficients.resize(0);
        sol.survivor_weights.resize(0);
        return sol;
    }

    // Standard eigenproblem A = D^-1 M^T; right eigenvectors of A are the
    // transposed row-eigenvectors phi of  z phi D = phi M.
    Eigen::MatrixXd A(S, S);
    A.setZero();
    for (Eigen::Index r = 0; r < m.generator.rows(); ++r)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m.generator, r); it;
             ++it)
            A(it.col(), r) = it.value() / d[it.col()];

    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver failed to converge on " + std::to_string(S) +
                             " states");
    const Eigen::VectorXcd z = es.eigenvalues();
    Eigen::MatrixXcd V = es.eigenvectors();

    sol.diagnostics.all_eigenvalues.assign(z.data(), z.data() + z.size());

    // Classify the (unique) zero eigenvalue, then require every other
    // eigenvalue to sit strictly outside the zero window.
    const double scale = z.cwiseAbs().maxCoeff();
    const double zero_tol = kZeroTol * std::max(1.0, scale);
    Eigen::Index zi = 0;
    z.cwiseAbs().minCoeff(&zi);
    sol.diagnostics.zero_eigenvalue_magnitude = std::abs(z[zi].real());
    if (std::abs(z[zi].real()) > zero_tol)
        throw NumericalError("no eigenvalue inside the zero window; closest has |Re z| = " +
                             std::to_string(std::abs(z[zi].real())));
    for (Eigen::Index i = 0; i < S; ++i)
        if (i != zi && std::abs(z[i].real()) <= zero_tol)
            throw NumericalError("zero-eigenvalue window holds more than one eigenvalue");

    std::vector<Eigen::Index> retained;
    for (Eigen::Index i = 0; i < S; ++i)
        if (i != zi && z[i].real() < 0.0) retained.push_back(i);
    if (retained.size() != pos_drift.size())
        throw NumericalError("negative eigenvalue count " + std::to_string(retained.size()) +
                             " does not match positive-drift state count " +
                             std::to_string(pos_drift.size()));
    const auto P = static_cast<Eigen::Index>(retained.size());
    sol.diagnostics.retained_terms = static_cast<int>(P);

    // Deterministic eigenvector scaling: entries sum to one unless the sum is
    // numerically null, in which case the largest entry is set to one.
    for (auto i : retained) {
        const std::complex<double> total = V.col(i).sum();
        if (std::abs(total) > 1e-12 * V.col(i).cwiseAbs().sum()) {
            V.col(i) /= total;
        } else {
            Eigen::Index top = 0;
            V.col(i).cwiseAbs().maxCoeff(&top);
            V.col(i) /= V(top, i);
        }
    }

    // Residual of each retained pair in the original (unscaled) problem.
    const Eigen::SparseMatrix<double> Mt = m.generator.transpose();
    double worst = 0.0;
    for (auto i : retained) {
        const Eigen::VectorXd vr = V.col(i).real();
        const Eigen::VectorXd vi = V.col(i).imag();
        Eigen::VectorXcd mv(S), dv(S);
        mv.real() = Mt * vr;
        mv.imag() = Mt * vi;
        dv.real() = d.cwiseProduct(vr);
        dv.imag() = d.cwiseProduct(vi);
        worst = std::max(worst, (mv - z[i] * dv).cwiseAbs().maxCoeff());
    }
    sol.diagnostics.max_residual = worst / m_norm;
    if (worst > kResidualTol * m_norm)
        throw NumericalError("eigenpair residual " + std::to_string(worst / m_norm) +
                             " (relative) exceeds " + std::to_string(kResidualTol));

    // Boundary conditions F_s(0) = 0 at positive-drift states give a square
    // system for the coefficients alpha. Rows are equilibrated to unit max
    // magnitude first: eigenvector tails decay exponentially across states,
    // and unscaled rows would make any condition estimate meaningless.
    Eigen::MatrixXcd B(P, P);
    Eigen::VectorXcd rhs(P);
    for (Eigen::Index row = 0; row < P; ++row) {
        const Eigen::Index s = pos_drift[static_cast<std::size_t>(row)];
        for (Eigen::Index col = 0; col < P; ++col)
            B(row, col) = V(s, retained[static_cast<std::size_t>(col)]);
        rhs[row] = -m.stationary[s];
        const double row_scale = B.row(row).cwiseAbs().maxCoeff();
        if (!(row_scale > 0.0))
            throw ConditioningError("boundary row " + std::to_string(row) +
                                    " is identically zero");
        B.row(row) /= row_scale;
        rhs[row] /= row_scale;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(B);
    {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        if (!(smin > 0.0) || !std::isfinite(smax))
            throw ConditioningError("boundary system numerically singular");
        sol.diagnostics.condition_number = smax / smin;
    }
    const Eigen::VectorXcd alpha = qr.solve(rhs);
    // The system can be legitimately ill-conditioned (coefficients of fast,
    // negligible modes are poorly determined while the dominant slow modes
    // stay accurate), so the solve is judged by normwise backward error
    // rather than by raw residual, which grows with the coefficient norm.
    const double boundary_residual = (B * alpha - rhs).cwiseAbs().maxCoeff();
    const double b_norm = B.cwiseAbs().rowwise().sum().maxCoeff();
    const double backward_error =
        boundary_residual /
        (b_norm * alpha.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff());
    sol.diagnostics.boundary_backward_error = backward_error;
    if (!(backward_error <= kBackwardErrorTol) || !alpha.allFinite())
        throw ConditioningError("boundary conditions unsatisfied; backward error " +
                                std::to_string(backward_error));

    sol.eigenvalues.resize(P);
    sol.eigenvectors.resize(S, P);
    sol.coefficients = alpha;
    sol.survivor_weights.resize(P);
    for (Eigen::Index i = 0; i < P; ++i) {
        const Eigen::Index src = retained[static_cast<std::size_t>(i)];
        sol.eigenvalues[i] = z[src];
        sol.eigenvectors.col(i) = V.col(src);
        sol.survivor_weights[i] = alpha[i] * V.col(src).sum();
    }
    return sol;
}

double survivor_probability(const SpectralSolution& sol, double level) {
    if (!(level >= 0.0))
        throw DomainError("level must be nonnegative, got " + std::to_string(level));
    std::complex<double> tail(0.0, 0.0);
    for (Eigen::Index i = 0; i < sol.eigenvalues.size(); ++i)
        tail += sol.survivor_weights[i] * std::exp(sol.eigenvalues[i] * level);
    if (std::abs(tail.imag()) > kImagTol)
        throw NumericalError("imaginary residue " + std::to_string(std::abs(tail.imag())) +
                             " in survivor value");
    return std::clamp(-tail.real(), 0.0, 1.0);
}

Eigen::VectorXd cdf(const SpectralSolution& sol, double level) {
    if (!(level >= 0.0))
        throw DomainError("level must be nonnegative, got " + std::to_string(level));
    Eigen::VectorXcd f = sol.stationary.cast<std::complex<double>>();
    for (Eigen::Index i = 0; i < sol.eigenvalues.size(); ++i)
        f += sol.coefficients[i] * std::exp(sol.eigenvalues[i] * level) * sol.eigenvectors.col(i);
    if (f.imag().cwiseAbs().maxCoeff() > kImagTol)
        throw NumericalError("imaginary residue in cdf evaluation");
    return f.real();
}

double overload_probability(const SpectralSolution& sol) {
    double p = 0.0;
    for (Eigen::Index s = 0; s < sol.loads.size(); ++s)
        if (sol.loads[s] > sol.drift.grid_power) p += sol.stationary[s];
    return p;
}

}  // namespace essize::spectral
