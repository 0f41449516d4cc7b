#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ctoqw/dense.hpp"
#include "ctoqw/dynamics.hpp"
#include "ctoqw/graph.hpp"
#include "ctoqw/lindblad.hpp"

namespace ctoqw {

enum class SteadyStateClass { maximally_mixed, coherent_limit, non_unique };

inline const char* to_string(SteadyStateClass c) {
    switch (c) {
        case SteadyStateClass::maximally_mixed: return "maximally_mixed";
        case SteadyStateClass::coherent_limit: return "coherent_limit";
        case SteadyStateClass::non_unique: return "non_unique";
    }
    return "unknown";
}

struct SteadyStateReport {
    int kernel_dim = 0;
    bool unique = false;
    std::optional<DensityMatrix> rho_inf;
    std::vector<ComplexMatrix> kernel_basis;  // unvectorized null vectors, raw scale
    double min_eigenvalue = 0.0;
    bool positive_definite = false;      // min eigenvalue > positivity tolerance
    bool positivity_indeterminate = false;  // |min eigenvalue| within the tolerance band
    double residual = 0.0;               // ||generator(rho_inf)||_max
    SteadyStateClass classification = SteadyStateClass::non_unique;
    bool theorem_consistent = true;      // set by classify_steady_state
    std::string falsification;           // non-empty when a structural claim failed numerically
};

// Solves generator(rho) = 0 with tr rho = 1 through the right null space of
// the vectorized generator. A one-dimensional kernel yields the unique
// steady state: the null vector is phase-rotated to a positive trace,
// symmetrized, and trace-normalized.
inline SteadyStateReport solve_steady_state(const Liouvillian& lio, const Tolerances& tol = {}) {
    SteadyStateReport report;
    const auto kernel = null_space(lio.matrix, std::nullopt, tol);
    report.kernel_dim = static_cast<int>(kernel.size());
    report.unique = report.kernel_dim == 1;

    if (report.kernel_dim == 0) {
        Eigen::JacobiSVD<ComplexMatrix> svd(lio.matrix);
        throw std::runtime_error(
            "solve_steady_state: generator is numerically full rank, which contradicts trace "
            "preservation; smallest singular value = " +
            std::to_string(svd.singularValues().minCoeff()));
    }

    for (const auto& v : kernel)
        report.kernel_basis.push_back(unvectorize(v, lio.dim));

    if (!report.unique) {
        report.classification = SteadyStateClass::non_unique;
        double worst = 0.0;
        for (const auto& x : report.kernel_basis)
            worst = std::max(worst, max_abs(apply_generator(lio.hamiltonian, lio.lindblad, x)));
        report.residual = worst;
        return report;
    }

    ComplexMatrix x = report.kernel_basis.front();
    const Complex tr = x.trace();
    if (std::abs(tr) < 1e-300)
        throw std::runtime_error("solve_steady_state: kernel vector is traceless");
    x *= std::conj(tr) / std::abs(tr);  // trace now real and positive
    x = 0.5 * (x + x.adjoint().eval());
    x /= x.trace().real();

    report.residual = max_abs(apply_generator(lio.hamiltonian, lio.lindblad, x));
    report.rho_inf = validate_density(x, tol);
    report.min_eigenvalue = report.rho_inf->min_eigenvalue();
    report.positive_definite = report.min_eigenvalue > tol.positivity;
    report.positivity_indeterminate = std::abs(report.min_eigenvalue) <= tol.positivity;

    const ComplexMatrix mixed = ComplexMatrix::Identity(lio.dim, lio.dim) / double(lio.dim);
    report.classification = max_abs(x - mixed) <= tol.mixed_state_match
                                ? SteadyStateClass::maximally_mixed
                                : SteadyStateClass::coherent_limit;
    return report;
}

// Completes a solved report with the structural consistency checks:
// connected graphs must relax to a unique positive-definite state, and the
// limit is maximally mixed exactly when the transition matrix is doubly
// stochastic. Disconnected graphs are vacuously consistent.
inline SteadyStateReport classify_steady_state(const Graph& g, SteadyStateReport report,
                                               const Tolerances& tol = {}) {
    const GraphClassification facts = classify(g, tol);
    report.theorem_consistent = true;
    report.falsification.clear();

    if (!facts.connected) return report;

    auto flag = [&](const std::string& what) {
        report.theorem_consistent = false;
        if (!report.falsification.empty()) report.falsification += "; ";
        report.falsification += what;
    };

    if (!report.unique)
        flag("connected graph produced kernel dimension " + std::to_string(report.kernel_dim));
    if (report.unique && report.min_eigenvalue < -tol.positivity)
        flag("steady state has negative eigenvalue " + std::to_string(report.min_eigenvalue));

    const bool mixed_limit = report.classification == SteadyStateClass::maximally_mixed;
    if (facts.doubly_stochastic_M && !mixed_limit)
        flag("doubly stochastic transition matrix but the limit is not maximally mixed");
    if (!facts.doubly_stochastic_M && mixed_limit)
        flag("maximally mixed limit although the transition matrix is not doubly stochastic");
    return report;
}

struct CoherenceReport {
    double l1_offdiag = 0.0;
    double max_offdiag = 0.0;
    Eigen::VectorXd diag_distribution;
};

inline CoherenceReport coherence(const ComplexMatrix& rho) {
    require_square(rho, "coherence");
    CoherenceReport rep;
    rep.diag_distribution = rho.diagonal().real();
    for (Eigen::Index r = 0; r < rho.rows(); ++r)
        for (Eigen::Index c = 0; c < rho.cols(); ++c) {
            if (r == c) continue;
            const double mag = std::abs(rho(r, c));
            rep.l1_offdiag += mag;
            rep.max_offdiag = std::max(rep.max_offdiag, mag);
        }
    return rep;
}

inline CoherenceReport coherence(const DensityMatrix& rho) { return coherence(rho.matrix()); }

// Half the sum of singular values of the difference.
inline double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::JacobiSVD<ComplexMatrix> svd(a - b);
    return 0.5 * svd.singularValues().sum();
}

inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    return trace_distance(a.matrix(), b.matrix());
}

// Smallest nonzero |Re lambda| of the vectorized generator. Diagnostic for
// relaxation speed only; nothing downstream gates on it.
inline double spectral_gap(const Liouvillian& lio) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(lio.matrix);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectral_gap: eigensolver failed");
    const auto& values = solver.eigenvalues();
    const double cutoff = 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff());
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (std::abs(values(i)) <= cutoff) continue;
        gap = std::min(gap, std::abs(values(i).real()));
    }
    return std::isfinite(gap) ? gap : 0.0;
}

struct ConvergenceProfile {
    std::vector<std::pair<double, double>> distances;  // (time, trace distance to target)
    double gap = 0.0;
};

inline ConvergenceProfile convergence_profile(const Liouvillian& lio, const ComplexMatrix& rho0,
                                              const ComplexMatrix& target,
                                              const std::vector<double>& times,
                                              EvolveMethod method = EvolveMethod::expm,
                                              const Tolerances& tol = {}) {
    if (target.rows() != lio.dim || target.cols() != lio.dim)
        throw std::invalid_argument("convergence_profile: target dimension mismatch");
    const DensityTrajectory traj = evolve_ctoqw(lio, rho0, times, method, tol);
    ConvergenceProfile profile;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        profile.distances.emplace_back(traj.times[i], trace_distance(traj.states[i], target));
    profile.gap = spectral_gap(lio);
    return profile;
}

// Closed-form steady states used as regression targets: the 3-path and the
// claw have known exact limits, and any connected regular graph relaxes to
// the maximally mixed state.
inline std::optional<std::pair<std::string, ComplexMatrix>> known_steady_state(const Graph& g) {
    const auto& edges = g.edges();
    const std::vector<std::pair<int, int>> path3{{0, 1}, {1, 2}};
    const std::vector<std::pair<int, int>> claw{{0, 1}, {0, 2}, {0, 3}};

    if (g.vertex_count() == 3 && edges == path3) {
        ComplexMatrix rho(3, 3);
        const Complex upper(-1.0 / 28, 1.0 / 28), lower(-1.0 / 28, -1.0 / 28);
        rho << Complex(2.0 / 7), upper, Complex(1.0 / 14),
               lower, Complex(3.0 / 7), lower,
               Complex(1.0 / 14), upper, Complex(2.0 / 7);
        return std::make_pair(std::string("path3"), rho);
    }
    if (g.vertex_count() == 4 && edges == claw) {
        ComplexMatrix rho(4, 4);
        const Complex hub_row(-2.0 / 39, -1.0 / 39), hub_col(-2.0 / 39, 1.0 / 39);
        const Complex leaf(2.0 / 39), hub(11.0 / 26), diag(5.0 / 26);
        rho << hub, hub_row, hub_row, hub_row,
               hub_col, diag, leaf, leaf,
               hub_col, leaf, diag, leaf,
               hub_col, leaf, leaf, diag;
        return std::make_pair(std::string("claw"), rho);
    }
    const GraphClassification facts = classify(g);
    if (facts.connected && facts.regular) {
        const int n = g.vertex_count();
        return std::make_pair(std::string("maximally_mixed"),
                              ComplexMatrix(ComplexMatrix::Identity(n, n) / double(n)));
    }
    return std::nullopt;
}

}  // namespace ctoqw
