#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ctoqw/dense.hpp"
#include "ctoqw/graph.hpp"
#include "ctoqw/lindblad.hpp"

namespace ctoqw {

enum class Process { ctoqw, ctrw, ctqw };
enum class EvolveMethod { expm, rk_adaptive };

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
};

struct ProbabilityTrajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<ComplexVector> states;
};

inline Eigen::VectorXd site_distribution(const ComplexMatrix& rho) {
    return rho.diagonal().real();
}

inline Eigen::VectorXd site_distribution(const ComplexVector& psi) {
    return psi.cwiseAbs2();
}

namespace detail {

inline void require_sample_times(const std::vector<double>& times, const char* who) {
    if (times.empty())
        throw std::invalid_argument(std::string(who) + ": empty time list");
    if (times.front() < 0.0)
        throw std::invalid_argument(std::string(who) + ": times must start at t >= 0");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i + 1] < times[i])
            throw std::invalid_argument(std::string(who) + ": times must be ascending");
    for (double t : times)
        if (!std::isfinite(t))
            throw std::invalid_argument(std::string(who) + ": non-finite time");
}

// Dormand-Prince 5(4) with PI-free step control on the matrix ODE
// drho/dt = L(rho). The generator is autonomous, so no time argument.
template <typename Rhs>
ComplexMatrix integrate_adaptive(const Rhs& rhs, ComplexMatrix y, double t0, double t1,
                                 double rtol, double atol) {
    if (t1 <= t0) return y;

    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    double t = t0;
    double h = std::min(t1 - t0, 0.1);
    ComplexMatrix k1 = rhs(y);

    while (t < t1) {
        const double remaining = t1 - t;
        if (remaining <= 1e-14 * std::max(1.0, std::abs(t1))) break;  // rounding residue
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw std::runtime_error("integrate_adaptive: step underflow at t = " +
                                     std::to_string(t));
        h = std::min(h, remaining);

        const ComplexMatrix k2 = rhs(y + h * (a21 * k1));
        const ComplexMatrix k3 = rhs(y + h * (a31 * k1 + a32 * k2));
        const ComplexMatrix k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const ComplexMatrix k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const ComplexMatrix k6 =
            rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const ComplexMatrix y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const ComplexMatrix k7 = rhs(y5);
        const ComplexMatrix err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double scaled = 0.0;
        for (Eigen::Index c = 0; c < y.cols(); ++c)
            for (Eigen::Index r = 0; r < y.rows(); ++r) {
                const double scale =
                    atol + rtol * std::max(std::abs(y(r, c)), std::abs(y5(r, c)));
                scaled = std::max(scaled, std::abs(err(r, c)) / scale);
            }

        if (scaled <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // first-same-as-last
        }
        const double factor =
            scaled > 0.0 ? 0.9 * std::pow(scaled, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return y;
}

}  // namespace detail

// rho(t) = exp(t L) rho(0). The expm method advances vec(rho) by the step
// propagator (recomputed only when the step width changes); rk_adaptive
// integrates the generator action directly.
inline DensityTrajectory evolve_ctoqw(const Liouvillian& lio, const ComplexMatrix& rho0,
                                      const std::vector<double>& times,
                                      EvolveMethod method = EvolveMethod::expm,
                                      const Tolerances& tol = {}) {
    detail::require_sample_times(times, "evolve_ctoqw");
    if (rho0.rows() != lio.dim || rho0.cols() != lio.dim)
        throw std::invalid_argument("evolve_ctoqw: state dimension mismatch");

    DensityTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());

    if (method == EvolveMethod::expm) {
        ComplexVector v = vectorize(rho0);
        double t_cur = 0.0;
        double cached_dt = -1.0;
        ComplexMatrix propagator;
        for (double t : times) {
            const double dt = t - t_cur;
            if (dt > 0.0) {
                if (dt != cached_dt) {
                    propagator = expm(dt * lio.matrix);
                    cached_dt = dt;
                }
                v = propagator * v;
                t_cur = t;
            }
            traj.states.push_back(unvectorize(v, lio.dim));
        }
    } else {
        auto rhs = [&](const ComplexMatrix& rho) {
            return apply_generator(lio.hamiltonian, lio.lindblad, rho);
        };
        ComplexMatrix y = rho0;
        double t_cur = 0.0;
        for (double t : times) {
            y = detail::integrate_adaptive(rhs, y, t_cur, t, tol.rk_rel, tol.rk_abs);
            t_cur = t;
            traj.states.push_back(y);
        }
    }
    return traj;
}

// Classical heat semigroup p(t) = exp(-t L) p(0), evaluated through the
// Laplacian spectrum so long horizons stay stable.
inline ProbabilityTrajectory evolve_ctrw(const Graph& g, const Eigen::VectorXd& p0,
                                         const std::vector<double>& times,
                                         const Tolerances& tol = {}) {
    detail::require_sample_times(times, "evolve_ctrw");
    if (p0.size() != g.vertex_count())
        throw std::invalid_argument("evolve_ctrw: distribution dimension mismatch");
    if (p0.minCoeff() < -1e-12)
        throw std::invalid_argument("evolve_ctrw: negative probability entry");
    if (std::abs(p0.sum() - 1.0) > tol.trace)
        throw std::invalid_argument("evolve_ctrw: probabilities must sum to 1");

    const Spectrum spec = hermitian_eig(laplacian(g));
    const Eigen::MatrixXd v = spec.eigenvectors.real();
    const Eigen::VectorXd coeffs = v.transpose() * p0;

    ProbabilityTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    for (double t : times) {
        if (t == 0.0) {
            traj.states.push_back(p0);
            continue;
        }
        const Eigen::VectorXd damped =
            (-t * spec.eigenvalues.array()).exp() * coeffs.array();
        traj.states.push_back(v * damped);
    }
    return traj;
}

// Unitary walk psi(t) = exp(-i t L) psi(0) through the eigendecomposition.
inline AmplitudeTrajectory evolve_ctqw(const Graph& g, const ComplexVector& psi0,
                                       const std::vector<double>& times,
                                       const Tolerances& = {}) {
    detail::require_sample_times(times, "evolve_ctqw");
    if (psi0.size() != g.vertex_count())
        throw std::invalid_argument("evolve_ctqw: amplitude dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("evolve_ctqw: initial amplitudes must have unit norm");

    const Spectrum spec = hermitian_eig(laplacian(g));
    const ComplexVector coeffs = spec.eigenvectors.adjoint() * psi0;

    AmplitudeTrajectory traj;
    traj.times = times;
    traj.states.reserve(times.size());
    const Complex minus_i(0.0, -1.0);
    for (double t : times) {
        if (t == 0.0) {
            traj.states.push_back(psi0);
            continue;
        }
        ComplexVector rotated(coeffs.size());
        for (Eigen::Index j = 0; j < coeffs.size(); ++j)
            rotated(j) = std::exp(minus_i * (t * spec.eigenvalues(j))) * coeffs(j);
        traj.states.push_back(spec.eigenvectors * rotated);
    }
    return traj;
}

// Cesaro limit of the unitary walk's site distribution from a start state:
// P_inf(v) = sum over eigenvalue groups |<v| Pi_lambda |psi0>|^2. Eigenvalues
// equal within the grouping tolerance share a spectral projector, so the
// formula also covers degenerate spectra.
inline Eigen::VectorXd ctqw_limiting_average(const Graph& g, const ComplexVector& psi0,
                                             const Tolerances& tol = {}) {
    if (psi0.size() != g.vertex_count())
        throw std::invalid_argument("ctqw_limiting_average: amplitude dimension mismatch");
    const Spectrum spec = hermitian_eig(laplacian(g));
    const int n = g.vertex_count();

    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    int group_start = 0;
    while (group_start < n) {
        int group_end = group_start + 1;
        while (group_end < n && spec.eigenvalues(group_end) - spec.eigenvalues(group_end - 1) <=
                                    tol.eigenvalue_group)
            ++group_end;
        ComplexVector projected = ComplexVector::Zero(n);
        for (int j = group_start; j < group_end; ++j)
            projected += spec.eigenvectors.col(j) * (spec.eigenvectors.col(j).adjoint() * psi0);
        out += projected.cwiseAbs2();
        group_start = group_end;
    }
    return out;
}

inline Eigen::VectorXd ctqw_limiting_average(const Graph& g, int start,
                                             const Tolerances& tol = {}) {
    if (start < 0 || start >= g.vertex_count())
        throw std::invalid_argument("ctqw_limiting_average: start vertex out of range");
    ComplexVector psi0 = ComplexVector::Zero(g.vertex_count());
    psi0(start) = 1.0;
    return ctqw_limiting_average(g, psi0, tol);
}

// Initial condition resolved per process type.
struct InitialState {
    enum class Kind { vertex, uniform_mixed, uniform_superposition, explicit_density,
                      explicit_probabilities, explicit_amplitudes };
    Kind kind = Kind::vertex;
    int vertex_index = 0;
    ComplexMatrix density;
    Eigen::VectorXd probabilities;
    ComplexVector amplitudes;

    static InitialState vertex(int j) {
        InitialState s;
        s.kind = Kind::vertex;
        s.vertex_index = j;
        return s;
    }
    static InitialState uniform_mixed() {
        InitialState s;
        s.kind = Kind::uniform_mixed;
        return s;
    }
    static InitialState uniform_superposition() {
        InitialState s;
        s.kind = Kind::uniform_superposition;
        return s;
    }
    static InitialState explicit_density(ComplexMatrix m) {
        InitialState s;
        s.kind = Kind::explicit_density;
        s.density = std::move(m);
        return s;
    }
    static InitialState explicit_probabilities(Eigen::VectorXd p) {
        InitialState s;
        s.kind = Kind::explicit_probabilities;
        s.probabilities = std::move(p);
        return s;
    }
    static InitialState explicit_amplitudes(ComplexVector a) {
        InitialState s;
        s.kind = Kind::explicit_amplitudes;
        s.amplitudes = std::move(a);
        return s;
    }
};

inline void require_vertex_in_range(const InitialState& init, int n, const char* who) {
    if (init.vertex_index < 0 || init.vertex_index >= n)
        throw std::invalid_argument(std::string(who) + ": start vertex out of range");
}

inline ComplexMatrix initial_density(const InitialState& init, int n, const Tolerances& tol = {}) {
    using Kind = InitialState::Kind;
    switch (init.kind) {
        case Kind::vertex: {
            require_vertex_in_range(init, n, "initial_density");
            ComplexMatrix rho = ComplexMatrix::Zero(n, n);
            rho(init.vertex_index, init.vertex_index) = 1.0;
            return rho;
        }
        case Kind::uniform_mixed:
            return ComplexMatrix::Identity(n, n) / double(n);
        case Kind::uniform_superposition: {
            ComplexVector psi = ComplexVector::Constant(n, Complex(1.0 / std::sqrt(double(n)), 0.0));
            return psi * psi.adjoint();
        }
        case Kind::explicit_density:
            return validate_density(init.density, tol).matrix();
        case Kind::explicit_probabilities: {
            if (init.probabilities.size() != n)
                throw std::invalid_argument("initial_density: distribution dimension mismatch");
            ComplexMatrix rho = ComplexMatrix::Zero(n, n);
            rho.diagonal() = init.probabilities.cast<Complex>();
            return validate_density(rho, tol).matrix();
        }
        case Kind::explicit_amplitudes: {
            if (init.amplitudes.size() != n)
                throw std::invalid_argument("initial_density: amplitude dimension mismatch");
            return init.amplitudes * init.amplitudes.adjoint();
        }
    }
    throw std::invalid_argument("initial_density: unknown initial-state kind");
}

inline Eigen::VectorXd initial_probability(const InitialState& init, int n) {
    using Kind = InitialState::Kind;
    switch (init.kind) {
        case Kind::vertex: {
            require_vertex_in_range(init, n, "initial_probability");
            Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
            p(init.vertex_index) = 1.0;
            return p;
        }
        case Kind::uniform_mixed:
        case Kind::uniform_superposition:
            return Eigen::VectorXd::Constant(n, 1.0 / n);
        case Kind::explicit_probabilities:
            if (init.probabilities.size() != n)
                throw std::invalid_argument("initial_probability: dimension mismatch");
            return init.probabilities;
        case Kind::explicit_density:
            if (init.density.rows() != n)
                throw std::invalid_argument("initial_probability: dimension mismatch");
            return site_distribution(ComplexMatrix(init.density));
        case Kind::explicit_amplitudes:
            if (init.amplitudes.size() != n)
                throw std::invalid_argument("initial_probability: dimension mismatch");
            return site_distribution(init.amplitudes);
    }
    throw std::invalid_argument("initial_probability: unknown initial-state kind");
}

inline ComplexVector initial_amplitude(const InitialState& init, int n) {
    using Kind = InitialState::Kind;
    switch (init.kind) {
        case Kind::vertex: {
            require_vertex_in_range(init, n, "initial_amplitude");
            ComplexVector psi = ComplexVector::Zero(n);
            psi(init.vertex_index) = 1.0;
            return psi;
        }
        case Kind::uniform_superposition:
            return ComplexVector::Constant(n, Complex(1.0 / std::sqrt(double(n)), 0.0));
        case Kind::explicit_amplitudes:
            if (init.amplitudes.size() != n)
                throw std::invalid_argument("initial_amplitude: dimension mismatch");
            return init.amplitudes;
        case Kind::uniform_mixed:
        case Kind::explicit_density:
        case Kind::explicit_probabilities:
            throw std::invalid_argument(
                "initial_amplitude: mixed-state initial condition cannot seed a unitary walk");
    }
    throw std::invalid_argument("initial_amplitude: unknown initial-state kind");
}

// Default grid: t = 0 followed by samples-1 log-spaced points spanning three
// decades up to the horizon.
inline std::vector<double> default_sample_times(double horizon, int samples = 64) {
    if (horizon <= 0.0) return {0.0};
    if (samples < 2) throw std::invalid_argument("default_sample_times: need samples >= 2");
    std::vector<double> times{0.0};
    const int m = samples - 1;
    for (int i = 1; i <= m; ++i)
        times.push_back(horizon * std::pow(10.0, -3.0 * double(m - i) / double(m)));
    return times;
}

// Side-by-side run of the open, classical, and unitary walks from compatible
// initial conditions, with the site distributions tabulated on one grid.
struct ProcessComparison {
    std::vector<double> times;
    DensityTrajectory open_walk;
    ProbabilityTrajectory classical_walk;
    AmplitudeTrajectory unitary_walk;
    std::vector<Eigen::VectorXd> open_distribution;
    std::vector<Eigen::VectorXd> classical_distribution;
    std::vector<Eigen::VectorXd> unitary_distribution;
    Eigen::VectorXd unitary_limiting_average;
};

inline ProcessComparison compare_processes(const Graph& g, const InitialState& init,
                                           double horizon, int samples,
                                           EvolveMethod method = EvolveMethod::expm,
                                           const Tolerances& tol = {}) {
    if (horizon <= 0.0)
        throw std::invalid_argument("compare_processes: horizon must be positive");
    if (samples < 2)
        throw std::invalid_argument("compare_processes: need samples >= 2");

    const int n = g.vertex_count();
    ProcessComparison cmp;
    cmp.times = default_sample_times(horizon, samples);

    const Liouvillian lio = build_liouvillian(g);
    cmp.open_walk = evolve_ctoqw(lio, initial_density(init, n, tol), cmp.times, method, tol);
    cmp.classical_walk = evolve_ctrw(g, initial_probability(init, n), cmp.times, tol);
    const ComplexVector psi0 = initial_amplitude(init, n);
    cmp.unitary_walk = evolve_ctqw(g, psi0, cmp.times, tol);
    cmp.unitary_limiting_average = ctqw_limiting_average(g, psi0, tol);

    for (std::size_t i = 0; i < cmp.times.size(); ++i) {
        cmp.open_distribution.push_back(site_distribution(cmp.open_walk.states[i]));
        cmp.classical_distribution.push_back(cmp.classical_walk.states[i]);
        cmp.unitary_distribution.push_back(site_distribution(cmp.unitary_walk.states[i]));
    }
    return cmp;
}

}  // namespace ctoqw
