#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ctoqw/tolerances.hpp"

namespace ctoqw {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline void require_square(const ComplexMatrix& a, const char* who) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

inline void require_finite(const ComplexMatrix& a, const char* who) {
    if (!a.allFinite())
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

// Real spectrum of a self-adjoint matrix, eigenvalues ascending with an
// orthonormal eigenbasis in the columns.
struct Spectrum {
    Eigen::VectorXd eigenvalues;
    ComplexMatrix eigenvectors;
};

inline Spectrum hermitian_eig(const ComplexMatrix& a, bool assert_hermitian = true,
                              const Tolerances& tol = {}) {
    require_square(a, "hermitian_eig");
    require_finite(a, "hermitian_eig");
    if (assert_hermitian) {
        const double asym = max_abs(a - a.adjoint());
        if (asym > tol.hermiticity)
            throw std::invalid_argument("hermitian_eig: matrix is not Hermitian, ||a - a^dag||_max = " +
                                        std::to_string(asym));
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

inline Spectrum hermitian_eig(const Eigen::MatrixXd& a, bool assert_hermitian = true,
                              const Tolerances& tol = {}) {
    return hermitian_eig(ComplexMatrix(a.cast<Complex>()), assert_hermitian, tol);
}

// Matrix exponential (scaling-and-squaring Pade under the hood).
inline ComplexMatrix expm(const ComplexMatrix& a) {
    require_square(a, "expm");
    require_finite(a, "expm");
    return a.exp();
}

// Orthonormal basis of the right null space, decided by singular values
// below rank_tol (default 1e-9 * sigma_max). Empty when full rank.
inline std::vector<ComplexVector> null_space(const ComplexMatrix& a,
                                             std::optional<double> rank_tol = std::nullopt,
                                             const Tolerances& tol = {}) {
    require_finite(a, "null_space");
    if (a.rows() == 0 || a.cols() == 0)
        throw std::invalid_argument("null_space: empty matrix");
    if (rank_tol && *rank_tol <= 0.0)
        throw std::invalid_argument("null_space: rank_tol must be positive");

    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double threshold = rank_tol ? *rank_tol : tol.rank_rel * sigma_max;

    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > threshold) ++rank;

    std::vector<ComplexVector> basis;
    for (Eigen::Index i = rank; i < a.cols(); ++i)
        basis.push_back(svd.matrixV().col(i));
    return basis;
}

// Complex Hermitian positive-semidefinite trace-one matrix. Constructed
// only through validate_density so the invariants always hold.
class DensityMatrix {
public:
    const ComplexMatrix& matrix() const { return matrix_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    double min_eigenvalue() const { return min_eigenvalue_; }

    friend DensityMatrix validate_density(const ComplexMatrix&, const Tolerances&);

private:
    DensityMatrix(ComplexMatrix m, double min_eig)
        : matrix_(std::move(m)), min_eigenvalue_(min_eig) {}
    ComplexMatrix matrix_;
    double min_eigenvalue_;
};

// Checks Hermiticity, unit trace and positivity; symmetrizes away asymmetry
// below the Hermiticity tolerance before checking the rest.
inline DensityMatrix validate_density(const ComplexMatrix& a, const Tolerances& tol = {}) {
    require_square(a, "validate_density");
    require_finite(a, "validate_density");

    const double asym = max_abs(a - a.adjoint());
    if (asym > tol.hermiticity)
        throw std::invalid_argument("validate_density: Hermiticity violated, ||a - a^dag||_max = " +
                                    std::to_string(asym) + " > " + std::to_string(tol.hermiticity));
    ComplexMatrix h = 0.5 * (a + a.adjoint());

    const double trace_err = std::abs(h.trace() - Complex(1.0, 0.0));
    if (trace_err > tol.trace)
        throw std::invalid_argument("validate_density: trace violated, |tr - 1| = " +
                                    std::to_string(trace_err) + " > " + std::to_string(tol.trace));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("validate_density: eigensolver failed");
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -tol.positivity)
        throw std::invalid_argument("validate_density: positivity violated, min eigenvalue = " +
                                    std::to_string(min_eig) + " < -" + std::to_string(tol.positivity));

    return DensityMatrix(std::move(h), min_eig);
}

// Full-rank random state: G G^dag / tr(G G^dag) with G iid complex normal.
inline ComplexMatrix random_density_matrix(int n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("random_density_matrix: dimension must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) g(r, c) = Complex(normal(rng), normal(rng));
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace ctoqw
