#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "ctoqw/dense.hpp"
#include "ctoqw/graph.hpp"

namespace ctoqw {

// One swap operator coeff * |target><source|. It moves amplitude sitting on
// `source` over to `target` with strength coeff^2 = 1/deg(source).
struct SwapOperator {
    int target;
    int source;
    double coeff;
};

struct LindbladSet {
    int dim = 0;
    std::vector<SwapOperator> ops;
};

inline ComplexMatrix swap_operator_matrix(const SwapOperator& op, int dim) {
    ComplexMatrix b = ComplexMatrix::Zero(dim, dim);
    b(op.target, op.source) = op.coeff;
    return b;
}

inline std::vector<ComplexMatrix> dense_operators(const LindbladSet& lset) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(lset.ops.size());
    for (const auto& op : lset.ops) ops.push_back(swap_operator_matrix(op, lset.dim));
    return ops;
}

// One operator per ordered edge endpoint pair, 2|E| in total.
inline LindbladSet build_lindblad_set(const Graph& g) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == 0)
            throw std::invalid_argument("build_lindblad_set: isolated vertex " + std::to_string(v));
    LindbladSet lset;
    lset.dim = g.vertex_count();
    lset.ops.reserve(2 * g.edges().size());
    for (const auto& [j, k] : g.edges()) {
        lset.ops.push_back({j, k, std::sqrt(1.0 / g.degree(k))});
        lset.ops.push_back({k, j, std::sqrt(1.0 / g.degree(j))});
    }
    return lset;
}

// Column-stacking convention throughout: vec(A rho B) = (B^T kron A) vec(rho).
inline ComplexVector vectorize(const ComplexMatrix& m) {
    return ComplexVector(Eigen::Map<const ComplexVector>(m.data(), m.size()));
}

inline ComplexMatrix unvectorize(const ComplexVector& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("unvectorize: length does not match dimension");
    return ComplexMatrix(Eigen::Map<const ComplexMatrix>(v.data(), n, n));
}

// Generator action L(rho) = i[rho, H] + sum_k (B rho B^dag - {B^dag B, rho}/2)
// for the swap set. Each swap operator is rank one, so its dissipator term
// touches a single diagonal entry plus one row and one column of rho.
inline ComplexMatrix apply_generator(const ComplexMatrix& h, const LindbladSet& lset,
                                     const ComplexMatrix& rho) {
    if (h.rows() != lset.dim || h.cols() != lset.dim)
        throw std::invalid_argument("apply_generator: Hamiltonian dimension mismatch");
    if (rho.rows() != lset.dim || rho.cols() != lset.dim)
        throw std::invalid_argument("apply_generator: state dimension mismatch");

    const Complex i_unit(0.0, 1.0);
    ComplexMatrix out = i_unit * (rho * h - h * rho);
    for (const auto& op : lset.ops) {
        const double rate = op.coeff * op.coeff;
        out(op.target, op.target) += rate * rho(op.source, op.source);
        out.row(op.source) -= (0.5 * rate) * rho.row(op.source);
        out.col(op.source) -= (0.5 * rate) * rho.col(op.source);
    }
    return out;
}

// Same generator for an arbitrary operator list (dense formula).
inline ComplexMatrix apply_generator(const ComplexMatrix& h, const std::vector<ComplexMatrix>& ops,
                                     const ComplexMatrix& rho) {
    require_square(h, "apply_generator");
    if (rho.rows() != h.rows() || rho.cols() != h.cols())
        throw std::invalid_argument("apply_generator: state dimension mismatch");

    const Complex i_unit(0.0, 1.0);
    ComplexMatrix out = i_unit * (rho * h - h * rho);
    for (const auto& b : ops) {
        if (b.rows() != h.rows() || b.cols() != h.cols())
            throw std::invalid_argument("apply_generator: operator dimension mismatch");
        const ComplexMatrix bdb = b.adjoint() * b;
        out += b * rho * b.adjoint() - 0.5 * (bdb * rho + rho * bdb);
    }
    return out;
}

// n^2 x n^2 matrix of the generator acting on column-stacked states:
//   i (H^T kron I - I kron H)
//   + sum_k (conj(B) kron B - (I kron B^dag B + (B^dag B)^T kron I)/2).
inline ComplexMatrix liouvillian_matrix(const ComplexMatrix& h,
                                        const std::vector<ComplexMatrix>& ops) {
    require_square(h, "liouvillian_matrix");
    const Eigen::Index n = h.rows();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    const Complex i_unit(0.0, 1.0);

    ComplexMatrix s = i_unit * (Eigen::kroneckerProduct(h.transpose(), eye).eval() -
                                Eigen::kroneckerProduct(eye, h).eval());
    for (const auto& b : ops) {
        if (b.rows() != n || b.cols() != n)
            throw std::invalid_argument("liouvillian_matrix: operator dimension mismatch");
        const ComplexMatrix bdb = b.adjoint() * b;
        s += Eigen::kroneckerProduct(b.conjugate(), b).eval();
        s -= 0.5 * Eigen::kroneckerProduct(eye, bdb).eval();
        s -= 0.5 * Eigen::kroneckerProduct(bdb.transpose(), eye).eval();
    }
    return s;
}

// The generator of a walk on a graph: Laplacian as the coherent part, swap
// operators as the dissipative part, plus the vectorized matrix form.
struct Liouvillian {
    int dim = 0;
    ComplexMatrix matrix;       // n^2 x n^2, acts on vec(rho)
    ComplexMatrix hamiltonian;  // the graph Laplacian
    LindbladSet lindblad;
};

inline Liouvillian build_liouvillian(const Graph& g) {
    Liouvillian lio;
    lio.dim = g.vertex_count();
    lio.hamiltonian = laplacian(g).cast<Complex>();
    lio.lindblad = build_lindblad_set(g);
    lio.matrix = liouvillian_matrix(lio.hamiltonian, dense_operators(lio.lindblad));
    return lio;
}

struct SumIdentityCheck {
    bool holds = false;
    double deviation = 0.0;  // ||sum B^dag B - I||_max
};

// sum_{jk} B_jk^dag B_jk = I because the transition matrix columns sum to 1.
inline SumIdentityCheck check_sum_identity(const LindbladSet& lset, const Tolerances& tol = {}) {
    ComplexMatrix acc = ComplexMatrix::Zero(lset.dim, lset.dim);
    for (const auto& op : lset.ops)
        acc(op.source, op.source) += op.coeff * op.coeff;
    const double deviation = max_abs(acc - ComplexMatrix::Identity(lset.dim, lset.dim));
    return SumIdentityCheck{deviation <= tol.sum_identity, deviation};
}

struct CommutantReport {
    int dimension = 0;
    bool trivial = false;
};

// Dimension of { X : B X = X B for every B in the set }, computed as the
// null space of the stacked commutator system (|ops| n^2 rows, n^2 columns).
// Trivial commutant (scalars only) is the relaxing-semigroup hypothesis.
inline CommutantReport commutant_dimension(const LindbladSet& lset, const Tolerances& tol = {}) {
    const int n = lset.dim;
    if (lset.ops.empty())
        return CommutantReport{n * n, n * n == 1};

    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    ComplexMatrix stacked(static_cast<Eigen::Index>(lset.ops.size()) * n * n, n * n);
    Eigen::Index row = 0;
    for (const auto& op : lset.ops) {
        const ComplexMatrix b = swap_operator_matrix(op, n);
        // vec(BX - XB) = (I kron B - B^T kron I) vec(X)
        stacked.block(row, 0, n * n, n * n) =
            Eigen::kroneckerProduct(eye, b).eval() - Eigen::kroneckerProduct(b.transpose(), eye).eval();
        row += n * n;
    }
    const auto basis = null_space(stacked, std::nullopt, tol);
    const int dim = static_cast<int>(basis.size());
    return CommutantReport{dim, dim == 1};
}

// The span is closed under the adjoint iff every stored (target, source)
// pair has its reverse stored too; B_jk^dag is proportional to B_kj.
inline bool check_span_hermitian(const LindbladSet& lset) {
    for (const auto& op : lset.ops) {
        bool found = false;
        for (const auto& other : lset.ops)
            if (other.target == op.source && other.source == op.target) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

enum class LindbladVariant { unitary_pair, projection_pair };

// Alternative two-operator dissipation channels: {exp(-iL), I} or a vertex
// projector pair {P, I - P}. Feed the result to the generalized
// apply_generator / liouvillian_matrix overloads.
inline std::vector<ComplexMatrix> build_lindblad_variant(const Graph& g, LindbladVariant variant,
                                                         const std::vector<int>& subset = {}) {
    const int n = g.vertex_count();
    const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
    switch (variant) {
        case LindbladVariant::unitary_pair: {
            const ComplexMatrix l = laplacian(g).cast<Complex>();
            return {expm(Complex(0.0, -1.0) * l), eye};
        }
        case LindbladVariant::projection_pair: {
            if (subset.empty())
                throw std::invalid_argument("build_lindblad_variant: projection subset is empty");
            ComplexMatrix p = ComplexMatrix::Zero(n, n);
            for (int v : subset) {
                if (v < 0 || v >= n)
                    throw std::invalid_argument("build_lindblad_variant: vertex " +
                                                std::to_string(v) + " out of range");
                p(v, v) = 1.0;
            }
            if (static_cast<int>(p.diagonal().real().sum() + 0.5) == n)
                throw std::invalid_argument("build_lindblad_variant: projection subset is the full vertex set");
            return {p, eye - p};
        }
    }
    throw std::invalid_argument("build_lindblad_variant: unknown variant");
}

// Choi matrix of a vectorized map: block (i,j) holds Phi(|i><j|). Positive
// semidefiniteness certifies complete positivity.
inline ComplexMatrix choi_matrix(const ComplexMatrix& superop) {
    require_square(superop, "choi_matrix");
    const Eigen::Index n2 = superop.rows();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n2))));
    if (n * n != n2)
        throw std::invalid_argument("choi_matrix: superoperator side is not a perfect square");

    ComplexMatrix choi(n2, n2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            // vec(E_ij) is the basis vector with index j*n + i
            const ComplexMatrix image = unvectorize(superop.col(j * n + i), static_cast<int>(n));
            choi.block(i * n, j * n, n, n) = image;
        }
    return choi;
}

}  // namespace ctoqw
