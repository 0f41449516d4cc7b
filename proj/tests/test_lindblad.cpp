#include <catch2/catch.hpp>

#include <algorithm>

#include "ctoqw/lindblad.hpp"
#include "ctoqw/steady_state.hpp"
#include "test_helpers.hpp"

using namespace ctoqw;

namespace {

bool set_contains(const LindbladSet& lset, int target, int source, double coeff) {
    return std::any_of(lset.ops.begin(), lset.ops.end(), [&](const SwapOperator& op) {
        return op.target == target && op.source == source &&
               std::abs(op.coeff - coeff) <= 1e-15;
    });
}

// L(I) = sum_j (row sum of M)_j |j><j| - I, straight from the column sums.
ComplexMatrix identity_image_formula(const Graph& g) {
    const RealMatrix m = transition_matrix(g);
    ComplexMatrix expected = ComplexMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (int j = 0; j < g.vertex_count(); ++j)
        expected(j, j) = m.row(j).sum() - 1.0;
    return expected;
}

}  // namespace

TEST_CASE("build_lindblad_set produces the swap operators of the 3-path") {
    const LindbladSet lset = build_lindblad_set(generate(GraphFamily::path, 3));
    REQUIRE(lset.ops.size() == 4);
    const double half_sqrt2 = std::sqrt(0.5);
    CHECK(set_contains(lset, 0, 1, half_sqrt2));  // sqrt(1/2) |v0><v1|
    CHECK(set_contains(lset, 2, 1, half_sqrt2));
    CHECK(set_contains(lset, 1, 0, 1.0));
    CHECK(set_contains(lset, 1, 2, 1.0));

    const ComplexMatrix b01 = swap_operator_matrix(lset.ops.front(), 3);
    CHECK(b01.cwiseAbs().sum() == Approx(lset.ops.front().coeff));
    CHECK(std::abs(b01(lset.ops.front().target, lset.ops.front().source)) ==
          Approx(lset.ops.front().coeff));
}

TEST_CASE("build_lindblad_set covers cycles and single edges") {
    const LindbladSet cycle = build_lindblad_set(generate(GraphFamily::cycle, 3));
    REQUIRE(cycle.ops.size() == 6);
    for (const auto& op : cycle.ops) CHECK(op.coeff == Approx(std::sqrt(0.5)));

    const LindbladSet k2 = build_lindblad_set(generate(GraphFamily::complete, 2));
    REQUIRE(k2.ops.size() == 2);
    CHECK(set_contains(k2, 0, 1, 1.0));
    CHECK(set_contains(k2, 1, 0, 1.0));

    CHECK_THROWS(build_lindblad_set(Graph(3, {{0, 1}})));

    // coeff^2 equals the transition probability entry
    const Graph claw = generate(GraphFamily::star, 3);
    const RealMatrix m = transition_matrix(claw);
    for (const auto& op : build_lindblad_set(claw).ops)
        CHECK(op.coeff * op.coeff == Approx(m(op.target, op.source)).margin(1e-15));
}

TEST_CASE("the generator maps identity according to the row sums") {
    for (const Graph& g : {generate(GraphFamily::path, 3), generate(GraphFamily::star, 3),
                           generate(GraphFamily::cycle, 5)}) {
        const Liouvillian lio = build_liouvillian(g);
        const ComplexMatrix eye = ComplexMatrix::Identity(g.vertex_count(), g.vertex_count());
        const ComplexMatrix image = apply_generator(lio.hamiltonian, lio.lindblad, eye);
        CHECK(max_abs(image - identity_image_formula(g)) <= 1e-12);
    }
}

TEST_CASE("identity is annihilated exactly when M is doubly stochastic") {
    testing::Rng rng(31);
    for (int trial = 0; trial < 15; ++trial) {
        std::uniform_int_distribution<int> size(2, 7);
        const Graph g = testing::random_connected_graph(rng, size(rng));
        const Liouvillian lio = build_liouvillian(g);
        const ComplexMatrix eye = ComplexMatrix::Identity(g.vertex_count(), g.vertex_count());
        const double norm = max_abs(apply_generator(lio.hamiltonian, lio.lindblad, eye));
        if (classify(g).doubly_stochastic_M)
            CHECK(norm <= 1e-12);
        else
            CHECK(norm > 1e-12);
    }
}

TEST_CASE("the closed-form steady states are fixed points of the generator") {
    const Graph cycle3 = generate(GraphFamily::cycle, 3);
    const Liouvillian clio = build_liouvillian(cycle3);
    CHECK(max_abs(apply_generator(clio.hamiltonian, clio.lindblad,
                                  ComplexMatrix(ComplexMatrix::Identity(3, 3) / 3.0))) <= 1e-14);

    const Graph path3 = generate(GraphFamily::path, 3);
    const Liouvillian plio = build_liouvillian(path3);
    CHECK(max_abs(apply_generator(plio.hamiltonian, plio.lindblad,
                                  known_steady_state(path3)->second)) <= 1e-12);

    ComplexMatrix wrong_size = ComplexMatrix::Zero(4, 4);
    CHECK_THROWS(apply_generator(plio.hamiltonian, plio.lindblad, wrong_size));
}

TEST_CASE("generator action preserves trace and Hermitian structure") {
    testing::Rng rng(37);
    for (const Graph& g : {generate(GraphFamily::path, 3), generate(GraphFamily::star, 3),
                           generate(GraphFamily::cycle, 4)}) {
        const Liouvillian lio = build_liouvillian(g);
        for (int trial = 0; trial < 200; ++trial) {
            const ComplexMatrix rho = testing::random_density(rng, g.vertex_count());
            const ComplexMatrix image = apply_generator(lio.hamiltonian, lio.lindblad, rho);
            CHECK(std::abs(image.trace()) <= 1e-12);
            CHECK(max_abs(image - image.adjoint().eval()) <= 1e-12);

            const ComplexMatrix generic = testing::random_complex_matrix(rng, g.vertex_count());
            const ComplexMatrix a = apply_generator(lio.hamiltonian, lio.lindblad, generic);
            const ComplexMatrix b =
                apply_generator(lio.hamiltonian, lio.lindblad, ComplexMatrix(generic.adjoint()));
            CHECK(max_abs(a.adjoint().eval() - b) <= 1e-12);
        }
    }
}

TEST_CASE("vectorized matrix agrees with the direct generator action") {
    testing::Rng rng(41);
    for (const Graph& g : {generate(GraphFamily::path, 3), generate(GraphFamily::star, 3),
                           generate(GraphFamily::cycle, 5)}) {
        const Liouvillian lio = build_liouvillian(g);
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix rho = testing::random_complex_matrix(rng, g.vertex_count());
            const ComplexMatrix via_matrix =
                unvectorize(ComplexVector(lio.matrix * vectorize(rho)), g.vertex_count());
            const ComplexMatrix direct = apply_generator(lio.hamiltonian, lio.lindblad, rho);
            CHECK(max_abs(via_matrix - direct) <= 1e-12);
        }
    }
}

TEST_CASE("vectorization stacks columns") {
    ComplexMatrix m(2, 2);
    m << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0);
    const ComplexVector v = vectorize(m);
    CHECK(v(0) == Complex(1, 0));
    CHECK(v(1) == Complex(2, 0));
    CHECK(v(2) == Complex(3, 0));
    CHECK(v(3) == Complex(4, 0));
    CHECK(max_abs(unvectorize(v, 2) - m) == 0.0);
    CHECK_THROWS(unvectorize(v, 3));
}

TEST_CASE("trace preservation in dual form and kernel membership") {
    for (const Graph& g : {generate(GraphFamily::path, 3), generate(GraphFamily::cycle, 4),
                           generate(GraphFamily::star, 3)}) {
        const Liouvillian lio = build_liouvillian(g);
        const ComplexVector id_vec =
            vectorize(ComplexMatrix(ComplexMatrix::Identity(lio.dim, lio.dim)));
        CHECK((id_vec.adjoint() * lio.matrix).cwiseAbs().maxCoeff() <= 1e-10);
    }

    // K2 is 1-regular, so vec(I/2) lies in the kernel
    const Liouvillian k2 = build_liouvillian(generate(GraphFamily::complete, 2));
    REQUIRE(k2.matrix.rows() == 4);
    const ComplexVector mixed = vectorize(ComplexMatrix(ComplexMatrix::Identity(2, 2) / 2.0));
    CHECK((k2.matrix * mixed).cwiseAbs().maxCoeff() <= 1e-14);

    const auto kernel = null_space(build_liouvillian(generate(GraphFamily::path, 3)).matrix);
    CHECK(kernel.size() == 1);
}

TEST_CASE("sum identity holds for built sets and fails after deletion") {
    const LindbladSet path = build_lindblad_set(generate(GraphFamily::path, 3));
    const auto path_check = check_sum_identity(path);
    CHECK(path_check.holds);
    CHECK(path_check.deviation < 1e-15);

    CHECK(check_sum_identity(build_lindblad_set(generate(GraphFamily::star, 3))).holds);

    LindbladSet truncated = path;
    const SwapOperator removed = truncated.ops.back();
    truncated.ops.pop_back();
    const auto broken = check_sum_identity(truncated);
    CHECK_FALSE(broken.holds);
    CHECK(broken.deviation == Approx(removed.coeff * removed.coeff));
}

TEST_CASE("commutant dimension detects the relaxing hypothesis") {
    CHECK(commutant_dimension(build_lindblad_set(generate(GraphFamily::path, 3))).dimension == 1);
    CHECK(commutant_dimension(build_lindblad_set(generate(GraphFamily::path, 3))).trivial);

    const auto split = commutant_dimension(build_lindblad_set(testing::disjoint_edges(2)));
    CHECK(split.dimension == 2);
    CHECK_FALSE(split.trivial);

    LindbladSet empty;
    empty.dim = 2;
    CHECK(commutant_dimension(empty).dimension == 4);
}

TEST_CASE("commutant dimension agrees with the scalar-loop oracle") {
    testing::Rng rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        std::uniform_int_distribution<int> size(2, 6);
        const Graph g = testing::random_connected_graph(rng, size(rng));
        const LindbladSet lset = build_lindblad_set(g);
        const auto report = commutant_dimension(lset);
        CHECK(report.dimension == testing::commutant_dimension_oracle(lset));
        CHECK(report.trivial);  // connected graphs have scalar commutant
    }
    for (int m : {2, 3, 4}) {
        const LindbladSet lset = build_lindblad_set(testing::disjoint_edges(m));
        CHECK(commutant_dimension(lset).dimension == m);
        CHECK(testing::commutant_dimension_oracle(lset) == m);
    }
}

TEST_CASE("span Hermiticity needs both swap directions") {
    CHECK(check_span_hermitian(build_lindblad_set(generate(GraphFamily::star, 3))));

    LindbladSet one_sided;
    one_sided.dim = 2;
    one_sided.ops.push_back({0, 1, 1.0});
    CHECK_FALSE(check_span_hermitian(one_sided));

    LindbladSet empty;
    empty.dim = 2;
    CHECK(check_span_hermitian(empty));
}

TEST_CASE("variant Lindblad pairs have the documented forms") {
    const Graph path3 = generate(GraphFamily::path, 3);

    const auto unitary = build_lindblad_variant(path3, LindbladVariant::unitary_pair);
    REQUIRE(unitary.size() == 2);
    const ComplexMatrix l = laplacian(path3).cast<Complex>();
    CHECK(max_abs(unitary[0] - expm(ComplexMatrix(Complex(0, -1) * l))) == 0.0);
    CHECK(max_abs(unitary[1] - ComplexMatrix::Identity(3, 3)) == 0.0);
    CHECK(max_abs(unitary[0] * unitary[0].adjoint() - ComplexMatrix::Identity(3, 3)) <= 1e-12);

    const auto projection = build_lindblad_variant(path3, LindbladVariant::projection_pair, {0});
    ComplexMatrix p = ComplexMatrix::Zero(3, 3);
    p(0, 0) = 1.0;
    CHECK(max_abs(projection[0] - p) == 0.0);
    CHECK(max_abs(projection[1] - (ComplexMatrix::Identity(3, 3) - p)) == 0.0);

    CHECK_THROWS(build_lindblad_variant(path3, LindbladVariant::projection_pair, {}));
    CHECK_THROWS(build_lindblad_variant(path3, LindbladVariant::projection_pair, {0, 1, 2}));
    CHECK_THROWS(build_lindblad_variant(path3, LindbladVariant::projection_pair, {5}));
}

TEST_CASE("variant generators are still trace preserving and CPTP") {
    testing::Rng rng(47);
    const Graph path3 = generate(GraphFamily::path, 3);
    const ComplexMatrix h = laplacian(path3).cast<Complex>();

    for (auto variant : {LindbladVariant::unitary_pair, LindbladVariant::projection_pair}) {
        const auto ops = build_lindblad_variant(path3, variant, {0});
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexMatrix rho = testing::random_density(rng, 3);
            const ComplexMatrix image = apply_generator(h, ops, rho);
            CHECK(std::abs(image.trace()) <= 1e-12);
            CHECK(max_abs(image - image.adjoint().eval()) <= 1e-12);
        }
        const ComplexMatrix s = liouvillian_matrix(h, ops);
        const ComplexMatrix choi = choi_matrix(expm(ComplexMatrix(0.5 * s)));
        CHECK(hermitian_eig(choi, false).eigenvalues.minCoeff() >= -1e-8);
    }
}

TEST_CASE("short-time propagators are completely positive") {
    for (const Graph& g : {generate(GraphFamily::path, 3), generate(GraphFamily::cycle, 4),
                           generate(GraphFamily::star, 3)}) {
        const Liouvillian lio = build_liouvillian(g);
        for (double t : {0.1, 1.0}) {
            const ComplexMatrix channel = expm(ComplexMatrix(t * lio.matrix));
            const ComplexMatrix choi = choi_matrix(channel);
            CHECK(max_abs(choi - choi.adjoint().eval()) <= 1e-10);
            CHECK(hermitian_eig(choi, false).eigenvalues.minCoeff() >= -1e-8);
        }
    }
    CHECK_THROWS(choi_matrix(ComplexMatrix(ComplexMatrix::Zero(5, 5))));
}
