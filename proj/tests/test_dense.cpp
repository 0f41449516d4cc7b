#include <catch2/catch.hpp>

#include "ctoqw/dense.hpp"
#include "ctoqw/graph.hpp"
#include "ctoqw/lindblad.hpp"
#include "ctoqw/steady_state.hpp"
#include "test_helpers.hpp"

using namespace ctoqw;
using Catch::Matchers::Contains;

TEST_CASE("hermitian_eig reproduces the 3-path Laplacian spectrum") {
    const Spectrum spec = hermitian_eig(laplacian(generate(GraphFamily::path, 3)));
    REQUIRE(spec.eigenvalues.size() == 3);
    CHECK(spec.eigenvalues(0) == Approx(0.0).margin(1e-12));
    CHECK(spec.eigenvalues(1) == Approx(1.0).epsilon(1e-12));
    CHECK(spec.eigenvalues(2) == Approx(3.0).epsilon(1e-12));

    // known unit eigenvectors, up to sign
    Eigen::Vector3cd psi1(std::sqrt(3.0) / 3, std::sqrt(3.0) / 3, std::sqrt(3.0) / 3);
    Eigen::Vector3cd psi2(-std::sqrt(2.0) / 2, 0.0, std::sqrt(2.0) / 2);
    Eigen::Vector3cd psi3(std::sqrt(6.0) / 6, -std::sqrt(6.0) / 3, std::sqrt(6.0) / 6);
    CHECK(std::abs(psi1.dot(spec.eigenvectors.col(0))) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(psi2.dot(spec.eigenvectors.col(1))) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(psi3.dot(spec.eigenvectors.col(2))) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig handles identity and the 3-cycle") {
    const Spectrum ident = hermitian_eig(ComplexMatrix(ComplexMatrix::Identity(4, 4)));
    for (int i = 0; i < 4; ++i) CHECK(ident.eigenvalues(i) == Approx(1.0));

    // eigenvalues of the 3-cycle Laplacian 3I - J are (0, 3, 3)
    const Spectrum cycle = hermitian_eig(laplacian(generate(GraphFamily::cycle, 3)));
    CHECK(cycle.eigenvalues(0) == Approx(0.0).margin(1e-12));
    CHECK(cycle.eigenvalues(1) == Approx(3.0).epsilon(1e-12));
    CHECK(cycle.eigenvalues(2) == Approx(3.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects bad input") {
    CHECK_THROWS(hermitian_eig(ComplexMatrix(ComplexMatrix::Zero(2, 3))));
    ComplexMatrix skew(2, 2);
    skew << 0.0, 1.0, -1.0, 0.0;
    CHECK_THROWS_WITH(hermitian_eig(skew, true), Contains("not Hermitian"));
    CHECK_NOTHROW(hermitian_eig(skew, false));  // caller opts out, lower triangle used
}

TEST_CASE("hermitian_eig reconstructs the input") {
    testing::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = testing::random_hermitian(rng, 5);
        const Spectrum spec = hermitian_eig(a);
        const ComplexMatrix back = spec.eigenvectors *
                                   spec.eigenvalues.cast<Complex>().asDiagonal() *
                                   spec.eigenvectors.adjoint();
        CHECK(max_abs(back - a) <= 1e-9 * max_abs(a));
        CHECK(max_abs(spec.eigenvectors.adjoint() * spec.eigenvectors -
                      ComplexMatrix::Identity(5, 5)) <= 1e-10);
    }
}

TEST_CASE("expm handles the textbook cases") {
    CHECK(max_abs(expm(ComplexMatrix(ComplexMatrix::Zero(3, 3))) -
                  ComplexMatrix::Identity(3, 3)) == 0.0);

    ComplexMatrix d(2, 2);
    d << 1.0, 0.0, 0.0, 2.0;
    const ComplexMatrix ed = expm(d);
    CHECK(ed(0, 0).real() == Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(ed(1, 1).real() == Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(std::abs(ed(0, 1)) == 0.0);

    ComplexMatrix nilp(2, 2);
    nilp << 0.0, 1.0, 0.0, 0.0;
    ComplexMatrix expected(2, 2);
    expected << 1.0, 1.0, 0.0, 1.0;
    CHECK(max_abs(expm(nilp) - expected) <= 1e-15);

    CHECK_THROWS(expm(ComplexMatrix(ComplexMatrix::Zero(2, 3))));
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_WITH(expm(bad), Contains("non-finite"));
}

TEST_CASE("expm inverse, semigroup, and unitarity properties") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        ComplexMatrix a = testing::random_complex_matrix(rng, 4);
        a *= 5.0 / std::max(1.0, a.norm());
        CHECK(max_abs(expm(a) * expm(ComplexMatrix(-a)) - ComplexMatrix::Identity(4, 4)) <= 1e-10);

        std::uniform_real_distribution<double> coeff(0.1, 2.0);
        const double s = coeff(rng), t = coeff(rng);
        CHECK(max_abs(expm(ComplexMatrix((s + t) * a)) -
                      expm(ComplexMatrix(s * a)) * expm(ComplexMatrix(t * a))) <= 1e-10);

        const ComplexMatrix h = testing::random_hermitian(rng, 4);
        const ComplexMatrix u = expm(ComplexMatrix(Complex(0.0, 1.0) * h));
        CHECK(max_abs(u * u.adjoint() - ComplexMatrix::Identity(4, 4)) <= 1e-10);
    }
}

TEST_CASE("null_space finds kernels and respects full rank") {
    const auto kernel = null_space(laplacian(generate(GraphFamily::path, 3)).cast<Complex>());
    REQUIRE(kernel.size() == 1);
    const ComplexVector uniform = ComplexVector::Constant(3, Complex(1.0 / std::sqrt(3.0), 0.0));
    CHECK(std::abs(uniform.dot(kernel[0])) == Approx(1.0).epsilon(1e-12));

    CHECK(null_space(ComplexMatrix(ComplexMatrix::Identity(4, 4))).empty());

    CHECK_THROWS(null_space(ComplexMatrix(ComplexMatrix::Identity(2, 2)), -1.0));
}

TEST_CASE("null_space of a walk generator is the vectorized steady state") {
    const Graph path3 = generate(GraphFamily::path, 3);
    const Liouvillian lio = build_liouvillian(path3);
    const auto kernel = null_space(lio.matrix);
    REQUIRE(kernel.size() == 1);

    ComplexMatrix x = unvectorize(kernel[0], 3);
    const Complex tr = x.trace();
    x *= std::conj(tr) / std::abs(tr);
    x /= x.trace().real();
    CHECK(max_abs(x - known_steady_state(path3)->second) <= 1e-10);
}

TEST_CASE("null_space vectors are numerically annihilated") {
    testing::Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        // random matrix with an engineered 2-dimensional kernel
        const int n = 6, rank = 4;
        const ComplexMatrix u = testing::random_complex_matrix(rng, n);
        const ComplexMatrix v = testing::random_complex_matrix(rng, n);
        Eigen::VectorXd sigma = Eigen::VectorXd::Zero(n);
        std::uniform_real_distribution<double> mag(0.5, 2.0);
        for (int i = 0; i < rank; ++i) sigma(i) = mag(rng);
        Eigen::HouseholderQR<ComplexMatrix> qu(u), qv(v);
        const ComplexMatrix a = ComplexMatrix(qu.householderQ()) *
                                sigma.cast<Complex>().asDiagonal() *
                                ComplexMatrix(qv.householderQ()).adjoint();
        const auto basis = null_space(a);
        CHECK(basis.size() == n - rank);
        const double sigma_max = sigma.maxCoeff();
        for (const auto& vec : basis)
            CHECK((a * vec).cwiseAbs().maxCoeff() <= 10 * 1e-9 * sigma_max);
    }
}

TEST_CASE("validate_density accepts states and names violations") {
    CHECK_NOTHROW(validate_density(ComplexMatrix(ComplexMatrix::Identity(3, 3) / 3.0)));

    const Graph path3 = generate(GraphFamily::path, 3);
    const DensityMatrix rho = validate_density(known_steady_state(path3)->second);
    CHECK(rho.min_eigenvalue() > 0.0);

    ComplexMatrix indefinite(2, 2);
    indefinite << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_WITH(validate_density(indefinite), Contains("positivity"));

    CHECK_THROWS_WITH(validate_density(ComplexMatrix(ComplexMatrix::Identity(2, 2))),
                      Contains("trace"));

    ComplexMatrix lopsided(2, 2);
    lopsided << 0.5, 0.3, 0.0, 0.5;
    CHECK_THROWS_WITH(validate_density(lopsided), Contains("Hermiticity"));
}

TEST_CASE("random_density_matrix is reproducible and valid") {
    const ComplexMatrix a = random_density_matrix(4, 42);
    const ComplexMatrix b = random_density_matrix(4, 42);
    CHECK(max_abs(a - b) == 0.0);
    CHECK_NOTHROW(validate_density(a));
    CHECK(max_abs(a - random_density_matrix(4, 43)) > 1e-3);
}
