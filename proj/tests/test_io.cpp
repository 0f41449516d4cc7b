#include <catch2/catch.hpp>

#include "ctoqw/io.hpp"
#include "test_helpers.hpp"

using namespace ctoqw;

TEST_CASE("complex matrices round-trip through [re, im] JSON") {
    testing::Rng rng(71);
    const ComplexMatrix m = testing::random_complex_matrix(rng, 4);
    const json encoded = to_json(m);
    REQUIRE(encoded.is_array());
    REQUIRE(encoded.size() == 4);
    CHECK(encoded[0][0].size() == 2);
    CHECK(max_abs(complex_matrix_from_json(encoded) - m) == 0.0);

    CHECK_THROWS(complex_matrix_from_json(json::array()));
    CHECK_THROWS(complex_matrix_from_json(json::parse("[[1.0]]")));
}

TEST_CASE("complex vectors accept pairs and bare numbers") {
    const ComplexVector v = complex_vector_from_json(json::parse("[[1.0, 2.0], 3.0]"));
    REQUIRE(v.size() == 2);
    CHECK(v(0) == Complex(1.0, 2.0));
    CHECK(v(1) == Complex(3.0, 0.0));
}

TEST_CASE("graph JSON lists vertex count and edges") {
    const json j = to_json(generate(GraphFamily::star, 3));
    CHECK(j["n"] == 4);
    CHECK(j["edges"].size() == 3);
    CHECK(j["edges"][0] == json::array({0, 1}));
}

TEST_CASE("steady report JSON names its regression target") {
    const Graph path3 = generate(GraphFamily::path, 3);
    const auto report = classify_steady_state(path3, solve_steady_state(build_liouvillian(path3)));
    const json j = steady_report_json(path3, report);

    CHECK(j["classification"] == "coherent_limit");
    CHECK(j["unique"] == true);
    CHECK(j["theorem_consistent"] == true);
    CHECK(j["paper_match"]["target"] == "path3");
    CHECK(j["paper_match"]["max_abs_deviation"].get<double>() <= 1e-10);
    CHECK(j["coherence"]["l1_offdiag"].get<double>() ==
          Approx((std::sqrt(2.0) + 1.0) / 7).epsilon(1e-10));
    CHECK(j["rho_inf"].is_array());

    const Graph split = testing::disjoint_edges(2);
    const auto multi = classify_steady_state(split, solve_steady_state(build_liouvillian(split)));
    const json jm = steady_report_json(split, multi);
    CHECK(jm["rho_inf"].is_null());
    CHECK(jm["kernel_basis"].size() == 2);
    CHECK(jm["paper_match"]["target"].is_null());
}

TEST_CASE("check report JSON predicts the limit class") {
    const json path = check_report_json(generate(GraphFamily::path, 3));
    CHECK(path["classify"]["connected"] == true);
    CHECK(path["classify"]["regular"] == false);
    CHECK(path["commutant"]["trivial"] == true);
    CHECK(path["span_hermitian"] == true);
    CHECK(path["sum_identity"]["holds"] == true);
    CHECK(path["prediction"] == "unique_coherent_limit");

    CHECK(check_report_json(generate(GraphFamily::cycle, 5))["prediction"] == "maximally_mixed");
    CHECK(check_report_json(testing::disjoint_edges(2))["prediction"] == "unknown");
    CHECK(check_report_json(Graph(3, {{0, 1}}))["prediction"] == "undefined");
}

TEST_CASE("tolerances serialize for the output header") {
    const json j = to_json(Tolerances{});
    CHECK(j["residual"] == 1e-10);
    CHECK(j["rank_rel"] == 1e-9);
}
