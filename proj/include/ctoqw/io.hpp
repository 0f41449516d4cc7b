#pragma once

#include <string>

#include <json.hpp>

#include "ctoqw/dense.hpp"
#include "ctoqw/graph.hpp"
#include "ctoqw/lindblad.hpp"
#include "ctoqw/steady_state.hpp"

namespace ctoqw {

using json = nlohmann::json;

// Complex matrices travel as nested arrays of [re, im] pairs; every module
// shares this format.
inline json to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json to_json(const ComplexVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(json::array({v(i).real(), v(i).imag()}));
    return out;
}

inline json to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline ComplexMatrix complex_matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("complex matrix JSON must be a non-empty array of rows");
    const auto rows = j.size();
    const auto cols = j.at(0).size();
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols)
            throw std::invalid_argument("complex matrix JSON rows have unequal lengths");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& cell = j.at(r).at(c);
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument("complex matrix JSON entries must be [re, im] pairs");
            m(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return m;
}

inline ComplexVector complex_vector_from_json(const json& j) {
    if (!j.is_array())
        throw std::invalid_argument("complex vector JSON must be an array");
    ComplexVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& cell = j.at(i);
        if (cell.is_array() && cell.size() == 2)
            v(i) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        else if (cell.is_number())
            v(i) = Complex(cell.get<double>(), 0.0);
        else
            throw std::invalid_argument("complex vector JSON entries must be [re, im] or numbers");
    }
    return v;
}

inline json to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [a, b] : g.edges()) edges.push_back(json::array({a, b}));
    return json{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline json to_json(const Tolerances& tol) {
    return json{{"hermiticity", tol.hermiticity},
                {"trace", tol.trace},
                {"positivity", tol.positivity},
                {"trajectory_positivity", tol.trajectory_positivity},
                {"rank_rel", tol.rank_rel},
                {"sum_identity", tol.sum_identity},
                {"doubly_stochastic", tol.doubly_stochastic},
                {"residual", tol.residual},
                {"eigenvalue_group", tol.eigenvalue_group},
                {"mixed_state_match", tol.mixed_state_match},
                {"rk_rel", tol.rk_rel},
                {"rk_abs", tol.rk_abs}};
}

// Full steady-state report, including which regression target (if any) the
// solved state was compared against.
inline json steady_report_json(const Graph& g, const SteadyStateReport& report) {
    json out;
    out["graph"] = to_json(g);
    out["kernel_dim"] = report.kernel_dim;
    out["unique"] = report.unique;
    out["classification"] = to_string(report.classification);
    out["residual"] = report.residual;
    out["theorem_consistent"] = report.theorem_consistent;
    out["falsification"] = report.falsification.empty() ? json(nullptr) : json(report.falsification);

    if (report.rho_inf) {
        out["rho_inf"] = to_json(report.rho_inf->matrix());
        out["min_eigenvalue"] = report.min_eigenvalue;
        out["positive_definite"] = report.positive_definite;
        out["positivity_indeterminate"] = report.positivity_indeterminate;
        const CoherenceReport coh = coherence(*report.rho_inf);
        out["coherence"] = json{{"l1_offdiag", coh.l1_offdiag},
                                {"max_offdiag", coh.max_offdiag},
                                {"diag_distribution", to_json(coh.diag_distribution)}};
    } else {
        out["rho_inf"] = nullptr;
        json basis = json::array();
        for (const auto& b : report.kernel_basis) basis.push_back(to_json(b));
        out["kernel_basis"] = std::move(basis);
    }

    if (report.rho_inf) {
        if (const auto target = known_steady_state(g)) {
            out["paper_match"] = json{
                {"target", target->first},
                {"max_abs_deviation", max_abs(report.rho_inf->matrix() - target->second)}};
        } else {
            out["paper_match"] = json{{"target", nullptr}};
        }
    } else {
        out["paper_match"] = json{{"target", nullptr}};
    }
    return out;
}

// Structural check report: graph facts, generator hypotheses, and the
// predicted limit class.
inline json check_report_json(const Graph& g, const Tolerances& tol = {}) {
    const GraphClassification facts = classify(g, tol);
    json out;
    out["graph"] = to_json(g);
    out["classify"] = json{{"connected", facts.connected},
                           {"regular", facts.regular},
                           {"doubly_stochastic_M", facts.doubly_stochastic_M}};
    if (g.has_isolated_vertex()) {
        out["note"] = "graph has an isolated vertex; no walk generator exists";
        out["prediction"] = "undefined";
        return out;
    }
    const LindbladSet lset = build_lindblad_set(g);
    const SumIdentityCheck sum = check_sum_identity(lset, tol);
    const CommutantReport commutant = commutant_dimension(lset, tol);
    out["span_hermitian"] = check_span_hermitian(lset);
    out["sum_identity"] = json{{"holds", sum.holds}, {"deviation", sum.deviation}};
    out["commutant"] = json{{"dimension", commutant.dimension}, {"trivial", commutant.trivial}};
    if (!facts.connected)
        out["prediction"] = "unknown";
    else if (facts.doubly_stochastic_M)
        out["prediction"] = "maximally_mixed";
    else
        out["prediction"] = "unique_coherent_limit";
    return out;
}

}  // namespace ctoqw
