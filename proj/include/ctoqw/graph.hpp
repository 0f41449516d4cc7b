#pragma once

#include <algorithm>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctoqw/tolerances.hpp"

namespace ctoqw {

using RealMatrix = Eigen::MatrixXd;

// Finite undirected graph, 0-indexed, no self-loops or parallel edges.
// Immutable after construction; edges are stored sorted with j < k.
class Graph {
public:
    Graph(int vertex_count, std::vector<std::pair<int, int>> edge_list)
        : n_(vertex_count) {
        if (n_ <= 0)
            throw std::invalid_argument("Graph: vertex count must be positive");
        for (auto& [j, k] : edge_list) {
            if (j == k)
                throw std::invalid_argument("Graph: self-loop at vertex " + std::to_string(j));
            if (j < 0 || k < 0 || j >= n_ || k >= n_)
                throw std::invalid_argument("Graph: edge (" + std::to_string(j) + "," +
                                            std::to_string(k) + ") out of range for n=" +
                                            std::to_string(n_));
            if (j > k) std::swap(j, k);
        }
        std::sort(edge_list.begin(), edge_list.end());
        edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
        edges_ = std::move(edge_list);
        degrees_.assign(n_, 0);
        for (const auto& [j, k] : edges_) {
            ++degrees_[j];
            ++degrees_[k];
        }
    }

    int vertex_count() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    int degree(int v) const { return degrees_.at(v); }
    const std::vector<int>& degrees() const { return degrees_; }

    bool has_edge(int j, int k) const {
        if (j > k) std::swap(j, k);
        return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(j, k));
    }

    bool has_isolated_vertex() const {
        return std::any_of(degrees_.begin(), degrees_.end(), [](int d) { return d == 0; });
    }

private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> degrees_;
};

enum class GraphFamily { cycle, path, star, complete };

inline GraphFamily graph_family_from_string(const std::string& name) {
    if (name == "cycle") return GraphFamily::cycle;
    if (name == "path") return GraphFamily::path;
    if (name == "star") return GraphFamily::star;
    if (name == "complete") return GraphFamily::complete;
    throw std::invalid_argument("unknown graph family '" + name +
                                "' (expected cycle|path|star|complete)");
}

// Canonical labeled members of the built-in families. Path vertices run
// 0..size-1 in chain order; the star's hub is vertex 0 and `size` counts
// its edges, so generate(star, 3) is the claw on 4 vertices.
inline Graph generate(GraphFamily family, int size) {
    std::vector<std::pair<int, int>> edges;
    switch (family) {
        case GraphFamily::cycle:
            if (size < 3) throw std::invalid_argument("cycle needs size >= 3");
            for (int i = 0; i + 1 < size; ++i) edges.emplace_back(i, i + 1);
            edges.emplace_back(0, size - 1);
            return Graph(size, std::move(edges));
        case GraphFamily::path:
            if (size < 2) throw std::invalid_argument("path needs size >= 2");
            for (int i = 0; i + 1 < size; ++i) edges.emplace_back(i, i + 1);
            return Graph(size, std::move(edges));
        case GraphFamily::star:
            if (size < 1) throw std::invalid_argument("star needs size >= 1 edges");
            for (int i = 1; i <= size; ++i) edges.emplace_back(0, i);
            return Graph(size + 1, std::move(edges));
        case GraphFamily::complete:
            if (size < 2) throw std::invalid_argument("complete graph needs size >= 2");
            for (int j = 0; j < size; ++j)
                for (int k = j + 1; k < size; ++k) edges.emplace_back(j, k);
            return Graph(size, std::move(edges));
    }
    throw std::invalid_argument("unknown graph family");
}

// Edge-list format: one "j k" pair per line, `#` comments and blank lines
// ignored, optional "n <count>" line fixing the vertex count. Without a
// header the count is inferred as 1 + max index.
inline Graph parse_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    int declared_n = -1;
    int max_index = -1;
    int line_no = 0;
    std::string line;

    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": " + what);
    };
    auto parse_int = [&](const std::string& tok) {
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            fail("non-integer token '" + tok + "'");
        }
        if (pos != tok.size()) fail("non-integer token '" + tok + "'");
        return value;
    };

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;

        if (tokens[0] == "n") {
            if (tokens.size() != 2) fail("header must be 'n <count>'");
            if (declared_n >= 0) fail("duplicate 'n' header");
            if (!edges.empty()) fail("'n' header must precede the edge lines");
            declared_n = parse_int(tokens[1]);
            if (declared_n <= 0) fail("vertex count must be positive");
            continue;
        }
        if (tokens.size() != 2) fail("expected 'j k' pair");
        const int j = parse_int(tokens[0]);
        const int k = parse_int(tokens[1]);
        if (j == k) fail("self-loop at vertex " + std::to_string(j));
        if (j < 0 || k < 0) fail("negative vertex index");
        if (declared_n >= 0 && (j >= declared_n || k >= declared_n))
            fail("vertex index " + std::to_string(std::max(j, k)) + " >= declared n=" +
                 std::to_string(declared_n));
        max_index = std::max({max_index, j, k});
        edges.emplace_back(j, k);
    }
    const int n = declared_n >= 0 ? declared_n : max_index + 1;
    if (n <= 0)
        throw std::invalid_argument("edge list declares no vertices");
    return Graph(n, std::move(edges));
}

inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

inline std::string to_edge_list(const Graph& g) {
    std::string out = "n " + std::to_string(g.vertex_count()) + "\n";
    for (const auto& [j, k] : g.edges())
        out += std::to_string(j) + " " + std::to_string(k) + "\n";
    return out;
}

inline RealMatrix adjacency(const Graph& g) {
    RealMatrix a = RealMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (const auto& [j, k] : g.edges()) {
        a(j, k) = 1.0;
        a(k, j) = 1.0;
    }
    return a;
}

inline RealMatrix degree_matrix(const Graph& g) {
    RealMatrix d = RealMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) d(v, v) = g.degree(v);
    return d;
}

inline RealMatrix laplacian(const Graph& g) {
    RealMatrix l = degree_matrix(g);
    for (const auto& [j, k] : g.edges()) {
        l(j, k) = -1.0;
        l(k, j) = -1.0;
    }
    return l;
}

// Column-stochastic transition matrix M = A D^{-1}: M(j,k) = 1/deg(k) on
// edges. Undefined when any vertex is isolated.
inline RealMatrix transition_matrix(const Graph& g) {
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.degree(v) == 0)
            throw std::invalid_argument("transition_matrix: isolated vertex " +
                                        std::to_string(v) + " has no outgoing probability");
    RealMatrix m = RealMatrix::Zero(g.vertex_count(), g.vertex_count());
    for (const auto& [j, k] : g.edges()) {
        m(j, k) = 1.0 / g.degree(k);
        m(k, j) = 1.0 / g.degree(j);
    }
    return m;
}

inline int connected_components(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<std::vector<int>> adj(n);
    for (const auto& [j, k] : g.edges()) {
        adj[j].push_back(k);
        adj[k].push_back(j);
    }
    std::vector<char> seen(n, 0);
    int components = 0;
    std::vector<int> stack;
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++components;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return components;
}

struct GraphClassification {
    bool connected = false;
    bool regular = false;
    bool doubly_stochastic_M = false;
};

// Structural facts are read off the edge set; only the row-sum test of M
// involves floating point (columns sum to 1 by construction).
inline GraphClassification classify(const Graph& g, const Tolerances& tol = {}) {
    GraphClassification c;
    c.connected = connected_components(g) == 1;
    const auto& deg = g.degrees();
    c.regular = std::all_of(deg.begin(), deg.end(), [&](int d) { return d == deg[0]; });
    if (g.has_isolated_vertex()) {
        c.doubly_stochastic_M = false;
        return c;
    }
    bool ds = true;
    for (int j = 0; j < g.vertex_count() && ds; ++j) {
        double row_sum = 0.0;
        for (const auto& [a, b] : g.edges()) {
            if (a == j) row_sum += 1.0 / g.degree(b);
            if (b == j) row_sum += 1.0 / g.degree(a);
        }
        ds = std::abs(row_sum - 1.0) <= tol.doubly_stochastic;
    }
    c.doubly_stochastic_M = ds;
    return c;
}

// Row-major CSV with full round-trip precision.
inline std::string to_csv(const RealMatrix& m) {
    std::string out;
    char buf[64];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
            out += buf;
            out += (c + 1 < m.cols()) ? ',' : '\n';
        }
    }
    return out;
}

}  // namespace ctoqw
