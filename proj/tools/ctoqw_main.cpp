// Command-line front end: graph generation, structural checks, steady-state
// solving, trajectory evolution, and three-way process comparison.
//
// Exit codes: 0 success, 1 usage or input error, 2 a structural claim about
// the walk failed numerically (surfaced, never swallowed).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctoqw/ctoqw.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using ctoqw::json;

struct GlobalOptions {
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
    std::string method = "auto";
    ctoqw::Tolerances tol;
};

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
    file << content;
}

ctoqw::Graph load_graph(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open graph file '" + path + "'");
    return ctoqw::parse_edge_list(file);
}

std::string comment_header(const std::string& command, const json& config,
                           const ctoqw::Tolerances& tol) {
    std::string head = "# ctoqw " + std::string(kVersion) + "\n";
    head += "# command: " + command + "\n";
    head += "# config: " + config.dump() + "\n";
    head += "# tolerances: " + ctoqw::to_json(tol).dump() + "\n";
    return head;
}

json meta_block(const std::string& command, const json& config, const ctoqw::Tolerances& tol) {
    return json{{"tool", "ctoqw"},
                {"version", kVersion},
                {"command", command},
                {"config", config},
                {"tolerances", ctoqw::to_json(tol)}};
}

std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", x);
    return buf;
}

ctoqw::EvolveMethod resolve_method(const std::string& method, int n) {
    if (method == "expm") return ctoqw::EvolveMethod::expm;
    if (method == "rk") return ctoqw::EvolveMethod::rk_adaptive;
    if (method == "auto")
        return n <= 20 ? ctoqw::EvolveMethod::expm : ctoqw::EvolveMethod::rk_adaptive;
    throw std::invalid_argument("unknown method '" + method + "' (expected expm|rk|auto)");
}

// Initial-state specs: vertex:<j> | mixed | uniform | random | file:<path>.
// `random` draws a seeded full-rank density matrix and only makes sense for
// the open walk; `file` reads the shared JSON formats.
ctoqw::InitialState parse_initial(const std::string& spec, ctoqw::Process process, int n,
                                  std::uint64_t seed) {
    using ctoqw::InitialState;
    if (spec.rfind("vertex:", 0) == 0) {
        int j = 0;
        try {
            j = std::stoi(spec.substr(7));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad initial spec '" + spec + "'");
        }
        return InitialState::vertex(j);
    }
    if (spec == "mixed") return InitialState::uniform_mixed();
    if (spec == "uniform") return InitialState::uniform_superposition();
    if (spec == "random") {
        if (process != ctoqw::Process::ctoqw)
            throw std::invalid_argument("initial spec 'random' is only defined for ctoqw");
        return InitialState::explicit_density(ctoqw::random_density_matrix(n, seed));
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream file(spec.substr(5));
        if (!file) throw std::invalid_argument("cannot open initial-state file '" + spec + "'");
        json parsed;
        file >> parsed;
        switch (process) {
            case ctoqw::Process::ctoqw:
                return InitialState::explicit_density(ctoqw::complex_matrix_from_json(parsed));
            case ctoqw::Process::ctrw: {
                Eigen::VectorXd p(parsed.size());
                for (std::size_t i = 0; i < parsed.size(); ++i) p(i) = parsed.at(i).get<double>();
                return InitialState::explicit_probabilities(std::move(p));
            }
            case ctoqw::Process::ctqw:
                return InitialState::explicit_amplitudes(ctoqw::complex_vector_from_json(parsed));
        }
    }
    throw std::invalid_argument("bad initial spec '" + spec +
                                "' (expected vertex:<j>|mixed|uniform|random|file:<path>)");
}

int run_gen(const GlobalOptions& global, const std::string& family, int size) {
    const ctoqw::Graph g = ctoqw::generate(ctoqw::graph_family_from_string(family), size);
    const json config{{"family", family}, {"size", size}, {"out", global.out}};
    write_output(global.out, comment_header("gen", config, global.tol) + ctoqw::to_edge_list(g));
    return 0;
}

int run_check(const GlobalOptions& global, const std::string& graph_file,
              const std::string& liouvillian_out) {
    const ctoqw::Graph g = load_graph(graph_file);
    const json config{{"graph_file", graph_file}, {"out", global.out}};

    json report = ctoqw::check_report_json(g, global.tol);
    report["meta"] = meta_block("check", config, global.tol);
    write_output(global.out, report.dump(2) + "\n");

    if (!liouvillian_out.empty()) {
        const ctoqw::Liouvillian lio = ctoqw::build_liouvillian(g);
        write_output(liouvillian_out, ctoqw::to_json(lio.matrix).dump() + "\n");
    }

    // structural identities that hold for every built generator; a numeric
    // failure here contradicts the theory behind the walk
    if (report.contains("sum_identity")) {
        const bool structure_ok = report["sum_identity"]["holds"].get<bool>() &&
                                  report["span_hermitian"].get<bool>();
        const bool commutant_ok = !report["classify"]["connected"].get<bool>() ||
                                  report["commutant"]["trivial"].get<bool>();
        if (!structure_ok || !commutant_ok) {
            std::cerr << "ctoqw check: structural identity failed numerically\n";
            return 2;
        }
    }
    return 0;
}

int run_steady(const GlobalOptions& global, const std::string& graph_file) {
    const ctoqw::Graph g = load_graph(graph_file);
    const ctoqw::Liouvillian lio = ctoqw::build_liouvillian(g);
    const ctoqw::SteadyStateReport report =
        ctoqw::classify_steady_state(g, ctoqw::solve_steady_state(lio, global.tol), global.tol);

    const json config{{"graph_file", graph_file}, {"format", global.format}, {"out", global.out}};
    if (global.format == "json" || global.format == "csv") {
        if (global.format == "json") {
            json out = ctoqw::steady_report_json(g, report);
            out["meta"] = meta_block("steady", config, global.tol);
            write_output(global.out, out.dump(2) + "\n");
        } else {
            std::string csv = comment_header("steady", config, global.tol);
            csv += "# classification: " + std::string(ctoqw::to_string(report.classification)) + "\n";
            csv += "# kernel_dim: " + std::to_string(report.kernel_dim) + "\n";
            csv += "# residual: " + format_sci(report.residual) + "\n";
            csv += "row,col,re,im\n";
            if (report.rho_inf) {
                const auto& rho = report.rho_inf->matrix();
                for (Eigen::Index r = 0; r < rho.rows(); ++r)
                    for (Eigen::Index c = 0; c < rho.cols(); ++c)
                        csv += std::to_string(r) + "," + std::to_string(c) + "," +
                               format_sci(rho(r, c).real()) + "," + format_sci(rho(r, c).imag()) +
                               "\n";
            }
            write_output(global.out, csv);
        }
    } else {
        throw std::invalid_argument("unknown format '" + global.format + "'");
    }

    if (!report.theorem_consistent) {
        std::cerr << "ctoqw steady: structural claim falsified: " << report.falsification << "\n";
        return 2;
    }
    return 0;
}

int run_evolve(const GlobalOptions& global, const std::string& graph_file,
               const std::string& process_name, const std::string& initial_spec, double t_max,
               int samples) {
    const ctoqw::Graph g = load_graph(graph_file);
    const int n = g.vertex_count();

    ctoqw::Process process;
    if (process_name == "ctoqw") process = ctoqw::Process::ctoqw;
    else if (process_name == "ctrw") process = ctoqw::Process::ctrw;
    else if (process_name == "ctqw") process = ctoqw::Process::ctqw;
    else throw std::invalid_argument("unknown process '" + process_name + "'");

    const ctoqw::InitialState init = parse_initial(initial_spec, process, n, global.seed);
    const std::vector<double> times = ctoqw::default_sample_times(t_max, samples);
    const ctoqw::EvolveMethod method = resolve_method(global.method, n);

    const json config{{"graph_file", graph_file}, {"process", process_name},
                      {"initial", initial_spec}, {"t_max", t_max},
                      {"samples", samples},
                      {"method", method == ctoqw::EvolveMethod::expm ? "expm" : "rk"},
                      {"seed", global.seed},       {"format", global.format},
                      {"out", global.out}};

    std::vector<Eigen::VectorXd> distributions;
    json states = json::array();

    switch (process) {
        case ctoqw::Process::ctoqw: {
            const ctoqw::Liouvillian lio = ctoqw::build_liouvillian(g);
            const auto traj =
                ctoqw::evolve_ctoqw(lio, ctoqw::initial_density(init, n, global.tol), times,
                                    method, global.tol);
            for (const auto& rho : traj.states) {
                distributions.push_back(ctoqw::site_distribution(rho));
                if (global.format == "json") states.push_back(ctoqw::to_json(rho));
            }
            break;
        }
        case ctoqw::Process::ctrw: {
            const auto traj = ctoqw::evolve_ctrw(g, ctoqw::initial_probability(init, n), times,
                                                 global.tol);
            for (const auto& p : traj.states) {
                distributions.push_back(p);
                if (global.format == "json") states.push_back(ctoqw::to_json(p));
            }
            break;
        }
        case ctoqw::Process::ctqw: {
            const auto traj = ctoqw::evolve_ctqw(g, ctoqw::initial_amplitude(init, n), times,
                                                 global.tol);
            for (const auto& psi : traj.states) {
                distributions.push_back(ctoqw::site_distribution(psi));
                if (global.format == "json") states.push_back(ctoqw::to_json(psi));
            }
            break;
        }
    }

    if (global.format == "json") {
        json out{{"meta", meta_block("evolve", config, global.tol)},
                 {"times", times},
                 {"states", states}};
        json dists = json::array();
        for (const auto& d : distributions) dists.push_back(ctoqw::to_json(d));
        out["site_distributions"] = dists;
        write_output(global.out, out.dump(2) + "\n");
    } else {
        std::string csv = comment_header("evolve", config, global.tol);
        csv += "time";
        for (int v = 0; v < n; ++v) csv += ",p" + std::to_string(v);
        csv += "\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
            csv += format_sci(times[i]);
            for (int v = 0; v < n; ++v) csv += "," + format_sci(distributions[i](v));
            csv += "\n";
        }
        write_output(global.out, csv);
    }
    return 0;
}

int run_compare(const GlobalOptions& global, const std::string& graph_file, int initial_vertex,
                double t_max, int samples) {
    const ctoqw::Graph g = load_graph(graph_file);
    const int n = g.vertex_count();
    const ctoqw::EvolveMethod method = resolve_method(global.method, n);
    const auto cmp = ctoqw::compare_processes(g, ctoqw::InitialState::vertex(initial_vertex),
                                              t_max, samples, method, global.tol);

    const json config{{"graph_file", graph_file}, {"initial_vertex", initial_vertex},
                      {"t_max", t_max},           {"samples", samples},
                      {"method", method == ctoqw::EvolveMethod::expm ? "expm" : "rk"},
                      {"out", global.out}};

    std::string csv = comment_header("compare", config, global.tol);
    csv += "# final row: ctqw columns hold the limiting time average, not |psi(t_max)|^2\n";
    csv += "time";
    for (const char* prefix : {"ctoqw_p", "ctrw_p", "ctqw_p"})
        for (int v = 0; v < n; ++v) csv += "," + std::string(prefix) + std::to_string(v);
    csv += "\n";

    for (std::size_t i = 0; i < cmp.times.size(); ++i) {
        const bool last = i + 1 == cmp.times.size();
        csv += format_sci(cmp.times[i]);
        for (int v = 0; v < n; ++v) csv += "," + format_sci(cmp.open_distribution[i](v));
        for (int v = 0; v < n; ++v) csv += "," + format_sci(cmp.classical_distribution[i](v));
        const Eigen::VectorXd& unitary =
            last ? cmp.unitary_limiting_average : cmp.unitary_distribution[i];
        for (int v = 0; v < n; ++v) csv += "," + format_sci(unitary(v));
        csv += "\n";
    }
    write_output(global.out, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ctoqw: continuous-time open quantum walks on finite graphs\n"
                 "Vertices are 0-indexed everywhere (files, flags, reports)."};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    GlobalOptions global;
    app.add_option("--out", global.out, "output file (stdout when omitted)")->capture_default_str();
    app.add_option("--format", global.format, "output format: csv|json")->capture_default_str();
    app.add_option("--seed", global.seed, "seed for random initial states")->capture_default_str();
    app.add_option("--method", global.method, "evolution method: expm|rk|auto")
        ->capture_default_str();
    app.add_option("--tol-hermiticity", global.tol.hermiticity, "Hermiticity tolerance");
    app.add_option("--tol-trace", global.tol.trace, "trace tolerance");
    app.add_option("--tol-positivity", global.tol.positivity, "positivity tolerance");
    app.add_option("--tol-rank-rel", global.tol.rank_rel, "relative rank threshold");
    app.add_option("--tol-residual", global.tol.residual, "steady-state residual tolerance");
    app.add_option("--tol-sum-identity", global.tol.sum_identity, "sum identity tolerance");
    app.add_option("--tol-doubly-stochastic", global.tol.doubly_stochastic,
                   "row-sum tolerance for double stochasticity");
    app.add_option("--tol-mixed-match", global.tol.mixed_state_match,
                   "maximally-mixed classification tolerance");
    app.add_option("--tol-eigenvalue-group", global.tol.eigenvalue_group,
                   "eigenvalue grouping tolerance for degenerate spectra");
    app.add_option("--tol-rk-rel", global.tol.rk_rel, "integrator relative tolerance");
    app.add_option("--tol-rk-abs", global.tol.rk_abs, "integrator absolute tolerance");

    std::string family, graph_file, process_name, initial_spec = "vertex:0", liouvillian_out;
    int size = 0, samples = 64, initial_vertex = 0;
    double t_max = 100.0;

    CLI::App* gen = app.add_subcommand("gen", "generate a named graph family as an edge list");
    gen->fallthrough();
    gen->add_option("family", family, "cycle|path|star|complete")->required();
    gen->add_option("size", size, "vertex count (edge count for star)")->required();

    CLI::App* check =
        app.add_subcommand("check", "report graph facts, generator hypotheses, and the predicted limit");
    check->fallthrough();
    check->add_option("graph", graph_file, "edge-list file")->required();
    check->add_option("--liouvillian-out", liouvillian_out,
                      "also export the vectorized generator as JSON");

    CLI::App* steady = app.add_subcommand("steady", "solve for the steady state and classify it");
    steady->fallthrough();
    steady->add_option("graph", graph_file, "edge-list file")->required();

    CLI::App* evolve = app.add_subcommand("evolve", "sample a walk trajectory");
    evolve->fallthrough();
    evolve->add_option("graph", graph_file, "edge-list file")->required();
    evolve->add_option("--process", process_name, "ctoqw|ctrw|ctqw")->required();
    evolve->add_option("--initial", initial_spec, "vertex:<j>|mixed|uniform|random|file:<path>")
        ->capture_default_str();
    evolve->add_option("--t-max", t_max, "time horizon")->required();
    evolve->add_option("--samples", samples, "number of sample times")->capture_default_str();

    CLI::App* compare = app.add_subcommand("compare", "run all three processes side by side");
    compare->fallthrough();
    compare->add_option("graph", graph_file, "edge-list file")->required();
    compare->add_option("--initial-vertex", initial_vertex, "start vertex")->capture_default_str();
    compare->add_option("--t-max", t_max, "time horizon")->required();
    compare->add_option("--samples", samples, "number of sample times")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return run_gen(global, family, size);
        if (check->parsed()) return run_check(global, graph_file, liouvillian_out);
        if (steady->parsed()) return run_steady(global, graph_file);
        if (evolve->parsed())
            return run_evolve(global, graph_file, process_name, initial_spec, t_max, samples);
        if (compare->parsed())
            return run_compare(global, graph_file, initial_vertex, t_max, samples);
    } catch (const std::exception& e) {
        std::cerr << "ctoqw: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
