// Command-line front end. Talks to the library exclusively through the C API
// in cimcut.h, the same surface external embedders get.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cimcut.h"

using nlohmann::json;

namespace {

[[noreturn]] void die(const std::string& context) {
    std::cerr << "cimcut: " << context << ": " << cimcut_last_error() << '\n';
    std::exit(2);
}

void check(cimcut_status status, const std::string& context) {
    if (status != CIMCUT_OK) die(context);
}

struct GraphHandle {
    cimcut_graph* g = nullptr;
    ~GraphHandle() { cimcut_graph_free(g); }
};

struct ResultHandle {
    cimcut_result* r = nullptr;
    ~ResultHandle() { cimcut_result_free(r); }
};

struct StringHandle {
    char* s = nullptr;
    ~StringHandle() { cimcut_string_free(s); }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cimcut: cannot read " << path << '\n';
        std::exit(2);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// "gw", "none", or "energy=<E>".
json parse_target(const std::string& text) {
    if (text == "gw") return {{"rule", "gw"}};
    if (text == "none") return {{"rule", "none"}};
    if (text.rfind("energy=", 0) == 0) {
        try {
            return {{"rule", "energy"},
                    {"energy", std::stod(text.substr(7))}};
        } catch (const std::exception&) {
        }
    }
    std::cerr << "cimcut: bad --target '" << text
              << "' (expected gw, none, or energy=<E>)\n";
    std::exit(2);
}

std::string spins_string(const cimcut_result* r, int32_t n) {
    std::string text(static_cast<std::size_t>(n), '+');
    for (int32_t v = 0; v < n; ++v)
        if (cimcut_result_spin(r, v) < 0) text[static_cast<std::size_t>(v)] = '-';
    return text;
}

int run_solve(const std::string& solver, const std::string& instance,
              const std::string& generator, std::uint64_t seed,
              const std::string& params_text,
              std::optional<long long> budget_roundtrips,
              std::optional<long long> budget_flips,
              std::optional<double> budget_seconds, const std::string& out_dir) {
    GraphHandle graph;
    if (!instance.empty())
        check(cimcut_graph_load(instance.c_str(), &graph.g), instance);
    else
        check(cimcut_graph_generate(generator.c_str(), &graph.g), "generator");

    json params = json::object();
    if (!params_text.empty()) {
        params = json::parse(params_text, nullptr, false);
        if (params.is_discarded() || !params.is_object()) {
            std::cerr << "cimcut: --params must be a JSON object\n";
            return 2;
        }
    }
    if (budget_roundtrips) {
        if (solver != "cim") {
            std::cerr << "cimcut: --budget-roundtrips applies to the cim solver\n";
            return 2;
        }
        params["round_trips"] = *budget_roundtrips;
    }
    if (budget_flips) {
        if (solver != "sa" && solver != "bls") {
            std::cerr << "cimcut: --budget-flips applies to sa and bls\n";
            return 2;
        }
        params["total_flips"] = *budget_flips;
    }
    if (budget_seconds) {
        // For the simulated machine the budget is simulated time; for the
        // flip-based heuristics it is a wall-clock cap.
        if (solver == "cim") {
            double rt = params.value("roundtrip_seconds", 1e-5);
            params["round_trips"] =
                static_cast<long long>(*budget_seconds / rt + 0.5);
        } else if (solver == "sa" || solver == "bls") {
            params["seconds_budget"] = *budget_seconds;
        } else {
            std::cerr << "cimcut: --budget-seconds applies to cim, sa, and bls\n";
            return 2;
        }
    }

    json spec = {{"kind", solver}, {"params", params}};
    ResultHandle result;
    check(cimcut_solve(graph.g, spec.dump().c_str(), seed, &result.r), solver);

    int32_t n = cimcut_graph_vertices(graph.g);
    json report = {{"solver", solver},
                   {"seed", seed},
                   {"n", n},
                   {"m", cimcut_graph_edges(graph.g)},
                   {"cut", cimcut_result_cut(result.r)},
                   {"energy", cimcut_result_energy(result.r)},
                   {"spins", spins_string(result.r, n)},
                   {"details", json::parse(cimcut_result_details(result.r))}};
    std::cout << report.dump(2) << '\n';

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream rj(out_dir + "/result.json");
        rj << report.dump(2) << '\n';
        StringHandle trace;
        check(cimcut_result_trace_csv(result.r, &trace.s), "trace");
        std::ofstream tc(out_dir + "/trace.csv");
        tc << trace.s;
    }
    return 0;
}

int run_spec(bool scaling, const std::string& spec_path,
             std::optional<std::uint64_t> seed, std::optional<int> trials,
             std::optional<int> workers, const std::string& target,
             const std::string& out_dir) {
    json spec = json::parse(read_file(spec_path), nullptr, false);
    if (spec.is_discarded() || !spec.is_object()) {
        std::cerr << "cimcut: " << spec_path << " is not a JSON object\n";
        return 2;
    }
    if (seed) spec["master_seed"] = *seed;
    if (trials) spec["trials"] = *trials;
    if (workers) spec["workers"] = *workers;
    if (!target.empty()) spec["target"] = parse_target(target);
    if (!out_dir.empty()) spec["output_dir"] = out_dir;

    StringHandle report;
    cimcut_status status =
        scaling ? cimcut_scaling_run(spec.dump().c_str(), &report.s)
                : cimcut_bench_run(spec.dump().c_str(), &report.s);
    check(status, spec_path);
    std::cout << report.s << '\n';
    std::cerr << "wrote " << spec.value("output_dir", scaling ? "scaling-out" : "bench-out")
              << '\n';
    return 0;
}

int run_gen(const std::string& kind, int n, double edge_prob,
            const std::string& weights, std::uint64_t seed,
            const std::string& out_path) {
    json gen = {{"kind", kind}, {"n", n}, {"seed", seed}};
    if (kind == "gnp") {
        gen["edge_prob"] = edge_prob;
        gen["weights"] = weights;
    }
    GraphHandle graph;
    check(cimcut_graph_generate(gen.dump().c_str(), &graph.g), "generator");
    std::string path = out_path == "-" ? "/dev/stdout" : out_path;
    check(cimcut_graph_write(graph.g, path.c_str()), out_path);
    if (out_path != "-")
        std::cerr << "wrote " << out_path << " (" << cimcut_graph_vertices(graph.g)
                  << " vertices, " << cimcut_graph_edges(graph.g) << " edges)\n";
    return 0;
}

int run_oracle(const std::string& instance, std::uint64_t optima_limit) {
    GraphHandle graph;
    check(cimcut_graph_load(instance.c_str(), &graph.g), instance);
    StringHandle report;
    check(cimcut_brute_force(graph.g, optima_limit, &report.s), instance);
    std::cout << report.s << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MAX-CUT solver suite: coherent Ising machine simulation and "
                 "classical baselines"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "Run one solver on one instance");
    std::string solver = "cim";
    std::string instance;
    std::string generator;
    std::uint64_t seed = 1;
    std::string params_text;
    std::optional<long long> budget_roundtrips;
    std::optional<long long> budget_flips;
    std::optional<double> budget_seconds;
    std::string solve_out;
    solve->add_option("--solver", solver, "cim | sa | bls | sg3 | gw")
        ->default_str("cim");
    auto* inst_opt =
        solve->add_option("--instance", instance, "G-set format graph file");
    solve->add_option("--gen", generator, "inline generator JSON")
        ->excludes(inst_opt);
    solve->add_option("--seed", seed, "trial seed");
    solve->add_option("--params", params_text, "solver parameter JSON object");
    solve->add_option("--budget-roundtrips", budget_roundtrips,
                      "cim: cavity round trips to simulate");
    solve->add_option("--budget-flips", budget_flips,
                      "sa/bls: proposed spin flips");
    solve->add_option("--budget-seconds", budget_seconds,
                      "cim: simulated seconds; sa/bls: wall-clock cap");
    solve->add_option("--out", solve_out, "directory for result.json and trace.csv");

    // bench / scaling
    auto* bench = app.add_subcommand("bench", "Run a benchmark spec file");
    auto* scaling =
        app.add_subcommand("scaling", "Run a scaling spec across sizes");
    std::string bench_spec, scaling_spec;
    std::optional<std::uint64_t> master_seed;
    std::optional<int> trials, workers;
    std::string target, bench_out;
    for (auto* cmd : {bench, scaling}) {
        cmd->add_option("--spec", cmd == bench ? bench_spec : scaling_spec,
                        "spec JSON file")
            ->required();
        cmd->add_option("--seed", master_seed, "override master_seed");
        cmd->add_option("--trials", trials, "override trials");
        cmd->add_option("--workers", workers, "override worker count");
        cmd->add_option("--target", target, "override target: gw | none | energy=<E>");
        cmd->add_option("--out", bench_out, "override output directory");
    }

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
    std::string gen_kind = "complete-pm1";
    int gen_n = 0;
    double gen_edge_prob = 0.5;
    std::string gen_weights = "pm1";
    std::uint64_t gen_seed = 1;
    std::string gen_out = "-";
    gen->add_option("--kind", gen_kind, "complete-pm1 | gnp")
        ->default_str("complete-pm1");
    gen->add_option("--n", gen_n, "vertex count")->required();
    gen->add_option("--edge-prob", gen_edge_prob, "gnp edge probability");
    gen->add_option("--weights", gen_weights, "gnp weights: pm1 | unit | real");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output file, - for stdout");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
    std::string oracle_instance;
    std::uint64_t optima_limit = 64;
    oracle->add_option("--instance", oracle_instance, "G-set format graph file")
        ->required();
    oracle->add_option("--optima-limit", optima_limit,
                       "max optimal configurations to report");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) {
        if (instance.empty() && generator.empty()) {
            std::cerr << "cimcut: solve needs --instance or --gen\n";
            return 2;
        }
        return run_solve(solver, instance, generator, seed, params_text,
                         budget_roundtrips, budget_flips, budget_seconds,
                         solve_out);
    }
    if (bench->parsed())
        return run_spec(false, bench_spec, master_seed, trials, workers, target,
                        bench_out);
    if (scaling->parsed())
        return run_spec(true, scaling_spec, master_seed, trials, workers, target,
                        bench_out);
    if (gen->parsed())
        return run_gen(gen_kind, gen_n, gen_edge_prob, gen_weights, gen_seed,
                       gen_out);
    if (oracle->parsed()) return run_oracle(oracle_instance, optima_limit);
    return 1;
}
