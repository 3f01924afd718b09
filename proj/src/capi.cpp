#include "cimcut.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "bench.hpp"
#include "cim.hpp"
#include "graph.hpp"
#include "gset.hpp"
#include "rng.hpp"
#include "sdp.hpp"
#include "solvers.hpp"

using nlohmann::json;

struct cimcut_graph {
    explicit cimcut_graph(cimcut::Graph graph) : g(std::move(graph)) {}
    cimcut::Graph g;
};

struct cimcut_result {
    cimcut::SolveOutcome outcome;
    // Serialized once at solve time so the borrowed details pointer stays
    // valid for the lifetime of the handle.
    std::string details;
};

namespace {

thread_local std::string g_last_error;

cimcut_status fail(cimcut_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Shared exception-to-status translation. Success clears the error slot so
// cimcut_last_error() never reports stale failures.
template <typename Fn>
cimcut_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return CIMCUT_OK;
    } catch (const cimcut::ParseError& e) {
        return fail(CIMCUT_ERROR_PARSE, e.what());
    } catch (const cimcut::IoError& e) {
        return fail(CIMCUT_ERROR_IO, e.what());
    } catch (const cimcut::DivergenceError& e) {
        return fail(CIMCUT_ERROR_DIVERGED, e.what());
    } catch (const cimcut::NoConvergenceError& e) {
        return fail(CIMCUT_ERROR_NO_CONVERGENCE, e.what());
    } catch (const json::exception& e) {
        return fail(CIMCUT_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(CIMCUT_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::out_of_range& e) {
        return fail(CIMCUT_ERROR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(CIMCUT_ERROR_INTERNAL, e.what());
    }
}

cimcut_status null_argument() {
    return fail(CIMCUT_ERROR_INVALID_ARGUMENT, "null argument");
}

// malloc so callers can pair every char** with cimcut_string_free.
char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

}  // namespace

extern "C" {

const char* cimcut_last_error(void) { return g_last_error.c_str(); }

void cimcut_string_free(char* s) { std::free(s); }

cimcut_status cimcut_graph_load(const char* path, cimcut_graph** out) {
    if (!path || !out) return null_argument();
    *out = nullptr;
    return guarded([&] {
        *out = new cimcut_graph(cimcut::parse_gset_file(path));
    });
}

cimcut_status cimcut_graph_parse(const char* text, cimcut_graph** out) {
    if (!text || !out) return null_argument();
    *out = nullptr;
    return guarded([&] {
        *out = new cimcut_graph(cimcut::parse_gset_string(text));
    });
}

cimcut_status cimcut_graph_generate(const char* generator_json,
                                    cimcut_graph** out) {
    if (!generator_json || !out) return null_argument();
    *out = nullptr;
    return guarded([&] {
        cimcut::GeneratorSpec spec =
            cimcut::GeneratorSpec::from_json(json::parse(generator_json));
        *out = new cimcut_graph(cimcut::build_generated(spec));
    });
}

cimcut_status cimcut_graph_write(const cimcut_graph* g, const char* path) {
    if (!g || !path) return null_argument();
    return guarded([&] { cimcut::write_gset_file(g->g, path); });
}

int32_t cimcut_graph_vertices(const cimcut_graph* g) {
    return g ? g->g.vertex_count() : 0;
}

int64_t cimcut_graph_edges(const cimcut_graph* g) {
    return g ? g->g.edge_count() : 0;
}

void cimcut_graph_free(cimcut_graph* g) { delete g; }

cimcut_status cimcut_solve(const cimcut_graph* g, const char* solver_json,
                           uint64_t seed, cimcut_result** out) {
    if (!g || !solver_json || !out) return null_argument();
    *out = nullptr;
    return guarded([&] {
        json spec = json::parse(solver_json);
        if (!spec.is_object())
            throw std::invalid_argument("solver spec must be a JSON object");
        for (const auto& [key, value] : spec.items()) {
            (void)value;
            if (key != "kind" && key != "params")
                throw std::invalid_argument("unknown solver spec key: " + key);
        }
        std::string kind = spec.at("kind").get<std::string>();
        if (!cimcut::known_solver_kind(kind))
            throw std::invalid_argument("unknown solver kind: " + kind);
        json params = spec.value("params", json::object());

        auto handle = std::make_unique<cimcut_result>();
        handle->outcome = cimcut::run_solver(g->g, kind, params, seed);
        json details = handle->outcome.details;
        details["wall_seconds"] = handle->outcome.wall_seconds;
        handle->details = details.dump();
        *out = handle.release();
    });
}

double cimcut_result_cut(const cimcut_result* r) {
    return r ? r->outcome.result.cut_value : 0.0;
}

double cimcut_result_energy(const cimcut_result* r) {
    return r ? r->outcome.result.ising_energy : 0.0;
}

int32_t cimcut_result_spin(const cimcut_result* r, int32_t vertex) {
    if (!r || vertex < 0) return 0;
    const cimcut::SpinConfig& spins = r->outcome.result.spins;
    if (static_cast<std::size_t>(vertex) >= spins.size()) return 0;
    return spins[static_cast<std::size_t>(vertex)];
}

const char* cimcut_result_details(const cimcut_result* r) {
    return r ? r->details.c_str() : "";
}

cimcut_status cimcut_result_trace_csv(const cimcut_result* r, char** out) {
    if (!r || !out) return null_argument();
    *out = nullptr;
    return guarded([&] {
        std::ostringstream buffer;
        cimcut::write_trace_csv(buffer, r->outcome.trace);
        *out = dup_string(buffer.str());
    });
}

void cimcut_result_free(cimcut_result* r) { delete r; }

cimcut_status cimcut_brute_force(const cimcut_graph* g, uint64_t optima_limit,
                                 char** report_json) {
    if (!g || !report_json) return null_argument();
    *report_json = nullptr;
    if (g->g.vertex_count() > cimcut::kBruteForceMaxVertices)
        return fail(CIMCUT_ERROR_TOO_LARGE,
                    "brute force supports at most " +
                        std::to_string(cimcut::kBruteForceMaxVertices) +
                        " vertices, got " +
                        std::to_string(g->g.vertex_count()));
    return guarded([&] {
        std::size_t limit = optima_limit == 0
                                ? std::size_t{64}
                                : static_cast<std::size_t>(optima_limit);
        cimcut::BruteForceResult result =
            cimcut::brute_force_maxcut(g->g, limit);
        json optima = json::array();
        for (const cimcut::SpinConfig& spins : result.optima) {
            std::string text(spins.size(), '+');
            for (std::size_t i = 0; i < spins.size(); ++i)
                if (spins[i] < 0) text[i] = '-';
            optima.push_back(std::move(text));
        }
        json report = {{"cut", result.best.cut_value},
                       {"energy", result.best.ising_energy},
                       {"optima_count", result.optima.size()},
                       {"optima_truncated", result.optima_truncated},
                       {"optima", std::move(optima)}};
        *report_json = dup_string(report.dump());
    });
}

cimcut_status cimcut_bench_run(const char* spec_json, char** report_json) {
    if (!spec_json || !report_json) return null_argument();
    *report_json = nullptr;
    return guarded([&] {
        cimcut::BenchmarkSpec spec =
            cimcut::BenchmarkSpec::from_json(json::parse(spec_json));
        cimcut::BenchReport report = cimcut::run_benchmark(spec);
        *report_json = dup_string(cimcut::report_json(report).dump());
    });
}

cimcut_status cimcut_scaling_run(const char* spec_json, char** report_json) {
    if (!spec_json || !report_json) return null_argument();
    *report_json = nullptr;
    return guarded([&] {
        cimcut::ScalingSpec spec =
            cimcut::ScalingSpec::from_json(json::parse(spec_json));
        cimcut::ScalingReport report = cimcut::run_scaling(spec);
        *report_json = dup_string(cimcut::report_json(report).dump());
    });
}

uint64_t cimcut_derive_seed(uint64_t master, const char* tag, uint64_t index) {
    return cimcut::derive_seed(master, tag ? tag : "", index);
}

}  // extern "C"
