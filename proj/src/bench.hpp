#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph.hpp"
#include "trace.hpp"

namespace cimcut {

struct GeneratorSpec {
    std::string kind;             // "complete-pm1" | "gnp"
    int n = 0;
    double edge_prob = 0.5;       // gnp only
    std::string weights = "pm1";  // gnp only: pm1 | unit | real
    std::uint64_t seed = 0;

    std::string label() const;

    static GeneratorSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

Graph build_generated(const GeneratorSpec& gen);

struct SolverSpec {
    std::string id;    // row label; defaults to kind, must be unique per spec
    std::string kind;  // cim | sa | bls | sg3 | gw
    nlohmann::json params = nlohmann::json::object();
    // Scaling runs merge per_size[N] over params for instance size N.
    std::map<int, nlohmann::json> per_size;
};

enum class TargetKind { Gw, FixedEnergy, None };

struct TargetRule {
    TargetKind kind = TargetKind::None;
    double energy = 0.0;  // FixedEnergy only
};

struct BenchmarkSpec {
    std::string instance_file;  // exactly one of file / generator
    std::optional<GeneratorSpec> generator;
    std::string label;  // defaults to the file name or generator label
    std::vector<SolverSpec> solvers;
    int trials = 1;
    TargetRule target;
    std::uint64_t master_seed = 1;
    int workers = 1;
    bool emit_traces = true;
    int grid_points = 64;
    std::optional<double> u_sdp;  // explicit normalizer override
    std::string output_dir = "bench-out";

    static BenchmarkSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct SummaryRow {
    std::string instance;
    int n = 0;
    long long m = 0;
    std::string solver;
    int trials = 0;
    int failures = 0;
    int successes = 0;
    double best_cut = 0.0;
    double mean_cut = 0.0;
    double normalized_best = 0.0;
    double normalized_mean = 0.0;
    std::optional<double> mean_work_to_target;
    std::optional<double> mean_sim_seconds_to_target;  // simulated-cim solvers
    // Wall-clock aggregates live in timings.csv, never in summary.csv, so
    // summary bytes stay reproducible.
    double mean_wall_seconds = 0.0;
    std::optional<double> mean_wall_seconds_to_target;
};

struct BenchReport {
    std::vector<SummaryRow> rows;
    std::optional<double> target_energy;
    double u_norm = 0.0;
    std::string u_source;  // explicit | gw-relaxation | spectral
};

// Runs every solver x trial, resolves the target rule (running GW first for
// the gw rule), and writes summary.csv, timings.csv, params.json, per-trial
// traces, and averaged trace curves under spec.output_dir.
BenchReport run_benchmark(const BenchmarkSpec& spec);

struct ScalingSpec {
    std::vector<int> sizes;
    std::string generator_kind = "complete-pm1";
    std::vector<SolverSpec> solvers;
    int trials = 1;
    TargetRule target;
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string output_dir = "scaling-out";

    static ScalingSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct ScalingPoint {
    int n = 0;
    int trials = 0;
    int failures = 0;
    int successes = 0;
    std::optional<double> mean_metric;
    double mean_wall_seconds = 0.0;
    std::optional<double> target_energy;
};

struct ScalingSolverReport {
    std::string solver;
    std::string kind;
    // roundtrips_to_target | flips_to_target | wall_seconds
    std::string metric_name;
    std::vector<ScalingPoint> points;
    std::optional<double> exponent;       // log-log slope of mean_metric vs N
    std::optional<double> wall_exponent;  // same on wall seconds
};

struct ScalingReport {
    std::vector<ScalingSolverReport> solvers;
};

// Same trial machinery across instance sizes; emits scaling.csv,
// exponents.csv, and scaling_wall.csv under spec.output_dir.
ScalingReport run_scaling(const ScalingSpec& spec);

// Least-squares slope of ln(y) against ln(x); empty when fewer than two
// distinct positive points exist.
std::optional<double> loglog_slope(const std::vector<double>& x,
                                   const std::vector<double>& y);

nlohmann::json report_json(const BenchReport& report);
nlohmann::json report_json(const ScalingReport& report);

// Shortest round-trippable decimal form, locale-independent; the CSV number
// format everywhere.
std::string format_number(double value);

// Runs jobs on up to `workers` threads; jobs must not throw.
void run_parallel(int workers, std::vector<std::function<void()>>& jobs);

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_trace_csv(const std::string& path, const RunTrace& trace);

}  // namespace cimcut
