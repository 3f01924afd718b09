#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "gset.hpp"
#include "rng.hpp"
#include "sdp.hpp"
#include "solvers.hpp"

namespace cimcut {

using nlohmann::json;

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

void run_parallel(int workers, std::vector<std::function<void()>>& jobs) {
    if (workers <= 1 || jobs.size() <= 1) {
        for (auto& job : jobs) job();
        return;
    }
    std::atomic<std::size_t> next{0};
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(workers),
                                              jobs.size());
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        pool.emplace_back([&] {
            while (true) {
                std::size_t k = next.fetch_add(1);
                if (k >= jobs.size()) break;
                jobs[k]();
            }
        });
    for (auto& t : pool) t.join();
}

std::optional<double> loglog_slope(const std::vector<double>& x,
                                   const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("loglog_slope needs equal-length series");
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    std::size_t n = lx.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) return std::nullopt;
    return sxy / sxx;
}

std::string GeneratorSpec::label() const {
    std::string out = kind + "-n" + std::to_string(n);
    if (kind == "gnp")
        out += "-p" + format_number(edge_prob) + "-" + weights;
    return out + "-s" + std::to_string(seed);
}

Graph build_generated(const GeneratorSpec& gen) {
    if (gen.kind == "complete-pm1") return Graph::complete_pm1(gen.n, gen.seed);
    if (gen.kind == "gnp") {
        Graph::WeightKind w;
        if (gen.weights == "pm1") w = Graph::WeightKind::PlusMinusOne;
        else if (gen.weights == "unit") w = Graph::WeightKind::Unit;
        else if (gen.weights == "real") w = Graph::WeightKind::UniformReal;
        else throw std::invalid_argument("unknown gnp weights: " + gen.weights);
        return Graph::gnp(gen.n, gen.edge_prob, w, gen.seed);
    }
    throw std::invalid_argument("unknown generator kind: " + gen.kind);
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const char* where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument(std::string("unknown ") + where +
                                        " key: " + item.key());
}

SolverSpec solver_from_json(const json& j) {
    check_keys(j, {"id", "kind", "params", "per_size"}, "solver");
    SolverSpec s;
    if (!j.contains("kind") && !j.contains("id"))
        throw std::invalid_argument("solver entry needs a kind");
    s.kind = j.value("kind", j.value("id", std::string{}));
    s.id = j.value("id", s.kind);
    s.params = j.value("params", json::object());
    if (j.contains("per_size")) {
        for (const auto& item : j.at("per_size").items()) {
            std::size_t pos = 0;
            int n = std::stoi(item.key(), &pos);
            if (pos != item.key().size() || n <= 0)
                throw std::invalid_argument("per_size key must be a positive size: " +
                                            item.key());
            s.per_size[n] = item.value();
        }
    }
    return s;
}

json solver_to_json(const SolverSpec& s) {
    json j = {{"id", s.id}, {"kind", s.kind}, {"params", s.params}};
    if (!s.per_size.empty()) {
        json p = json::object();
        for (const auto& [n, overrides] : s.per_size)
            p[std::to_string(n)] = overrides;
        j["per_size"] = p;
    }
    return j;
}

TargetRule target_from_json(const json& j) {
    check_keys(j, {"rule", "energy"}, "target");
    TargetRule t;
    std::string rule = j.value("rule", "none");
    if (rule == "gw") {
        t.kind = TargetKind::Gw;
    } else if (rule == "energy") {
        t.kind = TargetKind::FixedEnergy;
        t.energy = j.at("energy").get<double>();
    } else if (rule == "none") {
        t.kind = TargetKind::None;
    } else {
        throw std::invalid_argument("unknown target rule: " + rule);
    }
    return t;
}

json target_to_json(const TargetRule& t) {
    switch (t.kind) {
        case TargetKind::Gw: return {{"rule", "gw"}};
        case TargetKind::FixedEnergy:
            return {{"rule", "energy"}, {"energy", t.energy}};
        case TargetKind::None: break;
    }
    return {{"rule", "none"}};
}

void validate_solvers(const std::vector<SolverSpec>& solvers) {
    if (solvers.empty()) throw std::invalid_argument("no solvers configured");
    std::set<std::string> ids;
    for (const SolverSpec& s : solvers) {
        if (!known_solver_kind(s.kind))
            throw std::invalid_argument("unknown solver kind: " + s.kind);
        if (!ids.insert(s.id).second)
            throw std::invalid_argument("duplicate solver id: " + s.id);
    }
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json(const json& j) {
    check_keys(j, {"kind", "n", "edge_prob", "weights", "seed"}, "generator");
    GeneratorSpec gen;
    gen.kind = j.at("kind").get<std::string>();
    if (gen.kind != "complete-pm1" && gen.kind != "gnp")
        throw std::invalid_argument("unknown generator kind: " + gen.kind);
    gen.n = j.at("n").get<int>();
    gen.edge_prob = j.value("edge_prob", gen.edge_prob);
    gen.weights = j.value("weights", gen.weights);
    gen.seed = j.value("seed", gen.seed);
    return gen;
}

json GeneratorSpec::to_json() const {
    json j = {{"kind", kind}, {"n", n}, {"seed", seed}};
    if (kind == "gnp") {
        j["edge_prob"] = edge_prob;
        j["weights"] = weights;
    }
    return j;
}

BenchmarkSpec BenchmarkSpec::from_json(const json& j) {
    check_keys(j,
               {"instance", "label", "solvers", "trials", "target", "master_seed",
                "workers", "emit_traces", "grid_points", "u_sdp", "output_dir"},
               "benchmark spec");
    BenchmarkSpec spec;
    const json& inst = j.at("instance");
    check_keys(inst, {"file", "generator"}, "instance");
    if (inst.contains("file") == inst.contains("generator"))
        throw std::invalid_argument(
            "instance needs exactly one of file or generator");
    if (inst.contains("file")) spec.instance_file = inst.at("file").get<std::string>();
    else spec.generator = GeneratorSpec::from_json(inst.at("generator"));
    spec.label = j.value("label", std::string{});
    for (const json& s : j.at("solvers")) spec.solvers.push_back(solver_from_json(s));
    spec.trials = j.value("trials", spec.trials);
    if (j.contains("target")) spec.target = target_from_json(j.at("target"));
    spec.master_seed = j.value("master_seed", spec.master_seed);
    spec.workers = j.value("workers", spec.workers);
    spec.emit_traces = j.value("emit_traces", spec.emit_traces);
    spec.grid_points = j.value("grid_points", spec.grid_points);
    if (j.contains("u_sdp")) spec.u_sdp = j.at("u_sdp").get<double>();
    spec.output_dir = j.value("output_dir", spec.output_dir);
    spec.validate();
    return spec;
}

json BenchmarkSpec::to_json() const {
    json inst;
    if (!instance_file.empty()) inst = {{"file", instance_file}};
    else inst = {{"generator", generator->to_json()}};
    json solver_list = json::array();
    for (const SolverSpec& s : solvers) solver_list.push_back(solver_to_json(s));
    json j = {{"instance", inst},
              {"solvers", solver_list},
              {"trials", trials},
              {"target", target_to_json(target)},
              {"master_seed", master_seed},
              {"workers", workers},
              {"emit_traces", emit_traces},
              {"grid_points", grid_points},
              {"output_dir", output_dir}};
    if (!label.empty()) j["label"] = label;
    if (u_sdp) j["u_sdp"] = *u_sdp;
    return j;
}

void BenchmarkSpec::validate() const {
    if (instance_file.empty() == !generator.has_value())
        throw std::invalid_argument(
            "instance needs exactly one of file or generator");
    validate_solvers(solvers);
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
}

namespace {

struct TrialResult {
    bool failed = false;
    std::string error;
    SolveOutcome outcome;
};

// Per-solver aggregation over completed trials; the aggregation order is the
// trial order, so identical inputs give identical floating-point results.
SummaryRow summarize(const std::string& instance, const Graph& g,
                     const SolverSpec& solver,
                     const std::vector<TrialResult>& trials,
                     const std::optional<double>& target, double u_norm) {
    SummaryRow row;
    row.instance = instance;
    row.n = g.vertex_count();
    row.m = g.edge_count();
    row.solver = solver.id;
    row.trials = static_cast<int>(trials.size());

    double cut_sum = 0.0;
    double wall_sum = 0.0;
    int completed = 0;
    bool have_best = false;
    for (const TrialResult& t : trials) {
        if (t.failed) {
            ++row.failures;
            continue;
        }
        ++completed;
        cut_sum += t.outcome.result.cut_value;
        wall_sum += t.outcome.wall_seconds;
        if (!have_best || t.outcome.result.cut_value > row.best_cut) {
            row.best_cut = t.outcome.result.cut_value;
            have_best = true;
        }
    }
    double nan = std::numeric_limits<double>::quiet_NaN();
    row.mean_cut = completed > 0 ? cut_sum / completed : nan;
    if (!have_best) row.best_cut = nan;
    row.mean_wall_seconds = completed > 0 ? wall_sum / completed : nan;

    double e_neg = g.negative_weight();
    double denom = u_norm + e_neg;
    row.normalized_best =
        denom > 0.0 && have_best ? normalized_score(row.best_cut, u_norm, e_neg) : nan;
    row.normalized_mean =
        denom > 0.0 && completed > 0 ? normalized_score(row.mean_cut, u_norm, e_neg)
                                     : nan;

    if (target) {
        double work_sum = 0.0, sim_sum = 0.0, wall_tt_sum = 0.0;
        int reached = 0;
        bool simulated = false;
        for (const TrialResult& t : trials) {
            if (t.failed) continue;
            std::optional<long long> work = work_to_target(t.outcome.trace, *target);
            if (!work) continue;
            ++reached;
            work_sum += static_cast<double>(*work);
            std::optional<double> sec = time_to_target(t.outcome.trace, *target);
            if (t.outcome.trace.time_base == TimeBase::SimulatedCim) {
                simulated = true;
                sim_sum += sec.value_or(0.0);
            } else {
                wall_tt_sum += sec.value_or(0.0);
            }
        }
        row.successes = reached;
        if (reached > 0) {
            row.mean_work_to_target = work_sum / reached;
            if (simulated) row.mean_sim_seconds_to_target = sim_sum / reached;
            else row.mean_wall_seconds_to_target = wall_tt_sum / reached;
        }
    } else {
        row.successes = completed;
    }
    return row;
}

std::string csv_field(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
}

void write_summary_csv(const std::string& path, const BenchReport& report,
                       const std::string& u_source) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "instance,n,m,solver,trials,failures,successes,best_cut,mean_cut,"
           "u_norm,u_source,normalized_best,normalized_mean,target_energy,"
           "mean_work_to_target,mean_sim_seconds_to_target\n";
    for (const SummaryRow& r : report.rows) {
        out << r.instance << ',' << r.n << ',' << r.m << ',' << r.solver << ','
            << r.trials << ',' << r.failures << ',' << r.successes << ','
            << format_number(r.best_cut) << ',' << format_number(r.mean_cut) << ','
            << format_number(report.u_norm) << ',' << u_source << ','
            << format_number(r.normalized_best) << ','
            << format_number(r.normalized_mean) << ','
            << csv_field(report.target_energy) << ','
            << csv_field(r.mean_work_to_target) << ','
            << csv_field(r.mean_sim_seconds_to_target) << '\n';
    }
}

void write_timings_csv(const std::string& path, const BenchReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "# wall-clock aggregates; expect run-to-run variation\n";
    out << "instance,solver,mean_wall_seconds,mean_wall_seconds_to_target,"
           "successes,trials\n";
    for (const SummaryRow& r : report.rows) {
        out << r.instance << ',' << r.solver << ','
            << format_number(r.mean_wall_seconds) << ','
            << csv_field(r.mean_wall_seconds_to_target) << ',' << r.successes
            << ',' << r.trials << '\n';
    }
}

void write_averaged_csv(const std::string& path, const AveragedTrace& avg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "time,mean_best_energy,stddev\n";
    for (std::size_t i = 0; i < avg.grid.size(); ++i)
        out << format_number(avg.grid[i]) << ',' << format_number(avg.mean[i])
            << ',' << format_number(avg.stddev[i]) << '\n';
}

std::vector<double> trace_grid(const std::vector<RunTrace>& traces, int points) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const RunTrace& t : traces) {
        if (t.samples.empty()) continue;
        lo = std::min(lo, t.samples.front().seconds);
        hi = std::max(hi, t.samples.back().seconds);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {};
    if (hi <= lo) return {hi};
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    // Geometric spacing once the span covers two decades; averaged traces
    // are read on a log time axis.
    if (lo > 0.0 && hi / lo >= 100.0) {
        double ratio = std::pow(hi / lo, 1.0 / (points - 1));
        double v = lo;
        for (int i = 0; i < points; ++i, v *= ratio) grid.push_back(std::min(v, hi));
        grid.back() = hi;
    } else {
        double step = (hi - lo) / (points - 1);
        for (int i = 0; i < points; ++i) grid.push_back(lo + step * i);
        grid.back() = hi;
    }
    return grid;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "# solver=" << trace.solver_id << " seed=" << trace.trial_seed
        << " time_base=" << time_base_name(trace.time_base) << '\n';
    out << "work,seconds,best_energy,current_energy\n";
    for (const TraceSample& s : trace.samples)
        out << s.work << ',' << format_number(s.seconds) << ','
            << format_number(s.best_energy) << ','
            << format_number(s.current_energy) << '\n';
}

void write_trace_csv(const std::string& path, const RunTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    write_trace_csv(out, trace);
}

BenchReport run_benchmark(const BenchmarkSpec& spec) {
    spec.validate();
    Graph g = spec.instance_file.empty()
                  ? build_generated(*spec.generator)
                  : parse_gset_file(spec.instance_file);
    std::string label = spec.label;
    if (label.empty())
        label = spec.instance_file.empty()
                    ? spec.generator->label()
                    : std::filesystem::path(spec.instance_file).filename().string();

    BenchReport report;
    json gw_details;
    if (spec.target.kind == TargetKind::Gw) {
        json gw_params = json::object();
        for (const SolverSpec& s : spec.solvers)
            if (s.kind == "gw") {
                gw_params = s.params;
                break;
            }
        SolveOutcome gw = run_solver(g, "gw", gw_params,
                                     derive_seed(spec.master_seed, "target-gw", 0));
        report.target_energy = gw.result.ising_energy;
        report.u_norm = gw.details.at("objective").get<double>();
        report.u_source = "gw-relaxation";
        gw_details = std::move(gw.details);
    } else if (spec.target.kind == TargetKind::FixedEnergy) {
        report.target_energy = spec.target.energy;
    }
    if (spec.u_sdp) {
        report.u_norm = *spec.u_sdp;
        report.u_source = "explicit";
    } else if (report.u_source.empty()) {
        report.u_norm = spectral_upper_bound(g);
        report.u_source = "spectral";
    }

    std::size_t n_solvers = spec.solvers.size();
    std::vector<std::vector<TrialResult>> results(n_solvers);
    std::vector<std::function<void()>> jobs;
    for (std::size_t si = 0; si < n_solvers; ++si) {
        results[si].resize(static_cast<std::size_t>(spec.trials));
        for (int t = 0; t < spec.trials; ++t)
            jobs.push_back([&spec, &g, &results, si, t] {
                TrialResult& slot = results[si][static_cast<std::size_t>(t)];
                try {
                    slot.outcome = run_solver(
                        g, spec.solvers[si].kind, spec.solvers[si].params,
                        derive_seed(spec.master_seed, spec.solvers[si].id,
                                    static_cast<std::uint64_t>(t)));
                } catch (const std::exception& e) {
                    slot.failed = true;
                    slot.error = e.what();
                }
            });
    }
    run_parallel(spec.workers, jobs);

    for (std::size_t si = 0; si < n_solvers; ++si)
        report.rows.push_back(summarize(label, g, spec.solvers[si], results[si],
                                        report.target_energy, report.u_norm));

    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    write_summary_csv(spec.output_dir + "/summary.csv", report, report.u_source);
    write_timings_csv(spec.output_dir + "/timings.csv", report);

    json errors = json::array();
    for (std::size_t si = 0; si < n_solvers; ++si)
        for (int t = 0; t < spec.trials; ++t)
            if (results[si][static_cast<std::size_t>(t)].failed)
                errors.push_back(
                    {{"solver", spec.solvers[si].id},
                     {"trial", t},
                     {"error", results[si][static_cast<std::size_t>(t)].error}});

    json params = {{"spec", spec.to_json()},
                   {"resolved",
                    {{"instance", label},
                     {"n", g.vertex_count()},
                     {"m", g.edge_count()},
                     {"u_norm", report.u_norm},
                     {"u_source", report.u_source},
                     {"e_neg", g.negative_weight()}}}};
    if (report.target_energy) params["resolved"]["target_energy"] = *report.target_energy;
    if (!gw_details.is_null()) params["resolved"]["target_gw"] = gw_details;
    if (!errors.empty()) params["errors"] = errors;
    std::ofstream pj(spec.output_dir + "/params.json");
    if (!pj) throw IoError("cannot write params.json");
    pj << params.dump(2) << '\n';

    if (spec.emit_traces) {
        fs::create_directories(spec.output_dir + "/traces");
        for (std::size_t si = 0; si < n_solvers; ++si) {
            std::vector<RunTrace> traces;
            for (int t = 0; t < spec.trials; ++t) {
                const TrialResult& r = results[si][static_cast<std::size_t>(t)];
                if (r.failed) continue;
                write_trace_csv(spec.output_dir + "/traces/" + spec.solvers[si].id +
                                    "-trial" + std::to_string(t) + ".csv",
                                r.outcome.trace);
                if (!r.outcome.trace.samples.empty())
                    traces.push_back(r.outcome.trace);
            }
            std::vector<double> grid = trace_grid(traces, spec.grid_points);
            if (!grid.empty())
                write_averaged_csv(
                    spec.output_dir + "/avg-" + spec.solvers[si].id + ".csv",
                    average_traces(traces, grid));
        }
    }
    return report;
}

json report_json(const BenchReport& report) {
    json rows = json::array();
    for (const SummaryRow& row : report.rows) {
        json r = {{"instance", row.instance},
                  {"n", row.n},
                  {"m", row.m},
                  {"solver", row.solver},
                  {"trials", row.trials},
                  {"failures", row.failures},
                  {"successes", row.successes},
                  {"best_cut", row.best_cut},
                  {"mean_cut", row.mean_cut},
                  {"normalized_best", row.normalized_best},
                  {"normalized_mean", row.normalized_mean},
                  {"mean_wall_seconds", row.mean_wall_seconds}};
        if (row.mean_work_to_target) r["mean_work_to_target"] = *row.mean_work_to_target;
        if (row.mean_sim_seconds_to_target)
            r["mean_sim_seconds_to_target"] = *row.mean_sim_seconds_to_target;
        if (row.mean_wall_seconds_to_target)
            r["mean_wall_seconds_to_target"] = *row.mean_wall_seconds_to_target;
        rows.push_back(std::move(r));
    }
    json out = {{"rows", std::move(rows)},
                {"u_norm", report.u_norm},
                {"u_source", report.u_source}};
    if (report.target_energy) out["target_energy"] = *report.target_energy;
    return out;
}

}  // namespace cimcut
