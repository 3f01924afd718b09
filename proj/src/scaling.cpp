#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "bench.hpp"
#include "rng.hpp"
#include "solvers.hpp"

namespace cimcut {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const char* where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument(std::string("unknown ") + where +
                                        " key: " + item.key());
}

json merged_params(const SolverSpec& solver, int n) {
    json params = solver.params.is_null() ? json::object() : solver.params;
    auto it = solver.per_size.find(n);
    if (it != solver.per_size.end())
        for (const auto& item : it->second.items()) params[item.key()] = item.value();
    return params;
}

std::string metric_name_for(const std::string& kind) {
    if (kind == "cim") return "roundtrips_to_target";
    if (kind == "sa" || kind == "bls") return "flips_to_target";
    return "wall_seconds";
}

struct TrialResult {
    bool failed = false;
    std::string error;
    SolveOutcome outcome;
};

}  // namespace

ScalingSpec ScalingSpec::from_json(const json& j) {
    check_keys(j,
               {"sizes", "generator", "solvers", "trials", "target", "master_seed",
                "workers", "output_dir"},
               "scaling spec");
    ScalingSpec spec;
    for (const json& s : j.at("sizes")) spec.sizes.push_back(s.get<int>());
    spec.generator_kind = j.value("generator", spec.generator_kind);
    for (const json& s : j.at("solvers")) {
        json entry = s;
        SolverSpec parsed;
        parsed.id = entry.value("id", entry.value("kind", std::string{}));
        parsed.kind = entry.value("kind", parsed.id);
        parsed.params = entry.value("params", json::object());
        if (entry.contains("per_size")) {
            for (const auto& item : entry.at("per_size").items())
                parsed.per_size[std::stoi(item.key())] = item.value();
        }
        check_keys(entry, {"id", "kind", "params", "per_size"}, "solver");
        spec.solvers.push_back(std::move(parsed));
    }
    spec.trials = j.value("trials", spec.trials);
    if (j.contains("target")) {
        const json& t = j.at("target");
        check_keys(t, {"rule", "energy"}, "target");
        std::string rule = t.value("rule", "none");
        if (rule == "gw") spec.target.kind = TargetKind::Gw;
        else if (rule == "energy") {
            spec.target.kind = TargetKind::FixedEnergy;
            spec.target.energy = t.at("energy").get<double>();
        } else if (rule == "none") spec.target.kind = TargetKind::None;
        else throw std::invalid_argument("unknown target rule: " + rule);
    }
    spec.master_seed = j.value("master_seed", spec.master_seed);
    spec.workers = j.value("workers", spec.workers);
    spec.output_dir = j.value("output_dir", spec.output_dir);
    spec.validate();
    return spec;
}

json ScalingSpec::to_json() const {
    json solver_list = json::array();
    for (const SolverSpec& s : solvers) {
        json entry = {{"id", s.id}, {"kind", s.kind}, {"params", s.params}};
        if (!s.per_size.empty()) {
            json p = json::object();
            for (const auto& [n, overrides] : s.per_size)
                p[std::to_string(n)] = overrides;
            entry["per_size"] = p;
        }
        solver_list.push_back(entry);
    }
    json target_json = {{"rule", "none"}};
    if (target.kind == TargetKind::Gw) target_json = {{"rule", "gw"}};
    else if (target.kind == TargetKind::FixedEnergy)
        target_json = {{"rule", "energy"}, {"energy", target.energy}};
    return {{"sizes", sizes},
            {"generator", generator_kind},
            {"solvers", solver_list},
            {"trials", trials},
            {"target", target_json},
            {"master_seed", master_seed},
            {"workers", workers},
            {"output_dir", output_dir}};
}

void ScalingSpec::validate() const {
    if (sizes.size() < 3)
        throw std::invalid_argument("scaling needs at least three sizes");
    for (int n : sizes)
        if (n < 2) throw std::invalid_argument("sizes must be at least 2");
    if (generator_kind != "complete-pm1")
        throw std::invalid_argument("unknown scaling generator: " + generator_kind);
    if (solvers.empty()) throw std::invalid_argument("no solvers configured");
    std::set<std::string> ids;
    for (const SolverSpec& s : solvers) {
        if (!known_solver_kind(s.kind))
            throw std::invalid_argument("unknown solver kind: " + s.kind);
        if (!ids.insert(s.id).second)
            throw std::invalid_argument("duplicate solver id: " + s.id);
    }
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (output_dir.empty()) throw std::invalid_argument("output_dir must be set");
}

ScalingReport run_scaling(const ScalingSpec& spec) {
    spec.validate();

    std::size_t n_solvers = spec.solvers.size();
    ScalingReport report;
    report.solvers.resize(n_solvers);
    for (std::size_t si = 0; si < n_solvers; ++si) {
        report.solvers[si].solver = spec.solvers[si].id;
        report.solvers[si].kind = spec.solvers[si].kind;
        report.solvers[si].metric_name = metric_name_for(spec.solvers[si].kind);
    }

    for (int n : spec.sizes) {
        Graph g = Graph::complete_pm1(
            n, derive_seed(spec.master_seed, "instance",
                           static_cast<std::uint64_t>(n)));

        std::optional<double> target;
        if (spec.target.kind == TargetKind::Gw) {
            json gw_params = json::object();
            for (const SolverSpec& s : spec.solvers)
                if (s.kind == "gw") {
                    gw_params = merged_params(s, n);
                    break;
                }
            SolveOutcome gw =
                run_solver(g, "gw", gw_params,
                           derive_seed(spec.master_seed, "target-gw",
                                       static_cast<std::uint64_t>(n)));
            target = gw.result.ising_energy;
        } else if (spec.target.kind == TargetKind::FixedEnergy) {
            target = spec.target.energy;
        }

        std::uint64_t size_seed =
            derive_seed(spec.master_seed, "size", static_cast<std::uint64_t>(n));
        std::vector<std::vector<TrialResult>> results(n_solvers);
        std::vector<std::function<void()>> jobs;
        std::vector<json> size_params(n_solvers);
        for (std::size_t si = 0; si < n_solvers; ++si) {
            size_params[si] = merged_params(spec.solvers[si], n);
            results[si].resize(static_cast<std::size_t>(spec.trials));
            for (int t = 0; t < spec.trials; ++t)
                jobs.push_back([&spec, &g, &results, &size_params, size_seed, si, t] {
                    TrialResult& slot = results[si][static_cast<std::size_t>(t)];
                    try {
                        slot.outcome = run_solver(
                            g, spec.solvers[si].kind, size_params[si],
                            derive_seed(size_seed, spec.solvers[si].id,
                                        static_cast<std::uint64_t>(t)));
                    } catch (const std::exception& e) {
                        slot.failed = true;
                        slot.error = e.what();
                    }
                });
        }
        run_parallel(spec.workers, jobs);

        for (std::size_t si = 0; si < n_solvers; ++si) {
            const std::string& kind = spec.solvers[si].kind;
            ScalingPoint point;
            point.n = n;
            point.trials = spec.trials;
            point.target_energy = target;
            double wall_sum = 0.0;
            double metric_sum = 0.0;
            int completed = 0;
            int reached = 0;
            for (const TrialResult& r : results[si]) {
                if (r.failed) {
                    ++point.failures;
                    continue;
                }
                ++completed;
                wall_sum += r.outcome.wall_seconds;
                if (kind == "cim" || kind == "sa" || kind == "bls") {
                    if (!target) continue;
                    std::optional<long long> w =
                        work_to_target(r.outcome.trace, *target);
                    if (!w) continue;
                    ++reached;
                    metric_sum += static_cast<double>(*w);
                }
            }
            point.mean_wall_seconds =
                completed > 0 ? wall_sum / completed
                              : std::numeric_limits<double>::quiet_NaN();
            if (kind == "cim" || kind == "sa" || kind == "bls") {
                point.successes = reached;
                if (reached > 0) point.mean_metric = metric_sum / reached;
            } else {
                point.successes = completed;
                if (completed > 0) point.mean_metric = point.mean_wall_seconds;
            }
            report.solvers[si].points.push_back(point);
        }
    }

    for (ScalingSolverReport& solver : report.solvers) {
        std::vector<double> xs, ys, ws;
        for (const ScalingPoint& p : solver.points) {
            if (p.mean_metric) {
                xs.push_back(static_cast<double>(p.n));
                ys.push_back(*p.mean_metric);
            }
            if (p.mean_wall_seconds > 0.0) ws.push_back(p.mean_wall_seconds);
        }
        solver.exponent = loglog_slope(xs, ys);
        std::vector<double> wx;
        for (const ScalingPoint& p : solver.points)
            if (p.mean_wall_seconds > 0.0) wx.push_back(static_cast<double>(p.n));
        solver.wall_exponent = loglog_slope(wx, ws);
    }

    namespace fs = std::filesystem;
    fs::create_directories(spec.output_dir);
    {
        std::ofstream out(spec.output_dir + "/scaling.csv");
        if (!out) throw IoError("cannot write scaling.csv");
        out << "solver,metric,n,trials,failures,successes,mean_metric,"
               "target_energy\n";
        for (const ScalingSolverReport& solver : report.solvers)
            for (const ScalingPoint& p : solver.points) {
                out << solver.solver << ',' << solver.metric_name << ',' << p.n
                    << ',' << p.trials << ',' << p.failures << ',' << p.successes
                    << ',';
                if (p.mean_metric) out << format_number(*p.mean_metric);
                out << ',';
                if (p.target_energy) out << format_number(*p.target_energy);
                out << '\n';
            }
    }
    {
        std::ofstream out(spec.output_dir + "/scaling_wall.csv");
        if (!out) throw IoError("cannot write scaling_wall.csv");
        out << "# wall-clock measurements; expect run-to-run variation\n";
        out << "solver,n,mean_wall_seconds\n";
        for (const ScalingSolverReport& solver : report.solvers)
            for (const ScalingPoint& p : solver.points)
                out << solver.solver << ',' << p.n << ','
                    << format_number(p.mean_wall_seconds) << '\n';
    }
    {
        std::ofstream out(spec.output_dir + "/exponents.csv");
        if (!out) throw IoError("cannot write exponents.csv");
        out << "solver,metric,exponent,wall_exponent\n";
        for (const ScalingSolverReport& solver : report.solvers) {
            out << solver.solver << ',' << solver.metric_name << ',';
            if (solver.exponent) out << format_number(*solver.exponent);
            out << ',';
            if (solver.wall_exponent) out << format_number(*solver.wall_exponent);
            out << '\n';
        }
    }
    {
        std::ofstream out(spec.output_dir + "/params.json");
        if (!out) throw IoError("cannot write params.json");
        out << spec.to_json().dump(2) << '\n';
    }
    return report;
}

json report_json(const ScalingReport& report) {
    json solvers = json::array();
    for (const ScalingSolverReport& solver : report.solvers) {
        json points = json::array();
        for (const ScalingPoint& p : solver.points) {
            json pj = {{"n", p.n},
                       {"trials", p.trials},
                       {"failures", p.failures},
                       {"successes", p.successes},
                       {"mean_wall_seconds", p.mean_wall_seconds}};
            if (p.mean_metric) pj["mean_metric"] = *p.mean_metric;
            if (p.target_energy) pj["target_energy"] = *p.target_energy;
            points.push_back(std::move(pj));
        }
        json s = {{"solver", solver.solver},
                  {"kind", solver.kind},
                  {"metric", solver.metric_name},
                  {"points", std::move(points)}};
        if (solver.exponent) s["exponent"] = *solver.exponent;
        if (solver.wall_exponent) s["wall_exponent"] = *solver.wall_exponent;
        solvers.push_back(std::move(s));
    }
    return {{"solvers", std::move(solvers)}};
}

}  // namespace cimcut
