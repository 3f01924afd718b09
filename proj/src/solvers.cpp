#include "solvers.hpp"

#include <chrono>
#include <set>
#include <stdexcept>

#include "cim.hpp"
#include "heuristics.hpp"
#include "sdp.hpp"

namespace cimcut {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void check_keys(const json& params, const std::set<std::string>& allowed,
                const std::string& kind) {
    if (!params.is_object() && !params.is_null())
        throw std::invalid_argument("solver params must be a JSON object");
    if (params.is_null()) return;
    for (const auto& item : params.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("unknown " + kind + " parameter: " +
                                        item.key());
}

CimParams cim_params_from(const json& p) {
    CimParams c;
    c.pump = p.value("pump", c.pump);
    c.coupling = p.value("coupling", c.coupling);
    c.saturation_amplitude = p.value("saturation_amplitude", c.saturation_amplitude);
    c.coupler_transmission = p.value("coupler_transmission", c.coupler_transmission);
    c.dt = p.value("dt", c.dt);
    c.round_trips = p.value("round_trips", c.round_trips);
    c.normalize_by_degree = p.value("normalize_by_degree", c.normalize_by_degree);
    c.roundtrip_seconds = p.value("roundtrip_seconds", c.roundtrip_seconds);
    return c;
}

std::optional<ZeemanSchedule> zeeman_from(const json& p) {
    if (!p.contains("zeeman") || p["zeeman"].is_null()) return std::nullopt;
    const json& z = p["zeeman"];
    check_keys(z, {"free_roundtrips", "cycles", "cycle_roundtrips", "amplitude0",
                   "decay", "flips_per_cycle"},
               "zeeman");
    ZeemanSchedule s;
    s.free_roundtrips = z.value("free_roundtrips", s.free_roundtrips);
    s.cycles = z.value("cycles", s.cycles);
    s.cycle_roundtrips = z.value("cycle_roundtrips", s.cycle_roundtrips);
    s.amplitude0 = z.value("amplitude0", s.amplitude0);
    s.decay = z.value("decay", s.decay);
    s.flips_per_cycle = z.value("flips_per_cycle", s.flips_per_cycle);
    return s;
}

SolveOutcome run_cim(const Graph& g, const json& p, std::uint64_t seed) {
    check_keys(p,
               {"pump", "coupling", "saturation_amplitude", "coupler_transmission",
                "dt", "round_trips", "normalize_by_degree", "roundtrip_seconds",
                "zeeman"},
               "cim");
    CimParams params = cim_params_from(p);
    std::optional<ZeemanSchedule> schedule = zeeman_from(p);
    Clock::time_point t0 = Clock::now();
    CimRunResult run = run_trial(g, params, schedule, seed);
    SolveOutcome out;
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.trace = std::move(run.trace);
    out.result = std::move(run.best);
    out.details = {{"best_round_trip", run.best_round_trip},
                   {"round_trips", params.round_trips},
                   {"simulated_seconds",
                    cim_clock_time(params.round_trips, params.roundtrip_seconds)},
                   {"final_energy", run.final_state.ising_energy}};
    return out;
}

SolveOutcome run_sa(const Graph& g, const json& p, std::uint64_t seed) {
    check_keys(p, {"c0", "total_flips", "seconds_budget"}, "sa");
    SaSchedule schedule;
    schedule.c0 = p.value("c0", schedule.c0);
    schedule.total_flips = p.value("total_flips", schedule.total_flips);
    std::optional<double> budget;
    if (p.contains("seconds_budget")) budget = p["seconds_budget"].get<double>();
    Clock::time_point t0 = Clock::now();
    HeuristicRunResult run = sa_run(g, schedule, seed, budget);
    SolveOutcome out;
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.trace = std::move(run.trace);
    out.result = std::move(run.best);
    out.details = {{"flips", run.flips},
                   {"c0", schedule.c0 == 0.0 ? default_c0(g) : schedule.c0}};
    return out;
}

SolveOutcome run_bls(const Graph& g, const json& p, std::uint64_t seed) {
    check_keys(p, {"total_flips", "p_single", "p_pair", "random_flips",
                   "seconds_budget"},
               "bls");
    BlsConfig config;
    config.total_flips = p.value("total_flips", config.total_flips);
    config.p_single = p.value("p_single", config.p_single);
    config.p_pair = p.value("p_pair", config.p_pair);
    config.random_flips = p.value("random_flips", config.random_flips);
    std::optional<double> budget;
    if (p.contains("seconds_budget")) budget = p["seconds_budget"].get<double>();
    Clock::time_point t0 = Clock::now();
    HeuristicRunResult run = bls_run(g, config, seed, budget);
    SolveOutcome out;
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.trace = std::move(run.trace);
    out.result = std::move(run.best);
    out.details = {{"flips", run.flips}};
    return out;
}

SolveOutcome run_sg3(const Graph& g, const json& p, std::uint64_t seed) {
    check_keys(p, {}, "sg3");
    (void)seed;  // deterministic
    Clock::time_point t0 = Clock::now();
    CutResult result = sg3_run(g);
    SolveOutcome out;
    out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    out.trace.solver_id = "sg3";
    out.trace.trial_seed = seed;
    out.trace.time_base = TimeBase::WallClock;
    out.trace.append(g.edge_count(), out.wall_seconds, result.ising_energy,
                     result.ising_energy);
    out.result = std::move(result);
    return out;
}

SolveOutcome run_gw(const Graph& g, const json& p, std::uint64_t seed) {
    check_keys(p, {"rank", "max_sweeps", "tol", "n_hyperplanes"}, "gw");
    GwConfig config;
    config.rank = p.value("rank", config.rank);
    config.max_sweeps = p.value("max_sweeps", config.max_sweeps);
    config.tol = p.value("tol", config.tol);
    config.n_hyperplanes = p.value("n_hyperplanes", config.n_hyperplanes);
    GwResult run = gw_run(g, config, seed);
    SolveOutcome out;
    out.wall_seconds = run.solve_seconds + run.round_seconds;
    out.trace.solver_id = "gw";
    out.trace.trial_seed = seed;
    out.trace.time_base = TimeBase::WallClock;
    out.trace.append(run.relaxation.sweeps, out.wall_seconds,
                     run.cut.ising_energy, run.cut.ising_energy);
    out.result = std::move(run.cut);
    out.details = {{"objective", run.relaxation.objective},
                   {"grad_norm", run.relaxation.grad_norm},
                   {"sweeps", run.relaxation.sweeps},
                   {"rank", run.relaxation.rank},
                   {"spectral_bound", run.spectral_bound},
                   {"solve_seconds", run.solve_seconds},
                   {"round_seconds", run.round_seconds}};
    return out;
}

}  // namespace

bool known_solver_kind(const std::string& kind) {
    return kind == "cim" || kind == "sa" || kind == "bls" || kind == "sg3" ||
           kind == "gw";
}

SolveOutcome run_solver(const Graph& g, const std::string& kind,
                        const nlohmann::json& params, std::uint64_t seed) {
    if (kind == "cim") return run_cim(g, params, seed);
    if (kind == "sa") return run_sa(g, params, seed);
    if (kind == "bls") return run_bls(g, params, seed);
    if (kind == "sg3") return run_sg3(g, params, seed);
    if (kind == "gw") return run_gw(g, params, seed);
    throw std::invalid_argument("unknown solver kind: " + kind);
}

}  // namespace cimcut
