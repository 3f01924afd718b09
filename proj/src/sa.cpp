#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "heuristics.hpp"

namespace cimcut {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SpinConfig random_spins(int n, Rng& rng) {
    SpinConfig spins(static_cast<std::size_t>(n));
    for (auto& s : spins) s = static_cast<std::int8_t>(rng.pm1());
    return spins;
}

}  // namespace

void SaSchedule::validate() const {
    if (!(c0 >= 0.0) || !std::isfinite(c0))
        throw std::invalid_argument("c0 must be finite and non-negative");
    if (total_flips < 1)
        throw std::invalid_argument("total_flips must be at least 1");
}

double log_temperature(long long flip_index, const SaSchedule& schedule) {
    if (flip_index < 0) throw std::invalid_argument("flip_index must be >= 0");
    return schedule.c0 / std::log(2.0 + static_cast<double>(flip_index));
}

bool metropolis_accept(double delta_e, double temp, Rng& rng) {
    if (!(temp > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (delta_e <= 0.0) return true;
    return rng.uniform01() < std::exp(-delta_e / temp);
}

HeuristicRunResult sa_run(const Graph& g, const SaSchedule& schedule,
                          std::uint64_t seed,
                          std::optional<double> seconds_budget) {
    schedule.validate();
    SaSchedule run = schedule;
    if (run.c0 == 0.0) run.c0 = default_c0(g);

    Rng rng(seed);
    int n = g.vertex_count();
    GainTable table(g, random_spins(n, rng));

    HeuristicRunResult result;
    result.trace.solver_id = "sa";
    result.trace.trial_seed = seed;
    result.trace.time_base = TimeBase::WallClock;

    SpinConfig best_spins = table.spins();
    double best_energy = table.energy();

    Clock::time_point start = Clock::now();
    result.trace.append(0, 0.0, best_energy, table.energy());

    // Improvements are recorded exactly when they happen; checkpoints just
    // keep the trace dense enough for interpolation.
    long long checkpoint = std::max<long long>(1, run.total_flips / 512);
    long long k = 0;
    for (; k < run.total_flips; ++k) {
        if (seconds_budget && (k & 1023) == 0 &&
            elapsed_seconds(start) >= *seconds_budget)
            break;
        int v = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
        double d = table.delta(v);
        if (metropolis_accept(d, log_temperature(k, run), rng)) table.flip(v);
        bool improved = table.energy() < best_energy;
        if (improved) {
            best_energy = table.energy();
            best_spins = table.spins();
        }
        if (improved || (k + 1) % checkpoint == 0)
            result.trace.append(k + 1, elapsed_seconds(start), best_energy,
                                table.energy());
    }
    result.flips = k;
    result.trace.append(k, elapsed_seconds(start), best_energy, table.energy());
    // One exact recomputation keeps the returned energies drift-free.
    result.best = evaluate(g, std::move(best_spins));
    return result;
}

}  // namespace cimcut
