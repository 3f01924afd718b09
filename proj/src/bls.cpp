#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "heuristics.hpp"

namespace cimcut {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_seconds(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Slack below which a gain no longer counts as an improvement; stops float
// drift from spinning the descent forever on real-weighted graphs.
double descent_slack(const Graph& g) {
    return 1e-12 * (1.0 + g.max_abs_row_sum());
}

// Most negative gain, ties to the lower index.
int best_single(const GainTable& table) {
    int best = 0;
    double best_delta = table.delta(0);
    for (int v = 1; v < table.size(); ++v) {
        double d = table.delta(v);
        if (d < best_delta) {
            best_delta = d;
            best = v;
        }
    }
    return best;
}

}  // namespace

CutResult steepest_descent(const Graph& g, SpinConfig spins) {
    GainTable table(g, std::move(spins));
    double slack = descent_slack(g);
    while (true) {
        int v = best_single(table);
        if (table.delta(v) >= -slack) break;
        table.flip(v);
    }
    return evaluate(g, table.spins());
}

void BlsConfig::validate() const {
    if (total_flips < 1)
        throw std::invalid_argument("total_flips must be at least 1");
    if (!(p_single >= 0.0) || !(p_pair >= 0.0) || p_single + p_pair > 1.0)
        throw std::invalid_argument("perturbation probabilities must be a sub-distribution");
    if (random_flips < 0)
        throw std::invalid_argument("random_flips must be non-negative");
}

HeuristicRunResult bls_run(const Graph& g, const BlsConfig& config,
                           std::uint64_t seed,
                           std::optional<double> seconds_budget) {
    config.validate();
    int n = g.vertex_count();
    int kick = config.random_flips > 0
                   ? std::min(config.random_flips, n)
                   : std::min(n, std::max(3, n / 100));

    Rng rng(seed);
    SpinConfig initial(static_cast<std::size_t>(n));
    for (auto& s : initial) s = static_cast<std::int8_t>(rng.pm1());
    GainTable table(g, std::move(initial));
    double slack = descent_slack(g);

    HeuristicRunResult result;
    result.trace.solver_id = "bls";
    result.trace.trial_seed = seed;
    result.trace.time_base = TimeBase::WallClock;

    SpinConfig best_spins = table.spins();
    double best_energy = table.energy();
    Clock::time_point start = Clock::now();
    result.trace.append(0, 0.0, best_energy, table.energy());

    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);

    long long flips = 0;
    auto out_of_budget = [&] {
        if (flips >= config.total_flips) return true;
        return seconds_budget && elapsed_seconds(start) >= *seconds_budget;
    };
    auto apply = [&](int v) {
        table.flip(v);
        ++flips;
        if (table.energy() < best_energy) {
            best_energy = table.energy();
            best_spins = table.spins();
            result.trace.append(flips, elapsed_seconds(start), best_energy,
                                table.energy());
        }
    };

    while (!out_of_budget()) {
        // Descent to a 1-flip local minimum.
        while (!out_of_budget()) {
            int v = best_single(table);
            if (table.delta(v) >= -slack) break;
            apply(v);
        }
        result.trace.append(flips, elapsed_seconds(start), best_energy,
                            table.energy());
        if (out_of_budget()) break;

        double u = rng.uniform01();
        if (u < config.p_single || g.edge_count() == 0) {
            apply(best_single(table));
        } else if (u < config.p_single + config.p_pair) {
            // Best joint flip over edges: joint gain is
            // delta(u) + delta(v) + 4 w_uv s_u s_v. Ties keep the first edge.
            const Edge* pick = nullptr;
            double pick_gain = 0.0;
            for (const Edge& e : g.edges()) {
                double joint = table.delta(e.u) + table.delta(e.v) +
                               4.0 * e.w *
                                   table.spins()[static_cast<std::size_t>(e.u)] *
                                   table.spins()[static_cast<std::size_t>(e.v)];
                if (!pick || joint < pick_gain) {
                    pick = &e;
                    pick_gain = joint;
                }
            }
            apply(pick->u);
            if (!out_of_budget()) apply(pick->v);
        } else {
            // Partial Fisher-Yates kick over `kick` distinct vertices.
            for (int i = 0; i < kick && !out_of_budget(); ++i) {
                std::size_t j =
                    static_cast<std::size_t>(i) +
                    static_cast<std::size_t>(rng.uniform_below(
                        static_cast<std::uint64_t>(n - i)));
                std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
                apply(pool[static_cast<std::size_t>(i)]);
            }
        }
    }
    result.trace.append(flips, elapsed_seconds(start), best_energy,
                        table.energy());
    result.flips = flips;
    result.best = evaluate(g, std::move(best_spins));
    return result;
}

}  // namespace cimcut
