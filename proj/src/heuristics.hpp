#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "trace.hpp"

namespace cimcut {

// Hajek-style logarithmic cooling: T(k) = c0 / ln(2 + k).
struct SaSchedule {
    double c0 = 0.0;  // 0 picks the default scale max_i sum_j |w_ij|
    long long total_flips = 100000;

    void validate() const;
};

double log_temperature(long long flip_index, const SaSchedule& schedule);

// ΔE ≤ 0 always accepted, otherwise with probability exp(-ΔE/temp).
bool metropolis_accept(double delta_e, double temp, Rng& rng);

// Default c0: the largest absolute row sum, so early uphill moves of typical
// size stay acceptable.
double default_c0(const Graph& g);

// Per-vertex flip costs under the current spins, maintained incrementally.
// delta(v) is the exact energy change of flipping v; flip(v) applies it in
// O(deg v).
class GainTable {
public:
    GainTable(const Graph& g, SpinConfig spins);

    int size() const { return static_cast<int>(spins_.size()); }
    double delta(int v) const {
        return -2.0 * spins_[static_cast<std::size_t>(v)] *
               local_field_[static_cast<std::size_t>(v)];
    }
    double energy() const { return energy_; }
    const SpinConfig& spins() const { return spins_; }

    void flip(int v);
    // Recomputes energy and fields from scratch, clearing accumulated float
    // drift. Cheap relative to the flips between calls.
    void resync();

private:
    const Graph* g_;
    SpinConfig spins_;
    std::vector<double> local_field_;  // L_v = sum_j w_vj sigma_j
    double energy_;
};

struct HeuristicRunResult {
    RunTrace trace;
    CutResult best;
    long long flips = 0;  // proposals for SA, applied flips for BLS
};

// Metropolis single-flip annealing from a random start. Samples the trace at
// every improvement plus sparse checkpoints; timestamps are wall-clock
// seconds from run start. Stops at total_flips or seconds_budget.
HeuristicRunResult sa_run(const Graph& g, const SaSchedule& schedule,
                          std::uint64_t seed,
                          std::optional<double> seconds_budget = {});

// Deterministic Sahni-Gonzalez-style greedy: seeds the two sides with the
// endpoints of a maximum-weight edge, then repeatedly commits the unassigned
// vertex of largest |S1-weight - S2-weight| to the side earning the larger
// cut. Ties prefer the lower index and side S1.
CutResult sg3_run(const Graph& g);

// Repeatedly flips the most negative-gain vertex until 1-flip optimal.
CutResult steepest_descent(const Graph& g, SpinConfig spins);

struct BlsConfig {
    long long total_flips = 100000;  // applied-flip budget
    double p_single = 0.5;           // perturbation mix
    double p_pair = 0.3;             // remainder goes to the random kick
    int random_flips = 0;            // 0 picks max(3, N/100)

    void validate() const;
};

// Breakout-style loop: steepest descent, then one perturbation drawn from
// {least-damaging single flip, best pair flip over edges, random L-flip kick}
// with the configured probabilities.
HeuristicRunResult bls_run(const Graph& g, const BlsConfig& config,
                           std::uint64_t seed,
                           std::optional<double> seconds_budget = {});

}  // namespace cimcut
