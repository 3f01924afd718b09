#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "trace.hpp"

namespace cimcut {

// Raised when a pulse amplitude leaves the finite range, which signals a time
// step too large for the chosen pump and coupling.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, long long round_trip)
        : std::runtime_error(what), round_trip_(round_trip) {}
    long long round_trip() const { return round_trip_; }

private:
    long long round_trip_;
};

struct CimParams {
    double pump = 1.6;                   // normalized pump rate p
    double coupling = -0.06;             // feedback scale xi
    double saturation_amplitude = 100.0; // A_s; infinity switches noise off
    double coupler_transmission = 0.1;   // output coupler power transmission T
    double dt = 0.05;                    // normalized time per round trip
    long long round_trips = 5000;
    bool normalize_by_degree = true;     // xi_ij = xi w_ij / sqrt(<k>)
    double roundtrip_seconds = 1e-5;     // physical clock: 100 kHz cavity

    void validate() const;
    // 1/A_s, or 0 in the noiseless limit.
    double noise_amplitude() const;
};

// Swinging and decaying external field applied after an initial free
// evolution: each cycle draws a fresh random +-1 pattern and drives it with a
// square wave of amplitude amplitude0 * decay^cycle whose sign alternates
// flips_per_cycle times per cycle.
struct ZeemanSchedule {
    long long free_roundtrips = 1000;
    int cycles = 4;
    long long cycle_roundtrips = 1000;
    double amplitude0 = 0.2;
    double decay = 0.5;
    int flips_per_cycle = 2;

    void validate() const;
};

// Per-pulse signal quadratures plus the trial's noise stream.
struct CimState {
    std::vector<double> in_phase;    // c_i
    std::vector<double> quadrature;  // s_i
    long long round_trip = 0;
    Rng rng;

    CimState(int n, std::uint64_t seed)
        : in_phase(static_cast<std::size_t>(n), 0.0),
          quadrature(static_cast<std::size_t>(n), 0.0),
          rng(seed) {}

    int size() const { return static_cast<int>(in_phase.size()); }
};

CimState init_state(int n, std::uint64_t seed);

// Symmetric zero-diagonal feedback matrix xi_ij; dense row-major for small or
// dense graphs, compressed rows otherwise. The feedback product
// sum_j xi_ij c~_j dominates the round-trip cost.
class CouplingMatrix {
public:
    static CouplingMatrix build(const Graph& g, const CimParams& params);

    int size() const { return n_; }
    bool dense() const { return dense_; }
    double entry(int i, int j) const;

    // out_i = sum_j xi_ij feedback_j
    void multiply(std::span<const double> feedback, std::span<double> out) const;

private:
    int n_ = 0;
    bool dense_ = false;
    std::vector<double> dense_values_;  // n*n row-major
    std::vector<long long> row_offset_;
    std::vector<int> col_;
    std::vector<double> value_;
};

// Measured amplitude per pulse after the output coupler and phase-sensitive
// amplification: c~_i = c_i - sqrt((1-T)/T) f_i / A_s with fresh vacuum noise
// f_i drawn from the state's stream (one draw per pulse per round trip).
std::vector<double> measured_amplitudes(CimState& state, const CimParams& params);

// One Euler-Maruyama round trip of the coupled equations:
//   c_i += [(-1 + p - c_i^2 - s_i^2) c_i + sum_j xi_ij c~_j + field_i] dt
//          + (1/A_s) sqrt(c_i^2 + s_i^2 + 1/2) sqrt(dt) g1_i
//   s_i += [(-1 - p - c_i^2 - s_i^2) s_i] dt
//          + (1/A_s) sqrt(c_i^2 + s_i^2 + 1/2) sqrt(dt) g2_i
// The optional external field enters the in-phase drift (Zeeman term).
// Throws DivergenceError if any amplitude leaves the finite range.
void step(CimState& state, const CouplingMatrix& coupling, const CimParams& params,
          std::span<const double> external_field = {});

// Four-pulse variant where the feedback to pulse i is the product of the
// other three measured amplitudes scaled by |xi| * j1234 (the coupling
// carries the sign of the four-body constant). Requires exactly four pulses.
void four_body_step(CimState& state, double j1234, const CimParams& params);

// sigma_i = sign(c_i), with sign(0) = +1.
SpinConfig readout(const CimState& state);

struct CimRunResult {
    RunTrace trace;
    CutResult best;         // lowest-energy readout seen over the run
    CutResult final_state;  // readout after the last round trip
    long long best_round_trip = 0;
};

// Evolves round_trips steps, recording the best-so-far readout energy at
// every round trip on the simulated-CIM clock. If a Zeeman schedule is given,
// hysteretic drive cycles start after the free-evolution phase.
CimRunResult run_trial(const Graph& g, const CimParams& params,
                       const std::optional<ZeemanSchedule>& schedule,
                       std::uint64_t seed);

// Same loop for the four-body demo on four pulses.
CimRunResult run_four_body_trial(double j1234, const CimParams& params,
                                 std::uint64_t seed);

}  // namespace cimcut
