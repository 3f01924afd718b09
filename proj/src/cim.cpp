#include "cim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cimcut {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void CimParams::validate() const {
    require(std::isfinite(pump), "pump must be finite");
    require(std::isfinite(coupling), "coupling must be finite");
    require(saturation_amplitude > 0.0, "saturation_amplitude must be positive");
    require(coupler_transmission > 0.0 && coupler_transmission < 1.0,
            "coupler_transmission must lie in (0, 1)");
    require(std::isfinite(dt) && dt > 0.0, "dt must be positive");
    require(round_trips >= 1, "round_trips must be at least 1");
    require(std::isfinite(roundtrip_seconds) && roundtrip_seconds > 0.0,
            "roundtrip_seconds must be positive");
}

double CimParams::noise_amplitude() const {
    return std::isinf(saturation_amplitude) ? 0.0 : 1.0 / saturation_amplitude;
}

void ZeemanSchedule::validate() const {
    require(free_roundtrips >= 1, "free_roundtrips must be at least 1");
    require(cycles >= 1, "cycles must be at least 1");
    require(cycle_roundtrips >= 1, "cycle_roundtrips must be at least 1");
    require(flips_per_cycle >= 1, "flips_per_cycle must be at least 1");
    require(std::isfinite(amplitude0) && amplitude0 >= 0.0,
            "amplitude0 must be non-negative");
    require(decay > 0.0 && decay < 1.0, "decay must lie in (0, 1)");
}

CimState init_state(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("pulse count must be at least 1");
    return CimState(n, seed);
}

CouplingMatrix CouplingMatrix::build(const Graph& g, const CimParams& params) {
    params.validate();
    double scale = params.coupling;
    if (params.normalize_by_degree) {
        double k = g.average_degree();
        if (k <= 0.0)
            throw std::invalid_argument(
                "degree normalization needs at least one edge");
        scale /= std::sqrt(k);
    }

    CouplingMatrix m;
    m.n_ = g.vertex_count();
    long long n = m.n_;
    // Dense pays off once a quarter of the entries are live; small graphs are
    // dense regardless because the flat array beats index chasing.
    long long nnz = 2 * static_cast<long long>(g.edge_count());
    m.dense_ = n <= 128 || nnz * 4 >= n * (n - 1);

    if (m.dense_) {
        m.dense_values_.assign(static_cast<std::size_t>(n * n), 0.0);
        for (const Edge& e : g.edges()) {
            double v = scale * e.w;
            m.dense_values_[static_cast<std::size_t>(e.u) * n + e.v] = v;
            m.dense_values_[static_cast<std::size_t>(e.v) * n + e.u] = v;
        }
        return m;
    }

    m.row_offset_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const Edge& e : g.edges()) {
        ++m.row_offset_[static_cast<std::size_t>(e.u) + 1];
        ++m.row_offset_[static_cast<std::size_t>(e.v) + 1];
    }
    for (long long i = 0; i < n; ++i)
        m.row_offset_[static_cast<std::size_t>(i) + 1] +=
            m.row_offset_[static_cast<std::size_t>(i)];
    m.col_.resize(static_cast<std::size_t>(nnz));
    m.value_.resize(static_cast<std::size_t>(nnz));
    std::vector<long long> cursor(m.row_offset_.begin(), m.row_offset_.end() - 1);
    for (const Edge& e : g.edges()) {
        double v = scale * e.w;
        long long a = cursor[static_cast<std::size_t>(e.u)]++;
        m.col_[static_cast<std::size_t>(a)] = e.v;
        m.value_[static_cast<std::size_t>(a)] = v;
        long long b = cursor[static_cast<std::size_t>(e.v)]++;
        m.col_[static_cast<std::size_t>(b)] = e.u;
        m.value_[static_cast<std::size_t>(b)] = v;
    }
    return m;
}

double CouplingMatrix::entry(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::out_of_range("coupling index out of range");
    if (dense_) return dense_values_[static_cast<std::size_t>(i) * n_ + j];
    // Linear scan: rows follow the input edge order, which need not be
    // sorted, and this accessor is off the hot path anyway.
    for (long long a = row_offset_[i]; a < row_offset_[i + 1]; ++a)
        if (col_[static_cast<std::size_t>(a)] == j)
            return value_[static_cast<std::size_t>(a)];
    return 0.0;
}

void CouplingMatrix::multiply(std::span<const double> feedback,
                              std::span<double> out) const {
    if (feedback.size() != static_cast<std::size_t>(n_) ||
        out.size() != static_cast<std::size_t>(n_))
        throw std::invalid_argument("coupling multiply size mismatch");
    if (dense_) {
        const double* row = dense_values_.data();
        for (int i = 0; i < n_; ++i, row += n_) {
            double acc = 0.0;
            for (int j = 0; j < n_; ++j) acc = std::fma(row[j], feedback[j], acc);
            out[static_cast<std::size_t>(i)] = acc;
        }
        return;
    }
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (long long a = row_offset_[i]; a < row_offset_[i + 1]; ++a)
            acc += value_[static_cast<std::size_t>(a)] *
                   feedback[static_cast<std::size_t>(col_[a])];
        out[static_cast<std::size_t>(i)] = acc;
    }
}

std::vector<double> measured_amplitudes(CimState& state, const CimParams& params) {
    double t = params.coupler_transmission;
    double prefactor = std::sqrt((1.0 - t) / t) * params.noise_amplitude();
    std::vector<double> out(state.in_phase);
    if (prefactor == 0.0) return out;
    for (double& v : out) v -= prefactor * state.rng.gaussian();
    return out;
}

namespace {

// Shared drift + noise update once the per-pulse coupling feedback is known.
// Reads only pre-step amplitudes, so in-place writes are safe.
void apply_update(CimState& state, std::span<const double> feedback,
                  std::span<const double> external_field,
                  const CimParams& params) {
    int n = state.size();
    double dt = params.dt;
    double sqrt_dt = std::sqrt(dt);
    double noise = params.noise_amplitude();
    bool diverged = false;
    for (int i = 0; i < n; ++i) {
        std::size_t k = static_cast<std::size_t>(i);
        double c = state.in_phase[k];
        double s = state.quadrature[k];
        double sat = c * c + s * s;
        double drift_c = (-1.0 + params.pump - sat) * c + feedback[k];
        if (!external_field.empty()) drift_c += external_field[k];
        double drift_s = (-1.0 - params.pump - sat) * s;
        double nc = c + drift_c * dt;
        double ns = s + drift_s * dt;
        if (noise > 0.0) {
            double w = noise * std::sqrt(sat + 0.5) * sqrt_dt;
            nc += w * state.rng.gaussian();
            ns += w * state.rng.gaussian();
        }
        if (!std::isfinite(nc) || !std::isfinite(ns)) diverged = true;
        state.in_phase[k] = nc;
        state.quadrature[k] = ns;
    }
    ++state.round_trip;
    if (diverged)
        throw DivergenceError("amplitude diverged at round trip " +
                                  std::to_string(state.round_trip) +
                                  " (dt too large for pump/coupling)",
                              state.round_trip);
}

}  // namespace

void step(CimState& state, const CouplingMatrix& coupling, const CimParams& params,
          std::span<const double> external_field) {
    if (coupling.size() != state.size())
        throw std::invalid_argument("coupling size does not match state");
    if (!external_field.empty() &&
        external_field.size() != static_cast<std::size_t>(state.size()))
        throw std::invalid_argument("external field size does not match state");
    std::vector<double> c_tilde = measured_amplitudes(state, params);
    std::vector<double> feedback(c_tilde.size());
    coupling.multiply(c_tilde, feedback);
    apply_update(state, feedback, external_field, params);
}

void four_body_step(CimState& state, double j1234, const CimParams& params) {
    if (state.size() != 4)
        throw std::invalid_argument("four-body step needs exactly 4 pulses");
    if (!std::isfinite(j1234))
        throw std::invalid_argument("j1234 must be finite");
    // The feedback magnitude comes from |xi|; the sign tracks J_1234 so that
    // H = -J_1234 s1 s2 s3 s4 is minimized.
    double xi_eff = std::abs(params.coupling) * j1234;
    std::vector<double> c_tilde = measured_amplitudes(state, params);
    double all = c_tilde[0] * c_tilde[1] * c_tilde[2] * c_tilde[3];
    std::vector<double> feedback(4);
    for (int i = 0; i < 4; ++i) {
        double ci = c_tilde[static_cast<std::size_t>(i)];
        // Guard the 0/0 case; recompute the three-factor product directly.
        if (ci != 0.0 && std::isfinite(all / ci)) {
            feedback[static_cast<std::size_t>(i)] = xi_eff * (all / ci);
        } else {
            double prod = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) prod *= c_tilde[static_cast<std::size_t>(j)];
            feedback[static_cast<std::size_t>(i)] = xi_eff * prod;
        }
    }
    apply_update(state, feedback, {}, params);
}

SpinConfig readout(const CimState& state) {
    SpinConfig spins(state.in_phase.size());
    for (std::size_t i = 0; i < spins.size(); ++i)
        spins[i] = state.in_phase[i] < 0.0 ? -1 : 1;
    return spins;
}

namespace {

// h(t) for round trip `t` (0-based), or 0 outside the driven cycles. Fresh
// +-1 patterns are drawn into `pattern` at each cycle boundary.
double zeeman_field(const std::optional<ZeemanSchedule>& schedule, long long t,
                    CimState& state, std::vector<double>& pattern) {
    if (!schedule) return 0.0;
    const ZeemanSchedule& z = *schedule;
    long long offset = t - z.free_roundtrips;
    if (offset < 0) return 0.0;
    long long cycle = offset / z.cycle_roundtrips;
    if (cycle >= z.cycles) return 0.0;
    long long within = offset % z.cycle_roundtrips;
    if (within == 0) {
        pattern.resize(state.in_phase.size());
        for (double& p : pattern) p = static_cast<double>(state.rng.pm1());
    }
    double amplitude = z.amplitude0 * std::pow(z.decay, static_cast<double>(cycle));
    long long segment = within * z.flips_per_cycle / z.cycle_roundtrips;
    return (segment % 2 == 0) ? amplitude : -amplitude;
}

struct EnergyTracker {
    const Graph& g;
    SpinConfig spins;
    std::vector<double> local_field;
    double energy;

    explicit EnergyTracker(const Graph& g_, const SpinConfig& initial)
        : g(g_), spins(initial),
          local_field(static_cast<std::size_t>(g_.vertex_count()), 0.0),
          energy(ising_energy(g_, initial)) {
        for (const Edge& e : g.edges()) {
            local_field[static_cast<std::size_t>(e.u)] +=
                e.w * spins[static_cast<std::size_t>(e.v)];
            local_field[static_cast<std::size_t>(e.v)] +=
                e.w * spins[static_cast<std::size_t>(e.u)];
        }
    }

    // Walks the spins toward `target`, applying one exact flip at a time.
    void move_to(const SpinConfig& target) {
        int n = g.vertex_count();
        for (int v = 0; v < n; ++v) {
            std::size_t k = static_cast<std::size_t>(v);
            if (spins[k] == target[k]) continue;
            energy -= 2.0 * spins[k] * local_field[k];
            spins[k] = target[k];
            double delta = 2.0 * spins[k];
            auto cols = g.neighbors(v);
            auto ws = g.neighbor_weights(v);
            for (std::size_t a = 0; a < cols.size(); ++a)
                local_field[static_cast<std::size_t>(cols[a])] += delta * ws[a];
        }
    }
};

}  // namespace

CimRunResult run_trial(const Graph& g, const CimParams& params,
                       const std::optional<ZeemanSchedule>& schedule,
                       std::uint64_t seed) {
    params.validate();
    if (schedule) schedule->validate();
    CouplingMatrix coupling = CouplingMatrix::build(g, params);
    CimState state = init_state(g.vertex_count(), seed);

    CimRunResult result;
    result.trace.solver_id = "cim";
    result.trace.trial_seed = seed;
    result.trace.time_base = TimeBase::SimulatedCim;

    EnergyTracker tracker(g, readout(state));
    result.best = evaluate(g, tracker.spins);
    result.best_round_trip = 0;

    std::vector<double> pattern;
    std::vector<double> field;
    for (long long t = 0; t < params.round_trips; ++t) {
        double h = zeeman_field(schedule, t, state, pattern);
        std::span<const double> field_view;
        if (h != 0.0) {
            field.resize(pattern.size());
            for (std::size_t i = 0; i < pattern.size(); ++i)
                field[i] = h * pattern[i];
            field_view = field;
        }
        step(state, coupling, params, field_view);
        tracker.move_to(readout(state));
        if (tracker.energy < result.best.ising_energy) {
            // Resync against an exact recomputation when recording a best, so
            // reported energies never carry accumulated drift.
            result.best = evaluate(g, tracker.spins);
            tracker.energy = result.best.ising_energy;
            result.best_round_trip = state.round_trip;
        }
        result.trace.append(state.round_trip,
                            cim_clock_time(state.round_trip, params.roundtrip_seconds),
                            result.best.ising_energy, tracker.energy);
    }
    result.final_state = evaluate(g, tracker.spins);
    return result;
}

CimRunResult run_four_body_trial(double j1234, const CimParams& params,
                                 std::uint64_t seed) {
    params.validate();
    CimState state = init_state(4, seed);

    CimRunResult result;
    result.trace.solver_id = "cim-four-body";
    result.trace.trial_seed = seed;
    result.trace.time_base = TimeBase::SimulatedCim;

    auto energy_of = [j1234](const SpinConfig& s) {
        return -j1234 * s[0] * s[1] * s[2] * s[3];
    };
    // No graph here: cut_value stays 0 and ising_energy carries
    // H = -J_1234 s1 s2 s3 s4.
    auto pack = [&](const SpinConfig& s) {
        CutResult r;
        r.spins = s;
        r.ising_energy = energy_of(s);
        r.cut_value = 0.0;
        return r;
    };

    result.best = pack(readout(state));
    result.best_round_trip = 0;
    for (long long t = 0; t < params.round_trips; ++t) {
        four_body_step(state, j1234, params);
        SpinConfig spins = readout(state);
        double e = energy_of(spins);
        if (e < result.best.ising_energy) {
            result.best = pack(spins);
            result.best_round_trip = state.round_trip;
        }
        result.trace.append(state.round_trip,
                            cim_clock_time(state.round_trip, params.roundtrip_seconds),
                            result.best.ising_energy, e);
        if (t + 1 == params.round_trips) result.final_state = pack(spins);
    }
    return result;
}

}  // namespace cimcut
