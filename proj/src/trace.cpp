#include "trace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cimcut {

const char* time_base_name(TimeBase base) {
    return base == TimeBase::SimulatedCim ? "simulated-cim" : "wall-clock";
}

void RunTrace::append(long long work, double seconds, double best_energy,
                      double current_energy) {
    if (!samples.empty()) {
        const TraceSample& last = samples.back();
        if (seconds <= last.seconds)
            seconds = std::nextafter(last.seconds, std::numeric_limits<double>::max());
        if (best_energy > last.best_energy) best_energy = last.best_energy;
    }
    samples.push_back({work, seconds, best_energy, current_energy});
}

std::optional<double> time_to_target(const RunTrace& trace, double target_energy) {
    for (const TraceSample& s : trace.samples)
        if (s.best_energy <= target_energy) return s.seconds;
    return std::nullopt;
}

std::optional<long long> work_to_target(const RunTrace& trace, double target_energy) {
    for (const TraceSample& s : trace.samples)
        if (s.best_energy <= target_energy) return s.work;
    return std::nullopt;
}

namespace {

// Piecewise-linear value of the trace's best energy at time t, clamped to the
// end values outside the sampled span.
double interpolate(const RunTrace& trace, double t) {
    const auto& s = trace.samples;
    if (s.empty()) throw std::invalid_argument("cannot interpolate an empty trace");
    if (t <= s.front().seconds) return s.front().best_energy;
    if (t >= s.back().seconds) return s.back().best_energy;
    const auto it = std::lower_bound(
        s.begin(), s.end(), t,
        [](const TraceSample& a, double v) { return a.seconds < v; });
    const TraceSample& hi = *it;
    const TraceSample& lo = *(it - 1);
    const double span = hi.seconds - lo.seconds;
    if (span <= 0) return lo.best_energy;
    const double f = (t - lo.seconds) / span;
    return lo.best_energy + f * (hi.best_energy - lo.best_energy);
}

}  // namespace

AveragedTrace average_traces(const std::vector<RunTrace>& traces,
                             const std::vector<double>& grid) {
    if (traces.empty()) throw std::invalid_argument("average_traces needs at least one trace");
    AveragedTrace out;
    out.grid = grid;
    out.mean.reserve(grid.size());
    out.stddev.reserve(grid.size());
    const double n = static_cast<double>(traces.size());
    for (double t : grid) {
        double sum = 0.0, sum_sq = 0.0;
        for (const RunTrace& trace : traces) {
            const double v = interpolate(trace, t);
            sum += v;
            sum_sq += v * v;
        }
        const double mean = sum / n;
        const double var = std::max(0.0, sum_sq / n - mean * mean);
        out.mean.push_back(mean);
        out.stddev.push_back(std::sqrt(var));
    }
    return out;
}

double cim_clock_time(long long round_trips, double roundtrip_seconds) {
    if (round_trips < 0) throw std::invalid_argument("round trips must be >= 0");
    return static_cast<double>(round_trips) * roundtrip_seconds;
}

}  // namespace cimcut
