#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cimcut {

// What the sample timestamps mean: simulated CIM clock time
// (round trips x round-trip period) or measured wall-clock seconds.
enum class TimeBase { SimulatedCim, WallClock };

const char* time_base_name(TimeBase base);

struct TraceSample {
    // Solver work counter: round trip for the CIM, proposed-flip index for
    // the annealing-style heuristics.
    long long work = 0;
    double seconds = 0.0;
    double best_energy = 0.0;
    double current_energy = 0.0;
};

// Time-stamped best-energy record of one solver trial. Times are strictly
// increasing and best_energy is non-increasing.
struct RunTrace {
    std::string solver_id;
    std::uint64_t trial_seed = 0;
    TimeBase time_base = TimeBase::WallClock;
    std::vector<TraceSample> samples;

    // Appends a sample, nudging the timestamp forward if the clock tied.
    void append(long long work, double seconds, double best_energy,
                double current_energy);
};

// Earliest sample time whose best energy is at or below the target; empty if
// the trace never reaches it.
std::optional<double> time_to_target(const RunTrace& trace, double target_energy);

// Same on the work axis (round trips / flips).
std::optional<long long> work_to_target(const RunTrace& trace, double target_energy);

struct AveragedTrace {
    std::vector<double> grid;
    std::vector<double> mean;
    std::vector<double> stddev;  // population standard deviation
};

// Per grid point, linearly interpolates each trace's best energy (clamping to
// the first/last sample outside its span), then averages across traces.
AveragedTrace average_traces(const std::vector<RunTrace>& traces,
                             const std::vector<double>& grid);

// (number of round trips) x (round-trip period), in seconds.
double cim_clock_time(long long round_trips, double roundtrip_seconds);

}  // namespace cimcut
