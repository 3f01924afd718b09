#include <doctest.h>

#include <algorithm>
#include <vector>

#include "rng.hpp"
#include "trace.hpp"

using namespace cimcut;

namespace {

RunTrace make_trace(std::initializer_list<TraceSample> samples) {
    RunTrace t;
    t.solver_id = "test";
    for (const TraceSample& s : samples)
        t.append(s.work, s.seconds, s.best_energy, s.current_energy);
    return t;
}

}  // namespace

TEST_CASE("append keeps timestamps strictly increasing and best non-increasing") {
    RunTrace t;
    t.append(1, 0.5, -3.0, -3.0);
    t.append(2, 0.5, -4.0, -4.0);  // tied clock gets nudged
    t.append(3, 0.4, -2.0, -1.0);  // regressed clock and best both corrected
    REQUIRE(t.samples.size() == 3);
    CHECK(t.samples[1].seconds > t.samples[0].seconds);
    CHECK(t.samples[2].seconds > t.samples[1].seconds);
    CHECK(t.samples[2].best_energy == -4.0);  // clamped, never rises
    CHECK(t.samples[2].current_energy == -1.0);  // current may rise
}

TEST_CASE("time and work to target scan for the first crossing") {
    RunTrace t = make_trace({{10, 1.0, -1.0, -1.0},
                             {20, 2.0, -5.0, -5.0},
                             {30, 3.0, -5.0, -2.0}});
    CHECK(time_to_target(t, -1.0) == 1.0);
    CHECK(time_to_target(t, -4.0) == 2.0);
    CHECK(time_to_target(t, -5.0) == 2.0);
    CHECK_FALSE(time_to_target(t, -6.0).has_value());
    CHECK(work_to_target(t, -4.0) == 20);
    CHECK_FALSE(work_to_target(t, -100.0).has_value());
    CHECK_FALSE(time_to_target(RunTrace{}, 0.0).has_value());
}

TEST_CASE("time_to_target is monotone in the target") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        RunTrace t;
        double best = 10.0;
        for (int i = 0; i < 40; ++i) {
            best -= rng.uniform01();
            t.append(i + 1, 0.1 * (i + 1), best, best);
        }
        double loose = -rng.uniform01() * 5.0;
        double tight = loose - rng.uniform01() * 5.0;
        auto t_loose = time_to_target(t, loose);
        auto t_tight = time_to_target(t, tight);
        if (t_tight) {
            REQUIRE(t_loose.has_value());
            CHECK(*t_loose <= *t_tight);
        }
    }
}

TEST_CASE("averaging a single trace reproduces its interpolant") {
    RunTrace t = make_trace({{1, 1.0, 0.0, 0.0}, {2, 3.0, -4.0, -4.0}});
    AveragedTrace avg = average_traces({t}, {0.5, 1.0, 2.0, 3.0, 9.0});
    REQUIRE(avg.mean.size() == 5);
    CHECK(avg.mean[0] == doctest::Approx(0.0));   // clamped before first sample
    CHECK(avg.mean[1] == doctest::Approx(0.0));
    CHECK(avg.mean[2] == doctest::Approx(-2.0));  // halfway
    CHECK(avg.mean[3] == doctest::Approx(-4.0));
    CHECK(avg.mean[4] == doctest::Approx(-4.0));  // clamped after last sample
    for (double sd : avg.stddev) CHECK(sd == doctest::Approx(0.0));
}

TEST_CASE("averaged mean stays within the pointwise min/max band") {
    Rng rng(77);
    std::vector<RunTrace> traces;
    for (int k = 0; k < 8; ++k) {
        RunTrace t;
        double best = 5.0 + rng.uniform01();
        for (int i = 0; i < 30; ++i) {
            best -= rng.uniform01();
            t.append(i + 1, 0.05 * (i + 1) + 0.01 * rng.uniform01(), best, best);
        }
        traces.push_back(std::move(t));
    }
    std::vector<double> grid;
    for (int i = 0; i <= 40; ++i) grid.push_back(0.04 * i);

    AveragedTrace avg = average_traces(traces, grid);
    // Recompute the band with an independent nearest-sample interpolation
    // bound: at any t the linear interpolant of a trace lies between that
    // trace's sample minima and maxima, so the cross-trace band built from
    // samples bounds the mean.
    double lo = 1e300, hi = -1e300;
    for (const RunTrace& t : traces)
        for (const TraceSample& s : t.samples) {
            lo = std::min(lo, s.best_energy);
            hi = std::max(hi, s.best_energy);
        }
    for (double m : avg.mean) {
        CHECK(m >= lo - 1e-12);
        CHECK(m <= hi + 1e-12);
    }
    CHECK_THROWS_AS(average_traces({}, grid), std::invalid_argument);
}

TEST_CASE("cim clock arithmetic") {
    CHECK(cim_clock_time(5000, 1e-5) == doctest::Approx(0.050));
    CHECK(cim_clock_time(0, 1e-5) == 0.0);
    CHECK(cim_clock_time(61, 1e-6) == doctest::Approx(6.1e-5));
    CHECK_THROWS_AS(cim_clock_time(-1, 1e-5), std::invalid_argument);
}

TEST_CASE("time base names") {
    CHECK(std::string(time_base_name(TimeBase::SimulatedCim)) == "simulated-cim");
    CHECK(std::string(time_base_name(TimeBase::WallClock)) == "wall-clock");
}
