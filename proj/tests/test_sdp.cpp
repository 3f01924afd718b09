#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"
#include "sdp.hpp"

using namespace cimcut;

namespace {

Graph k4_unit() {
    return Graph(4, {{0, 1, 1.0},
                     {0, 2, 1.0},
                     {0, 3, 1.0},
                     {1, 2, 1.0},
                     {1, 3, 1.0},
                     {2, 3, 1.0}});
}

// Relaxation objective recomputed straight from the vectors.
double objective_of(const Relaxation& r, const Graph& g) {
    double total = 0.0;
    for (const Edge& e : g.edges()) {
        auto vu = r.vector_of(e.u);
        auto vv = r.vector_of(e.v);
        double dot = 0.0;
        for (int k = 0; k < r.rank; ++k)
            dot += vu[static_cast<std::size_t>(k)] * vv[static_cast<std::size_t>(k)];
        total += e.w * (1.0 - dot) / 2.0;
    }
    return total;
}

}  // namespace

TEST_CASE("config validation and defaults") {
    GwConfig c;
    CHECK_NOTHROW(c.validate());
    c.rank = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = GwConfig{};
    c.max_sweeps = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = GwConfig{};
    c.tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = GwConfig{};
    c.n_hyperplanes = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("relaxation rows are unit vectors and the objective is self-consistent") {
    Graph g = Graph::gnp(30, 0.4, Graph::WeightKind::UniformReal, 17);
    Relaxation r = solve_relaxation(g, GwConfig{}, 5);
    CHECK(r.rank >= 2);
    for (int i = 0; i < g.vertex_count(); ++i) {
        auto v = r.vector_of(i);
        double norm = 0.0;
        for (double x : v) norm += x * x;
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(r.objective == doctest::Approx(objective_of(r, g)).epsilon(1e-9));
    CHECK(r.sweeps >= 1);

    Relaxation again = solve_relaxation(g, GwConfig{}, 5);
    CHECK(again.objective == r.objective);
    CHECK(again.vectors == r.vectors);
}

TEST_CASE("closed-form relaxation values on tiny graphs") {
    SUBCASE("single edge reaches antipodal vectors") {
        Graph g(2, {{0, 1, 1.0}});
        Relaxation r = solve_relaxation(g, GwConfig{}, 1);
        CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("triangle reaches 9/4") {
        Graph g(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
        Relaxation r = solve_relaxation(g, GwConfig{}, 1);
        CHECK(r.objective == doctest::Approx(2.25).epsilon(1e-6));
    }
    SUBCASE("K4 is integral at 4") {
        Relaxation r = solve_relaxation(k4_unit(), GwConfig{}, 1);
        CHECK(r.objective == doctest::Approx(4.0).epsilon(1e-6));
    }
    SUBCASE("edgeless graph scores zero") {
        Graph g(5, {});
        Relaxation r = solve_relaxation(g, GwConfig{}, 1);
        CHECK(r.objective == 0.0);
    }
}

TEST_CASE("relaxation and spectral bound dominate the exact optimum") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 4 + static_cast<int>(rng.uniform_below(11));
        Graph g = Graph::gnp(n, 0.5,
                             trial % 2 == 0 ? Graph::WeightKind::UniformReal
                                            : Graph::WeightKind::PlusMinusOne,
                             rng.next_u64());
        double opt = brute_force_maxcut(g).best.cut_value;
        Relaxation r = solve_relaxation(g, GwConfig{}, rng.next_u64());
        CHECK(r.objective >= opt - 1e-6 * (1.0 + std::abs(opt)));
        CHECK(spectral_upper_bound(g) >= opt - 1e-6 * (1.0 + std::abs(opt)));
    }
}

TEST_CASE("spectral bound matches closed forms") {
    // K4: lambda_max(L) = n = 4, bound = (4/4)*4.
    CHECK(spectral_upper_bound(k4_unit()) == doctest::Approx(4.0).epsilon(1e-6));
    // C5: lambda_max = 2 - 2 cos(4 pi / 5), bound = (5/4) lambda_max.
    Graph c5(5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 4, 1.0}});
    const double pi = std::acos(-1.0);
    double lam = 2.0 - 2.0 * std::cos(4.0 * pi / 5.0);
    CHECK(spectral_upper_bound(c5) == doctest::Approx(1.25 * lam).epsilon(1e-6));
}

TEST_CASE("hyperplane rounding returns consistent deterministic cuts") {
    Graph g = Graph::gnp(24, 0.5, Graph::WeightKind::Unit, 29);
    Relaxation r = solve_relaxation(g, GwConfig{}, 3);
    CutResult cut = hyperplane_round(r, g, 40, 11);
    CHECK(cut.cut_value == doctest::Approx(cut_value(g, cut.spins)));
    CHECK(cut.cut_value <= brute_force_maxcut(g).best.cut_value + 1e-9);

    CutResult again = hyperplane_round(r, g, 40, 11);
    CHECK(again.spins == cut.spins);
}

TEST_CASE("gw_run wires relaxation, rounding, and the bound together") {
    Graph g = Graph::gnp(40, 0.3, Graph::WeightKind::Unit, 31);
    GwResult r = gw_run(g, GwConfig{}, 7);
    CHECK(r.cut.cut_value <= r.relaxation.objective + 1e-6);
    CHECK(r.relaxation.objective <= r.spectral_bound + 1e-6);
    CHECK(r.cut.cut_value >= 0.87856 * r.relaxation.objective - 1e-9);
    CHECK(r.solve_seconds >= 0.0);
    CHECK(r.round_seconds >= 0.0);
}

TEST_CASE("rounding achieves the gw guarantee on nonnegative instances") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        Graph g = Graph::gnp(30, 0.4, Graph::WeightKind::Unit, rng.next_u64());
        if (g.edge_count() == 0) continue;
        GwResult r = gw_run(g, GwConfig{}, rng.next_u64());
        CHECK(r.cut.cut_value >= 0.87856 * r.relaxation.objective - 1e-9);
    }
}
