#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "heuristics.hpp"

namespace cimcut {
namespace {

// Score entries go stale as side sums change; the queue is lazy and entries
// are revalidated on pop. Larger score wins, then lower index.
struct ScoreEntry {
    double score;
    int vertex;
    bool operator<(const ScoreEntry& o) const {
        if (score != o.score) return score < o.score;
        return vertex > o.vertex;
    }
};

}  // namespace

CutResult sg3_run(const Graph& g) {
    int n = g.vertex_count();
    SpinConfig spins(static_cast<std::size_t>(n), 1);
    if (g.edge_count() == 0) return evaluate(g, std::move(spins));

    // Side sums toward S1 (+1) and S2 (-1) over already-placed neighbors.
    std::vector<double> to_s1(static_cast<std::size_t>(n), 0.0);
    std::vector<double> to_s2(static_cast<std::size_t>(n), 0.0);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);

    const Edge* seed = nullptr;
    for (const Edge& e : g.edges())
        if (!seed || e.w > seed->w) seed = &e;

    std::priority_queue<ScoreEntry> queue;
    auto place = [&](int v, std::int8_t side) {
        std::size_t k = static_cast<std::size_t>(v);
        spins[k] = side;
        placed[k] = 1;
        auto cols = g.neighbors(v);
        auto ws = g.neighbor_weights(v);
        for (std::size_t a = 0; a < cols.size(); ++a) {
            std::size_t j = static_cast<std::size_t>(cols[a]);
            if (placed[j]) continue;
            (side > 0 ? to_s1 : to_s2)[j] += ws[a];
            queue.push({std::abs(to_s1[j] - to_s2[j]), cols[a]});
        }
    };

    place(seed->u, 1);
    place(seed->v, -1);
    for (int v = 0; v < n; ++v) {
        std::size_t k = static_cast<std::size_t>(v);
        if (!placed[k]) queue.push({std::abs(to_s1[k] - to_s2[k]), v});
    }

    int remaining = n - 2;
    while (remaining > 0) {
        ScoreEntry top = queue.top();
        queue.pop();
        std::size_t k = static_cast<std::size_t>(top.vertex);
        if (placed[k] || top.score != std::abs(to_s1[k] - to_s2[k])) continue;
        // Joining S1 cuts the S2-side weight and vice versa; ties go to S1.
        place(top.vertex, to_s2[k] >= to_s1[k] ? std::int8_t{1} : std::int8_t{-1});
        --remaining;
    }
    return evaluate(g, std::move(spins));
}

}  // namespace cimcut
