#include "graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "rng.hpp"

namespace cimcut {

namespace {

bool is_integral(double w) {
    return std::abs(w) < 1e15 && w == std::floor(w);
}

}  // namespace

Graph::Graph(int n_vertices, std::vector<Edge> edges)
    : n_(n_vertices), edges_(std::move(edges)) {
    if (n_ < 1) throw std::invalid_argument("graph needs at least one vertex");

    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges_.size() * 2);
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
            throw std::invalid_argument("edge index out of range");
        if (e.u == e.v) throw std::invalid_argument("self-loop");
        if (e.u > e.v) throw std::invalid_argument("edge must satisfy u < v");
        const std::uint64_t key =
            (static_cast<std::uint64_t>(e.u) << 32) | static_cast<std::uint32_t>(e.v);
        if (!seen.insert(key).second)
            throw std::invalid_argument("duplicate edge");
        if (!std::isfinite(e.w)) throw std::invalid_argument("non-finite edge weight");
        total_weight_ += e.w;
        if (e.w < 0) negative_weight_ += -e.w;
        integral_weights_ = integral_weights_ && is_integral(e.w);
    }

    // CSR adjacency over both endpoint directions.
    adj_offset_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const Edge& e : edges_) {
        ++adj_offset_[e.u + 1];
        ++adj_offset_[e.v + 1];
    }
    for (int v = 0; v < n_; ++v) adj_offset_[v + 1] += adj_offset_[v];
    adj_index_.resize(edges_.size() * 2);
    adj_weight_.resize(edges_.size() * 2);
    std::vector<long long> cursor(adj_offset_.begin(), adj_offset_.end() - 1);
    for (const Edge& e : edges_) {
        adj_index_[cursor[e.u]] = e.v;
        adj_weight_[cursor[e.u]++] = e.w;
        adj_index_[cursor[e.v]] = e.u;
        adj_weight_[cursor[e.v]++] = e.w;
    }
}

Graph Graph::complete_pm1(int n_vertices, std::uint64_t seed) {
    if (n_vertices < 2)
        throw std::invalid_argument("complete_pm1 needs at least two vertices");
    Rng rng(seed);
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n_vertices) * (n_vertices - 1) / 2);
    for (int u = 0; u < n_vertices; ++u)
        for (int v = u + 1; v < n_vertices; ++v)
            edges.push_back({u, v, static_cast<double>(rng.pm1())});
    return Graph(n_vertices, std::move(edges));
}

Graph Graph::gnp(int n_vertices, double edge_prob, WeightKind weights,
                 std::uint64_t seed) {
    if (n_vertices < 1) throw std::invalid_argument("gnp needs at least one vertex");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("edge probability must lie in [0, 1]");
    Rng rng(seed);
    std::vector<Edge> edges;
    for (int u = 0; u < n_vertices; ++u) {
        for (int v = u + 1; v < n_vertices; ++v) {
            if (rng.uniform01() >= edge_prob) continue;
            double w = 1.0;
            if (weights == WeightKind::PlusMinusOne) {
                w = static_cast<double>(rng.pm1());
            } else if (weights == WeightKind::UniformReal) {
                do {
                    w = 2.0 * rng.uniform01() - 1.0;
                } while (std::abs(w) < 1e-12);
            }
            edges.push_back({u, v, w});
        }
    }
    return Graph(n_vertices, std::move(edges));
}

double Graph::max_abs_row_sum() const {
    double best = 0.0;
    for (int v = 0; v < n_; ++v) {
        double s = 0.0;
        for (double w : neighbor_weights(v)) s += std::abs(w);
        best = std::max(best, s);
    }
    return best;
}

namespace {

void check_spins(const Graph& g, const SpinConfig& spins) {
    if (static_cast<int>(spins.size()) != g.vertex_count())
        throw std::invalid_argument("spin vector length does not match graph");
}

}  // namespace

double cut_value(const Graph& g, const SpinConfig& spins) {
    check_spins(g, spins);
    double cut = 0.0;
    for (const Edge& e : g.edges())
        if (spins[e.u] != spins[e.v]) cut += e.w;
    if (g.integral_weights() && std::abs(cut - std::round(cut)) > 1e-6)
        throw std::logic_error("non-integral cut value on integral graph");
    return cut;
}

double ising_energy(const Graph& g, const SpinConfig& spins) {
    check_spins(g, spins);
    double h = 0.0;
    for (const Edge& e : g.edges())
        h += e.w * static_cast<double>(spins[e.u] * spins[e.v]);
    return h;
}

CutResult evaluate(const Graph& g, SpinConfig spins) {
    CutResult r;
    r.cut_value = cut_value(g, spins);
    r.ising_energy = ising_energy(g, spins);
    r.spins = std::move(spins);
    return r;
}

double normalized_score(double cut, double u_sdp, double e_neg) {
    if (e_neg < 0) throw std::invalid_argument("negative-edge weight must be >= 0");
    const double denom = u_sdp + e_neg;
    if (denom <= 0) throw std::invalid_argument("normalized score denominator must be positive");
    return (cut + e_neg) / denom;
}

BruteForceResult brute_force_maxcut(const Graph& g, std::size_t optima_limit) {
    const int n = g.vertex_count();
    if (n > kBruteForceMaxVertices)
        throw std::invalid_argument("brute force is limited to " +
                                    std::to_string(kBruteForceMaxVertices) + " vertices");

    // Gray-code walk over spins[1..n-1] with spins[0] fixed +1; one spin flip
    // per visited configuration keeps the energy update at O(degree).
    SpinConfig spins(static_cast<std::size_t>(n), 1);
    std::vector<double> local_field(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        auto nbr = g.neighbors(v);
        auto wts = g.neighbor_weights(v);
        for (std::size_t k = 0; k < nbr.size(); ++k)
            local_field[v] += wts[k] * spins[nbr[k]];
    }
    double energy = ising_energy(g, spins);

    BruteForceResult result;
    double best = energy;
    SpinConfig best_spins = spins;
    result.optima.push_back(spins);

    const double scale = std::max(1.0, std::abs(g.total_weight()));
    const double tie_eps = 1e-9 * scale;

    const std::uint64_t total = (n >= 1) ? (std::uint64_t{1} << (n - 1)) : 1;
    for (std::uint64_t step = 1; step < total; ++step) {
        // Flip the spin indexed by the lowest set bit of the Gray counter,
        // offset by one because spins[0] stays fixed.
        int v = 1;
        std::uint64_t s = step;
        while (!(s & 1)) {
            s >>= 1;
            ++v;
        }
        const double delta = -2.0 * static_cast<double>(spins[v]) * local_field[v];
        spins[v] = static_cast<std::int8_t>(-spins[v]);
        energy += delta;
        auto nbr = g.neighbors(v);
        auto wts = g.neighbor_weights(v);
        for (std::size_t k = 0; k < nbr.size(); ++k)
            local_field[nbr[k]] += 2.0 * wts[k] * spins[v];

        if (energy < best - tie_eps) {
            best = energy;
            best_spins = spins;
            result.optima.clear();
            result.optima.push_back(spins);
            result.optima_truncated = false;
        } else if (energy <= best + tie_eps) {
            if (result.optima.size() < optima_limit)
                result.optima.push_back(spins);
            else
                result.optima_truncated = true;
        }
    }

    result.best = evaluate(g, std::move(best_spins));
    return result;
}

}  // namespace cimcut
