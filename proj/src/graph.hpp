#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cimcut {

// Parse failure with the 1-based line number of the offending input line.
// File-system failure, as opposed to malformed content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

struct Edge {
    int u;
    int v;
    double w;
};

// Spins are +1/-1 entries, one per vertex.
using SpinConfig = std::vector<std::int8_t>;

// Undirected weighted graph: flat edge list plus a compressed per-vertex
// adjacency index. Immutable after construction and safe to share across
// threads.
class Graph {
public:
    // Takes ownership of the edge list. Requires 0 <= u < v < n for every
    // edge, no duplicate pairs. Throws std::invalid_argument on violation.
    Graph(int n_vertices, std::vector<Edge> edges);

    // Complete graph K_n with each weight drawn +1 or -1 from the seeded
    // generator. Deterministic per (n, seed).
    static Graph complete_pm1(int n_vertices, std::uint64_t seed);

    enum class WeightKind { PlusMinusOne, Unit, UniformReal };

    // Erdos-Renyi G(n, p) with weights per kind (UniformReal draws nonzero
    // values in [-1, 1]). Deterministic per (n, edge_prob, kind, seed).
    static Graph gnp(int n_vertices, double edge_prob, WeightKind weights,
                     std::uint64_t seed);

    int vertex_count() const { return n_; }
    long long edge_count() const { return static_cast<long long>(edges_.size()); }
    std::span<const Edge> edges() const { return edges_; }

    double average_degree() const {
        return 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
    }
    double total_weight() const { return total_weight_; }
    // Sum of |w| over negative edges; equals the count for +-1 weights.
    double negative_weight() const { return negative_weight_; }
    bool integral_weights() const { return integral_weights_; }
    // max_i sum_j |w_ij|, the default temperature scale for annealing.
    double max_abs_row_sum() const;

    int degree(int v) const {
        return static_cast<int>(adj_offset_[v + 1] - adj_offset_[v]);
    }
    std::span<const int> neighbors(int v) const {
        return {adj_index_.data() + adj_offset_[v],
                adj_index_.data() + adj_offset_[v + 1]};
    }
    std::span<const double> neighbor_weights(int v) const {
        return {adj_weight_.data() + adj_offset_[v],
                adj_weight_.data() + adj_offset_[v + 1]};
    }

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<long long> adj_offset_;
    std::vector<int> adj_index_;
    std::vector<double> adj_weight_;
    double total_weight_ = 0.0;
    double negative_weight_ = 0.0;
    bool integral_weights_ = true;
};

struct CutResult {
    double cut_value = 0.0;
    double ising_energy = 0.0;
    SpinConfig spins;
};

// C(sigma) = sum over edges of w * (1 - sigma_u sigma_v) / 2.
double cut_value(const Graph& g, const SpinConfig& spins);

// H(sigma) = sum_{u<v} w_uv sigma_u sigma_v, so that
// cut = (total_weight - H) / 2 holds exactly.
double ising_energy(const Graph& g, const SpinConfig& spins);

// Evaluates both objectives for the given spins.
CutResult evaluate(const Graph& g, SpinConfig spins);

// (cut + e_neg) / (u_sdp + e_neg); requires a positive denominator.
double normalized_score(double cut, double u_sdp, double e_neg);

struct BruteForceResult {
    CutResult best;
    // All optimal configurations with spins[0] = +1 (one per global-flip
    // pair), capped at optima_limit.
    std::vector<SpinConfig> optima;
    bool optima_truncated = false;
};

inline constexpr int kBruteForceMaxVertices = 24;

// Exact maximum cut by Gray-code enumeration of the 2^(n-1) bipartitions
// with spins[0] fixed to +1. Guarded to n <= 24.
BruteForceResult brute_force_maxcut(const Graph& g, std::size_t optima_limit = 64);

}  // namespace cimcut
