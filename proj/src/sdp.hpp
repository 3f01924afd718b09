#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "graph.hpp"

namespace cimcut {

class NoConvergenceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unit vectors v_i on S^{rank-1} maximizing 1/2 sum w_ij (1 - v_i . v_j).
struct Relaxation {
    int rank = 0;
    std::vector<double> vectors;  // N x rank, row-major, unit rows
    double objective = 0.0;
    double grad_norm = 0.0;  // Riemannian residual at termination
    int sweeps = 0;

    std::span<const double> vector_of(int i) const {
        return {vectors.data() + static_cast<std::size_t>(i) * rank,
                static_cast<std::size_t>(rank)};
    }
};

struct GwConfig {
    int rank = 0;           // 0 picks ceil(sqrt(2N)) + 1 clamped to [2, N]
    int max_sweeps = 500;
    double tol = 1e-6;      // relative per-sweep objective improvement
    int n_hyperplanes = 0;  // 0 picks N

    void validate() const;
};

// Block-coordinate ascent on the low-rank factorization: v_i <- -u/|u| with
// u = sum_j w_ij v_j, cycling vertices Gauss-Seidel style. Each update is the
// exact single-vector maximizer, so the objective never decreases.
Relaxation solve_relaxation(const Graph& g, const GwConfig& config,
                            std::uint64_t seed);

// Best cut over n_hyperplanes random projections sigma_i = sign(r . v_i),
// tie toward +1.
CutResult hyperplane_round(const Relaxation& relaxation, const Graph& g,
                           int n_hyperplanes, std::uint64_t seed);

// (N/4) lambda_max(L) for the weighted Laplacian L: a certified cut bound
// since cut(sigma) = sigma^T L sigma / 4 and |sigma|^2 = N. Power iteration
// with a Gershgorin shift; throws NoConvergenceError at the iteration cap.
double spectral_upper_bound(const Graph& g);

struct GwResult {
    Relaxation relaxation;
    CutResult cut;
    double spectral_bound = 0.0;
    double solve_seconds = 0.0;
    double round_seconds = 0.0;
};

GwResult gw_run(const Graph& g, const GwConfig& config, std::uint64_t seed);

}  // namespace cimcut
