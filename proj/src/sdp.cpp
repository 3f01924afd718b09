#include "sdp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace cimcut {
namespace {

int default_rank(int n) {
    int k = static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1;
    return std::clamp(k, 2, std::max(2, n));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double relaxation_objective(const Graph& g, const Relaxation& r) {
    double acc = 0.0;
    for (const Edge& e : g.edges())
        acc += e.w * (1.0 - dot(r.vector_of(e.u), r.vector_of(e.v)));
    return 0.5 * acc;
}

// Riemannian residual: per vertex the component of the objective gradient
// -u_i/2 orthogonal to v_i, stacked over vertices.
double residual_norm(const Graph& g, const Relaxation& r, std::vector<double>& u) {
    int k = r.rank;
    double acc = 0.0;
    for (int i = 0; i < g.vertex_count(); ++i) {
        std::fill(u.begin(), u.end(), 0.0);
        auto cols = g.neighbors(i);
        auto ws = g.neighbor_weights(i);
        for (std::size_t a = 0; a < cols.size(); ++a) {
            auto vj = r.vector_of(cols[a]);
            for (int d = 0; d < k; ++d)
                u[static_cast<std::size_t>(d)] += ws[a] * vj[static_cast<std::size_t>(d)];
        }
        auto vi = r.vector_of(i);
        double along = dot(u, vi);
        for (int d = 0; d < k; ++d) {
            double p = -0.5 * (u[static_cast<std::size_t>(d)] -
                               along * vi[static_cast<std::size_t>(d)]);
            acc += p * p;
        }
    }
    return std::sqrt(acc);
}

}  // namespace

void GwConfig::validate() const {
    // rank 1 would degenerate to plain spin optimization; reject it rather
    // than silently promoting to the clamp floor.
    if (rank < 0 || rank == 1)
        throw std::invalid_argument("rank must be 0 (auto) or at least 2");
    if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be at least 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (n_hyperplanes < 0)
        throw std::invalid_argument("n_hyperplanes must be non-negative");
}

Relaxation solve_relaxation(const Graph& g, const GwConfig& config,
                            std::uint64_t seed) {
    config.validate();
    int n = g.vertex_count();
    int k = config.rank > 0 ? std::clamp(config.rank, 2, std::max(2, n))
                            : default_rank(n);

    Relaxation r;
    r.rank = k;
    r.vectors.resize(static_cast<std::size_t>(n) * k);

    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        double* v = r.vectors.data() + static_cast<std::size_t>(i) * k;
        double norm = 0.0;
        do {
            norm = 0.0;
            for (int d = 0; d < k; ++d) {
                v[d] = rng.gaussian();
                norm += v[d] * v[d];
            }
        } while (norm < 1e-24);
        norm = std::sqrt(norm);
        for (int d = 0; d < k; ++d) v[d] /= norm;
    }

    std::vector<double> u(static_cast<std::size_t>(k));
    double prev = relaxation_objective(g, r);
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        for (int i = 0; i < n; ++i) {
            std::fill(u.begin(), u.end(), 0.0);
            auto cols = g.neighbors(i);
            auto ws = g.neighbor_weights(i);
            for (std::size_t a = 0; a < cols.size(); ++a) {
                const double* vj =
                    r.vectors.data() + static_cast<std::size_t>(cols[a]) * k;
                for (int d = 0; d < k; ++d)
                    u[static_cast<std::size_t>(d)] += ws[a] * vj[d];
            }
            double norm = std::sqrt(dot(u, u));
            if (norm < 1e-12) continue;  // isolated or balanced: leave as is
            double* vi = r.vectors.data() + static_cast<std::size_t>(i) * k;
            for (int d = 0; d < k; ++d)
                vi[d] = -u[static_cast<std::size_t>(d)] / norm;
        }
        ++r.sweeps;
        double objective = relaxation_objective(g, r);
        double gain = objective - prev;
        prev = objective;
        if (gain <= config.tol * std::max(1.0, std::abs(objective))) break;
    }
    r.objective = prev;
    r.grad_norm = residual_norm(g, r, u);
    return r;
}

CutResult hyperplane_round(const Relaxation& relaxation, const Graph& g,
                           int n_hyperplanes, std::uint64_t seed) {
    int n = g.vertex_count();
    int k = relaxation.rank;
    if (relaxation.vectors.size() != static_cast<std::size_t>(n) * k)
        throw std::invalid_argument("relaxation does not match graph");
    if (n_hyperplanes <= 0) n_hyperplanes = n;

    Rng rng(seed);
    std::vector<double> r(static_cast<std::size_t>(k));
    SpinConfig spins(static_cast<std::size_t>(n));
    SpinConfig best_spins;
    double best_cut = 0.0;
    for (int h = 0; h < n_hyperplanes; ++h) {
        for (double& x : r) x = rng.gaussian();
        for (int i = 0; i < n; ++i)
            spins[static_cast<std::size_t>(i)] =
                dot(r, relaxation.vector_of(i)) < 0.0 ? -1 : 1;
        double cut = cut_value(g, spins);
        if (best_spins.empty() || cut > best_cut) {
            best_cut = cut;
            best_spins = spins;
        }
    }
    return evaluate(g, std::move(best_spins));
}

double spectral_upper_bound(const Graph& g) {
    int n = g.vertex_count();
    if (g.edge_count() == 0) return 0.0;

    // Weighted degrees and the Gershgorin shift making L + sI PSD.
    std::vector<double> wdeg(static_cast<std::size_t>(n), 0.0);
    for (const Edge& e : g.edges()) {
        wdeg[static_cast<std::size_t>(e.u)] += e.w;
        wdeg[static_cast<std::size_t>(e.v)] += e.w;
    }
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        for (double w : g.neighbor_weights(i)) radius += std::abs(w);
        shift = std::max(shift, radius - wdeg[static_cast<std::size_t>(i)]);
    }

    Rng rng(0x5d313bd1b0e2f1a7ULL);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> y(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (double& v : x) {
        v = rng.gaussian();
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : x) v /= norm;

    const int cap = 100000;
    double lambda = 0.0;
    for (int it = 0; it < cap; ++it) {
        // y = (L + sI) x = (wdeg + s) x - W x
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] =
                (wdeg[static_cast<std::size_t>(i)] + shift) *
                x[static_cast<std::size_t>(i)];
        for (const Edge& e : g.edges()) {
            y[static_cast<std::size_t>(e.u)] -=
                e.w * x[static_cast<std::size_t>(e.v)];
            y[static_cast<std::size_t>(e.v)] -=
                e.w * x[static_cast<std::size_t>(e.u)];
        }
        double rayleigh = 0.0;
        double ynorm = 0.0;
        for (int i = 0; i < n; ++i) {
            rayleigh += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
            ynorm += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        }
        ynorm = std::sqrt(ynorm);
        if (ynorm == 0.0) return 0.0;  // x sits in the kernel: lambda_max(M) = 0
        for (int i = 0; i < n; ++i)
            x[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / ynorm;
        double estimate = rayleigh - shift;
        if (it > 0 && std::abs(estimate - lambda) <=
                          1e-6 * std::max(1.0, std::abs(estimate))) {
            return static_cast<double>(n) / 4.0 * std::max(0.0, estimate);
        }
        lambda = estimate;
    }
    throw NoConvergenceError("power iteration did not converge within 100000 steps");
}

GwResult gw_run(const Graph& g, const GwConfig& config, std::uint64_t seed) {
    using Clock = std::chrono::steady_clock;
    GwResult result;
    Clock::time_point t0 = Clock::now();
    result.relaxation = solve_relaxation(g, config, seed);
    Clock::time_point t1 = Clock::now();
    // Rounding gets an independent stream so trimming sweeps cannot shift it.
    result.cut = hyperplane_round(result.relaxation, g, config.n_hyperplanes,
                                  derive_seed(seed, "gw-round", 0));
    Clock::time_point t2 = Clock::now();
    result.spectral_bound = spectral_upper_bound(g);
    result.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.round_seconds = std::chrono::duration<double>(t2 - t1).count();
    return result;
}

}  // namespace cimcut
