#include <algorithm>
#include <stdexcept>
#include <utility>

#include "heuristics.hpp"

namespace cimcut {

double default_c0(const Graph& g) {
    double c0 = g.max_abs_row_sum();
    return c0 > 0.0 ? c0 : 1.0;
}

GainTable::GainTable(const Graph& g, SpinConfig spins)
    : g_(&g), spins_(std::move(spins)) {
    if (spins_.size() != static_cast<std::size_t>(g.vertex_count()))
        throw std::invalid_argument("spin vector length does not match graph");
    for (std::int8_t s : spins_)
        if (s != 1 && s != -1)
            throw std::invalid_argument("spins must be +1 or -1");
    local_field_.assign(spins_.size(), 0.0);
    energy_ = 0.0;
    resync();
}

void GainTable::flip(int v) {
    if (v < 0 || v >= size()) throw std::out_of_range("flip vertex out of range");
    std::size_t k = static_cast<std::size_t>(v);
    energy_ += delta(v);
    spins_[k] = static_cast<std::int8_t>(-spins_[k]);
    double d = 2.0 * spins_[k];
    auto cols = g_->neighbors(v);
    auto ws = g_->neighbor_weights(v);
    for (std::size_t a = 0; a < cols.size(); ++a)
        local_field_[static_cast<std::size_t>(cols[a])] += d * ws[a];
}

void GainTable::resync() {
    std::fill(local_field_.begin(), local_field_.end(), 0.0);
    energy_ = 0.0;
    for (const Edge& e : g_->edges()) {
        std::size_t u = static_cast<std::size_t>(e.u);
        std::size_t v = static_cast<std::size_t>(e.v);
        local_field_[u] += e.w * spins_[v];
        local_field_[v] += e.w * spins_[u];
        energy_ += e.w * spins_[u] * spins_[v];
    }
}

}  // namespace cimcut
