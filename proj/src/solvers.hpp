#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "graph.hpp"
#include "trace.hpp"

namespace cimcut {

// One solver invocation, dispatched by kind: "cim", "sa", "bls", "sg3", "gw".
// Unknown parameter keys are rejected so typos cannot silently fall back to
// defaults.
struct SolveOutcome {
    RunTrace trace;
    CutResult result;
    double wall_seconds = 0.0;
    nlohmann::json details;  // solver-specific extras (objective, flips, ...)
};

SolveOutcome run_solver(const Graph& g, const std::string& kind,
                        const nlohmann::json& params, std::uint64_t seed);

bool known_solver_kind(const std::string& kind);

}  // namespace cimcut
