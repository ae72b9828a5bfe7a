// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollup/sha256.hpp"
#include "rollup/sim/config.hpp"

namespace rollup::sim {

// One full simulation run. Deterministic in (config, seed): the trace is
// byte-identical across runs, so replays can compare digests.

struct SimResult {
    ScenarioConfig config;
    uint64_t seed = 0;

    std::vector<std::string> trace; // JSON lines, header and footer included
    Digest trace_digest;            // chained digest the footer carries

    nlohmann::json verdict; // safety violations + accountability
    nlohmann::json metrics;
    nlohmann::json keys; // validator id -> key hex, for offline evidence checks

    bool safety_violation = false;
    bool accountable = true;
    int exit_code = 0; // 0 clean, 2 safety violation
};

/// Runs the scenario. Throws Errc::BadConfig when the config fails
/// validation; anything else thrown mid-run indicates a simulator bug.
SimResult run_sim(const ScenarioConfig& config, uint64_t seed);

} // namespace rollup::sim
