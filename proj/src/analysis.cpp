// SPDX-License-Identifier: Apache-2.0
#include "rollup/analysis.hpp"

#include <algorithm>
#include <numeric>

#include "rollup/error.hpp"

namespace rollup {

double throughput(double capacity_per_block, uint64_t blocks_per_slot,
                  const std::vector<uint64_t>& gas_per_tx, double hard_cap) {
    if (capacity_per_block <= 0 || blocks_per_slot == 0 || hard_cap <= 0)
        throw Error(Errc::BadConfig, "throughput needs positive capacity and cap");
    const uint64_t demand =
        std::accumulate(gas_per_tx.begin(), gas_per_tx.end(), uint64_t{0});
    if (demand == 0) throw Error(Errc::BadConfig, "zero gas demand");
    const double data_limited =
        capacity_per_block * static_cast<double>(blocks_per_slot) /
        static_cast<double>(demand);
    return std::min(data_limited, hard_cap);
}

double scalability(uint64_t slots, const std::vector<uint64_t>& gas_per_tx) {
    const uint64_t demand =
        std::accumulate(gas_per_tx.begin(), gas_per_tx.end(), uint64_t{0});
    if (demand == 0) throw Error(Errc::BadConfig, "zero gas demand");
    return static_cast<double>(slots) / static_cast<double>(demand);
}

ShardingGain sharding_gain(const std::vector<std::vector<uint64_t>>& unsharded,
                           const std::vector<std::vector<uint64_t>>& sharded) {
    if (unsharded.empty() || unsharded.size() != sharded.size())
        throw Error(Errc::BadConfig, "profiles need matching, nonempty slot rows");
    const size_t m = unsharded.front().size();
    if (m == 0) throw Error(Errc::BadConfig, "profiles need at least one rollup");

    uint64_t full_cost = 0; // run-everything nodes: sum of all cells
    uint64_t paced_cost = 0; // sharded nodes: slowest shard per slot
    for (size_t i = 0; i < unsharded.size(); ++i) {
        if (unsharded[i].size() != m || sharded[i].size() != m)
            throw Error(Errc::BadConfig, "ragged profile row");
        full_cost += std::accumulate(unsharded[i].begin(), unsharded[i].end(),
                                     uint64_t{0});
        paced_cost += *std::max_element(sharded[i].begin(), sharded[i].end());
    }
    if (full_cost == 0 || paced_cost == 0)
        throw Error(Errc::BadConfig, "profiles must carry nonzero work");

    const double slots_times_m =
        static_cast<double>(unsharded.size()) * static_cast<double>(m);
    ShardingGain g;
    g.before = slots_times_m / static_cast<double>(full_cost);
    g.after = slots_times_m / static_cast<double>(paced_cost);
    g.factor = g.after / g.before;
    return g;
}

} // namespace rollup
