// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace rollup {

// Capacity arithmetic for lazy chains hosting rollups: the parent orders and
// serves data but never executes, so chain throughput is data-limited, and
// per-node execution work depends only on the rollups a node actually
// follows, not on everything the chain carries.

/// Transactions per slot the chain sustains: data capacity over demand,
/// capped by an execution-side ceiling.
double throughput(double capacity_per_block, uint64_t blocks_per_slot,
                  const std::vector<uint64_t>& gas_per_tx, double hard_cap);

/// Work-normalized scaling ratio: slots of progress per unit of gas demand.
double scalability(uint64_t slots, const std::vector<uint64_t>& gas_per_tx);

struct ShardingGain {
    double before = 0; // every node executes every rollup
    double after = 0;  // every node executes only its own rollup
    double factor = 0; // after / before
};

/// Per-node progress before and after execution sharding. Rows are slots,
/// columns rollups: `unsharded[i][j]` is what executing rollup j at slot i
/// costs a node that runs everything; `sharded[i][j]` what it costs a node
/// following only rollup j. A node that runs everything pays the row sum; a
/// sharded node pays its own column, so the slowest shard (row max) paces
/// the chain. The factor is reported raw -- profiles where sharding hurts
/// show factors below 1 rather than being clamped.
ShardingGain sharding_gain(const std::vector<std::vector<uint64_t>>& unsharded,
                           const std::vector<std::vector<uint64_t>>& sharded);

} // namespace rollup
