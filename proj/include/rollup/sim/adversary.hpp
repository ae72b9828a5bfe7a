// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rollup/mmr.hpp"
#include "rollup/node.hpp"
#include "rollup/tournament.hpp"

namespace rollup::sim {

/// A block whose trailing intermediate roots (from `from_isr` on) and
/// headline root are perturbed but whose txs are the honest ones.
RollupBlock corrupt_exec_block(const RollupBlock& honest, uint32_t from_isr,
                               const std::string& tag);

// History prover that lies about execution from leaf `from` on: it rebuilds
// its own MMR over perturbed post roots, so its claims are structurally
// perfect and fall only to the one-tx replay check.
class LyingHistoryProver : public HistoryProver {
public:
    LyingHistoryProver(std::string id, const ChainView* view,
                       const std::map<uint64_t, ParentBody>* bodies, NamespaceId ns,
                       uint64_t from, const std::string& tag);

    std::string id() const override { return id_; }
    HistoryClaim claim() const override;
    std::optional<Digest> prefix_root(uint64_t len) const override;
    std::optional<LeafReveal> reveal(uint64_t index) const override;
    std::optional<std::vector<SmtWitness>> step_elements(uint64_t index) const override;

private:
    std::string id_;
    ChainHistoryProver honest_; // source of txs, openings and step witnesses
    std::vector<Digest> posts_;
    Mmr mmr_;
};

// Prover that states a claim and then stonewalls every query; it forfeits
// any duel it is drawn into.
class SilentHistoryProver : public HistoryProver {
public:
    SilentHistoryProver(std::string id, HistoryClaim claim)
        : id_(std::move(id)), claim_(claim)
    {
    }

    std::string id() const override { return id_; }
    HistoryClaim claim() const override { return claim_; }
    std::optional<Digest> prefix_root(uint64_t) const override { return std::nullopt; }
    std::optional<LeafReveal> reveal(uint64_t) const override { return std::nullopt; }
    std::optional<std::vector<SmtWitness>> step_elements(uint64_t) const override
    {
        return std::nullopt;
    }

private:
    std::string id_;
    HistoryClaim claim_;
};

} // namespace rollup::sim
