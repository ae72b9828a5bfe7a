// SPDX-License-Identifier: Apache-2.0
#include "rollup/sim/adversary.hpp"

#include "rollup/error.hpp"

namespace rollup::sim {

namespace {

Digest perturb(const Digest& d, const std::string& tag) { return tagged_hash(tag, d.bytes); }

} // namespace

RollupBlock corrupt_exec_block(const RollupBlock& honest, uint32_t from_isr,
                               const std::string& tag)
{
    if (honest.isrs.empty()) throw Error(Errc::BadScript, "cannot corrupt an empty block");
    RollupBlock bad = honest;
    for (uint32_t j = std::min<uint32_t>(from_isr, bad.isr_count() - 1); j < bad.isr_count();
         ++j) {
        bad.isrs[j] = perturb(bad.isrs[j], tag);
    }
    bad.state_root = bad.isrs.back();
    return bad;
}

LyingHistoryProver::LyingHistoryProver(std::string id, const ChainView* view,
                                       const std::map<uint64_t, ParentBody>* bodies,
                                       NamespaceId ns, uint64_t from, const std::string& tag)
    : id_(std::move(id)), honest_(id_ + ".src", view, bodies, std::move(ns))
{
    for (size_t i = 0; i < view->txs.size(); ++i) {
        Digest post = view->tx_roots_after[i];
        if (i >= from) post = perturb(post, tag);
        posts_.push_back(post);
        mmr_.append(history_leaf(view->txs[i].tx, post));
    }
    if (posts_.empty()) throw Error(Errc::BadScript, "lying prover needs a nonempty history");
}

HistoryClaim LyingHistoryProver::claim() const
{
    return {posts_.size(), mmr_.root(), posts_.back()};
}

std::optional<Digest> LyingHistoryProver::prefix_root(uint64_t len) const
{
    if (len > posts_.size()) return std::nullopt;
    return mmr_.prefix_root(len);
}

std::optional<LeafReveal> LyingHistoryProver::reveal(uint64_t index) const
{
    if (index >= posts_.size()) return std::nullopt;
    auto r = honest_.reveal(index); // genuine tx, opening and source
    if (!r) return std::nullopt;
    r->post_root = posts_[index];
    r->peaks_before = mmr_.prefix_peaks(index);
    return r;
}

std::optional<std::vector<SmtWitness>> LyingHistoryProver::step_elements(uint64_t index) const
{
    return honest_.step_elements(index); // true witnesses; the lie is the root
}

} // namespace rollup::sim
