// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rollup/sha256.hpp"

namespace rollup::sim {

// Run traces are JSON lines. The first line is a run_header, the last a
// run_footer carrying a digest chained over every preceding line, so a trace
// is tamper-evident and two runs can be compared by one hash.

class TraceWriter {
public:
    TraceWriter();

    /// First line; call exactly once, before any event.
    void header(nlohmann::json fields);
    /// Appends one record; stamps the slot, a sequence number, and the type.
    void event(uint64_t slot, const std::string& type, nlohmann::json fields);
    /// Appends the run_footer; no further lines may follow.
    void finish();

    const std::vector<std::string>& lines() const { return lines_; }
    const Digest& digest() const { return digest_; }
    uint64_t records() const { return seq_; }
    bool finished() const { return finished_; }

private:
    void append(const nlohmann::json& j);

    std::vector<std::string> lines_;
    Digest digest_; // chain over all appended lines (footer excluded)
    uint64_t seq_ = 0;
    bool started_ = false;
    bool finished_ = false;
};

/// Digest chained over lines[0, count): d_0 = H("trace.genesis"),
/// d_{i+1} = H(d_i || line_i).
Digest trace_chain_digest(const std::vector<std::string>& lines, size_t count);

struct LoadedTrace {
    nlohmann::json header;
    nlohmann::json footer;
    std::vector<std::string> lines; // every line, header and footer included
};

/// Parses a trace file. Throws Errc::BadScript when the shape is wrong.
LoadedTrace load_trace(const std::string& path);
LoadedTrace parse_trace(const std::vector<std::string>& lines);

/// Recomputes the chain and compares it with the footer digest.
bool verify_trace_chain(const LoadedTrace& trace);

/// Aggregates a trace into counters and latency figures, without re-running.
nlohmann::json summarize_trace(const LoadedTrace& trace);

} // namespace rollup::sim
