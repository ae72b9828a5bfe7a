// SPDX-License-Identifier: Apache-2.0
#include "rollup/sim/trace.hpp"

#include <fstream>

#include "rollup/bytes.hpp"
#include "rollup/error.hpp"

namespace rollup::sim {

using nlohmann::json;

TraceWriter::TraceWriter() { digest_ = tagged_hash("trace.genesis", {}); }

void TraceWriter::append(const json& j)
{
    std::string line = j.dump();
    Hasher h;
    h.put_digest(digest_);
    h.update(BytesView(reinterpret_cast<const uint8_t*>(line.data()), line.size()));
    digest_ = h.finalize();
    lines_.push_back(std::move(line));
}

void TraceWriter::header(json fields)
{
    if (started_) throw Error(Errc::BadScript, "trace header written twice");
    started_ = true;
    fields["type"] = "run_header";
    append(fields);
}

void TraceWriter::event(uint64_t slot, const std::string& type, json fields)
{
    if (!started_ || finished_) throw Error(Errc::BadScript, "trace not open for events");
    fields["type"] = type;
    fields["t"] = slot;
    fields["seq"] = seq_++;
    append(fields);
}

void TraceWriter::finish()
{
    if (!started_ || finished_) throw Error(Errc::BadScript, "trace not open for footer");
    finished_ = true;
    json footer;
    footer["type"] = "run_footer";
    footer["records"] = seq_;
    footer["digest"] = digest_.hex();
    lines_.push_back(footer.dump()); // outside the chain; it carries the chain
}

Digest trace_chain_digest(const std::vector<std::string>& lines, size_t count)
{
    Digest d = tagged_hash("trace.genesis", {});
    for (size_t i = 0; i < count && i < lines.size(); ++i) {
        Hasher h;
        h.put_digest(d);
        h.update(BytesView(reinterpret_cast<const uint8_t*>(lines[i].data()), lines[i].size()));
        d = h.finalize();
    }
    return d;
}

LoadedTrace parse_trace(const std::vector<std::string>& lines)
{
    if (lines.size() < 2) throw Error(Errc::BadScript, "trace needs a header and a footer");
    LoadedTrace t;
    t.lines = lines;
    try {
        t.header = json::parse(lines.front());
        t.footer = json::parse(lines.back());
    } catch (const json::exception& e) {
        throw Error(Errc::BadScript, std::string("unparseable trace line: ") + e.what());
    }
    if (t.header.value("type", "") != "run_header")
        throw Error(Errc::BadScript, "first trace line is not a run_header");
    if (t.footer.value("type", "") != "run_footer")
        throw Error(Errc::BadScript, "last trace line is not a run_footer");
    return t;
}

LoadedTrace load_trace(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::BadScript, "cannot open trace: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    return parse_trace(lines);
}

bool verify_trace_chain(const LoadedTrace& trace)
{
    Digest chained = trace_chain_digest(trace.lines, trace.lines.size() - 1);
    return trace.footer.value("digest", "") == chained.hex();
}

json summarize_trace(const LoadedTrace& trace)
{
    std::map<std::string, uint64_t> counts;
    uint64_t confirmed = 0, latency_sum = 0, latency_max = 0;
    uint64_t submitted = 0, violations = 0;
    for (size_t i = 1; i + 1 < trace.lines.size(); ++i) {
        json j;
        try {
            j = json::parse(trace.lines[i]);
        } catch (const json::exception&) {
            throw Error(Errc::BadScript, "unparseable trace record");
        }
        std::string type = j.value("type", "");
        ++counts[type];
        if (type == "tx.submit") ++submitted;
        if (type == "violation") ++violations;
        if (type == "client.confirm") {
            ++confirmed;
            uint64_t lat = j.value("latency", uint64_t{0});
            latency_sum += lat;
            latency_max = std::max(latency_max, lat);
        }
    }
    json out;
    out["records"] = trace.footer.value("records", uint64_t{0});
    out["events_by_type"] = counts;
    out["txs"] = {{"submitted", submitted},
                  {"confirmed", confirmed},
                  {"latency_max", latency_max},
                  {"latency_avg", confirmed ? double(latency_sum) / double(confirmed) : 0.0}};
    out["violations"] = violations;
    return out;
}

} // namespace rollup::sim
