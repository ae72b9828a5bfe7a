// SPDX-License-Identifier: Apache-2.0
//
// rollup-sim: run accountable-rollup scenarios, replay traces, and re-check
// verdict evidence offline.
//
//   rollup-sim run [--config FILE] [--seed N] [--out DIR] [--das on|off]
//                  [--rollup TYPE] [--script NAME] [--quiet]
//   rollup-sim replay --trace FILE
//   rollup-sim verify-evidence --verdict FILE --keys FILE
//   rollup-sim metrics --trace FILE
//
// `run` exits 0 on a clean run, 2 when the run ends in a safety violation,
// and 1 on usage or I/O errors. Outputs are written atomically (tmp+rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rollup/error.hpp"
#include "rollup/sim/config.hpp"
#include "rollup/sim/forensics.hpp"
#include "rollup/sim/trace.hpp"
#include "rollup/sim/world.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rollup;
using namespace rollup::sim;

namespace {

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(Errc::BadScript, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::BadScript, path + ": " + e.what());
    }
    return j;
}

void write_file_atomic(const fs::path& path, const std::string& contents)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::BadScript, "cannot write " + tmp.string());
        out << contents;
    }
    fs::rename(tmp, path);
}

int cmd_run(const std::string& config_path, uint64_t seed, const std::string& out_dir,
            const std::string& das_override, const std::string& rollup_override,
            const std::string& script_override, bool quiet)
{
    ScenarioConfig cfg;
    if (!config_path.empty()) cfg = ScenarioConfig::from_json(load_json_file(config_path));
    if (das_override == "on") cfg.das.enabled = true;
    if (das_override == "off") cfg.das.enabled = false;
    if (!rollup_override.empty()) cfg.rollup.type = rollup_type_from_string(rollup_override);
    if (!script_override.empty()) cfg.adversary.script = script_override;

    SimResult result = run_sim(cfg, seed);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string trace;
        for (const std::string& line : result.trace) {
            trace += line;
            trace += '\n';
        }
        write_file_atomic(fs::path(out_dir) / "trace.jsonl", trace);
        write_file_atomic(fs::path(out_dir) / "verdict.json", result.verdict.dump(2) + "\n");
        write_file_atomic(fs::path(out_dir) / "metrics.json", result.metrics.dump(2) + "\n");
        write_file_atomic(fs::path(out_dir) / "keys.json", result.keys.dump(2) + "\n");
    }

    if (!quiet) {
        json summary = {
            {"seed", seed},
            {"rollup", to_string(cfg.rollup.type)},
            {"script", cfg.adversary.script},
            {"das", cfg.das.enabled},
            {"safety_violation", result.safety_violation},
            {"accountable", result.accountable},
            {"trace_digest", result.trace_digest.hex()},
            {"exit_code", result.exit_code},
        };
        std::cout << summary.dump(2) << "\n";
    }
    return result.exit_code;
}

int cmd_replay(const std::string& trace_path, bool quiet)
{
    LoadedTrace loaded = load_trace(trace_path);
    bool chain_ok = verify_trace_chain(loaded);
    ScenarioConfig cfg = ScenarioConfig::from_json(loaded.header.at("config"));
    uint64_t seed = loaded.header.at("seed").get<uint64_t>();
    SimResult result = run_sim(cfg, seed);

    // Regenerating from the header localizes any edit: the first line that
    // differs from the regenerated trace is the tampered/truncated one.
    std::optional<size_t> first_diff;
    size_t common = std::min(result.trace.size(), loaded.lines.size());
    for (size_t i = 0; i < common; ++i) {
        if (result.trace[i] != loaded.lines[i]) {
            first_diff = i;
            break;
        }
    }
    if (!first_diff && result.trace.size() != loaded.lines.size()) first_diff = common;

    bool ok = chain_ok && !first_diff;
    if (!quiet) {
        json out = {{"seed", seed},
                    {"records", loaded.footer.at("records")},
                    {"digest", result.trace_digest.hex()},
                    {"chain_ok", chain_ok},
                    {"match", !first_diff}};
        if (first_diff) out["first_diff_line"] = *first_diff;
        std::cout << out.dump(2) << "\n";
    }
    if (!ok) {
        if (!chain_ok) std::cerr << "replay: trace chain digest does not verify\n";
        if (first_diff) {
            std::cerr << "replay: trace diverges from regeneration at line "
                      << *first_diff << "\n";
        }
        return 1;
    }
    return 0;
}

int cmd_verify_evidence(const std::string& verdict_path, const std::string& keys_path)
{
    json verdict = load_json_file(verdict_path);
    json keys_doc = load_json_file(keys_path);
    std::map<ValidatorId, Digest> keys;
    for (auto it = keys_doc.at("validators").begin(); it != keys_doc.at("validators").end();
         ++it) {
        keys[it.key()] = Digest::from_hex(it.value().get<std::string>());
    }
    std::string reason;
    bool ok = verify_verdict_evidence(verdict, keys, &reason);
    json out = {{"ok", ok}};
    if (!ok) out["reason"] = reason;
    std::cout << out.dump(2) << "\n";
    return ok ? 0 : 1;
}

int cmd_metrics(const std::string& trace_path)
{
    LoadedTrace loaded = load_trace(trace_path);
    std::cout << summarize_trace(loaded).dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"accountable-rollup scenario simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, das_override, rollup_override, script_override;
    uint64_t seed = 1;
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run one scenario");
    run->add_option("--config", config_path, "scenario JSON (defaults when omitted)")
        ->envname("ROLLUP_SIM_CONFIG");
    run->add_option("--seed", seed, "run seed")->envname("ROLLUP_SIM_SEED");
    run->add_option("--out", out_dir, "directory for trace/verdict/metrics/keys")
        ->envname("ROLLUP_SIM_OUT");
    run->add_option("--das", das_override, "override sampling: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--rollup", rollup_override,
                    "override rollup type: enshrined-opt|enshrined-zk|sovereign-opt|sovereign-zk");
    run->add_option("--script", script_override, "override adversary script");
    run->add_flag("--quiet", quiet, "suppress the summary line");

    std::string trace_path, verdict_path, keys_path;
    CLI::App* replay = app.add_subcommand("replay", "re-run a trace and byte-compare");
    replay->add_option("--trace", trace_path, "trace.jsonl path")->required();
    replay->add_flag("--quiet", quiet, "suppress the summary line");

    CLI::App* verify = app.add_subcommand("verify-evidence",
                                          "re-check a verdict against published keys");
    verify->add_option("--verdict", verdict_path, "verdict.json path")->required();
    verify->add_option("--keys", keys_path, "keys.json path")->required();

    CLI::App* metrics = app.add_subcommand("metrics", "summarize a trace without re-running");
    metrics->add_option("--trace", trace_path, "trace.jsonl path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, seed, out_dir, das_override, rollup_override,
                           script_override, quiet);
        if (replay->parsed()) return cmd_replay(trace_path, quiet);
        if (verify->parsed()) return cmd_verify_evidence(verdict_path, keys_path);
        if (metrics->parsed()) return cmd_metrics(trace_path);
    } catch (const Error& e) {
        std::cerr << "rollup-sim: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "rollup-sim: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
