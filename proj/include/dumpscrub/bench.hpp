#pragma once

// Benchmark sweeps: generate synthetic dumps along one varying factor, time
// analyze runs over them, and emit factor,value,mode,seconds rows. The same
// helpers drive the bench command and the performance checks in the test
// suite.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "dumpgen.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "io.hpp"

namespace dumpscrub {

struct BenchPoint {
    std::string factor;
    std::string value;
    std::string mode;
    double seconds = 0.0;
};

struct BenchPlan {
    std::string dir = "bench_scratch";
    std::vector<std::string> sweeps = {"size",    "threads",     "sensitive",
                                       "control", "identifiers", "redaction"};
    std::vector<uint64_t> sizes_mib = {64, 128, 256, 512};
    std::vector<uint32_t> thread_counts = {1, 2, 4, 8};
    std::vector<double> sensitive_pcts = {0.1, 0.5, 0.9};
    std::vector<double> control_pcts = {0.1, 0.3, 0.5, 0.7};
    std::vector<size_t> identifier_counts = {2, 4, 6, 8};
    std::vector<std::string> redactions = {"overwrite", "hash", "encrypt"};
    uint64_t base_size_mib = 256;
    double base_sensitive_pct = 0.1;
    uint64_t seed = 7;
    uint32_t repeats = 1;
};

inline BenchPlan bench_plan_from_json(const nlohmann::json& j) {
    BenchPlan p;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "dir")
                p.dir = value.get<std::string>();
            else if (key == "sweeps")
                p.sweeps = value.get<std::vector<std::string>>();
            else if (key == "sizes_mib")
                p.sizes_mib = value.get<std::vector<uint64_t>>();
            else if (key == "threads")
                p.thread_counts = value.get<std::vector<uint32_t>>();
            else if (key == "sensitive_pcts")
                p.sensitive_pcts = value.get<std::vector<double>>();
            else if (key == "control_pcts")
                p.control_pcts = value.get<std::vector<double>>();
            else if (key == "identifier_counts")
                p.identifier_counts = value.get<std::vector<size_t>>();
            else if (key == "redactions")
                p.redactions = value.get<std::vector<std::string>>();
            else if (key == "base_size_mib")
                p.base_size_mib = value.get<uint64_t>();
            else if (key == "base_sensitive_pct")
                p.base_sensitive_pct = value.get<double>();
            else if (key == "seed")
                p.seed = value.get<uint64_t>();
            else if (key == "repeats")
                p.repeats = value.get<uint32_t>();
            else
                throw ConfigError("bench: unknown key \"" + key + "\"");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("bench: ") + ex.what());
    }
    if (p.repeats < 1)
        throw ConfigError("bench: repeats must be at least 1");
    return p;
}

inline std::vector<EntityMixEntry> default_entity_mix() {
    std::vector<EntityMixEntry> mix;
    for (const auto& name : builtin_entity_names())
        mix.push_back(EntityMixEntry{name, 1.0});
    return mix;
}

// A full mapping marking every built-in entity directly sensitive.
inline SensitivityMapping all_direct_mapping() {
    SensitivityMapping m;
    m.direct = builtin_entity_names();
    return m;
}

inline DumpGenConfig bench_gen_config(uint64_t size_mib, double pct_sensitive, double pct_control,
                                      uint64_t seed) {
    DumpGenConfig g;
    g.total_size = size_mib * 1024 * 1024;
    g.pct_sensitive_pages = pct_sensitive;
    g.pct_sensitive_per_page = 0.1;
    g.pct_control_data = pct_control;
    g.entity_mix = default_entity_mix();
    g.seed = seed;
    return g;
}

// Generates a dump into dir under a content-describing name; reuses the file
// if an earlier point already produced it. The readable fields carry the
// swept knobs; the trailing tag hashes everything else that shapes the bytes
// (per-page fraction, encoding, entity mix) so two configs never share a
// cache entry.
inline std::string bench_materialize_dump(const std::string& dir, const DumpGenConfig& g) {
    std::filesystem::create_directories(dir);
    uint64_t h = 1469598103934665603ULL;
    const auto mix_in = [&h](const std::string& s) {
        for (const unsigned char c : s) {
            h = (h ^ c) * 1099511628211ULL;
        }
        h = (h ^ 0x1fULL) * 1099511628211ULL;
    };
    mix_in(std::to_string(g.pct_sensitive_per_page));
    mix_in(encoding_name(g.encoding));
    for (const auto& e : g.entity_mix) {
        mix_in(e.entity);
        mix_in(std::to_string(e.weight));
    }
    char tag[9];
    std::snprintf(tag, sizeof tag, "%08x", static_cast<uint32_t>(h ^ (h >> 32)));
    const std::string name = "dump_" + std::to_string(g.total_size / (1024 * 1024)) + "m_s" +
                             std::to_string(static_cast<int>(g.pct_sensitive_pages * 100)) + "_c" +
                             std::to_string(static_cast<int>(g.pct_control_data * 100)) + "_r" +
                             std::to_string(g.seed) + "_" + tag + ".dump";
    const std::string path = (std::filesystem::path(dir) / name).string();
    if (!std::filesystem::exists(path))
        write_file_atomic(path, generate_dump(g).bytes);
    return path;
}

inline void write_mapping_file(const std::string& path, const SensitivityMapping& m) {
    nlohmann::json j;
    j["direct"] = m.direct;
    j["quasi"] = nlohmann::json::array();
    for (const auto& q : m.quasi)
        j["quasi"].push_back({{"entities", q.entities}, {"vicinity", q.vicinity}});
    j["custom_identifiers"] = nlohmann::json::array();
    for (const auto& c : m.custom_identifiers)
        j["custom_identifiers"].push_back({{"entity_type", c.entity_type}, {"path", c.path}});
    write_file_atomic(path, j.dump(2) + "\n");
}

// Baseline analyze configuration for one timed point. Callers override
// threads, processing_mode, mapping or redaction before running.
inline EngineConfig bench_analyze_config(const std::string& dir, const std::string& dump_path,
                                         const std::string& mapping_path) {
    EngineConfig cfg;
    cfg.command = "analyze";
    cfg.input = dump_path;
    cfg.input_type = "dump";
    cfg.output = (std::filesystem::path(dir) / "scrubbed.out").string();
    cfg.mapping_path = mapping_path;
    return cfg;
}

// Runs analyze `repeats` times and returns the fastest wall time, the usual
// guard against scheduler noise on shared machines.
inline double bench_time_analyze(EngineConfig cfg, uint32_t repeats) {
    validate_engine_config(cfg);
    double best = 0.0;
    for (uint32_t r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        analyze(cfg);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (r == 0 || s < best)
            best = s;
    }
    return best;
}

inline std::vector<BenchPoint> run_bench(const BenchPlan& plan) {
    std::vector<BenchPoint> points;
    std::filesystem::create_directories(plan.dir);
    const std::string mapping_path = (std::filesystem::path(plan.dir) / "mapping.json").string();
    write_mapping_file(mapping_path, all_direct_mapping());
    const std::string key_path = (std::filesystem::path(plan.dir) / "bench.key").string();
    if (!std::filesystem::exists(key_path))
        write_file_atomic(key_path, std::string("bench key material\n"));
    auto has = [&](const char* s) {
        return std::find(plan.sweeps.begin(), plan.sweeps.end(), s) != plan.sweeps.end();
    };
    auto base_dump = [&](uint64_t size_mib, double sens, double ctrl) {
        return bench_materialize_dump(plan.dir,
                                      bench_gen_config(size_mib, sens, ctrl, plan.seed));
    };

    if (has("size")) {
        for (uint64_t mib : plan.sizes_mib) {
            const std::string dump = base_dump(mib, plan.base_sensitive_pct, 0.0);
            for (const char* mode : {"concise", "boolean"}) {
                EngineConfig cfg = bench_analyze_config(plan.dir, dump, mapping_path);
                cfg.processing_mode = mode;
                points.push_back(BenchPoint{"size_mib", std::to_string(mib), mode,
                                            bench_time_analyze(cfg, plan.repeats)});
            }
        }
    }
    if (has("threads")) {
        const std::string dump = base_dump(plan.base_size_mib, plan.base_sensitive_pct, 0.0);
        for (uint32_t t : plan.thread_counts) {
            EngineConfig cfg = bench_analyze_config(plan.dir, dump, mapping_path);
            cfg.threads = t;
            points.push_back(BenchPoint{"threads", std::to_string(t), "concise",
                                        bench_time_analyze(cfg, plan.repeats)});
        }
    }
    if (has("sensitive")) {
        for (double pct : plan.sensitive_pcts) {
            const std::string dump = base_dump(plan.base_size_mib, pct, 0.0);
            for (const char* mode : {"concise", "boolean"}) {
                EngineConfig cfg = bench_analyze_config(plan.dir, dump, mapping_path);
                cfg.processing_mode = mode;
                points.push_back(BenchPoint{"sensitive_pct",
                                            std::to_string(static_cast<int>(pct * 100)), mode,
                                            bench_time_analyze(cfg, plan.repeats)});
            }
        }
    }
    if (has("control")) {
        for (double pct : plan.control_pcts) {
            const std::string dump = base_dump(plan.base_size_mib, plan.base_sensitive_pct, pct);
            EngineConfig cfg = bench_analyze_config(plan.dir, dump, mapping_path);
            points.push_back(BenchPoint{"control_pct",
                                        std::to_string(static_cast<int>(pct * 100)), "concise",
                                        bench_time_analyze(cfg, plan.repeats)});
        }
    }
    if (has("identifiers")) {
        const std::string dump = base_dump(plan.base_size_mib, plan.base_sensitive_pct, 0.0);
        const auto& names = builtin_entity_names();
        for (size_t n : plan.identifier_counts) {
            if (n > names.size())
                throw ConfigError("bench: identifier count exceeds built-in identifier count");
            SensitivityMapping m;
            m.direct.assign(names.begin(), names.begin() + static_cast<long>(n));
            const std::string mpath = (std::filesystem::path(plan.dir) /
                                       ("mapping_" + std::to_string(n) + ".json"))
                                          .string();
            write_mapping_file(mpath, m);
            // The mapping size sets the active identifier count: the minimal
            // identifier set keeps exactly the n mapped recognizers running.
            EngineConfig cfg = bench_analyze_config(plan.dir, dump, mpath);
            points.push_back(BenchPoint{"identifier_count", std::to_string(n), "concise",
                                        bench_time_analyze(cfg, plan.repeats)});
        }
    }
    if (has("redaction")) {
        const std::string dump = base_dump(plan.base_size_mib, plan.base_sensitive_pct, 0.0);
        for (const std::string& method : plan.redactions) {
            EngineConfig cfg = bench_analyze_config(plan.dir, dump, mapping_path);
            if (method == "overwrite") {
                cfg.redaction.method = RedactMethod::overwrite;
            } else if (method == "hash") {
                cfg.redaction.method = RedactMethod::hash;
                cfg.redaction.hash_algo = HashAlgo::sha256;
                cfg.redaction.hash_length_policy = HashLengthPolicy::fit;
            } else if (method == "encrypt") {
                cfg.redaction.method = RedactMethod::encrypt;
                cfg.redaction.encrypt_scheme = EncryptScheme::fpe_ff1;
                cfg.redaction.key_file = key_path;
            } else {
                throw ConfigError("bench: unknown redaction method \"" + method + "\"");
            }
            points.push_back(BenchPoint{"redaction", method, "concise",
                                        bench_time_analyze(cfg, plan.repeats)});
        }
    }
    return points;
}

inline std::string bench_points_to_csv(const std::vector<BenchPoint>& points) {
    std::string out = "factor,value,mode,seconds\n";
    for (const auto& p : points) {
        out += csv_escape(p.factor);
        out += ',';
        out += csv_escape(p.value);
        out += ',';
        out += csv_escape(p.mode);
        out += ',';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", p.seconds);
        out += buf;
        out += '\n';
    }
    return out;
}

inline void run_bench_command(const EngineConfig& cfg) {
    if (cfg.output.empty())
        throw ConfigError("bench requires an output path for its CSV");
    BenchPlan plan = bench_plan_from_json(cfg.bench_plan);
    write_file_atomic(cfg.output, bench_points_to_csv(run_bench(plan)));
}

} // namespace dumpscrub
