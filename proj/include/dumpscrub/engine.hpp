#pragma once

// Orchestration: configuration, the analyze pipeline with its worker pool,
// the dynamic time-budget controller, and the feedback/augment/generate
// commands.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "classifier.hpp"
#include "crypto.hpp"
#include "dumpgen.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "knowledge_base.hpp"
#include "modes.hpp"
#include "redactor.hpp"
#include "reporting.hpp"

namespace dumpscrub {

struct OptimizationToggles {
    bool min_identifiers = true;
    bool quasi_skip = true;
    bool mru = true;
};

struct BudgetParams {
    double alpha = 0.2;            // EMA smoothing for seconds/group
    size_t window = 64;            // sliding sample window
    size_t recompute_interval = 16; // groups between mode decisions
    double hysteresis = 0.8;       // step back only below this budget share
};

struct EngineConfig {
    std::string command = "analyze"; // analyze|feedback|augment|generate|bench
    uint32_t threads = 1;
    std::string processing_mode = "concise"; // concise|boolean|skip|dynamic
    std::optional<double> time_budget;       // seconds; required for dynamic
    std::string input;
    std::string input_type = "dump"; // dump|log
    Encoding encoding = Encoding::ascii;
    std::string output;
    std::string sensitive_report;     // default: <output>.sensitive.csv
    std::string non_sensitive_report; // default: <output>.non_sensitive.csv
    std::string mapping_path;
    std::string feedback_store;
    std::string marked_sensitive_report;
    std::string marked_non_sensitive_report;
    RedactionPolicy redaction;
    bool encrypt_reports = false;
    OptimizationToggles toggles;
    VicinityUnit vicinity_unit = VicinityUnit::tokens;
    BudgetParams budget;
    uint32_t chunk_pages = 1024;
    std::optional<DumpGenConfig> generate;
    std::string manifest_path;
    std::string augment_source;
    std::string augment_entity;
    std::string augment_artifact;
    nlohmann::json bench_plan = nlohmann::json::object();
};

namespace detail {

inline OptimizationToggles toggles_from_json(const nlohmann::json& j) {
    OptimizationToggles t;
    if (!j.is_object())
        throw ConfigError("optimizations: expected an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "min_identifiers")
            t.min_identifiers = value.get<bool>();
        else if (key == "quasi_skip")
            t.quasi_skip = value.get<bool>();
        else if (key == "mru")
            t.mru = value.get<bool>();
        else
            throw ConfigError("optimizations: unknown key \"" + key + "\"");
    }
    return t;
}

inline BudgetParams budget_from_json(const nlohmann::json& j) {
    BudgetParams b;
    if (!j.is_object())
        throw ConfigError("budget: expected an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "alpha")
            b.alpha = value.get<double>();
        else if (key == "window")
            b.window = value.get<size_t>();
        else if (key == "recompute_interval")
            b.recompute_interval = value.get<size_t>();
        else if (key == "hysteresis")
            b.hysteresis = value.get<double>();
        else
            throw ConfigError("budget: unknown key \"" + key + "\"");
    }
    if (b.alpha <= 0.0 || b.alpha > 1.0)
        throw ConfigError("budget.alpha must be in (0, 1]");
    if (b.window == 0 || b.recompute_interval == 0)
        throw ConfigError("budget.window and budget.recompute_interval must be positive");
    if (b.hysteresis <= 0.0 || b.hysteresis > 1.0)
        throw ConfigError("budget.hysteresis must be in (0, 1]");
    return b;
}

} // namespace detail

inline EngineConfig engine_config_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw ConfigError("engine config: expected a JSON object");
    EngineConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "mode")
                cfg.command = value.get<std::string>();
            else if (key == "threads")
                cfg.threads = value.get<uint32_t>();
            else if (key == "processing_mode")
                cfg.processing_mode = value.get<std::string>();
            else if (key == "time_budget")
                cfg.time_budget = value.get<double>();
            else if (key == "input")
                cfg.input = value.get<std::string>();
            else if (key == "input_type")
                cfg.input_type = value.get<std::string>();
            else if (key == "encoding")
                cfg.encoding = encoding_from_name(value.get<std::string>());
            else if (key == "output")
                cfg.output = value.get<std::string>();
            else if (key == "sensitive_report")
                cfg.sensitive_report = value.get<std::string>();
            else if (key == "non_sensitive_report")
                cfg.non_sensitive_report = value.get<std::string>();
            else if (key == "mapping")
                cfg.mapping_path = value.get<std::string>();
            else if (key == "feedback_store")
                cfg.feedback_store = value.get<std::string>();
            else if (key == "marked_sensitive_report")
                cfg.marked_sensitive_report = value.get<std::string>();
            else if (key == "marked_non_sensitive_report")
                cfg.marked_non_sensitive_report = value.get<std::string>();
            else if (key == "redaction")
                cfg.redaction = redaction_policy_from_json(value);
            else if (key == "encrypt_reports")
                cfg.encrypt_reports = value.get<bool>();
            else if (key == "optimizations")
                cfg.toggles = detail::toggles_from_json(value);
            else if (key == "vicinity") {
                if (!value.is_object())
                    throw ConfigError("vicinity: expected an object");
                for (const auto& [vk, vv] : value.items()) {
                    if (vk == "unit")
                        cfg.vicinity_unit = vicinity_unit_from_name(vv.get<std::string>());
                    else
                        throw ConfigError("vicinity: unknown key \"" + vk + "\"");
                }
            } else if (key == "budget")
                cfg.budget = detail::budget_from_json(value);
            else if (key == "chunk_pages")
                cfg.chunk_pages = value.get<uint32_t>();
            else if (key == "generate")
                cfg.generate = dumpgen_config_from_json(value);
            else if (key == "manifest")
                cfg.manifest_path = value.get<std::string>();
            else if (key == "augment") {
                if (!value.is_object())
                    throw ConfigError("augment: expected an object");
                for (const auto& [ak, av] : value.items()) {
                    if (ak == "source")
                        cfg.augment_source = av.get<std::string>();
                    else if (ak == "entity_type")
                        cfg.augment_entity = av.get<std::string>();
                    else if (ak == "artifact")
                        cfg.augment_artifact = av.get<std::string>();
                    else
                        throw ConfigError("augment: unknown key \"" + ak + "\"");
                }
            } else if (key == "bench") {
                if (!value.is_object())
                    throw ConfigError("bench: expected an object");
                cfg.bench_plan = value;
            } else
                throw ConfigError("engine config: unknown key \"" + key + "\"");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("engine config: ") + ex.what());
    }
    return cfg;
}

// Checks cross-field invariants and fills derived defaults (report paths).
inline void validate_engine_config(EngineConfig& cfg) {
    static const std::set<std::string> commands = {"analyze", "feedback", "augment", "generate",
                                                   "bench"};
    if (!commands.count(cfg.command))
        throw ConfigError("unknown mode \"" + cfg.command + "\"");
    if (cfg.threads < 1)
        throw ConfigError("threads must be at least 1");
    if (cfg.chunk_pages < 1)
        throw ConfigError("chunk_pages must be at least 1");
    static const std::set<std::string> pmodes = {"concise", "boolean", "skip", "dynamic"};
    if (!pmodes.count(cfg.processing_mode))
        throw ConfigError("unknown processing_mode \"" + cfg.processing_mode + "\"");
    if (cfg.processing_mode == "dynamic" &&
        (!cfg.time_budget.has_value() || *cfg.time_budget <= 0.0))
        throw ConfigError("dynamic processing requires a positive time_budget");
    if (cfg.input_type != "dump" && cfg.input_type != "log")
        throw ConfigError("input_type must be dump or log");

    if (cfg.command == "analyze") {
        if (cfg.input.empty() || cfg.output.empty())
            throw ConfigError("analyze requires input and output paths");
        if (cfg.sensitive_report.empty())
            cfg.sensitive_report = cfg.output + ".sensitive.csv";
        if (cfg.non_sensitive_report.empty())
            cfg.non_sensitive_report = cfg.output + ".non_sensitive.csv";
        std::set<std::string> paths = {cfg.input, cfg.output, cfg.sensitive_report,
                                       cfg.non_sensitive_report};
        if (paths.size() != 4)
            throw ConfigError("input, output and report paths must all be distinct");
        validate_redaction_policy(cfg.redaction, cfg.input_type == "dump");
    } else if (cfg.command == "generate") {
        if (!cfg.generate.has_value())
            throw ConfigError("generate requires a generate config object");
        if (cfg.output.empty())
            throw ConfigError("generate requires an output path");
        validate_dumpgen_config(*cfg.generate);
    } else if (cfg.command == "augment") {
        if (cfg.augment_source.empty() || cfg.augment_entity.empty() || cfg.augment_artifact.empty())
            throw ConfigError("augment requires source, entity_type and artifact paths");
    } else if (cfg.command == "feedback") {
        if (cfg.feedback_store.empty())
            throw ConfigError("feedback requires a feedback_store path");
        if (cfg.marked_sensitive_report.empty() && cfg.marked_non_sensitive_report.empty())
            throw ConfigError("feedback requires at least one marked report path");
    }
}

inline EngineConfig load_engine_config(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError("config " + path + ": " + ex.what());
    }
    return engine_config_from_json(j);
}

// Dynamic-mode controller. Tracks seconds/group per mode (EMA over a sliding
// window) and moves between concise, boolean and skip so the run lands inside
// its time budget: step to a faster mode while the projection overruns, step
// back one mode once the projection falls under the hysteresis share of the
// remaining budget. Decisions happen every recompute_interval groups.
class BudgetController {
  public:
    struct Transition {
        uint64_t at_group = 0;
        ProcessingMode from = ProcessingMode::concise;
        ProcessingMode to = ProcessingMode::concise;
    };

    BudgetController(double budget_seconds, const BudgetParams& params, uint64_t total_groups)
        : params_(params), budget_(budget_seconds), total_(total_groups),
          start_(std::chrono::steady_clock::now()) {}

    ProcessingMode next_mode() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return mode_;
    }

    void note_chunk(uint64_t groups, double seconds, ProcessingMode mode) {
        if (groups == 0)
            return;
        std::lock_guard<std::mutex> lock(mutex_);
        const double per_group = seconds / static_cast<double>(groups);
        const int mi = index_of(mode);
        ema_[mi] = has_[mi] ? params_.alpha * per_group + (1.0 - params_.alpha) * ema_[mi]
                            : per_group;
        has_[mi] = true;
        window_.push_back(per_group);
        while (window_.size() > params_.window)
            window_.pop_front();
        done_ += groups;
        pending_ += groups;
        if (pending_ >= params_.recompute_interval) {
            pending_ = 0;
            decide();
        }
    }

    std::vector<Transition> transitions() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return transitions_;
    }

  private:
    static int index_of(ProcessingMode m) {
        if (m == ProcessingMode::concise)
            return 0;
        return m == ProcessingMode::boolean_mode ? 1 : 2;
    }

    static ProcessingMode mode_at(int i) {
        if (i == 0)
            return ProcessingMode::concise;
        return i == 1 ? ProcessingMode::boolean_mode : ProcessingMode::skip;
    }

    // Projected seconds to finish the remaining groups in the given mode.
    // Unmeasured boolean falls back to half the concise rate; unmeasured
    // skip projects as zero classification cost.
    double projected(int mi, uint64_t groups_left) const {
        const double left = static_cast<double>(groups_left);
        if (has_[mi])
            return ema_[mi] * left;
        if (mi == 1 && has_[0])
            return 0.5 * ema_[0] * left;
        return 0.0;
    }

    void decide() {
        if (done_ >= total_)
            return;
        const uint64_t left = total_ - done_;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const double remaining = budget_ - elapsed;
        int mi = index_of(mode_);
        while (mi < 2 && projected(mi, left) > remaining) {
            ++mi;
            step_to(mi);
        }
        if (mi > 0 && projected(mi - 1, left) < params_.hysteresis * remaining)
            step_to(mi - 1);
    }

    void step_to(int mi) {
        transitions_.push_back({done_, mode_, mode_at(mi)});
        mode_ = mode_at(mi);
    }

    mutable std::mutex mutex_;
    BudgetParams params_;
    double budget_ = 0.0;
    uint64_t total_ = 0;
    uint64_t done_ = 0;
    uint64_t pending_ = 0;
    std::chrono::steady_clock::time_point start_;
    ProcessingMode mode_ = ProcessingMode::concise;
    double ema_[3] = {0.0, 0.0, 0.0};
    bool has_[3] = {false, false, false};
    std::deque<double> window_;
    std::vector<Transition> transitions_;
};

// Contiguous run of whole page groups; the unit handed to a worker. Groups
// are never split, so vicinity windows stay intact.
struct ChunkPlan {
    size_t first_group = 0;
    size_t count = 0;
};

inline std::vector<ChunkPlan> plan_chunks(const std::vector<PageGroup>& groups,
                                          uint64_t chunk_pages) {
    std::vector<ChunkPlan> chunks;
    size_t i = 0;
    while (i < groups.size()) {
        ChunkPlan c{i, 1};
        uint64_t pages = std::max<uint64_t>(1, groups[i].pages.size());
        ++i;
        while (i < groups.size()) {
            const uint64_t next = std::max<uint64_t>(1, groups[i].pages.size());
            if (pages + next > chunk_pages)
                break;
            pages += next;
            ++c.count;
            ++i;
        }
        chunks.push_back(c);
    }
    return chunks;
}

// Runs fn(0..count-1) on a pool. Work is claimed through an atomic index;
// the first exception cancels the remaining work and is rethrown after the
// join so a worker failure surfaces as a run failure.
inline void run_parallel(size_t count, uint32_t threads, const std::function<void(size_t)>& fn) {
    if (count == 0)
        return;
    threads = static_cast<uint32_t>(std::min<size_t>(threads, count));
    if (threads <= 1) {
        for (size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (uint32_t t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

struct AnalyzeResult {
    nlohmann::json stats;
};

namespace detail {

struct WorkerOutput {
    ReportAggregate sensitive;
    ReportAggregate non_sensitive;
    ClassifyStats stats;
    uint64_t groups_concise = 0;
    uint64_t groups_boolean = 0;
    uint64_t groups_skip = 0;
    uint64_t groups_early_exit = 0;
    uint64_t sensitive_findings = 0;
    uint64_t non_sensitive_findings = 0;
    uint64_t unidentified_tokens = 0;
    uint64_t pages_fully_redacted = 0;
    std::map<std::string, uint64_t> sensitive_by_entity;
    std::vector<RedactionTarget> log_targets; // log inputs only
};

// Accounts one scanned group's results into the worker output and returns
// the redaction targets for its sensitive findings.
inline std::vector<RedactionTarget> account_scanned_group(const PageGroup& g, const GroupResult& r,
                                                          WorkerOutput& out) {
    std::vector<RedactionTarget> targets;
    size_t fi = 0;
    for (uint32_t ti = 0; ti < g.tokens.size(); ++ti) {
        if (fi < r.findings.size() && r.findings[fi].token_ordinal == ti) {
            const Finding& f = r.findings[fi];
            if (r.sensitive[fi]) {
                ++out.sensitive_findings;
                ++out.sensitive_by_entity[f.entity];
                out.sensitive.add(f.token.text, f.entity);
                targets.push_back(RedactionTarget{f.token.page_index, f.token.byte_offset,
                                                  f.token.byte_len, f.token.text, f.entity});
            } else {
                ++out.non_sensitive_findings;
                out.non_sensitive.add(f.token.text, f.entity);
            }
            ++fi;
        } else {
            ++out.unidentified_tokens;
            out.non_sensitive.add(g.tokens[ti].text, "UNIDENTIFIED");
        }
    }
    return targets;
}

} // namespace detail

// The analyze pipeline: parse, plan identifiers, classify groups in
// parallel, redact, and write the output plus both reports and a stats file
// at <output>.stats.json.
inline AnalyzeResult analyze(const EngineConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto t_start = clock::now();
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    const bool is_dump = cfg.input_type == "dump";

    // Plan: knowledge base, identifier set, redaction policy, key material.
    const auto t_plan = clock::now();
    SensitivityMapping mapping;
    if (!cfg.mapping_path.empty())
        mapping = load_mapping(cfg.mapping_path);
    FeedbackStore feedback;
    if (!cfg.feedback_store.empty() && std::filesystem::exists(cfg.feedback_store))
        feedback = load_feedback_store(cfg.feedback_store);
    const KnowledgeBase kb = build_knowledge_base(std::move(mapping), std::move(feedback));
    const ClassifyContext ctx =
        build_classify_context(kb, cfg.vicinity_unit, cfg.toggles.quasi_skip,
                               cfg.toggles.min_identifiers, cfg.toggles.mru);
    validate_redaction_policy(cfg.redaction, is_dump);
    if (cfg.redaction.method != RedactMethod::hash)
        check_overwrite_strings(cfg.redaction, ctx.identifiers);
    std::optional<KeyMaterial> key;
    if (cfg.redaction.method == RedactMethod::encrypt || cfg.encrypt_reports)
        key = load_key_material(cfg.redaction.key_file);
    const KeyMaterial* key_ptr = key ? &*key : nullptr;
    const double plan_seconds = seconds_since(t_plan);

    // Parse: layout only for dumps; tokens are produced per chunk.
    const auto t_parse = clock::now();
    std::vector<uint8_t> input_bytes = read_file(cfg.input);
    std::string log_text;
    std::vector<PageGroup> groups;
    if (is_dump) {
        groups = parse_dump_layout(input_bytes.data(), input_bytes.size());
    } else {
        log_text.assign(reinterpret_cast<const char*>(input_bytes.data()), input_bytes.size());
        groups = parse_log(log_text);
    }
    const std::vector<ChunkPlan> chunks = plan_chunks(groups, cfg.chunk_pages);
    const double parse_seconds = seconds_since(t_parse);

    const bool dynamic = cfg.processing_mode == "dynamic";
    const ProcessingMode fixed_mode =
        dynamic ? ProcessingMode::concise : mode_from_name(cfg.processing_mode);
    std::optional<BudgetController> controller;
    if (dynamic) {
        // The budget covers the whole run, not just classification: charge the
        // setup already spent and hold back a write estimate (writing the
        // output costs about what reading it did) so the controller steers the
        // classify phase toward what is actually left.
        const double classify_budget =
            std::max(0.0, *cfg.time_budget - plan_seconds - 2.0 * parse_seconds);
        controller.emplace(classify_budget, cfg.budget, groups.size());
    }

    // Classify and redact, chunk by chunk.
    const auto t_classify = clock::now();
    std::vector<uint8_t> output_bytes;
    if (is_dump)
        output_bytes = input_bytes;
    const uint32_t worker_count =
        static_cast<uint32_t>(std::min<size_t>(cfg.threads, std::max<size_t>(chunks.size(), 1)));
    std::vector<detail::WorkerOutput> outputs(std::max<uint32_t>(worker_count, 1));
    std::atomic<uint32_t> worker_ids{0};
    thread_local int worker_slot = -1;

    auto process_chunk = [&](size_t ci) {
        if (worker_slot < 0)
            worker_slot = static_cast<int>(worker_ids.fetch_add(1) % outputs.size());
        detail::WorkerOutput& out = outputs[static_cast<size_t>(worker_slot)];
        const ChunkPlan& chunk = chunks[ci];
        const ProcessingMode mode = dynamic ? controller->next_mode() : fixed_mode;
        const auto t0 = clock::now();
        // A fresh MRU per chunk keeps results independent of which worker
        // ran which chunk.
        MruState mru;
        mru.reset(ctx.identifiers.size());
        for (size_t gi = chunk.first_group; gi < chunk.first_group + chunk.count; ++gi) {
            PageGroup& g = groups[gi];
            if (is_dump && g.tokens.empty() && mode != ProcessingMode::skip)
                tokenize_group(input_bytes.data(), g, cfg.encoding);
            GroupResult r = classify_group(g, mode, mru, ctx);
            out.stats.merge(r.stats);
            switch (mode) {
            case ProcessingMode::concise:
                ++out.groups_concise;
                break;
            case ProcessingMode::boolean_mode:
                ++out.groups_boolean;
                break;
            default:
                ++out.groups_skip;
                break;
            }
            if (r.early_exit) {
                // Boolean trigger or skip mode: the group's whole payload is
                // sensitive. Reports carry one PAGE row per affected page.
                ++out.groups_early_exit;
                if (is_dump) {
                    std::vector<uint64_t> pages;
                    pages.reserve(g.pages.size());
                    for (const PageRef& p : g.pages) {
                        pages.push_back(p.page_index);
                        out.sensitive.add("PAGE:" + std::to_string(p.page_index), "PAGE");
                    }
                    out.pages_fully_redacted += pages.size();
                    redact_whole_pages(output_bytes, pages, cfg.redaction, cfg.encoding);
                } else {
                    out.sensitive.add("PAGE:" + std::to_string(g.group_id), "PAGE");
                    ++out.pages_fully_redacted;
                    RedactionTarget t;
                    t.page_index = g.group_id;
                    t.byte_offset = g.log_begin;
                    t.byte_len = static_cast<uint32_t>(g.log_end - g.log_begin);
                    t.token = log_text.substr(g.log_begin, g.log_end - g.log_begin);
                    t.entity = "PAGE";
                    out.log_targets.push_back(std::move(t));
                }
            } else {
                std::vector<RedactionTarget> targets = detail::account_scanned_group(g, r, out);
                if (is_dump)
                    splice_dump_extents(output_bytes, targets, cfg.redaction, key_ptr, cfg.encoding);
                else
                    out.log_targets.insert(out.log_targets.end(),
                                           std::make_move_iterator(targets.begin()),
                                           std::make_move_iterator(targets.end()));
            }
            g.tokens.clear();
            g.tokens.shrink_to_fit();
        }
        if (dynamic)
            controller->note_chunk(chunk.count, seconds_since(t0), mode);
    };
    run_parallel(chunks.size(), worker_count, process_chunk);
    const double classify_seconds = seconds_since(t_classify);

    // Merge worker outputs.
    detail::WorkerOutput total;
    for (detail::WorkerOutput& w : outputs) {
        total.sensitive.merge(w.sensitive);
        total.non_sensitive.merge(w.non_sensitive);
        total.stats.merge(w.stats);
        total.groups_concise += w.groups_concise;
        total.groups_boolean += w.groups_boolean;
        total.groups_skip += w.groups_skip;
        total.groups_early_exit += w.groups_early_exit;
        total.sensitive_findings += w.sensitive_findings;
        total.non_sensitive_findings += w.non_sensitive_findings;
        total.unidentified_tokens += w.unidentified_tokens;
        total.pages_fully_redacted += w.pages_fully_redacted;
        for (const auto& [k, v] : w.sensitive_by_entity)
            total.sensitive_by_entity[k] += v;
        total.log_targets.insert(total.log_targets.end(),
                                 std::make_move_iterator(w.log_targets.begin()),
                                 std::make_move_iterator(w.log_targets.end()));
    }

    // Write the output file and reports atomically.
    const auto t_write = clock::now();
    if (is_dump) {
        if (output_bytes.size() != input_bytes.size())
            throw RunError("output length drifted from input length");
        write_file_atomic(cfg.output, output_bytes);
    } else {
        write_file_atomic(cfg.output,
                          apply_redactions_log(log_text, total.log_targets, cfg.redaction, key_ptr));
    }
    const KeyMaterial* report_key = cfg.encrypt_reports ? key_ptr : nullptr;
    write_report_file(cfg.sensitive_report, total.sensitive, report_key);
    write_report_file(cfg.non_sensitive_report, total.non_sensitive, report_key);
    const double write_seconds = seconds_since(t_write);

    nlohmann::json stats;
    stats["run"] = {{"command", "analyze"},
                    {"input", cfg.input},
                    {"output", cfg.output},
                    {"input_type", cfg.input_type},
                    {"threads", cfg.threads},
                    {"processing_mode", cfg.processing_mode},
                    {"chunks", chunks.size()}};
    stats["counts"] = {{"groups_total", groups.size()},
                       {"groups_concise", total.groups_concise},
                       {"groups_boolean", total.groups_boolean},
                       {"groups_skip", total.groups_skip},
                       {"groups_early_exit", total.groups_early_exit},
                       {"sensitive_findings", total.sensitive_findings},
                       {"non_sensitive_findings", total.non_sensitive_findings},
                       {"unidentified_tokens", total.unidentified_tokens},
                       {"pages_fully_redacted", total.pages_fully_redacted},
                       {"tokens_seen", total.stats.tokens_seen},
                       {"identifier_evals", total.stats.identifier_evals},
                       {"evals_skipped", total.stats.evals_skipped},
                       {"input_bytes", input_bytes.size()},
                       {"sensitive_by_entity", total.sensitive_by_entity}};
    stats["timing"] = {{"plan_seconds", plan_seconds},
                       {"parse_seconds", parse_seconds},
                       {"classify_redact_seconds", classify_seconds},
                       {"write_seconds", write_seconds},
                       {"total_seconds", seconds_since(t_start)}};
    if (dynamic) {
        nlohmann::json transitions = nlohmann::json::array();
        for (const auto& tr : controller->transitions())
            transitions.push_back({{"at_group", tr.at_group},
                                   {"from", mode_name(tr.from)},
                                   {"to", mode_name(tr.to)}});
        stats["transitions"] = transitions;
    }
    write_file_atomic(cfg.output + ".stats.json", stats.dump(2) + "\n");
    return AnalyzeResult{std::move(stats)};
}

// Feedback: fold user-marked report rows into the persistent store. Rows
// marked N in the sensitive report become suppressions; rows marked N in the
// non-sensitive report become forced-sensitive tokens.
inline void run_feedback(const EngineConfig& cfg) {
    FeedbackStore store;
    if (std::filesystem::exists(cfg.feedback_store))
        store = load_feedback_store(cfg.feedback_store);
    std::optional<KeyMaterial> key;
    if (cfg.encrypt_reports)
        key = load_key_material(cfg.redaction.key_file);
    const KeyMaterial* key_ptr = key ? &*key : nullptr;

    std::set<std::pair<std::string, std::string>> suppress_add;
    std::set<std::string> force_add;
    if (!cfg.marked_sensitive_report.empty())
        for (const ReportRow& row : parse_report_file(cfg.marked_sensitive_report, key_ptr))
            if (!row.marked_correct)
                suppress_add.emplace(detail::fold_ascii_lower(row.token), row.entity_type);
    if (!cfg.marked_non_sensitive_report.empty())
        for (const ReportRow& row : parse_report_file(cfg.marked_non_sensitive_report, key_ptr))
            if (!row.marked_correct)
                force_add.insert(detail::fold_ascii_lower(row.token));
    for (const auto& [token, entity] : suppress_add)
        if (force_add.count(token))
            throw ConfigError("conflicting feedback marks for token \"" + token +
                              "\": suppressed for " + entity + " and forced sensitive");
    store.suppress.insert(suppress_add.begin(), suppress_add.end());
    store.force_sensitive.insert(force_add.begin(), force_add.end());
    save_feedback_store(cfg.feedback_store, store);
}

inline void run_augment(const EngineConfig& cfg) {
    ingest_augment(cfg.augment_source, cfg.augment_entity, cfg.augment_artifact);
}

inline void run_generate(const EngineConfig& cfg) {
    GeneratedDump dump = generate_dump(*cfg.generate);
    write_file_atomic(cfg.output, dump.bytes);
    if (!cfg.manifest_path.empty())
        write_manifest_csv(cfg.manifest_path, dump.manifest);
}

} // namespace dumpscrub
