// dumpscrub: identify and redact sensitive data in memory dumps and logs.
//
//   dumpscrub <analyze|feedback|augment|generate|bench> --config <file.json>
//             [--threads N] [--mode concise|boolean|skip|dynamic]
//             [--budget SECONDS] [--seed U64]
//
// Exit codes: 0 success, 1 configuration error, 2 input parse error,
// 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <dumpscrub/bench.hpp>
#include <dumpscrub/engine.hpp>
#include <dumpscrub/errors.hpp>

namespace {

int run(int argc, char** argv) {
    CLI::App app{"dumpscrub: sensitive-data identification and redaction"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint32_t> threads;
    std::optional<std::string> mode;
    std::optional<double> budget;
    std::optional<uint64_t> seed;

    const char* commands[] = {"analyze", "feedback", "augment", "generate", "bench"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--threads", threads, "worker thread count");
        sub->add_option("--mode", mode, "processing mode (concise|boolean|skip|dynamic)");
        sub->add_option("--budget", budget, "time budget in seconds for dynamic mode");
        sub->add_option("--seed", seed, "seed override for generate and bench");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    dumpscrub::EngineConfig cfg = dumpscrub::load_engine_config(config_path);
    cfg.command = command;
    if (threads)
        cfg.threads = *threads;
    if (mode)
        cfg.processing_mode = *mode;
    if (budget)
        cfg.time_budget = *budget;
    if (seed) {
        if (cfg.generate)
            cfg.generate->seed = *seed;
        cfg.bench_plan["seed"] = *seed;
    }
    dumpscrub::validate_engine_config(cfg);

    if (command == "analyze") {
        dumpscrub::AnalyzeResult result = dumpscrub::analyze(cfg);
        std::cout << result.stats.dump(2) << "\n";
    } else if (command == "feedback") {
        dumpscrub::run_feedback(cfg);
        std::cout << "feedback folded into " << cfg.feedback_store << "\n";
    } else if (command == "augment") {
        dumpscrub::run_augment(cfg);
        std::cout << "augment artifact written to " << cfg.augment_artifact << "\n";
    } else if (command == "generate") {
        dumpscrub::run_generate(cfg);
        std::cout << "dump written to " << cfg.output << "\n";
    } else {
        dumpscrub::run_bench_command(cfg);
        std::cout << "bench results written to " << cfg.output << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const dumpscrub::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 1;
    } catch (const dumpscrub::ParseError& ex) {
        std::cerr << "parse error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
}
