#include <atomic>
#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uqbench/config.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/runner.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_sigint(int) {
    g_stop.store(true);
}

// The value of --config, located before CLI11 runs so the file can seed the
// defaults and explicit flags still win.
std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            return argv[i + 1];
        }
        if (arg.rfind("--config=", 0) == 0) {
            return arg.substr(std::string("--config=").size());
        }
    }
    return {};
}

void add_common_flags(CLI::App* cmd, uqbench::RunConfig& cfg) {
    cmd->add_option("--config", "JSON config file (flags override it)")
        ->type_name("PATH");
    cmd->add_option("--outdir", cfg.outdir, "output directory");
    cmd->add_option("--model", cfg.model, "live model id");
    cmd->add_option("--base-url", cfg.base_url, "live endpoint, scheme://host[:port]");
    cmd->add_option("--mock-script", cfg.mock_script, "scripted mock client file");
    cmd->add_option("--m", cfg.m, "perturbations per question (index 0 is the original)");
    cmd->add_option("--k", cfg.k, "samples per perturbation");
    cmd->add_option("--temperature", cfg.temperature, "sampling temperature");
    cmd->add_option("--seed", cfg.seed, "seed for all pseudo-randomness");
    cmd->add_option("--inflight", cfg.inflight, "max concurrent generations");
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_sigint);

    uqbench::RunConfig cfg;
    const std::string config_path = find_config_arg(argc, argv);
    if (!config_path.empty()) {
        try {
            cfg = uqbench::load_config_file(config_path);
        } catch (const uqbench::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        }
    }

    CLI::App app{"Benchmark harness: perturbed sampling, uncertainty ground truth, "
                 "black-box metrics, and their correlation"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help); // bad flags print full usage

    auto* build = app.add_subcommand("build", "perturb + sample into the trace store");
    add_common_flags(build, cfg);
    build->add_option("--dataset", cfg.dataset, "questions JSONL")->type_name("PATH");
    build->add_option("--pool", cfg.pool, "few-shot exemplar pool JSONL");
    build->add_flag("--with-confidence", cfg.with_confidence,
                    "elicit a verbalized confidence per sample");
    build->add_option("--traces", cfg.traces, "explicit trace file path");

    auto* compute = app.add_subcommand("compute", "traces -> benchmark rows");
    add_common_flags(compute, cfg);
    compute->add_option("--dataset", cfg.dataset, "questions JSONL (locates the run)");
    compute->add_option("--pool", cfg.pool, "few-shot exemplar pool JSONL");
    compute->add_flag("--with-confidence", cfg.with_confidence,
                      "the build elicited confidences");
    compute->add_option("--traces", cfg.traces, "explicit trace file path");
    compute->add_option("--rows", cfg.rows, "explicit rows output path");

    auto* analyze = app.add_subcommand("analyze", "rows -> correlations, scatters, curve");
    add_common_flags(analyze, cfg);
    analyze->add_option("--dataset", cfg.dataset, "questions JSONL (locates the run)");
    analyze->add_option("--pool", cfg.pool, "few-shot exemplar pool JSONL");
    analyze->add_flag("--with-confidence", cfg.with_confidence,
                      "the build elicited confidences");
    analyze->add_option("--rows", cfg.rows, "explicit rows input path");
    analyze->add_option("--method", cfg.method, "pearson, spearman, or both");
    analyze->add_option("--bins", cfg.bins, "accuracy curve bins");

    auto* demo = app.add_subcommand("mock-demo", "offline end-to-end pipeline demo");
    add_common_flags(demo, cfg);
    demo->add_option("--bins", cfg.bins, "accuracy curve bins");
    demo->add_option("--method", cfg.method, "pearson, spearman, or both");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return 2;
    }

    try {
        if (build->parsed()) {
            const auto stats = uqbench::runner::run_build(cfg, nullptr, &g_stop);
            return (stats.failed > 0 || stats.stopped) ? 1 : 0;
        }
        if (compute->parsed()) {
            uqbench::runner::run_compute(cfg);
            return 0;
        }
        if (analyze->parsed()) {
            uqbench::runner::run_analyze(cfg);
            return 0;
        }
        uqbench::runner::run_mock_demo(cfg);
        return 0;
    } catch (const uqbench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
