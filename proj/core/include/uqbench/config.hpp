#pragma once

#include <cstdint>
#include <string>

namespace uqbench {

// One flat config shared by every subcommand. Precedence is flags > config
// file > these defaults; the CLI owns the overlay order.
struct RunConfig {
    std::string dataset;     // JSONL questions
    std::string pool;        // optional exemplar pool (JSONL)
    std::string outdir = "runs";
    std::string model;       // live model id
    std::string base_url;    // live endpoint; empty means mock_script is required
    std::string mock_script; // scripted client; takes precedence over live
    int m = 5;
    int k = 10;
    double temperature = 1.0;
    std::uint64_t seed = 0;
    bool with_confidence = false;
    int bins = 10;
    int inflight = 8;
    std::string method = "both"; // pearson | spearman | both
    std::string traces;          // explicit trace file (default derived from run id)
    std::string rows;            // explicit rows file (default derived from run id)
};

// Strict JSON object: an unknown key is a ConfigError, not a silent ignore.
RunConfig load_config_file(const std::string& path);

// Basic cross-field checks shared by the subcommands.
void validate_config(const RunConfig& cfg);

} // namespace uqbench
