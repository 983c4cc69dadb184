#include "uqbench/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uqbench/errors.hpp"

namespace uqbench {

namespace {

using nlohmann::json;

template <typename T>
void take(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

} // namespace

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError(path + ": config must be a JSON object");
    }

    static const char* kKnown[] = {
        "dataset", "pool",   "outdir", "model", "base_url",        "mock_script",
        "m",       "k",      "temperature",     "seed",            "with_confidence",
        "bins",    "inflight", "method",        "traces",          "rows",
    };
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* k : kKnown) {
            if (key == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(path + ": unknown config key \"" + key + "\"");
        }
    }

    RunConfig cfg;
    try {
        take(j, "dataset", cfg.dataset);
        take(j, "pool", cfg.pool);
        take(j, "outdir", cfg.outdir);
        take(j, "model", cfg.model);
        take(j, "base_url", cfg.base_url);
        take(j, "mock_script", cfg.mock_script);
        take(j, "m", cfg.m);
        take(j, "k", cfg.k);
        take(j, "temperature", cfg.temperature);
        take(j, "seed", cfg.seed);
        take(j, "with_confidence", cfg.with_confidence);
        take(j, "bins", cfg.bins);
        take(j, "inflight", cfg.inflight);
        take(j, "method", cfg.method);
        take(j, "traces", cfg.traces);
        take(j, "rows", cfg.rows);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.m < 1) {
        throw ConfigError("m must be >= 1");
    }
    if (cfg.k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (!(cfg.temperature >= 0.0)) {
        throw ConfigError("temperature must be >= 0");
    }
    if (cfg.bins < 2) {
        throw ConfigError("bins must be >= 2");
    }
    if (cfg.inflight < 1) {
        throw ConfigError("inflight must be >= 1");
    }
    if (cfg.method != "pearson" && cfg.method != "spearman" && cfg.method != "both") {
        throw ConfigError("method must be pearson, spearman, or both");
    }
}

} // namespace uqbench
