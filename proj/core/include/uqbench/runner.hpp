#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "uqbench/analysis.hpp"
#include "uqbench/config.hpp"
#include "uqbench/model_client.hpp"

namespace uqbench::runner {

// File layout of one run. The run id is a digest of everything that shapes
// sampling (fingerprint, dataset bytes, script bytes, pool bytes, confidence
// flag), so rerunning an identical configuration lands on the same files and
// resumes instead of duplicating work.
struct RunPaths {
    std::string dir;
    std::string run_id;

    std::string manifest(const std::string& command) const;
    std::string traces() const;
    std::string cache() const;
    std::string rows() const;
    std::string matrix_csv(const std::string& method) const;
    std::string scatter_csv(const std::string& metric, const std::string& truth) const;
    std::string curve_csv(const std::string& truth) const;
};

// Resolved model id: the script's for mock runs, cfg.model for live ones.
std::string resolve_model_id(const RunConfig& cfg);

RunPaths make_run_paths(const RunConfig& cfg);

struct BuildStats {
    std::size_t total = 0;
    std::size_t completed = 0;
    std::size_t skipped = 0; // already in the store for this fingerprint
    std::size_t failed = 0;
    bool stopped = false;
};

// Perturb + sample every dataset question into the trace store. Traces are
// flushed in dataset order so an interrupted-then-resumed run produces a
// byte-identical file. client_override replaces the configured client (tests
// inject counting or scripted clients); stop requests a graceful halt after
// in-flight questions finish.
BuildStats run_build(const RunConfig& cfg,
                     std::shared_ptr<ModelClient> client_override = nullptr,
                     std::atomic<bool>* stop = nullptr);

// Traces -> one BenchmarkRow per question (sorted by id), saved as JSONL.
std::vector<analysis::BenchmarkRow> run_compute(const RunConfig& cfg);

// Rows -> correlation matrices, scatter tables, accuracy curves (CSV).
void run_analyze(const RunConfig& cfg);

// Bundled offline pipeline: writes a small dataset + mock script, then runs
// build, compute, and analyze. Fully deterministic for a given seed.
void run_mock_demo(RunConfig cfg);

} // namespace uqbench::runner
