#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "uqbench/analysis.hpp"
#include "uqbench/model_client.hpp"
#include "uqbench/prompts.hpp"
#include "uqbench/types.hpp"

namespace uqbench::store {

// JSONL dataset, one {id, question, answer, task} object per line. Gold
// answers are canonicalized on ingest; a gold that fails to canonicalize is a
// dataset error, not an INVALID value. Throws StoreError with the line number
// on malformed lines or duplicate ids.
std::vector<Question> load_dataset(const std::string& path,
                                   const std::string& dataset_tag = {});

// JSONL pool of {question, answer} few-shot demonstrations.
std::vector<prompts::Exemplar> load_exemplar_pool(const std::string& path);

// One TraceSet as a single JSON object (one line when dumped); bit-exact
// round-trip for all numeric fields.
std::string trace_to_jsonl(const TraceSet& trace);
TraceSet trace_from_jsonl(const std::string& line);

// Append-only JSONL trace store. Writes are one write(2) call per record on
// an O_APPEND descriptor guarded by an exclusive flock, so a crash never
// leaves a half-record that parses and two writers never interleave.
class TraceStore {
public:
    // Opens (creating if needed) for append when writable is true; the
    // exclusive lock is held for the store's lifetime. Throws StoreError when
    // another writer holds the lock.
    explicit TraceStore(std::string path, bool writable = true);
    ~TraceStore();

    TraceStore(const TraceStore&) = delete;
    TraceStore& operator=(const TraceStore&) = delete;

    void put(const TraceSet& trace);

    // Newest record matching both keys; corrupt lines are skipped with a
    // warning on stderr.
    std::optional<TraceSet> get(const std::string& question_id,
                                const std::string& config_fingerprint) const;

    // All newest-wins records for one fingerprint, keyed by question id.
    std::map<std::string, TraceSet> load_all(const std::string& config_fingerprint) const;

    const std::string& path() const { return path_; }

private:
    std::string path_;
    int fd_ = -1;
    mutable std::mutex write_mu_;
};

std::string sha256_hex(const std::string& bytes);

// Collision-resistant digest over the length-framed canonical serialization
// of the inputs; stable across platforms. call_ordinal is an opaque stream
// label (the runner passes "question|phase|perturbation|ordinal").
std::string cache_key(const std::string& model_id, const std::string& prompt,
                      double temperature, std::optional<std::uint64_t> seed,
                      const std::string& call_ordinal);

// Per-generation JSONL cache: survives crashes at single-call granularity.
class GenerationCache {
public:
    explicit GenerationCache(std::string path);
    ~GenerationCache();

    GenerationCache(const GenerationCache&) = delete;
    GenerationCache& operator=(const GenerationCache&) = delete;

    std::optional<GenerationResult> get(const std::string& key) const;
    void put(const std::string& key, const GenerationResult& result);

    std::size_t size() const;

private:
    std::string path_;
    int fd_ = -1;
    mutable std::mutex mu_;
    std::map<std::string, GenerationResult> entries_;
};

// Wraps a client with a GenerationCache; hits skip the inner client entirely
// and come back flagged cached.
class CachingClient final : public ModelClient {
public:
    CachingClient(std::shared_ptr<ModelClient> inner, std::shared_ptr<GenerationCache> cache);

    GenerationResult generate(const GenerationRequest& req) override;
    std::string model_id() const override;

private:
    std::shared_ptr<ModelClient> inner_;
    std::shared_ptr<GenerationCache> cache_;
};

// Benchmark rows as JSONL; intra serializes as null when absent.
std::string row_to_jsonl(const analysis::BenchmarkRow& row);
analysis::BenchmarkRow row_from_jsonl(const std::string& line);
void save_rows(const std::vector<analysis::BenchmarkRow>& rows, const std::string& path);
std::vector<analysis::BenchmarkRow> load_rows(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace uqbench::store
