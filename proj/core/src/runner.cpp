#include "uqbench/runner.hpp"

#include <algorithm>
#include <condition_variable>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "uqbench/builder.hpp"
#include "uqbench/demo.hpp"
#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/http_client.hpp"
#include "uqbench/metrics.hpp"
#include "uqbench/mock_client.hpp"
#include "uqbench/store.hpp"
#include "uqbench/truth.hpp"

namespace uqbench::runner {

namespace {

using nlohmann::json;

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string file_digest_or_empty(const std::string& path) {
    if (path.empty()) {
        return "-";
    }
    return store::sha256_hex(store::read_text_file(path));
}

json config_to_json(const RunConfig& cfg, const std::string& model_id) {
    json j;
    j["dataset"] = cfg.dataset;
    j["pool"] = cfg.pool;
    j["outdir"] = cfg.outdir;
    j["model"] = model_id;
    j["base_url"] = cfg.base_url;
    j["mock_script"] = cfg.mock_script;
    j["m"] = cfg.m;
    j["k"] = cfg.k;
    j["temperature"] = cfg.temperature;
    j["seed"] = cfg.seed;
    j["with_confidence"] = cfg.with_confidence;
    j["bins"] = cfg.bins;
    j["inflight"] = cfg.inflight;
    j["method"] = cfg.method;
    return j;
}

// Manifest goes down before any output so a crashed run is still attributable.
void write_manifest(const RunConfig& cfg, const RunPaths& paths, const std::string& command,
                    const std::string& model_id, const std::string& fingerprint,
                    const json& outputs) {
    json j;
    j["command"] = command;
    j["run_id"] = paths.run_id;
    j["created_at"] = utc_now();
    j["config"] = config_to_json(cfg, model_id);
    j["config_fingerprint"] = fingerprint;
    j["outputs"] = outputs;
    store::write_text_file(paths.manifest(command), j.dump(2) + "\n");
}

std::shared_ptr<ModelClient> make_client(const RunConfig& cfg) {
    if (!cfg.mock_script.empty()) {
        return std::make_shared<MockClient>(load_mock_script(cfg.mock_script), cfg.seed);
    }
    if (cfg.base_url.empty()) {
        throw ConfigError("either mock_script or base_url is required");
    }
    HttpClientConfig hc;
    hc.base_url = cfg.base_url;
    hc.model = cfg.model;
    hc.max_inflight = cfg.inflight;
    return std::make_shared<HttpModelClient>(std::move(hc));
}

std::string fingerprint_for(const RunConfig& cfg, const std::string& model_id) {
    return make_config_fingerprint(model_id, cfg.temperature, cfg.m, cfg.k, cfg.seed);
}

enum class SlotState { Pending, Done, Failed };

} // namespace

std::string RunPaths::manifest(const std::string& command) const {
    return dir + "/manifest_" + command + "_" + run_id + ".json";
}
std::string RunPaths::traces() const {
    return dir + "/traces_" + run_id + ".jsonl";
}
std::string RunPaths::cache() const {
    return dir + "/cache_" + run_id + ".jsonl";
}
std::string RunPaths::rows() const {
    return dir + "/rows_" + run_id + ".jsonl";
}
std::string RunPaths::matrix_csv(const std::string& method) const {
    return dir + "/matrix_" + method + "_" + run_id + ".csv";
}
std::string RunPaths::scatter_csv(const std::string& metric, const std::string& truth) const {
    return dir + "/scatter_" + metric + "_" + truth + "_" + run_id + ".csv";
}
std::string RunPaths::curve_csv(const std::string& truth) const {
    return dir + "/curve_" + truth + "_" + run_id + ".csv";
}

std::string resolve_model_id(const RunConfig& cfg) {
    if (!cfg.mock_script.empty()) {
        return load_mock_script(cfg.mock_script).model_id;
    }
    if (cfg.model.empty()) {
        throw ConfigError("live runs need --model");
    }
    return cfg.model;
}

RunPaths make_run_paths(const RunConfig& cfg) {
    const std::string model_id = resolve_model_id(cfg);
    std::string canon = fingerprint_for(cfg, model_id);
    canon += "|dataset=" + file_digest_or_empty(cfg.dataset);
    canon += "|script=" + file_digest_or_empty(cfg.mock_script);
    canon += "|pool=" + file_digest_or_empty(cfg.pool);
    canon += "|confidence=" + std::string(cfg.with_confidence ? "1" : "0");
    RunPaths paths;
    paths.dir = cfg.outdir;
    paths.run_id = store::sha256_hex(canon).substr(0, 12);
    return paths;
}

BuildStats run_build(const RunConfig& cfg, std::shared_ptr<ModelClient> client_override,
                     std::atomic<bool>* stop) {
    validate_config(cfg);
    if (cfg.dataset.empty()) {
        throw ConfigError("build needs --dataset");
    }
    std::filesystem::create_directories(cfg.outdir);

    std::shared_ptr<ModelClient> base = client_override ? client_override : make_client(cfg);
    const std::string model_id = base->model_id();
    const std::string fingerprint = fingerprint_for(cfg, model_id);

    const auto questions = store::load_dataset(
        cfg.dataset, std::filesystem::path(cfg.dataset).stem().string());

    RunPaths paths = make_run_paths(cfg);
    const std::string traces_path = cfg.traces.empty() ? paths.traces() : cfg.traces;

    write_manifest(cfg, paths, "build", model_id, fingerprint,
                   json{{"traces", traces_path}, {"cache", paths.cache()}});

    store::TraceStore trace_store(traces_path, /*writable=*/true);
    auto cache = std::make_shared<store::GenerationCache>(paths.cache());
    auto client = std::make_shared<store::CachingClient>(base, cache);

    BuilderOptions opts;
    opts.m = cfg.m;
    opts.k = cfg.k;
    opts.temperature = cfg.temperature;
    opts.seed = cfg.seed;
    opts.with_confidence = cfg.with_confidence;
    if (!cfg.pool.empty()) {
        opts.pool = store::load_exemplar_pool(cfg.pool);
    }
    TraceBuilder builder(client, opts);

    BuildStats stats;
    stats.total = questions.size();

    const auto existing = trace_store.load_all(fingerprint);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (existing.count(questions[i].id) > 0) {
            stats.skipped += 1;
        } else {
            pending.push_back(i);
        }
    }

    std::mutex mu;
    std::condition_variable cv;
    std::vector<SlotState> state(pending.size(), SlotState::Pending);
    std::vector<TraceSet> slots(pending.size());
    std::atomic<std::size_t> next{0};
    std::size_t live_workers = 0;

    auto worker = [&] {
        for (;;) {
            if (stop != nullptr && stop->load()) {
                break;
            }
            const std::size_t idx = next.fetch_add(1);
            if (idx >= pending.size()) {
                break;
            }
            const Question& q = questions[pending[idx]];
            SlotState result = SlotState::Done;
            TraceSet trace;
            try {
                trace = builder.build_trace(q);
            } catch (const std::exception& e) {
                std::cerr << "error: question " << q.id << ": " << e.what() << "\n";
                result = SlotState::Failed;
            }
            std::lock_guard<std::mutex> lock(mu);
            state[idx] = result;
            if (result == SlotState::Done) {
                slots[idx] = std::move(trace);
            }
            cv.notify_all();
        }
        std::lock_guard<std::mutex> lock(mu);
        live_workers -= 1;
        cv.notify_all();
    };

    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.inflight),
                              std::max<std::size_t>(pending.size(), 1));
    std::vector<std::thread> threads;
    {
        std::lock_guard<std::mutex> lock(mu);
        live_workers = n_workers;
    }
    threads.reserve(n_workers);
    for (std::size_t i = 0; i < n_workers; ++i) {
        threads.emplace_back(worker);
    }

    // Flush strictly in dataset order so the file's byte layout is a pure
    // function of the dataset, not of scheduling. A stop leaves the store at
    // a clean prefix (plus the generation cache for everything in flight).
    {
        std::unique_lock<std::mutex> lock(mu);
        for (std::size_t idx = 0; idx < pending.size(); ++idx) {
            cv.wait(lock, [&] {
                return state[idx] != SlotState::Pending || live_workers == 0;
            });
            if (state[idx] == SlotState::Pending) {
                stats.stopped = true;
                break; // workers are gone; nothing more will arrive
            }
            if (state[idx] == SlotState::Failed) {
                stats.failed += 1;
                continue;
            }
            lock.unlock();
            trace_store.put(slots[idx]);
            lock.lock();
            slots[idx] = TraceSet{}; // free the flushed trace
            stats.completed += 1;
        }
    }
    for (auto& t : threads) {
        t.join();
    }
    if (stop != nullptr && stop->load()) {
        stats.stopped = true;
    }

    std::cout << "build: " << stats.completed << " built, " << stats.skipped
              << " already stored, " << stats.failed << " failed"
              << (stats.stopped ? " (stopped early)" : "") << "\n"
              << "traces: " << traces_path << "\n";
    return stats;
}

std::vector<analysis::BenchmarkRow> run_compute(const RunConfig& cfg) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.outdir);
    const std::string model_id = resolve_model_id(cfg);
    const std::string fingerprint = fingerprint_for(cfg, model_id);

    RunPaths paths = make_run_paths(cfg);
    const std::string traces_path = cfg.traces.empty() ? paths.traces() : cfg.traces;
    const std::string rows_path = cfg.rows.empty() ? paths.rows() : cfg.rows;

    write_manifest(cfg, paths, "compute", model_id, fingerprint,
                   json{{"rows", rows_path}});

    store::TraceStore trace_store(traces_path, /*writable=*/false);
    const auto traces = trace_store.load_all(fingerprint);
    if (traces.empty()) {
        throw StoreError("no traces in " + traces_path + " for fingerprint " + fingerprint);
    }

    std::vector<analysis::BenchmarkRow> rows;
    rows.reserve(traces.size());
    for (const auto& [id, trace] : traces) {
        analysis::BenchmarkRow row;
        row.question_id = id;
        row.profile = truth::profile(trace);
        row.metrics = metrics::report(trace);
        std::size_t correct = 0;
        for (const auto& s : trace.samples) {
            correct += s.correct ? 1 : 0;
        }
        row.accuracy = static_cast<double>(correct) / static_cast<double>(trace.samples.size());
        rows.push_back(std::move(row));
    }
    store::save_rows(rows, rows_path);
    std::cout << "compute: " << rows.size() << " rows\nrows: " << rows_path << "\n";
    return rows;
}

void run_analyze(const RunConfig& cfg) {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.outdir);
    const std::string model_id = resolve_model_id(cfg);
    const std::string fingerprint = fingerprint_for(cfg, model_id);

    RunPaths paths = make_run_paths(cfg);
    const std::string rows_path = cfg.rows.empty() ? paths.rows() : cfg.rows;
    const auto rows = store::load_rows(rows_path);

    std::vector<std::string> methods;
    if (cfg.method == "both") {
        methods = {"pearson", "spearman"};
    } else {
        methods = {cfg.method};
    }

    json outputs;
    for (const auto& name : methods) {
        outputs["matrix_" + name] = paths.matrix_csv(name);
    }
    for (auto mf : analysis::kMetricFields) {
        for (auto tf : analysis::kTruthFields) {
            const std::string key = std::string(analysis::metric_field_name(mf)) + "_" +
                                    std::string(analysis::truth_field_name(tf));
            outputs["scatter_" + key] =
                paths.scatter_csv(std::string(analysis::metric_field_name(mf)),
                                  std::string(analysis::truth_field_name(tf)));
        }
    }
    for (auto tf : analysis::kTruthFields) {
        outputs["curve_" + std::string(analysis::truth_field_name(tf))] =
            paths.curve_csv(std::string(analysis::truth_field_name(tf)));
    }
    write_manifest(cfg, paths, "analyze", model_id, fingerprint, outputs);

    for (const auto& name : methods) {
        const auto matrix =
            analysis::correlation_matrix(rows, analysis::method_from_name(name));
        const std::string csv = analysis::matrix_csv(matrix);
        store::write_text_file(paths.matrix_csv(name), csv);
        std::cout << "correlation (" << name << "):\n" << csv;
    }
    for (auto mf : analysis::kMetricFields) {
        for (auto tf : analysis::kTruthFields) {
            const auto table = analysis::export_scatter(rows, mf, tf);
            store::write_text_file(
                paths.scatter_csv(std::string(analysis::metric_field_name(mf)),
                                  std::string(analysis::truth_field_name(tf))),
                analysis::scatter_csv(table));
        }
    }
    for (auto tf : analysis::kTruthFields) {
        const auto curve = analysis::accuracy_curve(rows, tf, cfg.bins);
        store::write_text_file(paths.curve_csv(std::string(analysis::truth_field_name(tf))),
                               analysis::curve_csv(curve));
    }
    std::cout << "analyze: outputs in " << cfg.outdir << " (run " << paths.run_id << ")\n";
}

void run_mock_demo(RunConfig cfg) {
    std::filesystem::create_directories(cfg.outdir);
    const demo::DemoFiles files = demo::write_demo_inputs(cfg.outdir);
    cfg.dataset = files.dataset;
    cfg.mock_script = files.script;
    cfg.base_url.clear();
    cfg.pool.clear();
    cfg.traces.clear();
    cfg.rows.clear();
    cfg.m = 3;
    cfg.k = 4;
    cfg.with_confidence = true;

    const BuildStats stats = run_build(cfg);
    if (stats.failed > 0 || stats.stopped) {
        throw StoreError("mock demo build did not complete");
    }
    run_compute(cfg);
    run_analyze(cfg);
}

} // namespace uqbench::runner
