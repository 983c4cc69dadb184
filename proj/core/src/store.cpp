#include "uqbench/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/sha.h>

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"

namespace uqbench::store {

namespace {

using nlohmann::json;

std::string gold_from_json(const json& answer, Task task) {
    std::string raw;
    if (answer.is_boolean()) {
        raw = answer.get<bool>() ? "yes" : "no";
    } else if (answer.is_number_integer()) {
        raw = std::to_string(answer.get<long long>());
    } else if (answer.is_number_float()) {
        raw = format_double(answer.get<double>());
    } else if (answer.is_string()) {
        raw = answer.get<std::string>();
        if (task == Task::Boolean) {
            // Accept true/false spellings alongside yes/no.
            std::string folded;
            for (char c : raw) {
                folded += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            }
            if (folded == "true") raw = "yes";
            if (folded == "false") raw = "no";
        }
    } else {
        throw StoreError("answer must be a string, number, or boolean");
    }
    const std::string canonical = canonicalize(raw, task);
    if (is_invalid(canonical)) {
        throw StoreError("gold answer does not canonicalize: \"" + raw + "\"");
    }
    return canonical;
}

json question_to_json(const Question& q) {
    json j;
    j["id"] = q.id;
    j["question"] = q.text;
    j["answer"] = q.gold_answer;
    j["task"] = std::string(task_name(q.task));
    if (!q.dataset_tag.empty()) {
        j["dataset"] = q.dataset_tag;
    }
    return j;
}

Question question_from_json(const json& j) {
    Question q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("question").get<std::string>();
    q.task = task_from_name(j.at("task").get<std::string>());
    q.gold_answer = gold_from_json(j.at("answer"), q.task);
    q.dataset_tag = j.value("dataset", std::string());
    return q;
}

json tokens_to_json(const std::vector<TokenLogProb>& tokens) {
    json arr = json::array();
    for (const auto& t : tokens) {
        arr.push_back(json::array({t.token, t.top1_logprob, t.top2_logprob}));
    }
    return arr;
}

std::vector<TokenLogProb> tokens_from_json(const json& arr) {
    std::vector<TokenLogProb> out;
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 3) {
            throw StoreError("token record must be [text, top1_logprob, top2_logprob]");
        }
        out.push_back({t[0].get<std::string>(), t[1].get<double>(), t[2].get<double>()});
    }
    return out;
}

int open_append_locked(const std::string& path) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) {
        throw StoreError("cannot open " + path + ": " + std::strerror(errno));
    }
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
        const int err = errno;
        ::close(fd);
        throw StoreError("another writer holds " + path + ": " + std::strerror(err));
    }
    return fd;
}

void append_line(int fd, const std::string& path, std::string line) {
    line.push_back('\n');
    std::size_t done = 0;
    while (done < line.size()) {
        const ssize_t n = ::write(fd, line.data() + done, line.size() - done);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw StoreError("write to " + path + " failed: " + std::strerror(errno));
        }
        done += static_cast<std::size_t>(n);
    }
}

// Calls fn(line_number, parsed) for every intact JSON line; corrupt lines
// warn and are skipped.
template <typename Fn>
void for_each_json_line(const std::string& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) {
        return; // absent file reads as empty
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            std::cerr << "warning: " << path << ":" << lineno << ": skipping corrupt record\n";
            continue;
        }
        fn(lineno, j);
    }
}

void frame(std::string& buf, const std::string& field) {
    buf += std::to_string(field.size());
    buf += ':';
    buf += field;
    buf += '|';
}

json result_to_json(const std::string& key, const GenerationResult& r) {
    json j;
    j["key"] = key;
    j["text"] = r.text;
    j["model_id"] = r.model_id;
    j["tokens"] = tokens_to_json(r.tokens);
    return j;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * SHA256_DIGEST_LENGTH);
    for (unsigned char b : digest) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xf]);
    }
    return out;
}

std::vector<Question> load_dataset(const std::string& path, const std::string& dataset_tag) {
    std::ifstream in(path);
    if (!in) {
        throw StoreError("cannot open dataset: " + path);
    }
    std::vector<Question> out;
    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            Question q = question_from_json(json::parse(line));
            if (q.dataset_tag.empty()) {
                q.dataset_tag = dataset_tag;
            }
            if (auto [it, inserted] = seen.emplace(q.id, lineno); !inserted) {
                throw StoreError("duplicate id \"" + q.id + "\" (first at line " +
                                 std::to_string(it->second) + ")");
            }
            out.push_back(std::move(q));
        } catch (const json::exception& e) {
            throw StoreError(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const StoreError& e) {
            throw StoreError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.empty()) {
        std::cerr << "warning: dataset " << path << " is empty\n";
    }
    return out;
}

std::vector<prompts::Exemplar> load_exemplar_pool(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw StoreError("cannot open exemplar pool: " + path);
    }
    std::vector<prompts::Exemplar> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            const json j = json::parse(line);
            out.push_back({j.at("question").get<std::string>(),
                           j.at("answer").get<std::string>()});
        } catch (const json::exception& e) {
            throw StoreError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::string trace_to_jsonl(const TraceSet& trace) {
    json j;
    j["question"] = question_to_json(trace.question);
    json perts = json::array();
    for (const auto& p : trace.perturbations) {
        perts.push_back({{"index", p.index}, {"text", p.text}});
    }
    j["perturbations"] = std::move(perts);
    json samples = json::array();
    for (const auto& s : trace.samples) {
        json sj;
        sj["perturbation_index"] = s.perturbation_index;
        sj["sample_index"] = s.sample_index;
        sj["text"] = s.text;
        sj["tokens"] = tokens_to_json(s.tokens);
        if (is_invalid(s.extracted_answer)) {
            sj["extracted_answer"] = nullptr;
        } else {
            sj["extracted_answer"] = s.extracted_answer;
        }
        sj["correct"] = s.correct;
        if (s.verbalized_confidence) {
            sj["confidence"] = *s.verbalized_confidence;
        }
        samples.push_back(std::move(sj));
    }
    j["samples"] = std::move(samples);
    j["config_fingerprint"] = trace.config_fingerprint;
    return j.dump();
}

TraceSet trace_from_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw StoreError(std::string("corrupt trace record: ") + e.what());
    }
    try {
        TraceSet t;
        t.question = question_from_json(j.at("question"));
        for (const auto& p : j.at("perturbations")) {
            t.perturbations.push_back({t.question.id, p.at("index").get<int>(),
                                       p.at("text").get<std::string>()});
        }
        for (const auto& sj : j.at("samples")) {
            ResponseSample s;
            s.perturbation_index = sj.at("perturbation_index").get<int>();
            s.sample_index = sj.at("sample_index").get<int>();
            s.text = sj.at("text").get<std::string>();
            s.tokens = tokens_from_json(sj.at("tokens"));
            const auto& ans = sj.at("extracted_answer");
            s.extracted_answer = ans.is_null() ? std::string(kInvalidAnswer)
                                               : ans.get<std::string>();
            s.correct = sj.at("correct").get<bool>();
            if (sj.contains("confidence")) {
                s.verbalized_confidence = sj.at("confidence").get<double>();
            }
            t.samples.push_back(std::move(s));
        }
        t.config_fingerprint = j.at("config_fingerprint").get<std::string>();
        return t;
    } catch (const json::exception& e) {
        throw StoreError(std::string("corrupt trace record: ") + e.what());
    }
}

TraceStore::TraceStore(std::string path, bool writable) : path_(std::move(path)) {
    if (writable) {
        fd_ = open_append_locked(path_);
    }
}

TraceStore::~TraceStore() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

void TraceStore::put(const TraceSet& trace) {
    if (fd_ < 0) {
        throw StoreError("trace store opened read-only: " + path_);
    }
    check_complete(trace);
    std::lock_guard<std::mutex> lock(write_mu_);
    append_line(fd_, path_, trace_to_jsonl(trace));
}

std::optional<TraceSet> TraceStore::get(const std::string& question_id,
                                        const std::string& config_fingerprint) const {
    std::optional<TraceSet> found;
    for_each_json_line(path_, [&](std::size_t lineno, const json& j) {
        try {
            if (j.at("question").at("id").get<std::string>() != question_id ||
                j.at("config_fingerprint").get<std::string>() != config_fingerprint) {
                return;
            }
            found = trace_from_jsonl(j.dump()); // newest match wins
        } catch (const std::exception&) {
            std::cerr << "warning: " << path_ << ":" << lineno
                      << ": skipping malformed trace\n";
        }
    });
    return found;
}

std::map<std::string, TraceSet> TraceStore::load_all(
    const std::string& config_fingerprint) const {
    std::map<std::string, TraceSet> out;
    for_each_json_line(path_, [&](std::size_t lineno, const json& j) {
        try {
            if (j.at("config_fingerprint").get<std::string>() != config_fingerprint) {
                return;
            }
            TraceSet t = trace_from_jsonl(j.dump());
            out.insert_or_assign(t.question.id, std::move(t));
        } catch (const std::exception&) {
            std::cerr << "warning: " << path_ << ":" << lineno
                      << ": skipping malformed trace\n";
        }
    });
    return out;
}

std::string cache_key(const std::string& model_id, const std::string& prompt,
                      double temperature, std::optional<std::uint64_t> seed,
                      const std::string& call_ordinal) {
    std::string buf;
    frame(buf, model_id);
    frame(buf, prompt);
    frame(buf, format_double(temperature));
    frame(buf, seed ? std::to_string(*seed) : std::string("none"));
    frame(buf, call_ordinal);
    return sha256_hex(buf);
}

GenerationCache::GenerationCache(std::string path) : path_(std::move(path)) {
    for_each_json_line(path_, [&](std::size_t lineno, const json& j) {
        try {
            GenerationResult r;
            r.text = j.at("text").get<std::string>();
            r.model_id = j.at("model_id").get<std::string>();
            r.tokens = tokens_from_json(j.at("tokens"));
            r.cached = true;
            entries_.insert_or_assign(j.at("key").get<std::string>(), std::move(r));
        } catch (const std::exception&) {
            std::cerr << "warning: " << path_ << ":" << lineno
                      << ": skipping malformed cache record\n";
        }
    });
    fd_ = open_append_locked(path_);
}

GenerationCache::~GenerationCache() {
    if (fd_ >= 0) {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
}

std::optional<GenerationResult> GenerationCache::get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) {
        return it->second;
    }
    return std::nullopt;
}

void GenerationCache::put(const std::string& key, const GenerationResult& result) {
    std::lock_guard<std::mutex> lock(mu_);
    append_line(fd_, path_, result_to_json(key, result).dump());
    GenerationResult stored = result;
    stored.cached = true;
    entries_.insert_or_assign(key, std::move(stored));
}

std::size_t GenerationCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

CachingClient::CachingClient(std::shared_ptr<ModelClient> inner,
                             std::shared_ptr<GenerationCache> cache)
    : inner_(std::move(inner)), cache_(std::move(cache)) {}

GenerationResult CachingClient::generate(const GenerationRequest& req) {
    std::string ordinal = req.tag.question_id;
    ordinal += '|';
    ordinal += phase_name(req.tag.phase);
    ordinal += '|';
    ordinal += std::to_string(req.tag.perturbation_index);
    ordinal += '|';
    ordinal += std::to_string(req.tag.ordinal);
    const std::string key =
        cache_key(inner_->model_id(), req.prompt, req.temperature, req.seed, ordinal);
    if (auto hit = cache_->get(key)) {
        if (req.want_logprobs && hit->tokens.empty()) {
            // A logprob-free cached entry cannot serve this request.
        } else {
            return *hit;
        }
    }
    GenerationResult fresh = inner_->generate(req);
    cache_->put(key, fresh);
    return fresh;
}

std::string CachingClient::model_id() const {
    return inner_->model_id();
}

std::string row_to_jsonl(const analysis::BenchmarkRow& row) {
    json j;
    j["question_id"] = row.question_id;
    j["ansu"] = row.profile.ansu;
    j["cu"] = row.profile.cu;
    j["total"] = row.profile.total;
    j["au"] = row.profile.aleatoric;
    j["eu"] = row.profile.epistemic;
    j["npe"] = row.metrics.npe;
    j["lnpe"] = row.metrics.lnpe;
    j["top_disp"] = row.metrics.top_disp;
    if (row.metrics.intra) {
        j["intra"] = *row.metrics.intra;
    } else {
        j["intra"] = nullptr;
    }
    j["accuracy"] = row.accuracy;
    return j.dump();
}

analysis::BenchmarkRow row_from_jsonl(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
        analysis::BenchmarkRow row;
        row.question_id = j.at("question_id").get<std::string>();
        row.profile.ansu = j.at("ansu").get<double>();
        row.profile.cu = j.at("cu").get<double>();
        row.profile.total = j.value("total", row.profile.ansu);
        row.profile.aleatoric = j.at("au").get<double>();
        row.profile.epistemic = j.at("eu").get<double>();
        row.metrics.npe = j.at("npe").get<double>();
        row.metrics.lnpe = j.at("lnpe").get<double>();
        row.metrics.top_disp = j.at("top_disp").get<double>();
        if (j.contains("intra") && !j.at("intra").is_null()) {
            row.metrics.intra = j.at("intra").get<double>();
        }
        row.accuracy = j.at("accuracy").get<double>();
        return row;
    } catch (const json::exception& e) {
        throw StoreError(std::string("corrupt row record: ") + e.what());
    }
}

void save_rows(const std::vector<analysis::BenchmarkRow>& rows, const std::string& path) {
    std::string content;
    for (const auto& r : rows) {
        content += row_to_jsonl(r);
        content += '\n';
    }
    write_text_file(path, content);
}

std::vector<analysis::BenchmarkRow> load_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw StoreError("cannot open rows file: " + path);
    }
    std::vector<analysis::BenchmarkRow> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        try {
            out.push_back(row_from_jsonl(line));
        } catch (const StoreError& e) {
            throw StoreError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw StoreError("cannot write " + path);
    }
    out << content;
    out.flush();
    if (!out) {
        throw StoreError("short write to " + path);
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StoreError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace uqbench::store
