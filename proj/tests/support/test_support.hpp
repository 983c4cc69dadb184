#pragma once

// Shared fixtures for the test binaries. Kept doctest-free so the acceptance
// harness, which has its own main, can use it too.

#include <uqbench/answers.hpp>
#include <uqbench/model_client.hpp>
#include <uqbench/types.hpp>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace testutil {

class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "uqbench-test-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) {
            throw std::runtime_error("mkdtemp failed");
        }
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& leaf = "") const {
        return leaf.empty() ? path_.string() : (path_ / leaf).string();
    }

private:
    std::filesystem::path path_;
};

inline bool near(double a, double b, double tol = 1e-9) {
    return std::fabs(a - b) <= tol;
}

inline uqbench::Question boolean_question(const std::string& id = "q1",
                                          const std::string& gold = "yes") {
    uqbench::Question q;
    q.id = id;
    q.text = "Is water wet?";
    q.gold_answer = gold;
    q.task = uqbench::Task::Boolean;
    q.dataset_tag = "test";
    return q;
}

inline std::vector<uqbench::TokenLogProb> default_tokens() {
    return {{"tok", -0.5, -1.5}};
}

// Builds a complete TraceSet from an answers[j][i] grid. Tokens default to one
// well-formed token per sample; confidences attach when provided.
inline uqbench::TraceSet grid_trace(
    const std::vector<std::vector<std::string>>& answers,
    const uqbench::Question& q = boolean_question(),
    const std::vector<std::vector<double>>& confidences = {},
    const std::vector<uqbench::TokenLogProb>& tokens = default_tokens()) {
    uqbench::TraceSet t;
    t.question = q;
    t.config_fingerprint = "test-fingerprint";
    for (std::size_t j = 0; j < answers.size(); ++j) {
        uqbench::PerturbedQuestion pq;
        pq.parent_id = q.id;
        pq.index = static_cast<int>(j);
        pq.text = q.text;
        t.perturbations.push_back(pq);
        for (std::size_t i = 0; i < answers[j].size(); ++i) {
            uqbench::ResponseSample s;
            s.perturbation_index = static_cast<int>(j);
            s.sample_index = static_cast<int>(i);
            s.text = "raw: " + answers[j][i];
            s.tokens = tokens;
            s.extracted_answer = answers[j][i];
            s.correct = uqbench::grade(answers[j][i], q.gold_answer);
            if (j < confidences.size() && i < confidences[j].size()) {
                s.verbalized_confidence = confidences[j][i];
            }
            t.samples.push_back(s);
        }
    }
    return t;
}

// Single-perturbation trace whose samples carry the given (top1, top2) token
// rows; answer text is fixed so truth stays trivial.
inline uqbench::TraceSet token_trace(
    const std::vector<std::vector<std::pair<double, double>>>& sample_tokens,
    const std::vector<std::optional<double>>& confidences = {}) {
    uqbench::TraceSet t;
    t.question = boolean_question();
    t.config_fingerprint = "test-fingerprint";
    uqbench::PerturbedQuestion pq;
    pq.parent_id = t.question.id;
    pq.index = 0;
    pq.text = t.question.text;
    t.perturbations.push_back(pq);
    for (std::size_t i = 0; i < sample_tokens.size(); ++i) {
        uqbench::ResponseSample s;
        s.perturbation_index = 0;
        s.sample_index = static_cast<int>(i);
        s.text = "So the answer is yes.";
        for (const auto& [lp1, lp2] : sample_tokens[i]) {
            s.tokens.push_back({"t", lp1, lp2});
        }
        s.extracted_answer = "yes";
        s.correct = true;
        if (i < confidences.size() && confidences[i]) {
            s.verbalized_confidence = *confidences[i];
        }
        t.samples.push_back(s);
    }
    return t;
}

// Decorator that counts generate() calls, total and per question id, and can
// run a hook after each call (used to trip stop flags mid-run).
class CountingClient : public uqbench::ModelClient {
public:
    explicit CountingClient(std::shared_ptr<uqbench::ModelClient> inner)
        : inner_(std::move(inner)) {}

    uqbench::GenerationResult generate(const uqbench::GenerationRequest& req) override {
        auto result = inner_->generate(req);
        {
            std::lock_guard<std::mutex> lock(mu_);
            ++total_;
            ++per_question_[req.tag.question_id];
        }
        if (after_call) {
            after_call(req);
        }
        return result;
    }

    std::string model_id() const override { return inner_->model_id(); }

    int total() const {
        std::lock_guard<std::mutex> lock(mu_);
        return total_;
    }
    int count_for(const std::string& question_id) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = per_question_.find(question_id);
        return it == per_question_.end() ? 0 : it->second;
    }
    void reset() {
        std::lock_guard<std::mutex> lock(mu_);
        total_ = 0;
        per_question_.clear();
    }

    std::function<void(const uqbench::GenerationRequest&)> after_call;

private:
    std::shared_ptr<uqbench::ModelClient> inner_;
    mutable std::mutex mu_;
    int total_ = 0;
    std::map<std::string, int> per_question_;
};

} // namespace testutil
