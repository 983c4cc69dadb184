#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uqbench/answers.hpp"

namespace uqbench {

// One benchmark item. gold_answer is already canonical.
struct Question {
    std::string id;
    std::string text;
    std::string gold_answer;
    Task task = Task::Numeric;
    std::string dataset_tag;
};

// Meaning-preserving rewrite of a question. Index 0 is always the
// unmodified original.
struct PerturbedQuestion {
    std::string parent_id;
    int index = 0;
    std::string text;
};

// Log-probabilities for one emitted token (natural log). top1_logprob is the
// emitted token's own log-prob, top2_logprob the strongest alternative. When
// temperature sampling picked a non-top-1 token the pair can invert; the
// disparity metric absorbs that through its absolute value.
struct TokenLogProb {
    std::string token;
    double top1_logprob = 0.0;
    double top2_logprob = 0.0;
};

// One sampled completion, graded against the question's gold answer.
struct ResponseSample {
    int perturbation_index = 0;
    int sample_index = 0;
    std::string text;
    std::vector<TokenLogProb> tokens;
    std::string extracted_answer; // canonical, or kInvalidAnswer
    bool correct = false;
    std::optional<double> verbalized_confidence;
};

// The full M x K grid of graded samples for one question.
struct TraceSet {
    Question question;
    std::vector<PerturbedQuestion> perturbations; // length M
    std::vector<ResponseSample> samples;          // length M*K
    std::string config_fingerprint;

    int m() const { return static_cast<int>(perturbations.size()); }
    int k() const {
        return perturbations.empty()
                   ? 0
                   : static_cast<int>(samples.size() / perturbations.size());
    }
};

// Throws ContractError unless the samples form a complete M x K grid with
// every (perturbation_index, sample_index) pair present exactly once.
void check_complete(const TraceSet& trace);

// Ground-truth uncertainty values for one question, in nats.
// total == aleatoric + epistemic, and ansu == total by construction.
struct UncertaintyProfile {
    double ansu = 0.0;
    double cu = 0.0;
    double total = 0.0;
    double aleatoric = 0.0;
    double epistemic = 0.0;
};

// The four black-box metric values. All four increase with uncertainty.
// intra is absent when verbalized confidences were not collected.
struct MetricReport {
    double npe = 0.0;
    double lnpe = 0.0;
    double top_disp = 0.0;
    std::optional<double> intra;
};

} // namespace uqbench
