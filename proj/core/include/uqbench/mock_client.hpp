#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uqbench/model_client.hpp"

namespace uqbench {

struct MockCompletion {
    double weight = 1.0;
    std::string text;
    std::vector<TokenLogProb> tokens; // may be empty for logprob-free phases
};

// One categorical distribution over completions. Perturb entries may instead
// echo the question embedded in the rewrite prompt.
struct MockEntry {
    bool echo = false;
    std::vector<MockCompletion> completions;
};

struct MockQuestionScript {
    std::optional<MockEntry> perturb;
    // Cycled by perturbation_index, so index j uses entry j mod size. One
    // entry means every perturbation shares a distribution.
    std::vector<MockEntry> answers;
    std::optional<MockEntry> confidence;
};

struct MockScript {
    std::string model_id = "mock";
    std::map<std::string, MockEntry> by_prompt;      // exact prompt match, tried first
    std::map<std::string, MockQuestionScript> by_question; // routed by RequestTag
    std::optional<MockEntry> fallback;
};

// Throws ConfigError on weights not summing to 1, positive log-probs, or
// token pairs where the top-1 log-prob is below the top-2.
void validate_mock_script(const MockScript& script);

MockScript parse_mock_script(const std::string& json_text);
MockScript load_mock_script(const std::string& path);
std::string mock_script_to_json(const MockScript& script);
void save_mock_script(const MockScript& script, const std::string& path);

// Deterministic scripted client. A draw is a pure function of the seed, the
// request's stream (question id, phase, perturbation index), and the caller's
// ordinal, so results do not depend on wall-clock call order and an identical
// retried request reproduces its original completion.
class MockClient final : public ModelClient {
public:
    MockClient(MockScript script, std::uint64_t seed);

    GenerationResult generate(const GenerationRequest& req) override;
    std::string model_id() const override;

private:
    MockScript script_;
    std::uint64_t seed_;
};

} // namespace uqbench
