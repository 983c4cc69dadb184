#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "uqbench/types.hpp"

namespace uqbench {

// Which workflow step issued a request. Routing metadata for the mock client
// and the generation cache; the live client ignores it.
enum class Phase { Perturb, Answer, Confidence };

std::string_view phase_name(Phase p);

struct RequestTag {
    std::string question_id;
    Phase phase = Phase::Answer;
    int perturbation_index = 0;
    // Position of this call within its (question, phase, perturbation)
    // stream; lets scripted draws stay reproducible under concurrency.
    int ordinal = 0;
};

struct GenerationRequest {
    std::string prompt;
    double temperature = 1.0;
    int max_tokens = 256;
    bool want_logprobs = false; // when set, the client must return top-2 log-probs or fail
    std::optional<std::uint64_t> seed;
    RequestTag tag;
};

struct GenerationResult {
    std::string text;
    std::vector<TokenLogProb> tokens; // empty only when want_logprobs was false
    std::string model_id;
    bool cached = false;
};

class ModelClient {
public:
    virtual ~ModelClient() = default;
    virtual GenerationResult generate(const GenerationRequest& req) = 0;
    virtual std::string model_id() const = 0;
};

// Fixed elicitation template; the reply is expected to be a bare 0-100 number.
std::string confidence_prompt(const std::string& question_text,
                              const std::string& answer_text);

// First number in [0, 100] found in the reply, scaled to [0, 1].
// Throws ElicitationError when no in-range number is present.
double parse_confidence_reply(const std::string& reply);

// Sends the template at temperature 0 and parses the reply.
double elicit_confidence(ModelClient& client, const std::string& question_text,
                         const std::string& answer_text, const RequestTag& tag = {});

} // namespace uqbench
