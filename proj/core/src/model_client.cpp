#include "uqbench/model_client.hpp"

#include <cctype>
#include <charconv>

#include "uqbench/errors.hpp"

namespace uqbench {

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::Perturb: return "perturb";
        case Phase::Answer: return "answer";
        case Phase::Confidence: return "confidence";
    }
    throw ContractError("unknown phase");
}

std::string confidence_prompt(const std::string& question_text,
                              const std::string& answer_text) {
    std::string p =
        "Read the question and the proposed answer. Reply with only your "
        "confidence that the answer is correct, as a number from 0 to 100.\n";
    p += "Question: " + question_text + "\n";
    p += "Proposed answer: " + answer_text + "\n";
    p += "Confidence:";
    return p;
}

double parse_confidence_reply(const std::string& reply) {
    const char* const end = reply.data() + reply.size();
    std::size_t i = 0;
    while (i < reply.size()) {
        if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (start > 0 && reply[start - 1] == '-') {
            start -= 1; // "-5" is one out-of-range number, not a bare "5"
        }
        double value = 0.0;
        auto [next, ec] = std::from_chars(reply.data() + start, end, value);
        if (ec == std::errc() && value >= 0.0 && value <= 100.0) {
            return value / 100.0;
        }
        // Skip the whole token; "150" must not match via its "50" suffix.
        i = ec == std::errc() ? static_cast<std::size_t>(next - reply.data()) : i + 1;
    }
    throw ElicitationError("confidence reply carries no number in [0, 100]: " + reply);
}

double elicit_confidence(ModelClient& client, const std::string& question_text,
                         const std::string& answer_text, const RequestTag& tag) {
    GenerationRequest req;
    req.prompt = confidence_prompt(question_text, answer_text);
    req.temperature = 0.0;
    req.max_tokens = 16;
    req.want_logprobs = false;
    req.tag = tag;
    req.tag.phase = Phase::Confidence;
    return parse_confidence_reply(client.generate(req).text);
}

} // namespace uqbench
