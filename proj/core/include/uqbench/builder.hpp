#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "uqbench/model_client.hpp"
#include "uqbench/prompts.hpp"
#include "uqbench/types.hpp"

namespace uqbench {

// "model=<id>|temperature=<t>|m=<m>|k=<k>|seed=<s>"; identifies which
// sampling configuration produced a trace, so stores can hold several.
std::string make_config_fingerprint(const std::string& model_id, double temperature,
                                    int m, int k, std::uint64_t seed);

struct BuilderOptions {
    int m = 5;
    int k = 10;
    double temperature = 1.0;
    std::uint64_t seed = 0;
    bool with_confidence = false;
    std::vector<prompts::Exemplar> pool; // empty => compiled-in pool per task
    int max_answer_tokens = 512;
    int max_perturb_tokens = 128;
};

// Runs the per-question workflow: perturb M ways (index 0 is the original),
// sample K answers per perturbation with log-probs, extract and grade,
// optionally elicit a verbalized confidence per sample. Deterministic given
// (options.seed, client behavior); live sampling derives a distinct request
// seed per call from the run seed.
class TraceBuilder {
public:
    TraceBuilder(std::shared_ptr<ModelClient> client, BuilderOptions options);

    std::vector<PerturbedQuestion> perturb(const Question& q) const;
    std::vector<ResponseSample> sample_answers(const PerturbedQuestion& pq,
                                               const Question& q) const;
    TraceSet build_trace(const Question& q) const;

    const std::string& fingerprint() const { return fingerprint_; }
    const BuilderOptions& options() const { return options_; }

private:
    std::uint64_t request_seed(const RequestTag& tag) const;

    std::shared_ptr<ModelClient> client_;
    BuilderOptions options_;
    std::string fingerprint_;
};

} // namespace uqbench
