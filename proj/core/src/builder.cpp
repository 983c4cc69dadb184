#include "uqbench/builder.hpp"

#include <cctype>

#include "uqbench/errors.hpp"
#include "uqbench/format.hpp"
#include "uqbench/hashing.hpp"

namespace uqbench {

namespace {

std::string trimmed(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

// A rewrite reply may run on past the requested line; keep the first
// non-empty line only.
std::string first_line(const std::string& s) {
    std::size_t start = 0;
    while (start < s.size()) {
        const auto nl = s.find('\n', start);
        const std::string line =
            trimmed(std::string_view(s).substr(start, nl == std::string::npos
                                                          ? std::string::npos
                                                          : nl - start));
        if (!line.empty()) {
            return line;
        }
        if (nl == std::string::npos) {
            break;
        }
        start = nl + 1;
    }
    return {};
}

} // namespace

std::string make_config_fingerprint(const std::string& model_id, double temperature,
                                    int m, int k, std::uint64_t seed) {
    std::string fp = "model=" + model_id;
    fp += "|temperature=" + format_double(temperature);
    fp += "|m=" + std::to_string(m);
    fp += "|k=" + std::to_string(k);
    fp += "|seed=" + std::to_string(seed);
    return fp;
}

TraceBuilder::TraceBuilder(std::shared_ptr<ModelClient> client, BuilderOptions options)
    : client_(std::move(client)), options_(std::move(options)) {
    if (client_ == nullptr) {
        throw ContractError("TraceBuilder needs a client");
    }
    if (options_.m < 1 || options_.k < 1) {
        throw ContractError("m and k must be >= 1");
    }
    fingerprint_ = make_config_fingerprint(client_->model_id(), options_.temperature,
                                           options_.m, options_.k, options_.seed);
}

std::uint64_t TraceBuilder::request_seed(const RequestTag& tag) const {
    StableHash h(options_.seed);
    h.mix(tag.question_id);
    h.mix(phase_name(tag.phase));
    h.mix(static_cast<std::uint64_t>(tag.perturbation_index));
    h.mix(static_cast<std::uint64_t>(tag.ordinal));
    return h.digest();
}

std::vector<PerturbedQuestion> TraceBuilder::perturb(const Question& q) const {
    std::vector<PerturbedQuestion> out;
    out.reserve(static_cast<std::size_t>(options_.m));
    out.push_back({q.id, 0, q.text}); // the ensemble keeps the original
    for (int j = 1; j < options_.m; ++j) {
        std::string text;
        for (int attempt = 0; attempt < 2 && text.empty(); ++attempt) {
            GenerationRequest req;
            req.prompt = prompts::perturb_prompt(q.text);
            req.temperature = options_.temperature;
            req.max_tokens = options_.max_perturb_tokens;
            req.want_logprobs = false;
            req.tag = {q.id, Phase::Perturb, j, attempt};
            req.seed = request_seed(req.tag);
            text = first_line(client_->generate(req).text);
        }
        if (text.empty()) {
            text = q.text; // two blank rewrites fall back to the original
        }
        out.push_back({q.id, j, std::move(text)});
    }
    return out;
}

std::vector<ResponseSample> TraceBuilder::sample_answers(const PerturbedQuestion& pq,
                                                         const Question& q) const {
    const auto& pool = options_.pool.empty() ? prompts::builtin_pool(q.task) : options_.pool;
    const auto exemplars = prompts::pick_exemplars(pool, prompts::kExemplarCount,
                                                   options_.seed, q.id, pq.index, q.text);
    const std::string prompt = prompts::answer_prompt(q.task, exemplars, pq.text);

    std::vector<ResponseSample> out;
    out.reserve(static_cast<std::size_t>(options_.k));
    for (int i = 0; i < options_.k; ++i) {
        GenerationRequest req;
        req.prompt = prompt;
        req.temperature = options_.temperature;
        req.max_tokens = options_.max_answer_tokens;
        req.want_logprobs = true;
        req.tag = {q.id, Phase::Answer, pq.index, i};
        req.seed = request_seed(req.tag);
        const GenerationResult gen = client_->generate(req);

        ResponseSample s;
        s.perturbation_index = pq.index;
        s.sample_index = i;
        s.text = gen.text;
        s.tokens = gen.tokens;
        s.extracted_answer = prompts::extract_answer(gen.text, q.task);
        s.correct = grade(s.extracted_answer, q.gold_answer);
        if (options_.with_confidence) {
            RequestTag tag{q.id, Phase::Confidence, pq.index, i};
            try {
                s.verbalized_confidence =
                    elicit_confidence(*client_, pq.text, trimmed(gen.text), tag);
            } catch (const ElicitationError&) {
                s.verbalized_confidence.reset(); // unparseable reply, recorded absent
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

TraceSet TraceBuilder::build_trace(const Question& q) const {
    TraceSet t;
    t.question = q;
    t.perturbations = perturb(q);
    t.config_fingerprint = fingerprint_;
    for (const auto& pq : t.perturbations) {
        auto samples = sample_answers(pq, q);
        for (auto& s : samples) {
            t.samples.push_back(std::move(s));
        }
    }
    check_complete(t);
    return t;
}

} // namespace uqbench
