#include "uqbench/mock_client.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "uqbench/errors.hpp"
#include "uqbench/hashing.hpp"

namespace uqbench {

namespace {

using nlohmann::json;

constexpr double kWeightTolerance = 1e-9;

void validate_entry(const MockEntry& e, const std::string& where) {
    if (e.echo) {
        if (!e.completions.empty()) {
            throw ConfigError(where + ": echo entries take no completions");
        }
        return;
    }
    if (e.completions.empty()) {
        throw ConfigError(where + ": entry has no completions");
    }
    double sum = 0.0;
    for (const auto& c : e.completions) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw ConfigError(where + ": completion weight must be finite and >= 0");
        }
        sum += c.weight;
        for (const auto& t : c.tokens) {
            if (!std::isfinite(t.top1_logprob) || !std::isfinite(t.top2_logprob)) {
                throw ConfigError(where + ": token log-probs must be finite");
            }
            if (t.top1_logprob > 0.0 || t.top2_logprob > 0.0) {
                throw ConfigError(where + ": token log-probs must be <= 0");
            }
            if (t.top1_logprob < t.top2_logprob) {
                throw ConfigError(where + ": top-1 log-prob below top-2");
            }
        }
    }
    if (std::abs(sum - 1.0) > kWeightTolerance) {
        throw ConfigError(where + ": completion weights must sum to 1");
    }
}

MockCompletion completion_from_json(const json& j, const std::string& where) {
    MockCompletion c;
    if (!j.is_object() || !j.contains("text")) {
        throw ConfigError(where + ": completion needs a \"text\" field");
    }
    c.text = j.at("text").get<std::string>();
    c.weight = j.value("weight", 1.0);
    if (j.contains("tokens")) {
        for (const auto& tok : j.at("tokens")) {
            if (!tok.is_array() || tok.size() != 3) {
                throw ConfigError(where + ": token must be [text, top1_logprob, top2_logprob]");
            }
            c.tokens.push_back({tok[0].get<std::string>(), tok[1].get<double>(),
                                tok[2].get<double>()});
        }
    }
    return c;
}

MockEntry entry_from_json(const json& j, const std::string& where) {
    MockEntry e;
    if (!j.is_object()) {
        throw ConfigError(where + ": entry must be an object");
    }
    if (j.value("echo", false)) {
        e.echo = true;
        return e;
    }
    if (!j.contains("completions")) {
        throw ConfigError(where + ": entry needs \"completions\" or \"echo\"");
    }
    for (const auto& c : j.at("completions")) {
        e.completions.push_back(completion_from_json(c, where));
    }
    return e;
}

json completion_to_json(const MockCompletion& c) {
    json j;
    j["weight"] = c.weight;
    j["text"] = c.text;
    if (!c.tokens.empty()) {
        json toks = json::array();
        for (const auto& t : c.tokens) {
            toks.push_back(json::array({t.token, t.top1_logprob, t.top2_logprob}));
        }
        j["tokens"] = std::move(toks);
    }
    return j;
}

json entry_to_json(const MockEntry& e) {
    json j;
    if (e.echo) {
        j["echo"] = true;
        return j;
    }
    json cs = json::array();
    for (const auto& c : e.completions) {
        cs.push_back(completion_to_json(c));
    }
    j["completions"] = std::move(cs);
    return j;
}

// The rewrite template embeds the question after this marker; echo entries
// hand it back as the "new version".
std::string echo_text(const std::string& prompt) {
    static constexpr std::string_view kMarker = "Original Question: ";
    const auto pos = prompt.rfind(kMarker);
    if (pos == std::string::npos) {
        return prompt;
    }
    const auto start = pos + kMarker.size();
    const auto nl = prompt.find('\n', start);
    return prompt.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
}

const MockCompletion& pick(const MockEntry& e, double u) {
    double cum = 0.0;
    for (const auto& c : e.completions) {
        cum += c.weight;
        if (u < cum) {
            return c;
        }
    }
    return e.completions.back(); // u landed in the rounding slack at the top
}

} // namespace

void validate_mock_script(const MockScript& script) {
    for (const auto& [prompt, entry] : script.by_prompt) {
        validate_entry(entry, "prompt entry");
    }
    for (const auto& [id, qs] : script.by_question) {
        if (qs.perturb) {
            validate_entry(*qs.perturb, "question " + id + " perturb");
        }
        for (const auto& a : qs.answers) {
            validate_entry(a, "question " + id + " answer");
        }
        if (qs.confidence) {
            validate_entry(*qs.confidence, "question " + id + " confidence");
        }
    }
    if (script.fallback) {
        validate_entry(*script.fallback, "fallback");
    }
}

MockScript parse_mock_script(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("mock script is not valid JSON: ") + e.what());
    }
    MockScript s;
    s.model_id = j.value("model_id", std::string("mock"));
    if (j.contains("prompts")) {
        for (const auto& [prompt, entry] : j.at("prompts").items()) {
            s.by_prompt[prompt] = entry_from_json(entry, "prompt entry");
        }
    }
    if (j.contains("questions")) {
        for (const auto& [id, qj] : j.at("questions").items()) {
            MockQuestionScript qs;
            if (qj.contains("perturb")) {
                qs.perturb = entry_from_json(qj.at("perturb"), "question " + id + " perturb");
            }
            if (qj.contains("answer")) {
                const auto& aj = qj.at("answer");
                if (aj.is_array()) {
                    for (const auto& one : aj) {
                        qs.answers.push_back(entry_from_json(one, "question " + id + " answer"));
                    }
                } else {
                    qs.answers.push_back(entry_from_json(aj, "question " + id + " answer"));
                }
            }
            if (qj.contains("confidence")) {
                qs.confidence =
                    entry_from_json(qj.at("confidence"), "question " + id + " confidence");
            }
            s.by_question[id] = std::move(qs);
        }
    }
    if (j.contains("default")) {
        s.fallback = entry_from_json(j.at("default"), "default");
    }
    validate_mock_script(s);
    return s;
}

MockScript load_mock_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open mock script: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_mock_script(buf.str());
}

std::string mock_script_to_json(const MockScript& script) {
    json j;
    j["model_id"] = script.model_id;
    if (!script.by_prompt.empty()) {
        json p = json::object();
        for (const auto& [prompt, entry] : script.by_prompt) {
            p[prompt] = entry_to_json(entry);
        }
        j["prompts"] = std::move(p);
    }
    if (!script.by_question.empty()) {
        json q = json::object();
        for (const auto& [id, qs] : script.by_question) {
            json qj = json::object();
            if (qs.perturb) {
                qj["perturb"] = entry_to_json(*qs.perturb);
            }
            if (!qs.answers.empty()) {
                json arr = json::array();
                for (const auto& a : qs.answers) {
                    arr.push_back(entry_to_json(a));
                }
                qj["answer"] = std::move(arr);
            }
            if (qs.confidence) {
                qj["confidence"] = entry_to_json(*qs.confidence);
            }
            q[id] = std::move(qj);
        }
        j["questions"] = std::move(q);
    }
    if (script.fallback) {
        j["default"] = entry_to_json(*script.fallback);
    }
    return j.dump(2);
}

void save_mock_script(const MockScript& script, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw ConfigError("cannot write mock script: " + path);
    }
    out << mock_script_to_json(script) << '\n';
}

MockClient::MockClient(MockScript script, std::uint64_t seed)
    : script_(std::move(script)), seed_(seed) {
    validate_mock_script(script_);
}

GenerationResult MockClient::generate(const GenerationRequest& req) {
    const MockEntry* entry = nullptr;
    bool matched_by_prompt = false;
    if (auto it = script_.by_prompt.find(req.prompt); it != script_.by_prompt.end()) {
        entry = &it->second;
        matched_by_prompt = true;
    } else if (auto qit = script_.by_question.find(req.tag.question_id);
               qit != script_.by_question.end()) {
        const auto& qs = qit->second;
        switch (req.tag.phase) {
            case Phase::Perturb:
                entry = qs.perturb ? &*qs.perturb : nullptr;
                break;
            case Phase::Answer:
                if (!qs.answers.empty()) {
                    const auto j = static_cast<std::size_t>(req.tag.perturbation_index);
                    entry = &qs.answers[j % qs.answers.size()];
                }
                break;
            case Phase::Confidence:
                entry = qs.confidence ? &*qs.confidence : nullptr;
                break;
        }
    }
    if (entry == nullptr && script_.fallback) {
        entry = &*script_.fallback;
    }
    if (entry == nullptr) {
        throw ConfigError("mock script has no entry for question '" + req.tag.question_id +
                          "' phase " + std::string(phase_name(req.tag.phase)));
    }

    GenerationResult out;
    out.model_id = script_.model_id;
    if (entry->echo) {
        out.text = echo_text(req.prompt);
        return out;
    }

    StableHash h(seed_);
    if (matched_by_prompt) {
        h.mix(req.prompt); // prompt entries may share an empty tag
    }
    h.mix(req.tag.question_id);
    h.mix(phase_name(req.tag.phase));
    h.mix(static_cast<std::uint64_t>(req.tag.perturbation_index));
    h.mix(static_cast<std::uint64_t>(req.tag.ordinal));
    const auto& chosen = pick(*entry, unit_interval(h.digest()));

    out.text = chosen.text;
    if (req.want_logprobs) {
        if (chosen.tokens.empty()) {
            throw CapabilityError("mock script entry carries no token log-probs");
        }
        out.tokens = chosen.tokens;
    }
    return out;
}

std::string MockClient::model_id() const {
    return script_.model_id;
}

} // namespace uqbench
