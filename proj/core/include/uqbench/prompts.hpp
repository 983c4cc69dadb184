#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uqbench/answers.hpp"

namespace uqbench::prompts {

// One few-shot demonstration: answer text is a full rationale ending in the
// task's answer phrase.
struct Exemplar {
    std::string question;
    std::string answer;
};

// Phrase that introduces the final answer in a completion.
std::string_view answer_marker(Task task);

// Two-shot rewrite instruction; the model continues after "New-Version:".
std::string perturb_prompt(const std::string& question_text);

// Few-shot answering prompt in the dataset's house style.
std::string answer_prompt(Task task, const std::vector<Exemplar>& exemplars,
                          const std::string& question_text);

// Scans for the last (case-insensitive) marker occurrence, reads the answer
// right after it, canonicalizes. Missing marker or unparseable answer yields
// kInvalidAnswer, never an error.
std::string extract_answer(const std::string& completion, Task task);

// Seeded pick without replacement; entries equal to exclude_question_text are
// skipped first. Returns the whole (filtered) pool when it has <= count
// entries. Deterministic in (seed, question_id, perturbation_index).
std::vector<Exemplar> pick_exemplars(const std::vector<Exemplar>& pool, std::size_t count,
                                     std::uint64_t seed, const std::string& question_id,
                                     int perturbation_index,
                                     const std::string& exclude_question_text = {});

// Fallback exemplars compiled into the library; used when a run configures no
// pool file.
const std::vector<Exemplar>& builtin_pool(Task task);

inline constexpr std::size_t kExemplarCount = 4;

} // namespace uqbench::prompts
