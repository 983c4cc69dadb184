#include "uqbench/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "uqbench/errors.hpp"
#include "uqbench/hashing.hpp"

namespace uqbench::prompts {

namespace {

std::string lowered(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

// Position just past the last case-insensitive occurrence of marker, or npos.
std::size_t after_last_marker(const std::string& text, std::string_view marker) {
    const std::string hay = lowered(text);
    const std::string needle = lowered(marker);
    const auto pos = hay.rfind(needle);
    return pos == std::string::npos ? std::string::npos : pos + needle.size();
}

std::string first_word(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ':')) {
        ++i;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) {
        ++j;
    }
    return std::string(s.substr(i, j - i));
}

// First number-ish token: optional sign, then digits with commas/periods.
std::string first_number_token(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
    }
    if (i == s.size()) {
        return {};
    }
    std::size_t start = i;
    if (start > 0 && s[start - 1] == '-') {
        start -= 1;
    }
    std::size_t j = i;
    while (j < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == ',' || s[j] == '.')) {
        ++j;
    }
    return std::string(s.substr(start, j - start));
}

const std::vector<Exemplar> kBooleanPool = {
    {"Was ethanol beneficial to Jack Kerouac's health?",
     "Jack Kerouac died from internal bleeding due to long-term alcohol abuse. Thus, "
     "ethanol was not beneficial to Jack Kerouac's health. So the answer is no."},
    {"If Goofy were a pet, would he need heartworm prevention?",
     "Goofy is a dog, and dogs require regular heartworm prevention. Thus, if Goofy were "
     "a pet, he would need heartworm prevention. So the answer is yes."},
    {"Could a snail outrun a cheetah in a short sprint?",
     "A cheetah sprints at around 100 kilometers per hour while a snail moves at about "
     "0.05 kilometers per hour. Thus, a snail could not outrun a cheetah. So the answer "
     "is no."},
    {"Would a kilogram of feathers weigh the same as a kilogram of iron?",
     "A kilogram is a unit of mass, so a kilogram of any material has the same mass as a "
     "kilogram of any other. So the answer is yes."},
};

const std::vector<Exemplar> kNumericPool = {
    {"Mark has a garden with flowers. He planted plants of three different colors in it. "
     "Ten of them are yellow, and there are 80% more of those in purple. There are only "
     "25% as many green flowers as there are yellow and purple flowers. How many flowers "
     "does Mark have in his garden?",
     "There are 80% more purple flowers than yellow flowers, so there are 10 * 1.8 = 18 "
     "purple flowers. There are 10 yellow flowers and 18 purple flowers, so there are 10 "
     "+ 18 = 28 yellow and purple flowers. There are 25% as many green flowers as there "
     "are yellow and purple flowers, so there are 28 * 0.25 = 7 green flowers. Mark has "
     "10 yellow flowers, 18 purple flowers, and 7 green flowers, so he has 10 + 18 + 7 = "
     "35 flowers in his garden. The answer to the question is 35."},
    {"Albert is wondering how much pizza he can eat in one day. He buys 2 large pizzas "
     "and 2 small pizzas. A large pizza has 16 slices and a small pizza has 8 slices. If "
     "he eats it all, how many pieces does he eat that day?",
     "He buys 2 large pizzas, so he has 2 * 16 = 32 slices. He buys 2 small pizzas, so "
     "he has 2 * 8 = 16 slices. There are 32 slices from the large pizzas and 16 slices "
     "from the small pizzas, so he eats 32 + 16 = 48 pieces that day. The answer to the "
     "question is 48."},
    {"A box holds 12 pencils. Dana buys 3 boxes and gives 7 pencils to her brother. How "
     "many pencils does Dana keep?",
     "Dana buys 3 boxes of 12 pencils, so she has 3 * 12 = 36 pencils. She gives away 7, "
     "so she keeps 36 - 7 = 29 pencils. The answer to the question is 29."},
    {"A train travels 60 kilometers per hour for 2 hours and then 40 kilometers per hour "
     "for 1 hour. How many kilometers does it travel in total?",
     "At 60 kilometers per hour for 2 hours the train covers 60 * 2 = 120 kilometers. At "
     "40 kilometers per hour for 1 hour it covers 40 * 1 = 40 kilometers. In total it "
     "travels 120 + 40 = 160 kilometers. The answer to the question is 160."},
};

} // namespace

std::string_view answer_marker(Task task) {
    return task == Task::Boolean ? "So the answer is" : "The answer to the question is";
}

std::string perturb_prompt(const std::string& question_text) {
    std::string p =
        "You will receive a question and your goal is to generate a new version of it "
        "that convey the same meaning as the original.\n";
    p += "Q1.Original Question: Would a dog respond to bell before Grey seal?\n";
    p += "New-Version: Would a dog react to a bell sooner than a grey seal?\n";
    p += "Q2.Original Question: The perimeter of a rectangle is the sum of all its sides.\n";
    p += "New-Version: A rectangle's perimeter is obtained by summing the lengths of its "
         "sides.\n";
    p += "Q3. Original Question: " + question_text + "\n";
    p += "New-Version:";
    return p;
}

std::string answer_prompt(Task task, const std::vector<Exemplar>& exemplars,
                          const std::string& question_text) {
    std::string p;
    if (task == Task::Boolean) {
        for (const auto& e : exemplars) {
            p += "Q: " + e.question + "\n";
            p += "A: " + e.answer + "\n";
        }
        p += "Q: " + question_text + "\n";
        p += "A:";
    } else {
        std::size_t n = 0;
        for (const auto& e : exemplars) {
            ++n;
            p += "Question " + std::to_string(n) + ": " + e.question + "\n";
            p += "Answer : " + e.answer + "\n";
        }
        p += "Question " + std::to_string(n + 1) + ": " + question_text + "\n";
        p += "Answer :";
    }
    return p;
}

std::string extract_answer(const std::string& completion, Task task) {
    const auto pos = after_last_marker(completion, answer_marker(task));
    if (pos == std::string::npos) {
        return std::string(kInvalidAnswer);
    }
    const std::string_view tail = std::string_view(completion).substr(pos);
    if (task == Task::Boolean) {
        return canonicalize(first_word(tail), task);
    }
    return canonicalize(first_number_token(tail), task);
}

std::vector<Exemplar> pick_exemplars(const std::vector<Exemplar>& pool, std::size_t count,
                                     std::uint64_t seed, const std::string& question_id,
                                     int perturbation_index,
                                     const std::string& exclude_question_text) {
    std::vector<std::size_t> idx;
    idx.reserve(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (exclude_question_text.empty() || pool[i].question != exclude_question_text) {
            idx.push_back(i);
        }
    }
    StableHash h(seed);
    h.mix("exemplars");
    h.mix(question_id);
    h.mix(static_cast<std::uint64_t>(perturbation_index));
    SplitMixStream rng(h.digest());

    const std::size_t take = std::min(count, idx.size());
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next() % (idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<Exemplar> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(pool[idx[i]]);
    }
    return out;
}

const std::vector<Exemplar>& builtin_pool(Task task) {
    return task == Task::Boolean ? kBooleanPool : kNumericPool;
}

} // namespace uqbench::prompts
