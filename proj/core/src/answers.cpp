#include "uqbench/answers.hpp"

#include <algorithm>
#include <cctype>

#include "uqbench/errors.hpp"

namespace uqbench {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Removes commas, whitespace and common currency marks. The currency signs
// euro/pound/yen are multi-byte in UTF-8, so this works on the byte level.
std::string strip_numeric_noise(std::string_view raw) {
    std::string s(raw);
    for (std::string_view sym : {"$", "€", "£", "¥"}) {
        std::size_t pos = 0;
        while ((pos = s.find(sym, pos)) != std::string::npos) {
            s.erase(pos, sym.size());
        }
    }
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](char c) { return c == ',' || is_space(c); }),
            s.end());
    if (!s.empty() && s.back() == '.') {
        s.pop_back(); // one trailing sentence period, "35." -> "35"
    }
    return s;
}

std::string canonicalize_numeric(std::string_view raw) {
    std::string s = strip_numeric_noise(raw);
    if (s.empty()) {
        return std::string(kInvalidAnswer);
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
        negative = (s[i] == '-');
        ++i;
    }
    std::string int_part;
    std::string frac_part;
    bool seen_dot = false;
    bool seen_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_dot) {
                return std::string(kInvalidAnswer);
            }
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            seen_digit = true;
            (seen_dot ? frac_part : int_part).push_back(c);
        } else {
            return std::string(kInvalidAnswer);
        }
    }
    if (!seen_digit) {
        return std::string(kInvalidAnswer);
    }

    while (!frac_part.empty() && frac_part.back() == '0') {
        frac_part.pop_back();
    }
    std::size_t nz = int_part.find_first_not_of('0');
    int_part = (nz == std::string::npos) ? "" : int_part.substr(nz);
    if (int_part.empty()) {
        int_part = "0";
    }

    bool is_zero = (int_part == "0" && frac_part.empty());
    std::string out;
    if (negative && !is_zero) {
        out.push_back('-');
    }
    out += int_part;
    if (!frac_part.empty()) {
        out.push_back('.');
        out += frac_part;
    }
    return out;
}

std::string canonicalize_boolean(std::string_view raw) {
    std::string s(raw);
    s.erase(std::remove_if(s.begin(), s.end(), is_space), s.end());
    while (!s.empty() && (s.back() == '.' || s.back() == ',' || s.back() == '!' ||
                          s.back() == '?')) {
        s.pop_back();
    }
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "yes" || s == "no") {
        return s;
    }
    return std::string(kInvalidAnswer);
}

} // namespace

const char* task_name(Task task) {
    return task == Task::Numeric ? "numeric" : "boolean";
}

Task task_from_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "numeric") {
        return Task::Numeric;
    }
    if (lower == "boolean") {
        return Task::Boolean;
    }
    throw ConfigError("unknown task kind: " + std::string(name));
}

std::string canonicalize(std::string_view raw, Task task) {
    return task == Task::Numeric ? canonicalize_numeric(raw)
                                 : canonicalize_boolean(raw);
}

bool grade(std::string_view extracted, std::string_view gold) {
    return !is_invalid(extracted) && extracted == gold;
}

} // namespace uqbench
