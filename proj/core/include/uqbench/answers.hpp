#pragma once

#include <string>
#include <string_view>

namespace uqbench {

enum class Task { Numeric, Boolean };

const char* task_name(Task task);            // "numeric" / "boolean"
Task task_from_name(std::string_view name);  // throws ConfigError

// Sentinel answer category for completions whose answer could not be parsed.
// It is a value, not an error: it takes part in answer distributions and
// always grades as incorrect.
inline constexpr std::string_view kInvalidAnswer = "<invalid>";

inline bool is_invalid(std::string_view answer) { return answer == kInvalidAnswer; }

// Normalizes a raw answer fragment into the task's canonical alphabet.
//   Numeric: "$1,234.50" -> "1234.5", "35." -> "35", "2.0" -> "2"
//   Boolean: "Yes." -> "yes"; anything outside {yes, no} -> kInvalidAnswer
// Idempotent on every non-invalid result.
std::string canonicalize(std::string_view raw, Task task);

// True iff extracted is a valid canonical answer equal to the canonical gold.
bool grade(std::string_view extracted, std::string_view gold);

} // namespace uqbench
