#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace uqbench {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

// Strict full-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view s);

} // namespace uqbench
