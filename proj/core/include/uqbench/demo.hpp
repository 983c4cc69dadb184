#pragma once

#include <string>

namespace uqbench::demo {

struct DemoFiles {
    std::string dataset;
    std::string script;
};

// Writes the bundled six-question dataset and its mock script into dir.
// Content is compiled in and carries no timestamps, so the files (and
// everything a run derives from them) are byte-stable.
DemoFiles write_demo_inputs(const std::string& dir);

} // namespace uqbench::demo
