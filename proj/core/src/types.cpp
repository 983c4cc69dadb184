#include "uqbench/types.hpp"

#include <vector>

#include "uqbench/errors.hpp"

namespace uqbench {

void check_complete(const TraceSet& trace) {
    const int m = trace.m();
    if (m < 1) {
        throw ContractError("trace has no perturbations");
    }
    for (int j = 0; j < m; ++j) {
        const auto& pq = trace.perturbations[j];
        if (pq.index != j) {
            throw ContractError("perturbation list out of order");
        }
        if (pq.text.empty()) {
            throw ContractError("perturbation " + std::to_string(j) + " has empty text");
        }
    }
    if (trace.samples.empty() || trace.samples.size() % trace.perturbations.size() != 0) {
        throw ContractError("sample count is not a multiple of the perturbation count");
    }
    const int k = trace.k();
    std::vector<char> seen(static_cast<std::size_t>(m) * k, 0);
    for (const auto& s : trace.samples) {
        if (s.perturbation_index < 0 || s.perturbation_index >= m ||
            s.sample_index < 0 || s.sample_index >= k) {
            throw ContractError("sample index out of range");
        }
        char& slot = seen[static_cast<std::size_t>(s.perturbation_index) * k + s.sample_index];
        if (slot) {
            throw ContractError("duplicate (perturbation, sample) pair in trace");
        }
        slot = 1;
    }
}

} // namespace uqbench
