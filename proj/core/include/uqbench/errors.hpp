#pragma once

#include <stdexcept>

namespace uqbench {

// Violated precondition or numerical contract; indicates a caller bug.
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

// The model or endpoint cannot provide what the operation needs
// (e.g. per-token log-probabilities, verbalized confidences).
struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or missing configuration: flags, config files, script entries.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transport failure that survived the retry budget.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Confidence reply carried no usable number.
struct ElicitationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Persistence failure: lock conflicts, unreadable or unwritable files.
struct StoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace uqbench
