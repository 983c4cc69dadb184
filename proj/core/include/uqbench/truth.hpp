#pragma once

#include <map>
#include <string>
#include <vector>

#include "uqbench/types.hpp"

namespace uqbench::truth {

// Empirical distribution over canonical answers. kInvalidAnswer counts as a
// category of its own. Support is sorted and unique; probs sum to 1 (+-1e-9).
struct AnswerDistribution {
    std::vector<std::string> support;
    std::vector<double> probs;
};

AnswerDistribution distribution_from_counts(const std::map<std::string, int>& counts);

// Shannon entropy -sum p ln p in nats, with 0 ln 0 = 0.
// Throws ContractError on an invalid distribution.
double entropy(const AnswerDistribution& d);

// Binary entropy of a rate p in [0, 1].
double binary_entropy(double p);

// Answer frequencies among the K samples of each perturbation.
std::vector<AnswerDistribution> per_perturbation_distributions(const TraceSet& trace);

// Uniform mixture (1/M) sum_j q_j over the union support.
AnswerDistribution pooled_distribution(const std::vector<AnswerDistribution>& per);

struct Decomposition {
    double total = 0.0;     // entropy of the pooled mixture
    double aleatoric = 0.0; // mean per-perturbation entropy
    double epistemic = 0.0; // total - aleatoric (mutual information)
};

// Splits predictive uncertainty into its aleatoric and epistemic parts.
// epistemic is clamped to 0 when within -1e-9 of zero; anything below that
// violates Jensen's inequality and raises ContractError.
Decomposition decompose(const std::vector<AnswerDistribution>& per);

// Binary entropy of the fraction of correct samples over the whole grid.
double correctness_uncertainty(const TraceSet& trace);

// All four ground-truth uncertainty values for one trace.
UncertaintyProfile profile(const TraceSet& trace);

} // namespace uqbench::truth
