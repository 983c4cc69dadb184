#include "uqbench/truth.hpp"

#include <algorithm>
#include <cmath>

#include "uqbench/errors.hpp"

namespace uqbench::truth {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kEpistemicClamp = 1e-9;

void check_distribution(const AnswerDistribution& d) {
    if (d.support.size() != d.probs.size() || d.support.empty()) {
        throw ContractError("distribution support/probs size mismatch");
    }
    double sum = 0.0;
    for (double p : d.probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ContractError("distribution has a negative or non-finite probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        throw ContractError("distribution probabilities do not sum to 1");
    }
    for (std::size_t i = 1; i < d.support.size(); ++i) {
        if (!(d.support[i - 1] < d.support[i])) {
            throw ContractError("distribution support is not sorted and unique");
        }
    }
}

} // namespace

AnswerDistribution distribution_from_counts(const std::map<std::string, int>& counts) {
    AnswerDistribution d;
    long total = 0;
    for (const auto& [answer, n] : counts) {
        if (n < 0) {
            throw ContractError("negative answer count");
        }
        total += n;
    }
    if (total == 0) {
        throw ContractError("empty answer histogram");
    }
    for (const auto& [answer, n] : counts) {
        if (n > 0) {
            d.support.push_back(answer);
            d.probs.push_back(static_cast<double>(n) / static_cast<double>(total));
        }
    }
    return d;
}

double entropy(const AnswerDistribution& d) {
    check_distribution(d);
    double h = 0.0;
    for (double p : d.probs) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    return std::max(h, 0.0);
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ContractError("binary_entropy rate outside [0, 1]");
    }
    double h = 0.0;
    if (p > 0.0) {
        h -= p * std::log(p);
    }
    if (p < 1.0) {
        h -= (1.0 - p) * std::log(1.0 - p);
    }
    return std::max(h, 0.0);
}

std::vector<AnswerDistribution> per_perturbation_distributions(const TraceSet& trace) {
    check_complete(trace);
    std::vector<std::map<std::string, int>> counts(trace.m());
    for (const auto& s : trace.samples) {
        counts[s.perturbation_index][s.extracted_answer] += 1;
    }
    std::vector<AnswerDistribution> per;
    per.reserve(counts.size());
    for (const auto& c : counts) {
        per.push_back(distribution_from_counts(c));
    }
    return per;
}

AnswerDistribution pooled_distribution(const std::vector<AnswerDistribution>& per) {
    if (per.empty()) {
        throw ContractError("pooled_distribution over an empty ensemble");
    }
    std::map<std::string, double> mass;
    const double w = 1.0 / static_cast<double>(per.size());
    for (const auto& d : per) {
        check_distribution(d);
        for (std::size_t i = 0; i < d.support.size(); ++i) {
            mass[d.support[i]] += w * d.probs[i];
        }
    }
    AnswerDistribution pooled;
    for (const auto& [answer, p] : mass) {
        pooled.support.push_back(answer);
        pooled.probs.push_back(p);
    }
    return pooled;
}

Decomposition decompose(const std::vector<AnswerDistribution>& per) {
    Decomposition out;
    out.total = entropy(pooled_distribution(per));
    double mean_member = 0.0;
    for (const auto& d : per) {
        mean_member += entropy(d);
    }
    out.aleatoric = mean_member / static_cast<double>(per.size());
    out.epistemic = out.total - out.aleatoric;
    if (out.epistemic < -kEpistemicClamp) {
        throw ContractError("epistemic uncertainty below zero beyond tolerance");
    }
    if (out.epistemic < 0.0) {
        out.epistemic = 0.0;
    }
    return out;
}

double correctness_uncertainty(const TraceSet& trace) {
    check_complete(trace);
    std::size_t correct = 0;
    for (const auto& s : trace.samples) {
        correct += s.correct ? 1 : 0;
    }
    const double rate = static_cast<double>(correct) / static_cast<double>(trace.samples.size());
    return binary_entropy(rate);
}

UncertaintyProfile profile(const TraceSet& trace) {
    const auto per = per_perturbation_distributions(trace);
    const auto decomposition = decompose(per);
    UncertaintyProfile p;
    p.ansu = decomposition.total; // pooled answer entropy is the total by construction
    p.total = decomposition.total;
    p.aleatoric = decomposition.aleatoric;
    p.epistemic = decomposition.epistemic;
    p.cu = correctness_uncertainty(trace);
    return p;
}

} // namespace uqbench::truth
