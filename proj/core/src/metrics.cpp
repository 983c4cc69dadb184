#include "uqbench/metrics.hpp"

#include <cmath>

#include "uqbench/errors.hpp"

namespace uqbench::metrics {

namespace {

void require_tokens(const ResponseSample& s) {
    if (s.tokens.empty()) {
        throw CapabilityError("sample carries no token log-probs");
    }
    for (const auto& t : s.tokens) {
        if (!std::isfinite(t.top1_logprob)) {
            throw CapabilityError("sample token is missing its log-prob");
        }
    }
}

void require_top2(const ResponseSample& s) {
    for (const auto& t : s.tokens) {
        if (!std::isfinite(t.top2_logprob)) {
            throw CapabilityError("sample token is missing its top-2 log-prob");
        }
    }
}

} // namespace

double npe(const TraceSet& trace) {
    check_complete(trace);
    double total = 0.0;
    for (const auto& s : trace.samples) {
        require_tokens(s);
        for (const auto& t : s.tokens) {
            total -= t.top1_logprob;
        }
    }
    return total / static_cast<double>(trace.samples.size());
}

double lnpe(const TraceSet& trace) {
    check_complete(trace);
    double total = 0.0;
    for (const auto& s : trace.samples) {
        if (s.tokens.empty()) {
            throw ContractError("lnpe over a zero-token sample");
        }
        require_tokens(s);
        double sum = 0.0;
        for (const auto& t : s.tokens) {
            sum -= t.top1_logprob;
        }
        total += sum / static_cast<double>(s.tokens.size());
    }
    return total / static_cast<double>(trace.samples.size());
}

double top_disp(const TraceSet& trace) {
    check_complete(trace);
    double total = 0.0;
    for (const auto& s : trace.samples) {
        require_tokens(s);
        require_top2(s);
        double sum = 0.0;
        for (const auto& t : s.tokens) {
            sum += std::abs(t.top1_logprob - t.top2_logprob);
        }
        total += sum / static_cast<double>(s.tokens.size());
    }
    return -total / static_cast<double>(trace.samples.size());
}

double intra(const TraceSet& trace) {
    check_complete(trace);
    double sum = 0.0;
    for (const auto& s : trace.samples) {
        if (!s.verbalized_confidence.has_value()) {
            throw CapabilityError("sample carries no verbalized confidence");
        }
        sum += *s.verbalized_confidence;
    }
    return -sum / static_cast<double>(trace.samples.size());
}

MetricReport report(const TraceSet& trace) {
    check_complete(trace);
    MetricReport r;
    r.npe = npe(trace);
    r.lnpe = lnpe(trace);
    r.top_disp = top_disp(trace);
    try {
        r.intra = intra(trace);
    } catch (const CapabilityError&) {
        r.intra.reset(); // confidences were not collected; the other metrics stand
    }
    return r;
}

} // namespace uqbench::metrics
