#pragma once

#include "uqbench/types.hpp"

namespace uqbench::metrics {

// Black-box metrics over one question's trace. Sign convention: every metric
// increases with uncertainty, so npe/lnpe carry the usual predictive-entropy
// minus sign and top_disp/intra are negated means (top_disp <= 0, intra in
// [-1, 0]). Plain paper-sign values are the negation.

// -(1/N) sum_n sum_i ln p(token_i | prefix), N = M*K samples.
double npe(const TraceSet& trace);

// Per-sample mean of -ln p, then averaged over samples.
double lnpe(const TraceSet& trace);

// -(1/N) sum_n (1/S_n) sum_i |ln(p_top1 / p_top2)|. Zero iff top-1 and top-2
// are tied on every token.
double top_disp(const TraceSet& trace);

// Negated mean verbalized confidence over all collected samples.
// Throws CapabilityError when any sample lacks a confidence.
double intra(const TraceSet& trace);

// All four metrics; intra is absent (not an error) when confidences were not
// collected for this trace.
MetricReport report(const TraceSet& trace);

} // namespace uqbench::metrics
