// Microbenchmarks for the hot paths: per-question math (entropy, decompose,
// metrics), the analysis layer, answer canonicalization, and trace
// serialization. Numbers are for watching regressions, not for publication.

#include <benchmark/benchmark.h>

#include <uqbench/analysis.hpp>
#include <uqbench/answers.hpp>
#include <uqbench/prompts.hpp>
#include <uqbench/metrics.hpp>
#include <uqbench/store.hpp>
#include <uqbench/truth.hpp>
#include <uqbench/types.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace uqbench;

truth::AnswerDistribution make_distribution(int support, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    truth::AnswerDistribution d;
    double sum = 0.0;
    for (int i = 0; i < support; ++i) {
        char name[16];
        std::snprintf(name, sizeof name, "answer%02d", i); // keeps support sorted
        d.support.push_back(name);
        d.probs.push_back(unit(rng));
        sum += d.probs.back();
    }
    for (auto& p : d.probs) {
        p /= sum;
    }
    return d;
}

// A complete m x k grid with t tokens per sample, answers split across four
// categories, confidences attached.
TraceSet make_trace(int m, int k, int t) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    const std::vector<std::string> answers = {"12", "15", "<invalid>", "7"};

    TraceSet trace;
    trace.question.id = "bench";
    trace.question.text = "How many widgets remain?";
    trace.question.gold_answer = "12";
    trace.question.task = Task::Numeric;
    trace.config_fingerprint = "bench-fingerprint";
    for (int j = 0; j < m; ++j) {
        PerturbedQuestion pq;
        pq.parent_id = trace.question.id;
        pq.index = j;
        pq.text = trace.question.text;
        trace.perturbations.push_back(pq);
        for (int i = 0; i < k; ++i) {
            ResponseSample s;
            s.perturbation_index = j;
            s.sample_index = i;
            s.extracted_answer = answers[(j * k + i) % answers.size()];
            s.correct = s.extracted_answer == trace.question.gold_answer;
            s.text = "So the answer is " + s.extracted_answer + ".";
            for (int tok = 0; tok < t; ++tok) {
                const double p = unit(rng);
                s.tokens.push_back({"t", std::log(p), std::log(p) - unit(rng)});
            }
            s.verbalized_confidence = unit(rng);
            trace.samples.push_back(s);
        }
    }
    return trace;
}

std::vector<analysis::BenchmarkRow> make_rows(int n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<analysis::BenchmarkRow> rows(n);
    for (int i = 0; i < n; ++i) {
        auto& r = rows[i];
        r.question_id = "q" + std::to_string(i);
        r.profile.ansu = r.profile.total = unit(rng);
        r.profile.aleatoric = r.profile.total * unit(rng);
        r.profile.epistemic = r.profile.total - r.profile.aleatoric;
        r.profile.cu = truth::binary_entropy(unit(rng));
        r.accuracy = unit(rng);
        r.metrics.npe = r.profile.ansu + 0.1 * unit(rng);
        r.metrics.lnpe = r.metrics.npe / 3.0;
        r.metrics.top_disp = -unit(rng);
        r.metrics.intra = -unit(rng);
    }
    return rows;
}

void BM_Entropy(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto d = make_distribution(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(truth::entropy(d));
    }
}
BENCHMARK(BM_Entropy)->Arg(2)->Arg(6)->Arg(32);

void BM_Decompose(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::vector<truth::AnswerDistribution> members;
    for (int j = 0; j < state.range(0); ++j) {
        members.push_back(make_distribution(6, rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(truth::decompose(members));
    }
}
BENCHMARK(BM_Decompose)->Arg(2)->Arg(8);

void BM_Profile(benchmark::State& state) {
    const auto trace = make_trace(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(1)), 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(truth::profile(trace));
    }
}
BENCHMARK(BM_Profile)->Args({5, 10})->Args({8, 20});

void BM_MetricsReport(benchmark::State& state) {
    const auto trace = make_trace(5, 10, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(metrics::report(trace));
    }
}
BENCHMARK(BM_MetricsReport)->Arg(8)->Arg(64);

void BM_CorrelationMatrix(benchmark::State& state) {
    const auto rows = make_rows(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            analysis::correlation_matrix(rows, analysis::CorrelationMethod::Spearman));
    }
}
BENCHMARK(BM_CorrelationMatrix)->Arg(100)->Arg(1000);

void BM_CanonicalizeNumeric(benchmark::State& state) {
    const std::string raw = " $1,234,567.890 ";
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonicalize(raw, Task::Numeric));
    }
}
BENCHMARK(BM_CanonicalizeNumeric);

void BM_ExtractAnswer(benchmark::State& state) {
    const std::string reply =
        "First I count the widgets in each bin, which gives 3, 5, and 4. "
        "So the answer is 12.";
    for (auto _ : state) {
        benchmark::DoNotOptimize(prompts::extract_answer(reply, Task::Numeric));
    }
}
BENCHMARK(BM_ExtractAnswer);

void BM_TraceSerialize(benchmark::State& state) {
    const auto trace = make_trace(5, 10, 16);
    for (auto _ : state) {
        benchmark::DoNotOptimize(store::trace_to_jsonl(trace));
    }
}
BENCHMARK(BM_TraceSerialize);

void BM_TraceParse(benchmark::State& state) {
    const auto line = store::trace_to_jsonl(make_trace(5, 10, 16));
    for (auto _ : state) {
        benchmark::DoNotOptimize(store::trace_from_jsonl(line));
    }
}
BENCHMARK(BM_TraceParse);

} // namespace
