#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <uqbench/errors.hpp>
#include <uqbench/hashing.hpp>
#include <uqbench/metrics.hpp>

#include "oracles.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

using namespace uqbench;
using testutil::token_trace;

namespace {

double lp(double prob) { return std::log(prob); }

} // namespace

TEST_CASE("npe on worked examples") {
    CHECK(metrics::npe(token_trace({{{lp(1.0), lp(0.5)}}})) == doctest::Approx(0.0));

    auto one = token_trace({{{lp(0.5), lp(0.5)}, {lp(0.5), lp(0.5)}}});
    CHECK(metrics::npe(one) ==
          doctest::Approx(oracle::npe({{lp(0.5), lp(0.5)}})).epsilon(1e-12));
    CHECK(metrics::npe(one) == doctest::Approx(1.3863).epsilon(1e-4));

    auto two = token_trace({{{lp(0.5), lp(0.5)}}, {{lp(0.25), lp(0.25)}}});
    CHECK(metrics::npe(two) ==
          doctest::Approx(oracle::npe({{lp(0.5)}, {lp(0.25)}})).epsilon(1e-12));
    CHECK(metrics::npe(two) == doctest::Approx(1.0397).epsilon(1e-4));
}

TEST_CASE("lnpe on worked examples") {
    auto one = token_trace({{{lp(0.5), lp(0.5)}, {lp(0.5), lp(0.5)}}});
    CHECK(metrics::lnpe(one) ==
          doctest::Approx(oracle::lnpe({{lp(0.5), lp(0.5)}})).epsilon(1e-12));
    CHECK(metrics::lnpe(one) == doctest::Approx(0.6931).epsilon(1e-4));

    auto certain = token_trace({{{0.0, lp(0.5)}, {0.0, lp(0.5)}, {0.0, lp(0.5)}}});
    CHECK(metrics::lnpe(certain) == doctest::Approx(0.0));

    auto mixed = token_trace({{{lp(0.5), lp(0.5)}, {lp(0.5), lp(0.5)}},
                              {{lp(0.25), lp(0.25)}}});
    CHECK(metrics::lnpe(mixed) ==
          doctest::Approx(oracle::lnpe({{lp(0.5), lp(0.5)}, {lp(0.25)}})).epsilon(1e-12));
    CHECK(metrics::lnpe(mixed) == doctest::Approx(1.0397).epsilon(1e-4));
}

TEST_CASE("top_disp on worked examples") {
    auto flat = token_trace({{{lp(0.5), lp(0.5)}, {lp(0.5), lp(0.5)}}});
    CHECK(metrics::top_disp(flat) == doctest::Approx(0.0));

    auto strong = token_trace({{{lp(0.9), lp(0.1)}}});
    CHECK(metrics::top_disp(strong) ==
          doctest::Approx(oracle::top_disp({{{lp(0.9), lp(0.1)}}})).epsilon(1e-12));
    CHECK(metrics::top_disp(strong) == doctest::Approx(-2.1972).epsilon(1e-4));

    auto pair = token_trace({{{lp(0.8), lp(0.2)}, {lp(0.6), lp(0.3)}}});
    CHECK(metrics::top_disp(pair) ==
          doctest::Approx(oracle::top_disp({{{lp(0.8), lp(0.2)}, {lp(0.6), lp(0.3)}}}))
              .epsilon(1e-12));
    CHECK(metrics::top_disp(pair) == doctest::Approx(-1.0397).epsilon(1e-4));
}

TEST_CASE("top_disp absorbs inverted pairs through the absolute value") {
    // Sampling can emit a non-top-1 token, putting top1_logprob below top2.
    auto inverted = token_trace({{{lp(0.1), lp(0.9)}}});
    auto upright = token_trace({{{lp(0.9), lp(0.1)}}});
    CHECK(metrics::top_disp(inverted) ==
          doctest::Approx(metrics::top_disp(upright)).epsilon(1e-12));
}

TEST_CASE("intra on worked examples") {
    auto one = token_trace({{{0.0, 0.0}}}, {1.0});
    CHECK(metrics::intra(one) == doctest::Approx(-1.0));

    auto two = token_trace({{{0.0, 0.0}}, {{0.0, 0.0}}}, {0.8, 0.6});
    CHECK(metrics::intra(two) ==
          doctest::Approx(oracle::intra({0.8, 0.6})).epsilon(1e-12));
    CHECK(metrics::intra(two) == doctest::Approx(-0.7).epsilon(1e-12));

    auto zero = token_trace({{{0.0, 0.0}}, {{0.0, 0.0}}, {{0.0, 0.0}}},
                            {0.0, 0.0, 0.0});
    CHECK(metrics::intra(zero) == doctest::Approx(0.0));
}

TEST_CASE("report on worked examples") {
    // All-certain tokens, top2 prob 1e-9, confidence 1.0.
    auto certain = token_trace({{{0.0, lp(1e-9)}}, {{0.0, lp(1e-9)}}}, {1.0, 1.0});
    auto r = metrics::report(certain);
    CHECK(r.npe == doctest::Approx(0.0));
    CHECK(r.lnpe == doctest::Approx(0.0));
    CHECK(r.top_disp == doctest::Approx(-std::fabs(lp(1e-9))).epsilon(1e-12));
    CHECK(r.top_disp == doctest::Approx(-20.7).epsilon(1e-2));
    REQUIRE(r.intra.has_value());
    CHECK(*r.intra == doctest::Approx(-1.0));

    // Single sample, prob 0.5, top2 0.5, confidence 0.5.
    auto single = token_trace({{{lp(0.5), lp(0.5)}}}, {0.5});
    r = metrics::report(single);
    CHECK(r.npe == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(r.lnpe == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(r.top_disp == doctest::Approx(0.0));
    REQUIRE(r.intra.has_value());
    CHECK(*r.intra == doctest::Approx(-0.5));
}

TEST_CASE("report leaves intra absent without confidences") {
    auto t = token_trace({{{lp(0.5), lp(0.5)}}});
    auto r = metrics::report(t);
    CHECK_FALSE(r.intra.has_value());
    CHECK(std::isfinite(r.npe));

    // One missing confidence among several is still "not collected".
    auto partial = token_trace({{{0.0, 0.0}}, {{0.0, 0.0}}}, {0.9, std::nullopt});
    CHECK_FALSE(metrics::report(partial).intra.has_value());
    CHECK_THROWS_AS(metrics::intra(partial), CapabilityError);
}

TEST_CASE("metrics are invariant under sample reordering and duplication") {
    StableHash h(11);
    h.mix("metric-props");
    SplitMixStream rng(h.digest());
    for (int iter = 0; iter < 50; ++iter) {
        const int n = 2 + int(rng.next() % 4);
        std::vector<std::vector<std::pair<double, double>>> rows;
        std::vector<std::optional<double>> confs;
        for (int s = 0; s < n; ++s) {
            std::vector<std::pair<double, double>> toks;
            const int len = 1 + int(rng.next() % 4);
            for (int i = 0; i < len; ++i) {
                const double p1 = 0.05 + 0.95 * unit_interval(rng.next());
                const double p2 = p1 * unit_interval(rng.next());
                toks.push_back({lp(p1), lp(std::max(p2, 1e-12))});
            }
            rows.push_back(toks);
            confs.push_back(unit_interval(rng.next()));
        }
        auto base = token_trace(rows, confs);

        auto shuffled_rows = rows;
        auto shuffled_confs = confs;
        for (std::size_t i = shuffled_rows.size(); i > 1; --i) {
            const auto j = rng.next() % i;
            std::swap(shuffled_rows[i - 1], shuffled_rows[j]);
            std::swap(shuffled_confs[i - 1], shuffled_confs[j]);
        }
        auto shuffled = token_trace(shuffled_rows, shuffled_confs);

        auto doubled_rows = rows;
        auto doubled_confs = confs;
        doubled_rows.insert(doubled_rows.end(), rows.begin(), rows.end());
        doubled_confs.insert(doubled_confs.end(), confs.begin(), confs.end());
        auto doubled = token_trace(doubled_rows, doubled_confs);

        auto rb = metrics::report(base);
        for (const auto* variant : {&shuffled, &doubled}) {
            auto rv = metrics::report(*variant);
            CHECK(rv.npe == doctest::Approx(rb.npe).epsilon(1e-9));
            CHECK(rv.lnpe == doctest::Approx(rb.lnpe).epsilon(1e-9));
            CHECK(rv.top_disp == doctest::Approx(rb.top_disp).epsilon(1e-9));
            CHECK(*rv.intra == doctest::Approx(*rb.intra).epsilon(1e-9));
        }

        // With every per-token term >= 0, the per-sample mean never exceeds
        // the per-sample sum, so npe >= lnpe.
        CHECK(rb.npe >= rb.lnpe - 1e-12);
        CHECK(rb.top_disp <= 1e-12);
        CHECK(*rb.intra >= -1.0 - 1e-12);
        CHECK(*rb.intra <= 1e-12);
    }
}

TEST_CASE("missing capabilities raise CapabilityError") {
    auto no_tokens = testutil::grid_trace({{"yes"}}, testutil::boolean_question(), {},
                                          std::vector<TokenLogProb>{});
    CHECK_THROWS_AS(metrics::npe(no_tokens), CapabilityError);
    // A zero-length sample is a malformed trace, not a capability gap.
    CHECK_THROWS_AS(metrics::lnpe(no_tokens), ContractError);
    CHECK_THROWS_AS(metrics::top_disp(no_tokens), CapabilityError);

    auto bad_top1 = token_trace({{{std::nan(""), lp(0.5)}}});
    CHECK_THROWS_AS(metrics::npe(bad_top1), CapabilityError);

    auto bad_top2 = token_trace({{{lp(0.5), std::nan("")}}});
    CHECK_THROWS_AS(metrics::top_disp(bad_top2), CapabilityError);
    // npe only needs top-1, so it still works.
    CHECK(std::isfinite(metrics::npe(bad_top2)));
}

TEST_CASE("report fails loudly when the trace is token-free") {
    auto no_tokens = testutil::grid_trace({{"yes"}}, testutil::boolean_question(), {},
                                          std::vector<TokenLogProb>{});
    CHECK_THROWS_AS(metrics::report(no_tokens), CapabilityError);
}

TEST_CASE("incomplete grids are a contract violation") {
    auto t = token_trace({{{0.0, 0.0}}, {{0.0, 0.0}}});
    t.samples.pop_back();
    t.perturbations.clear();
    CHECK_THROWS_AS(metrics::npe(t), ContractError);
}
