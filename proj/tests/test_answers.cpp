#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <uqbench/answers.hpp>
#include <uqbench/errors.hpp>
#include <uqbench/format.hpp>
#include <uqbench/hashing.hpp>
#include <uqbench/model_client.hpp>
#include <uqbench/prompts.hpp>

#include <string>
#include <vector>

using namespace uqbench;

TEST_CASE("task names round-trip") {
    CHECK(std::string(task_name(Task::Numeric)) == "numeric");
    CHECK(std::string(task_name(Task::Boolean)) == "boolean");
    CHECK(task_from_name("numeric") == Task::Numeric);
    CHECK(task_from_name("Boolean") == Task::Boolean);
    CHECK_THROWS_AS(task_from_name("multiple-choice"), ConfigError);
}

TEST_CASE("numeric canonicalization") {
    CHECK(canonicalize("35.", Task::Numeric) == "35");
    CHECK(canonicalize("2.0", Task::Numeric) == "2");
    CHECK(canonicalize("2", Task::Numeric) == "2");
    CHECK(canonicalize("$1,234.50", Task::Numeric) == "1234.5");
    CHECK(canonicalize("€40", Task::Numeric) == "40");
    CHECK(canonicalize(" 1 234 ", Task::Numeric) == "1234");
    CHECK(canonicalize("-7.", Task::Numeric) == "-7");
    CHECK(canonicalize("+7", Task::Numeric) == "7");
    CHECK(canonicalize("007", Task::Numeric) == "7");
    CHECK(canonicalize("0.50", Task::Numeric) == "0.5");
    CHECK(canonicalize(".5", Task::Numeric) == "0.5");
    CHECK(canonicalize("-0", Task::Numeric) == "0");
    CHECK(canonicalize("-0.0", Task::Numeric) == "0");
    CHECK(canonicalize("10.", Task::Numeric) == "10");
}

TEST_CASE("numeric canonicalization rejects non-numbers as a value") {
    for (const char* bad : {"", "abc", "12a", "1.2.3", "-", "twelve", "..", "1-2"}) {
        CAPTURE(bad);
        CHECK(canonicalize(bad, Task::Numeric) == kInvalidAnswer);
    }
}

TEST_CASE("boolean canonicalization") {
    CHECK(canonicalize("yes", Task::Boolean) == "yes");
    CHECK(canonicalize("Yes.", Task::Boolean) == "yes");
    CHECK(canonicalize(" NO! ", Task::Boolean) == "no");
    CHECK(canonicalize("No?", Task::Boolean) == "no");
    CHECK(canonicalize("YES,", Task::Boolean) == "yes");
    for (const char* bad : {"", "maybe", "yess", "true", "y", "yes no"}) {
        CAPTURE(bad);
        CHECK(canonicalize(bad, Task::Boolean) == kInvalidAnswer);
    }
}

TEST_CASE("canonicalization is idempotent") {
    StableHash h(99);
    h.mix("idempotence");
    SplitMixStream rng(h.digest());
    const std::string alphabet = "0123456789.,-+$ yesno";
    for (int iter = 0; iter < 2000; ++iter) {
        std::string s;
        const auto len = rng.next() % 8;
        for (std::uint64_t c = 0; c < len; ++c) {
            s.push_back(alphabet[rng.next() % alphabet.size()]);
        }
        for (Task task : {Task::Numeric, Task::Boolean}) {
            const std::string once = canonicalize(s, task);
            if (!is_invalid(once)) {
                CAPTURE(s);
                CHECK(canonicalize(once, task) == once);
            }
        }
    }
}

TEST_CASE("boolean canonicalization never invents values") {
    // The image is exactly {yes, no, invalid}.
    StableHash h(7);
    h.mix("image");
    SplitMixStream rng(h.digest());
    for (int iter = 0; iter < 2000; ++iter) {
        std::string s;
        const auto len = rng.next() % 6;
        for (std::uint64_t c = 0; c < len; ++c) {
            s.push_back(static_cast<char>('A' + rng.next() % 58));
        }
        const std::string out = canonicalize(s, Task::Boolean);
        CHECK((out == "yes" || out == "no" || is_invalid(out)));
    }
}

TEST_CASE("grading") {
    CHECK(grade("yes", "yes"));
    CHECK(grade("35", "35"));
    CHECK_FALSE(grade("yes", "no"));
    CHECK_FALSE(grade("35", "36"));
    // INVALID never grades correct, even against an (impossible) invalid gold.
    CHECK_FALSE(grade(kInvalidAnswer, kInvalidAnswer));
    CHECK_FALSE(grade(kInvalidAnswer, "yes"));
}

TEST_CASE("answer extraction uses the last marker, case-insensitively") {
    using prompts::extract_answer;
    CHECK(extract_answer("Thus X. So the answer is yes.", Task::Boolean) == "yes");
    CHECK(extract_answer("so THE Answer IS No!", Task::Boolean) == "no");
    CHECK(extract_answer("So the answer is: Yes.", Task::Boolean) == "yes");
    CHECK(extract_answer("So the answer is no. Wait. So the answer is yes.",
                         Task::Boolean) == "yes");
    CHECK(extract_answer("So the answer is maybe.", Task::Boolean) == kInvalidAnswer);
    CHECK(extract_answer("It is unclear.", Task::Boolean) == kInvalidAnswer);
    CHECK(extract_answer("So the answer is", Task::Boolean) == kInvalidAnswer);

    CHECK(extract_answer("2 + 2 = 4. The answer to the question is 4.", Task::Numeric) ==
          "4");
    CHECK(extract_answer("the answer to the question is 1,234.50.", Task::Numeric) ==
          "1234.5");
    CHECK(extract_answer("The answer to the question is -7.", Task::Numeric) == "-7");
    CHECK(extract_answer(
              "The answer to the question is 5. No: the answer to the question is 6.",
              Task::Numeric) == "6");
    CHECK(extract_answer("The answer to the question is around forty.", Task::Numeric) ==
          kInvalidAnswer);
    CHECK(extract_answer("It is 42.", Task::Numeric) == kInvalidAnswer);
}

TEST_CASE("confidence reply parsing") {
    CHECK(parse_confidence_reply("90") == doctest::Approx(0.90).epsilon(1e-12));
    CHECK(parse_confidence_reply("Confidence: 90") == doctest::Approx(0.90));
    CHECK(parse_confidence_reply("I am about 72.5% sure.") == doctest::Approx(0.725));
    CHECK(parse_confidence_reply("0") == doctest::Approx(0.0));
    CHECK(parse_confidence_reply("100") == doctest::Approx(1.0));
    // The out-of-range token is skipped whole, not matched via its suffix.
    CHECK(parse_confidence_reply("150 or 85") == doctest::Approx(0.85));
    CHECK_THROWS_AS(parse_confidence_reply("quite sure"), ElicitationError);
    CHECK_THROWS_AS(parse_confidence_reply("150"), ElicitationError);
    CHECK_THROWS_AS(parse_confidence_reply("-5"), ElicitationError);
    CHECK_THROWS_AS(parse_confidence_reply(""), ElicitationError);
}

TEST_CASE("confidence prompt shape") {
    const std::string p = confidence_prompt("Is water wet?", "yes");
    CHECK(p.find("number from 0 to 100") != std::string::npos);
    CHECK(p.find("Question: Is water wet?\n") != std::string::npos);
    CHECK(p.find("Proposed answer: yes\n") != std::string::npos);
    CHECK(p.rfind("Confidence:") == p.size() - std::string("Confidence:").size());
}

TEST_CASE("shortest round-trip double formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.25) == "-0.25");
    CHECK(format_double(0.1) == "0.1");
    StableHash h(3);
    h.mix("format");
    SplitMixStream rng(h.digest());
    for (int iter = 0; iter < 1000; ++iter) {
        const double v = unit_interval(rng.next()) * 2000.0 - 1000.0;
        const auto back = parse_double(format_double(v));
        REQUIRE(back.has_value());
        CHECK(*back == v); // bit-exact, not approximate
    }
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double(" 1").has_value());
}
