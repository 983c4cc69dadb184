#include "uqbench/demo.hpp"

#include "uqbench/mock_client.hpp"
#include "uqbench/store.hpp"

namespace uqbench::demo {

namespace {

MockCompletion comp(double weight, std::string text, std::vector<TokenLogProb> tokens) {
    MockCompletion c;
    c.weight = weight;
    c.text = std::move(text);
    c.tokens = std::move(tokens);
    return c;
}

MockEntry entry(std::vector<MockCompletion> completions) {
    MockEntry e;
    e.completions = std::move(completions);
    return e;
}

MockEntry confidence(const std::string& number) {
    return entry({comp(1.0, number, {})});
}

MockEntry echo() {
    MockEntry e;
    e.echo = true;
    return e;
}

MockEntry rewrites(std::vector<std::string> variants) {
    std::vector<MockCompletion> cs;
    const double w = 1.0 / static_cast<double>(variants.size());
    for (auto& v : variants) {
        cs.push_back(comp(w, std::move(v), {}));
    }
    return entry(std::move(cs));
}

// The demo spans the interesting corners: confident-correct,
// maximally-uncertain, mixed-with-invalid, confident-wrong,
// perturbation-disagreement, and a skewed spread.
MockScript demo_script() {
    MockScript s;
    s.model_id = "mock-demo";

    // b1: certain and correct.
    s.by_question["demo-b1"] = {
        echo(),
        {entry({comp(1.0, "Water clings to surfaces at room temperature. So the answer is yes.",
                     {{"So", -0.01, -4.6}, {"yes", -0.02, -3.9}})})},
        confidence("95"),
    };

    // b2: a coin flip; top-1 and top-2 tie, so disparity is zero.
    s.by_question["demo-b2"] = {
        rewrites({"Will a fair coin come up heads on its next toss?",
                  "On the next flip of a fair coin, does it land heads?"}),
        {entry({comp(0.5, "Either side is equally likely. So the answer is yes.",
                     {{"yes", -0.6931471805599453, -0.6931471805599453}}),
                comp(0.5, "Either side is equally likely. So the answer is no.",
                     {{"no", -0.6931471805599453, -0.6931471805599453}})})},
        confidence("50"),
    };

    // b3: mostly right, sometimes wrong, sometimes no parseable answer.
    s.by_question["demo-b3"] = {
        rewrites({"Could a penguin beat an eagle in flight?",
                  "Is a penguin able to outfly an eagle?",
                  "Would a penguin fly better than an eagle?"}),
        {entry({comp(0.7, "Penguins are flightless birds. So the answer is no.",
                     {{"no", -0.36, -1.2}}),
                comp(0.2, "Some penguins glide underwater like flight. So the answer is yes.",
                     {{"yes", -1.61, -2.0}}),
                comp(0.1, "It depends on what counts as flying.", {{"It", -1.9, -2.3}})})},
        confidence("70"),
    };

    // n1: certain and wrong; uncertainty metrics see full confidence.
    s.by_question["demo-n1"] = {
        echo(),
        {entry({comp(1.0, "6 * 7 = 42, but wait, 6 boxes of 7 is 99 in this telling. "
                          "The answer to the question is 99.",
                     {{"99", -0.03, -3.5}})})},
        confidence("90"),
    };

    // n2: each perturbation is internally certain but they disagree, so the
    // pooled entropy is pure disagreement.
    s.by_question["demo-n2"] = {
        rewrites({"Lena reads 2 chapters Monday and 8 Tuesday; how many in total?",
                  "How many chapters does Lena read across Monday (2) and Tuesday (8)?"}),
        {entry({comp(1.0, "2 + 8 = 10. The answer to the question is 10.",
                     {{"10", -0.05, -3.0}})}),
         entry({comp(1.0, "2 + 8 makes 12 in this reading. The answer to the question is 12.",
                     {{"12", -0.08, -2.6}})}),
         entry({comp(1.0, "2 + 8 = 10. The answer to the question is 10.",
                     {{"10", -0.05, -3.0}})})},
        confidence("80"),
    };

    // n3: a skewed three-way spread around the right answer.
    s.by_question["demo-n3"] = {
        echo(),
        {entry({comp(0.5, "A week runs seven days. The answer to the question is 7.",
                     {{"7", -0.69, -1.4}}),
                comp(0.25, "Counting a bonus day gives eight. The answer to the question is 8.",
                     {{"8", -1.39, -1.6}}),
                comp(0.25, "Skipping Sunday leaves six. The answer to the question is 6.",
                     {{"6", -1.39, -1.7}})})},
        confidence("60"),
    };

    return s;
}

constexpr const char* kDataset =
    R"({"id":"demo-b1","question":"Is water wet at room temperature?","answer":"yes","task":"boolean"}
{"id":"demo-b2","question":"Would a fair coin land heads on the next flip?","answer":"yes","task":"boolean"}
{"id":"demo-b3","question":"Can a penguin outfly an eagle?","answer":"no","task":"boolean"}
{"id":"demo-n1","question":"A crate holds 6 boxes of 7 apples. How many apples are in the crate?","answer":"42","task":"numeric"}
{"id":"demo-n2","question":"Lena reads 2 chapters on Monday and 8 on Tuesday. How many chapters does she read in total?","answer":"10","task":"numeric"}
{"id":"demo-n3","question":"How many days are there in a week?","answer":"7","task":"numeric"}
)";

} // namespace

DemoFiles write_demo_inputs(const std::string& dir) {
    DemoFiles files;
    files.dataset = dir + "/demo_dataset.jsonl";
    files.script = dir + "/demo_script.json";
    store::write_text_file(files.dataset, kDataset);
    save_mock_script(demo_script(), files.script);
    return files;
}

} // namespace uqbench::demo
