// Runs the real binary. ctest passes its path as the first argument.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <uqbench/mock_client.hpp>
#include <uqbench/store.hpp>

#include "test_support.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace uqbench;
using testutil::TempDir;

namespace {

std::string g_cli;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const TempDir& tmp, const std::string& args) {
    const auto out = tmp.str("cli_stdout.txt");
    const auto err = tmp.str("cli_stderr.txt");
    const auto cmd = "'" + g_cli + "' " + args + " >'" + out + "' 2>'" + err + "'";
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string write_dataset(const TempDir& tmp, int count) {
    std::string content;
    for (int i = 1; i <= count; ++i) {
        content += R"({"id":"c)" + std::to_string(i) +
                   R"(","question":"Question )" + std::to_string(i) +
                   R"(?","answer":"yes","task":"boolean"})" + "\n";
    }
    const auto path = tmp.str("dataset.jsonl");
    std::ofstream(path) << content;
    return path;
}

std::string write_script(const TempDir& tmp, int count) {
    MockScript s;
    s.model_id = "cli-mock";
    for (int i = 1; i <= count; ++i) {
        MockQuestionScript qs;
        MockEntry echo;
        echo.echo = true;
        qs.perturb = echo;
        MockEntry answer;
        MockCompletion c;
        c.text = "So the answer is yes.";
        c.tokens = {{"t", -0.2, -1.5}};
        answer.completions.push_back(c);
        qs.answers.push_back(answer);
        s.by_question["c" + std::to_string(i)] = qs;
    }
    const auto path = tmp.str("script.json");
    save_mock_script(s, path);
    return path;
}

} // namespace

TEST_CASE("no subcommand and unknown flags exit 2 with usage") {
    TempDir tmp;
    auto r = run_cli(tmp, "");
    CHECK(r.code == 2);
    CHECK((r.out + r.err).find("Usage") != std::string::npos);

    r = run_cli(tmp, "frobnicate");
    CHECK(r.code == 2);

    r = run_cli(tmp, "build --frobnicate");
    CHECK(r.code == 2);
    CHECK((r.out + r.err).find("Usage") != std::string::npos);
}

TEST_CASE("--help exits 0") {
    TempDir tmp;
    auto r = run_cli(tmp, "--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("build") != std::string::npos);
    CHECK(r.out.find("mock-demo") != std::string::npos);
}

TEST_CASE("configuration mistakes exit 2") {
    TempDir tmp;
    const auto script = write_script(tmp, 1);

    // build without a dataset
    auto r = run_cli(tmp, "build --mock-script '" + script + "' --outdir '" +
                              tmp.str("out") + "'");
    CHECK(r.code == 2);
    CHECK(r.err.find("config error:") != std::string::npos);

    // config file with an unknown key
    const auto cfg = tmp.str("bad.json");
    std::ofstream(cfg) << R"({"datast": "x.jsonl"})";
    r = run_cli(tmp, "build --config '" + cfg + "'");
    CHECK(r.code == 2);
    CHECK(r.err.find("datast") != std::string::npos);

    // analyze with a bogus method
    r = run_cli(tmp, "analyze --rows '" + tmp.str("rows.jsonl") + "' --outdir '" +
                         tmp.str("out") + "' --method kendall");
    CHECK(r.code == 2);
}

TEST_CASE("a failing question exits 1 and leaves the rest stored") {
    TempDir tmp;
    const auto dataset = write_dataset(tmp, 3);
    // Script covers c1 and c2 only; c3 has nowhere to route.
    const auto script = write_script(tmp, 2);
    const auto traces = tmp.str("traces.jsonl");

    auto r = run_cli(tmp, "build --dataset '" + dataset + "' --mock-script '" + script +
                              "' --outdir '" + tmp.str("out") + "' --traces '" + traces +
                              "' --m 2 --k 2");
    CHECK(r.code == 1);
    CHECK(r.err.find("c3") != std::string::npos);
    CHECK(r.out.find("2 built") != std::string::npos);
    CHECK(r.out.find("1 failed") != std::string::npos);
}

TEST_CASE("flags beat the config file which beats the defaults") {
    TempDir tmp;
    const auto dataset = write_dataset(tmp, 1);
    const auto script = write_script(tmp, 1);
    const auto traces = tmp.str("traces.jsonl");
    const auto cfg = tmp.str("cfg.json");
    std::ofstream(cfg) << R"({"m": 4, "k": 2, "dataset": ")" << dataset
                       << R"(", "mock_script": ")" << script << R"(", "outdir": ")"
                       << tmp.str("out") << R"(", "traces": ")" << traces << R"("})";

    auto r = run_cli(tmp, "build --config '" + cfg + "' --m 2");
    REQUIRE(r.code == 0);

    std::ifstream in(traces);
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto trace = store::trace_from_jsonl(line);
    CHECK(trace.perturbations.size() == 2); // flag --m 2 beat the file's 4
    CHECK(trace.samples.size() == 4);       // file's k=2 beat the default 10
}

TEST_CASE("build then compute then analyze succeeds end to end") {
    TempDir tmp;
    const auto dataset = write_dataset(tmp, 3);
    const auto script = write_script(tmp, 3);
    const auto outdir = tmp.str("out");
    const std::string common = " --dataset '" + dataset + "' --mock-script '" + script +
                               "' --outdir '" + outdir + "' --m 2 --k 2 --seed 11";

    auto r = run_cli(tmp, "build" + common);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("3 built") != std::string::npos);

    r = run_cli(tmp, "compute" + common);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("3 rows") != std::string::npos);

    r = run_cli(tmp, "analyze" + common);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("metric,ansu,cu,au,eu,pairs") != std::string::npos);

    // compute against an empty store is a data error, not a config error
    r = run_cli(tmp, "compute" + common + " --traces '" + tmp.str("empty.jsonl") + "'");
    CHECK(r.code == 1);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <uqbench binary> [doctest args]\n");
        return 2;
    }
    g_cli = argv[1];
    doctest::Context ctx(argc - 1, argv + 1);
    return ctx.run();
}
