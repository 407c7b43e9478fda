#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mehler/config.hpp"
#include "mehler/errors.hpp"

using namespace mehler;
namespace fs = std::filesystem;

namespace {

const fs::path work = MEHLER_TEST_WORK_DIR;

int run(const std::string& args) {
    const std::string cmd = std::string(MEHLER_LAB_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh(const std::string& name) {
    const fs::path d = work / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("configuration parsing") {
    const auto cfg = parse_config(R"({"model": "alpha_stable", "parameters": {"alpha": 1.2}, "seed": 7,
                                      "suites": ["tail_bound", "poincare"], "sample": {"method": "long_horizon"}})");
    CHECK(cfg.model == "alpha_stable");
    CHECK(cfg.parameters.at("alpha") == 1.2);
    CHECK(*cfg.seed == 7u);
    CHECK(cfg.sample_method == "long_horizon");
    CHECK(selected_suites(cfg) == std::vector<std::string>{"poincare", "tail_bound"});
    CHECK(build_model(cfg).h_l1 == doctest::Approx(1.0 / 1.2));
    CHECK(selected_suites(parse_config("{}")) == suite_names());
    CHECK_FALSE(parse_config("{}").seed.has_value());

    const auto g = parse_config(R"({"generator": [[-2.0]]})");
    CHECK(build_model(g).semigroup.generator()(0, 0) == -2.0);
    CHECK(check_options(parse_config(R"({"samples": 500, "seed": 3, "chains": 2})")).N == 500);

    for (const char* bad : {R"({"modle": "koponen"})", R"({"model": "koponen",)", R"({"seed": -1})",
                            R"({"seed": 1.5})", R"({"samples": -5})", R"({"chains": 0})", R"({"epsilon": 1.5})",
                            R"({"suites": ["poincare", "nope"]})", R"({"model": "nope"})",
                            R"({"sample": {"method": "direct", "x": 1}})", R"({"sample": {"method": "guess"}})",
                            R"({"time": 0})", R"([1, 2])"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_config(bad), ConfigError);
    }
    CHECK_THROWS_AS(load_config((work / "missing.json").string()), ConfigError);
}

TEST_CASE("exit codes") {
    fs::create_directories(work);
    const auto out = fresh("codes");
    CHECK(run("hypotheses --out " + out.string()) == 0);
    CHECK(fs::exists(out / "hypotheses.csv"));
    CHECK(slurp(out / "hypotheses.csv").rfind("model,clause,verdict,value,note\n", 0) == 0);

    // B = 0 is not stable
    const auto unstable = write_file(work / "unstable.json", R"({"generator": [[0.0]], "seed": 1})");
    CHECK(run("hypotheses --config " + unstable.string() + " --out " + out.string()) == 1);
    CHECK(run("verify --config " + unstable.string() + " --out " + out.string()) == 1);

    const auto typo = write_file(work / "typo.json", R"({"sedd": 1})");
    CHECK(run("verify --config " + typo.string() + " --out " + out.string()) == 2);
    CHECK(run("verify --suite poincare --out " + out.string()) == 2);  // no seed
    CHECK(run("verify --seed 1 --suite nope --out " + out.string()) == 2);
    CHECK(run("frobnicate") == 2);
}

TEST_CASE("verify output is reproducible and restricted to the chosen suite") {
    const auto cfg = write_file(work / "small.json",
                                R"({"samples": 2000, "max_outer": 256, "generator_outer": 256, "seed": 9})");
    const auto a = fresh("verify_a"), b = fresh("verify_b");
    CHECK(run("verify --config " + cfg.string() + " --suite poincare --chains 1 --out " + a.string()) == 0);
    CHECK(run("verify --config " + cfg.string() + " --suite poincare --chains 4 --out " + b.string()) == 0);
    const std::string csv = slurp(a / "verify.csv");
    CHECK(csv == slurp(b / "verify.csv"));
    CHECK(slurp(a / "verify.json") == slurp(b / "verify.json"));
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line.find("verdict") != std::string::npos);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.rfind("poincare,", 0) == 0);
        CHECK(line.find(",fail,") == std::string::npos);
    }
    CHECK(rows >= 10);
}

TEST_CASE("sample command") {
    const auto out = fresh("sample");
    CHECK(run("sample --seed 3 --samples 0 --out " + out.string()) == 0);
    CHECK(slurp(out / "samples.csv") == "x1\n");
    CHECK(run("sample --seed 3 --samples 50 --out " + out.string()) == 0);
    const std::string first = slurp(out / "samples.csv");
    CHECK(count_lines(first) == 51);
    CHECK(run("sample --seed 3 --samples 50 --chains 3 --out " + out.string()) == 0);
    CHECK(slurp(out / "samples.csv") == first);
    CHECK(run("sample --samples 50 --out " + out.string()) == 2);
}
