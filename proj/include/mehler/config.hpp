#pragma once
// Run configuration for the command line tool, read from JSON.
//
// {
//   "model": "koponen",              catalog name
//   "parameters": {"s": 0.75},       model overrides
//   "generator": [[-1.0]],           optional replacement for B (row major)
//   "suites": ["poincare"],          default: every suite
//   "samples": 100000,
//   "seed": 42,                      required by verify and sample
//   "chains": 1,
//   "out": "results",
//   "epsilon": 0.01,                 small jump cutoff
//   "delta": 0.05,                   singular panel of the radial integrals
//   "tail_rel": 0.01,                power tail cut for the forms
//   "max_outer": 2048,               sigma rows per nonlocal form
//   "generator_outer": 2048,
//   "time": 1.0,                     t for the P_t checks
//   "sample": {"method": "direct", "t": 0}   t > 0 draws mu_t instead of sigma
// }

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mehler/inequalities.hpp"
#include "mehler/models.hpp"

namespace mehler {

struct RunConfig {
    std::string model = "koponen";
    std::map<std::string, double> parameters;
    std::optional<Matrix> generator;
    std::vector<std::string> suites;
    long long samples = 100000;
    std::optional<std::uint64_t> seed;
    int chains = 1;
    std::string out;
    double epsilon = 0.01;
    double delta = 0.05;
    double tail_rel = 1e-2;
    long long max_outer = 2048;
    int generator_outer = 2048;
    double time = 1.0;
    std::string sample_method = "direct";
    double sample_time = 0.0;
};

// throws ConfigError on malformed JSON, unknown keys or out of range values
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);

models::ModelSpec build_model(const RunConfig& cfg);
CheckOptions check_options(const RunConfig& cfg);
// the suites to run, in catalog order
std::vector<std::string> selected_suites(const RunConfig& cfg);

}  // namespace mehler
