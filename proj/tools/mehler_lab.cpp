// Batch front end: hypotheses, verify, sample.
// Exit codes: 0 all pass, 1 a fail verdict or failed hypothesis, 2 usage or config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mehler/config.hpp"
#include "mehler/errors.hpp"
#include "mehler/report.hpp"
#include "mehler/sampling.hpp"

namespace fs = std::filesystem;
using namespace mehler;

namespace {

struct Flags {
    std::string config, model, suites, out;
    std::optional<std::uint64_t> seed;
    std::optional<long long> samples;
    std::optional<int> chains;
};

RunConfig resolve(const Flags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.model.empty()) {
        if (f.model != c.model) c.parameters.clear();  // overrides belong to the config's model
        c.model = f.model;
    }
    if (!f.suites.empty()) {
        c.suites.clear();
        std::stringstream ss(f.suites);
        for (std::string s; std::getline(ss, s, ',');)
            if (!s.empty()) c.suites.push_back(s);
    }
    if (f.seed) c.seed = f.seed;
    if (f.samples) c.samples = *f.samples;
    if (f.chains) c.chains = *f.chains;
    if (!f.out.empty()) c.out = f.out;
    if (c.out.empty()) {
        const char* env = std::getenv("MEHLER_LAB_OUT");
        c.out = env && *env ? env : ".";
    }
    validate(c);
    return c;
}

std::ofstream open_out(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.out);
    std::ofstream f(fs::path(c.out) / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (fs::path(c.out) / name).string());
    return f;
}

// structural clauses plus the domination of the pushed measure at a few times
std::vector<HypothesisRow> hypothesis_rows(const models::ModelSpec& m) {
    std::vector<HypothesisRow> rows;
    for (const auto& c : check_hypotheses(m.evolved).clauses)
        rows.push_back({m.name, c.name, to_string(c.verdict), c.value, c.note});
    const auto grid = domination_grid(m.dimension());
    for (double t : {0.1, 1.0, 5.0}) {
        std::ostringstream name;
        name << "domination_t" << t;
        try {
            const auto d = check_domination(m.evolved, m.h, t, grid);
            rows.push_back({m.name, name.str(), d.pass ? "pass" : "fail", d.worst_margin,
                            "worst scaled margin of h(t) M - M o T_t^{-1} on the grid"});
        } catch (const Error& e) {
            rows.push_back({m.name, name.str(), "fail", 0.0, e.what()});
        }
    }
    return rows;
}

bool report_hypotheses(const RunConfig& c, const models::ModelSpec& m) {
    const auto rows = hypothesis_rows(m);
    auto out = open_out(c, "hypotheses.csv");
    write_hypotheses_csv(out, rows);
    bool ok = true;
    for (const auto& r : rows)
        if (r.verdict == "fail") {
            std::cerr << "hypothesis failed: " << r.clause << " (" << r.note << ")\n";
            ok = false;
        }
    return ok;
}

int cmd_hypotheses(const RunConfig& c) {
    const auto m = build_model(c);
    return report_hypotheses(c, m) ? 0 : 1;
}

int cmd_verify(const RunConfig& c) {
    if (!c.seed) throw ConfigError("verify needs a seed");
    const auto m = build_model(c);
    if (!report_hypotheses(c, m)) return 1;
    CheckContext ctx(m, check_options(c));
    std::vector<VerificationResult> rows;
    for (const auto& s : selected_suites(c)) {
        auto part = run_suite(ctx, s);
        for (auto& r : part) r.seed = *c.seed;
        rows.insert(rows.end(), part.begin(), part.end());
    }
    {
        auto out = open_out(c, "verify.csv");
        write_verify_csv(out, rows);
    }
    {
        auto out = open_out(c, "verify.json");
        write_verify_json(out, rows);
    }
    int fails = 0, ind = 0;
    for (const auto& r : rows) {
        if (r.verdict == Verdict::fail) {
            ++fails;
            std::cerr << "FAIL " << r.name << " " << r.function << " margin " << format_number(r.margin) << " se "
                      << format_number(r.margin_se) << "\n";
        } else if (r.verdict == Verdict::indeterminate) {
            ++ind;
            std::cerr << "indeterminate " << r.name << " " << r.function << ": " << r.note << "\n";
        }
    }
    std::cout << rows.size() << " rows, " << fails << " fail, " << ind << " indeterminate\n";
    return fails ? 1 : 0;
}

int cmd_sample(const RunConfig& c) {
    if (!c.seed) throw ConfigError("sample needs a seed");
    const auto m = build_model(c);
    const auto o = check_options(c);
    const int N = static_cast<int>(c.samples);
    SampleSet S = c.sample_time > 0.0
                      ? sample_mu_t(c.sample_time, N, m.evolved, o.scheme, *c.seed, c.chains)
                      : sample_invariant(N, m.evolved, o.scheme, *c.seed,
                                         c.sample_method == "direct" ? InvariantMethod::direct
                                                                     : InvariantMethod::long_horizon,
                                         c.chains);
    auto out = open_out(c, "samples.csv");
    write_csv(out, S);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mehler semigroup functional inequality lab"};
    app.require_subcommand(1);
    Flags flags;
    auto add_flags = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "JSON run configuration");
        sub->add_option("--model", flags.model, "catalog model name");
        sub->add_option("--suite", flags.suites, "comma separated suite names");
        sub->add_option("--seed", flags.seed, "random seed");
        sub->add_option("--samples", flags.samples, "sample count N");
        sub->add_option("--out", flags.out, "output directory (default $MEHLER_LAB_OUT or .)");
        sub->add_option("--chains", flags.chains, "worker threads");
    };
    auto* hyp = app.add_subcommand("hypotheses", "check the model hypotheses, write hypotheses.csv");
    auto* ver = app.add_subcommand("verify", "run the inequality suites, write verify.csv and verify.json");
    auto* smp = app.add_subcommand("sample", "draw from sigma or mu_t, write samples.csv");
    for (auto* s : {hyp, ver, smp}) add_flags(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        const RunConfig c = resolve(flags);
        if (*hyp) return cmd_hypotheses(c);
        if (*ver) return cmd_verify(c);
        return cmd_sample(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis failed: " << e.clause() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
