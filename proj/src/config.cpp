#include "mehler/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mehler/errors.hpp"

namespace mehler {

namespace {

using json = nlohmann::json;

template <class T>
T get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

Matrix read_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("generator must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    Matrix B(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw ConfigError("generator must be square");
        for (Eigen::Index k = 0; k < n; ++k) {
            if (!row[static_cast<std::size_t>(k)].is_number()) throw ConfigError("generator entries must be numbers");
            B(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return B;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"model", "parameters", "generator", "suites", "samples", "seed", "chains", "out", "epsilon",
                    "delta", "tail_rel", "max_outer", "generator_outer", "time", "sample"},
                   "config");
    RunConfig c;
    if (j.contains("model")) c.model = get<std::string>(j, "model");
    if (j.contains("parameters")) {
        const auto& p = j["parameters"];
        if (!p.is_object()) throw ConfigError("parameters must be an object");
        for (const auto& [k, v] : p.items()) {
            if (!v.is_number()) throw ConfigError("parameter '" + k + "' must be a number");
            c.parameters[k] = v.get<double>();
        }
    }
    if (j.contains("generator")) c.generator = read_matrix(j["generator"]);
    if (j.contains("suites")) c.suites = get<std::vector<std::string>>(j, "suites");
    if (j.contains("samples")) c.samples = get<long long>(j, "samples");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw ConfigError("seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("chains")) c.chains = get<int>(j, "chains");
    if (j.contains("out")) c.out = get<std::string>(j, "out");
    if (j.contains("epsilon")) c.epsilon = get<double>(j, "epsilon");
    if (j.contains("delta")) c.delta = get<double>(j, "delta");
    if (j.contains("tail_rel")) c.tail_rel = get<double>(j, "tail_rel");
    if (j.contains("max_outer")) c.max_outer = get<long long>(j, "max_outer");
    if (j.contains("generator_outer")) c.generator_outer = get<int>(j, "generator_outer");
    if (j.contains("time")) c.time = get<double>(j, "time");
    if (j.contains("sample")) {
        const auto& s = j["sample"];
        if (!s.is_object()) throw ConfigError("sample must be an object");
        reject_unknown(s, {"method", "t"}, "sample");
        if (s.contains("method")) c.sample_method = get<std::string>(s, "method");
        if (s.contains("t")) c.sample_time = get<double>(s, "t");
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const RunConfig& c) {
    const auto names = models::catalog_names();
    if (std::find(names.begin(), names.end(), c.model) == names.end())
        throw ConfigError("unknown model '" + c.model + "'");
    const auto all = suite_names();
    for (const auto& s : c.suites)
        if (std::find(all.begin(), all.end(), s) == all.end()) throw ConfigError("unknown suite '" + s + "'");
    if (c.samples < 0 || c.samples > 100000000) throw ConfigError("samples out of range");
    if (c.chains < 1 || c.chains > 256) throw ConfigError("chains must be in [1, 256]");
    if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw ConfigError("epsilon must be in (0, 1)");
    if (!(c.delta > 0.0 && c.delta <= 1.0)) throw ConfigError("delta must be in (0, 1]");
    if (!(c.tail_rel > 0.0 && c.tail_rel < 1.0)) throw ConfigError("tail_rel must be in (0, 1)");
    if (c.max_outer < 0 || c.generator_outer < 1) throw ConfigError("outer sample counts must be positive");
    if (!(c.time > 0.0)) throw ConfigError("time must be positive");
    if (c.sample_method != "direct" && c.sample_method != "long_horizon")
        throw ConfigError("sample method must be direct or long_horizon");
    if (!(c.sample_time >= 0.0)) throw ConfigError("sample t must be non-negative");
}

models::ModelSpec build_model(const RunConfig& c) {
    models::ModelSpec m = models::build_named(c.model, c.parameters);
    if (c.generator) {
        if (c.generator->rows() != m.dimension()) throw ConfigError("generator dimension does not match the model");
        m.semigroup = SemigroupFamily(*c.generator);
        m.evolved = EvolvedTriple(m.triple, m.semigroup);
    }
    return m;
}

CheckOptions check_options(const RunConfig& c) {
    CheckOptions o;
    o.N = static_cast<int>(c.samples);
    o.seed = c.seed.value_or(0);
    o.chains = c.chains;
    o.scheme.epsilon = c.epsilon;
    o.forms.delta = c.delta;
    o.forms.tail_rel = c.tail_rel;
    o.forms.max_outer = c.max_outer;
    o.forms.chains = c.chains;
    o.generator_outer = c.generator_outer;
    o.time = c.time;
    return o;
}

std::vector<std::string> selected_suites(const RunConfig& c) {
    if (c.suites.empty()) return suite_names();
    std::vector<std::string> out;
    for (const auto& s : suite_names())
        if (std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end()) out.push_back(s);
    return out;
}

}  // namespace mehler
