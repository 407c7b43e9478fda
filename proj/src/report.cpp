#include "mehler/report.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace mehler {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

std::string statement_of(const std::string& check) {
    static const std::vector<std::pair<std::string, std::string>> table = {
        {"log_sobolev_gaussian", "Ent(f^p) <= c (int |f^p(x+y)-f^p(x)|^2/f^p M(dy) + int <Q Df^{p/2}, Df^{p/2}>) d(gamma*sigma)"},
        {"log_sobolev_dirichlet", "Ent(f) <= C c_f int int |f(x+y)-f(x)|^2 M(dy) dsigma, C = int h, c_f = 1/inf f"},
        {"log_sobolev", "Ent(f^p) <= C int int |f^p(x+y)-f^p(x)|^2/f^p(x) M(dy) dsigma, C = int h"},
        {"poincare", "||f - m(f)||_2 <= sqrt(2C) sqrt(int int |f(x+y)-f(x)|^2 M(dy) dsigma)"},
        {"lp_bootstrap", "int |f-m(f)|^p dsigma <= c_p int int ||f|^p(x+y)-|f|^p(x)| w(y) M(dy) dsigma"},
        {"moment_transfer", "int |x|^p dsigma <= C1 + C2 int_{|y|>1} |y|^p M(dy) + C3"},
        {"exp_entropy", "Ent(e^f) <= C tau^2 M_{2 tau} m(e^f), Lip(f) <= tau"},
        {"tail_bound_small_t", "sigma(g >= m(g) + t) <= exp(-c0 t^2) for small t"},
        {"tail_bound_large_t", "sigma(g >= m(g) + t) <= exp(-c1 t psi^{-1}(c2 t)) for large t"},
        {"tail_slope", "log sigma(|x| > R) ~ slope log R"},
        {"exp_integrability", "int exp(c |x| psi^{-1}(c |x|)) dsigma < inf for small c"},
        {"moment_finiteness", "int |x|^p dsigma < inf"},
        {"gradient_surrogate", "int phi(T_t y) M(dy) <= h(t) int phi dM for phi = |P_t f(x+.) - P_t f(x)|^p"},
        {"invariance", "int P_t f dsigma = int f dsigma"},
        {"generator", "int L f dsigma = 0"},
        {"chain_identity", "int 2 f L f dsigma = -int int |f(x+y)-f(x)|^2 M(dy) dsigma - int <Q Df, Df> dsigma"},
        {"lemma_rlogr", "r log r - r - s log s + s - (r-s) log r <= (r-s)^2/s"},
        {"lemma_power_difference", "||a|-|b||^p <= ||a|^p-|b|^p|, p > 1"},
        {"lemma_exp_chord", "e^{a x} - 1 <= (e^a - 1) x on (0, 1)"},
    };
    for (const auto& [prefix, text] : table)
        if (check.compare(0, prefix.size(), prefix) == 0) return text;
    return "";
}

void write_verify_csv(std::ostream& out, const std::vector<VerificationResult>& rows) {
    out << "check,model,function,seed,N,lhs,lhs_se,rhs,rhs_se,constant,margin,margin_se,verdict,constant_note,note,statement\n";
    for (const auto& r : rows) {
        out << csv_field(r.name) << ',' << csv_field(r.model) << ',' << csv_field(r.function) << ',' << r.seed << ','
            << r.N << ',' << format_number(r.lhs.value) << ',' << format_number(r.lhs.std_error) << ','
            << format_number(r.rhs.value) << ',' << format_number(r.rhs.std_error) << ','
            << format_number(r.constant) << ',' << format_number(r.margin) << ',' << format_number(r.margin_se)
            << ',' << to_string(r.verdict) << ',' << csv_field(r.constant_note) << ',' << csv_field(r.note)
            << ',' << csv_field(statement_of(r.name)) << '\n';
    }
}

namespace {

nlohmann::ordered_json number(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);  // JSON has no infinities
}

nlohmann::ordered_json estimate(const Estimate& e) {
    return {{"value", number(e.value)},
            {"std_error", number(e.std_error)},
            {"N", e.N},
            {"method", to_string(e.method)}};
}

}  // namespace

void write_verify_json(std::ostream& out, const std::vector<VerificationResult>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"check", r.name},
                       {"model", r.model},
                       {"function", r.function},
                       {"seed", r.seed},
                       {"N", r.N},
                       {"lhs", estimate(r.lhs)},
                       {"rhs", estimate(r.rhs)},
                       {"constant", number(r.constant)},
                       {"constant_note", r.constant_note},
                       {"margin", number(r.margin)},
                       {"margin_se", number(r.margin_se)},
                       {"verdict", to_string(r.verdict)},
                       {"note", r.note},
                       {"statement", statement_of(r.name)}});
    }
    out << arr.dump(2) << '\n';
}

void write_hypotheses_csv(std::ostream& out, const std::vector<HypothesisRow>& rows) {
    out << "model,clause,verdict,value,note\n";
    for (const auto& r : rows)
        out << csv_field(r.model) << ',' << csv_field(r.clause) << ',' << r.verdict << ',' << format_number(r.value)
            << ',' << csv_field(r.note) << '\n';
}

}  // namespace mehler
