#include "mehler/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mehler/errors.hpp"

namespace mehler {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Estimate exact(double v) { return {v, 0.0, 0, EstimateMethod::quadrature}; }

VerificationResult vacuous(std::string name, std::string note, Verdict v = Verdict::pass) {
    VerificationResult r;
    r.name = std::move(name);
    r.verdict = v;
    r.note = std::move(note);
    return r;
}

// first n rows of S
SampleSet head(const SampleSet& S, long long n) {
    return S.topRows(std::min<Eigen::Index>(S.rows(), static_cast<Eigen::Index>(n)));
}

}  // namespace

Verdict inequality_verdict(double margin, double se) {
    if (std::isnan(margin)) return Verdict::indeterminate;
    if (margin - 3.0 * se >= 0.0) return Verdict::pass;
    if (margin + 3.0 * se < 0.0) return Verdict::fail;
    return Verdict::indeterminate;
}

Verdict equality_verdict(double diff, double se, double abs_tol) {
    if (std::isnan(diff)) return Verdict::indeterminate;
    const double a = std::abs(diff);
    if (a <= abs_tol) return Verdict::pass;
    if (!(se > 0.0)) return Verdict::fail;
    const double z = a / se;
    if (z <= 3.0) return Verdict::pass;
    if (z <= 5.0) return Verdict::indeterminate;
    return Verdict::fail;
}

VerificationResult inequality_result(std::string name, const Estimate& lhs, const Estimate& rhs, double constant,
                                     std::string constant_note) {
    VerificationResult r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant = constant;
    r.constant_note = std::move(constant_note);
    const double right = constant * rhs.value;
    if (std::isinf(right) && right > 0.0) {
        r.margin = kInf;
        r.margin_se = 0.0;
        r.verdict = Verdict::pass;
        return r;
    }
    double scale = std::max(std::abs(lhs.value), std::abs(right));
    if (!(scale > 0.0)) scale = 1.0;
    r.margin = (right - lhs.value) / scale;
    r.margin_se = std::hypot(lhs.std_error, constant * rhs.std_error) / scale;
    r.verdict = inequality_verdict(r.margin, r.margin_se);
    return r;
}

VerificationResult equality_result(std::string name, const Estimate& lhs, const Estimate& rhs, double diff_se) {
    VerificationResult r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.constant = 1.0;
    r.constant_note = "identity";
    double scale = std::max(std::abs(lhs.value), std::abs(rhs.value));
    if (!(scale > 0.0)) scale = 1.0;
    const double diff = rhs.value - lhs.value;
    r.margin = diff / scale;
    r.margin_se = diff_se / scale;
    r.verdict = equality_verdict(diff, diff_se);
    return r;
}

// ---- context

CheckContext::CheckContext(models::ModelSpec model, CheckOptions options)
    : model_(std::move(model)), opt_(std::move(options)), suites_(standard_suites(model_.dimension())) {
    if (opt_.N < 2) throw DomainError("checks need at least two samples");
    opt_.forms.chains = opt_.chains;
    sigma_ = sample_invariant(opt_.N, model_.evolved, opt_.scheme, opt_.seed, InvariantMethod::direct, opt_.chains);
}

std::uint64_t CheckContext::derived_seed(std::uint64_t tag) const {
    std::uint64_t s = opt_.seed ^ (tag * 0xa0761d6478bd642fULL);
    return splitmix64(s);
}

const std::vector<double>& CheckContext::generator_values(const CylindricalFunction& f) const {
    auto it = generator_cache_.find(f.name());
    if (it != generator_cache_.end()) return it->second;
    const SampleSet rows = head(sigma_, opt_.generator_outer);
    CoreOptions co;
    co.delta = opt_.forms.delta;
    co.inner = opt_.forms.inner;
    co.tail_rel = opt_.generator_tail_rel;
    auto v = evaluate_rows(
        rows, [&](const Vector& x) { return apply_generator(model_.triple, model_.semigroup, f, x, co); },
        opt_.chains);
    return generator_cache_.emplace(f.name(), std::move(v)).first->second;
}

const SampleSet& CheckContext::mu_t(double t) const {
    auto it = mu_cache_.find(t);
    if (it != mu_cache_.end()) return it->second;
    auto Y = sample_mu_t(t, opt_.N, model_.evolved, opt_.scheme, derived_seed(4), opt_.chains);
    return mu_cache_.emplace(t, std::move(Y)).first->second;
}

VerificationResult CheckContext::stamp(VerificationResult r, const std::string& function) const {
    r.model = model_.name;
    r.function = function;
    r.N = opt_.N;
    r.seed = opt_.seed;
    return r;
}

// ---- log-Sobolev family

VerificationResult verify_log_sobolev(const CheckContext& ctx, const CylindricalFunction& f, double p) {
    if (!(f.infimum() > 0.0)) throw DomainError("log-Sobolev check needs inf f > 0 (" + f.name() + ")");
    const auto& o = ctx.options();
    const Estimate lhs = estimate_entropy(f, p, ctx.sigma(), o.chains);
    const Estimate rhs = nonlocal_entropy_form(f, p, ctx.sigma(), ctx.M(), o.forms);
    auto r = inequality_result("log_sobolev_p" + fmt(p), lhs, rhs, ctx.C(), "||h||_1 of the model's domination function");
    return ctx.stamp(r, f.name());
}

VerificationResult verify_log_sobolev_dirichlet(const CheckContext& ctx, const CylindricalFunction& f) {
    const double lower = f.infimum();
    if (!(lower > 0.0)) throw DomainError("needs a certified positive lower bound (" + f.name() + ")");
    const auto& o = ctx.options();
    const Estimate lhs = estimate_entropy(f, 1.0, ctx.sigma(), o.chains);
    const Estimate rhs = dirichlet_form(f, ctx.sigma(), ctx.M(), o.forms);
    const double c_f = 1.0 / lower;
    auto r = inequality_result("log_sobolev_dirichlet", lhs, rhs, ctx.C() * c_f,
                               "||h||_1 * c_f with c_f = 1/inf f = " + fmt(c_f));
    return ctx.stamp(r, f.name());
}

VerificationResult verify_poincare(const CheckContext& ctx, const CylindricalFunction& f) {
    const auto& o = ctx.options();
    auto v = evaluate_rows(ctx.sigma(), [&](const Vector& x) { return f.value(x); }, o.chains);
    const double m = mean_estimate(v).value;
    for (double& x : v) x = (x - m) * (x - m);
    const Estimate var = mean_estimate(v);
    const Estimate D = dirichlet_form(f, ctx.sigma(), ctx.M(), o.forms);
    auto root = [](const Estimate& e) {
        Estimate r = e;
        r.value = std::sqrt(std::max(e.value, 0.0));
        r.std_error = r.value > 0.0 ? e.std_error / (2.0 * r.value) : std::sqrt(e.std_error);
        return r;
    };
    const double c = std::sqrt(2.0 * ctx.C());
    auto r = inequality_result("poincare", root(var), root(D), c, "sqrt(2 ||h||_1)");
    return ctx.stamp(r, f.name());
}

// ---- L^p bootstrap

namespace {

double bootstrap_constant(double p, double c, double I2, double Mout) {
    if (p > 2.0 && p <= 4.0)
        return std::pow(c, p / 2.0) * std::pow(2.0, (p - 2.0) / 2.0) * std::pow(std::max(I2, Mout), (p - 2.0) / 2.0) + c;
    if (p > 4.0 && p <= 8.0) {
        const double half = bootstrap_constant(p / 2.0, c, I2, Mout);
        return 2.0 * half * half * std::max(Mout, I2) + c;
    }
    throw DomainError("bootstrap constant defined for p in (2, 8]");
}

}  // namespace

VerificationResult verify_lp_bootstrap(const CheckContext& ctx, const CylindricalFunction& f, double p) {
    if (!(p > 2.0 && p <= 8.0)) throw DomainError("p must lie in (2, 8]");
    const auto& o = ctx.options();
    const double m = estimate_mean(f, ctx.sigma(), o.chains).value;
    const auto fc = compose_scalar(f, maps::affine(1.0, -m)).renamed(f.name() + "-mean");
    const Estimate lhs = mean_estimate(
        evaluate_rows(ctx.sigma(), [&](const Vector& x) { return std::pow(std::abs(fc.value(x)), p); }, o.chains));
    const double c = 2.0 * ctx.C();
    const double I2 = moment(ctx.M(), 2.0, Region::unit_ball).value;
    const double Mout = moment(ctx.M(), 0.0, Region::complement).value;
    const double cp = bootstrap_constant(p, c, I2, Mout);
    const std::string note = "assembled from the proof chain with c = 2||h||_1, int_B1 |y|^2 M = " + fmt(I2) +
                             ", M(B1^c) = " + fmt(Mout);
    if (!weighted_increment_converges(p, ctx.M())) {
        auto r = inequality_result("lp_bootstrap_p" + fmt(p), lhs, exact(kInf), cp, note);
        r.note = "weighted increment form diverges at the origin (p >= 3 - singularity order): bound is vacuous";
        return ctx.stamp(r, f.name());
    }
    const Estimate rhs = weighted_increment_form(fc, p, ctx.sigma(), ctx.M(), o.forms);
    auto r = inequality_result("lp_bootstrap_p" + fmt(p), lhs, rhs, cp, note);
    r.note = "f centred by its sample mean";
    return ctx.stamp(r, f.name());
}

// ---- moments

VerificationResult verify_moment_transfer(const CheckContext& ctx, double p) {
    if (!(p > 2.0)) throw DomainError("moment transfer is checked for p > 2");
    const auto& o = ctx.options();
    const Estimate sp = moment(ctx.sigma(), p, o.chains);
    const Estimate s2 = moment(ctx.sigma(), 2.0, o.chains);
    const std::string name = "moment_transfer_p" + fmt(p);
    double M1 = 0.0, Mp = 0.0;
    if (ctx.M().is_zero()) {
        M1 = Mp = 0.0;
    } else {
        try {
            M1 = moment(ctx.M(), 1.0, Region::whole).value;
            Mp = moment(ctx.M(), p, Region::whole).value;
        } catch (const DivergentIntegral& e) {
            auto r = vacuous(name, std::string("precondition not met: ") + e.what(), Verdict::indeterminate);
            r.lhs = sp;
            return ctx.stamp(r, "|x|^p");
        }
    }
    const double c = 2.0 * ctx.C();
    const double k = 1.0 + std::pow(2.0, p - 2.0);
    const double C1 = 2.0;
    const double C2 = 2.0 * c * p * std::pow(2.0, p - 2.0);
    double C3 = 0.0, eps = kInf;
    if (M1 > 0.0) {
        eps = 1.0 / (2.0 * c * k * (p - 1.0) * M1);
        C3 = 2.0 * c * k * std::pow(eps, 1.0 - p);
    }
    Estimate rhs;
    rhs.value = C1 * std::pow(s2.value, p / 2.0) + C2 * Mp + C3 * M1;
    rhs.std_error = C1 * (p / 2.0) * std::pow(s2.value, p / 2.0 - 1.0) * s2.std_error;
    rhs.N = s2.N;
    rhs.method = EstimateMethod::hybrid;
    auto r = inequality_result(name, sp, rhs, 1.0,
                               "C1 = 2, C2 = " + fmt(C2) + ", C3 = " + fmt(C3) + " (Young step eps = " + fmt(eps) +
                                   ", c = 2||h||_1); rhs = C1 sigma(2)^{p/2} + C2 M(p) + C3 M(1)");
    return ctx.stamp(r, "|x|^p");
}

std::vector<VerificationResult> verify_moment_finiteness(const CheckContext& ctx, int max_p) {
    std::vector<VerificationResult> out;
    const auto half = head(ctx.sigma(), ctx.sigma().rows() / 2);
    for (int p = 1; p <= max_p; ++p) {
        const Estimate full = moment(ctx.sigma(), p, ctx.options().chains);
        const Estimate part = moment(half, p, ctx.options().chains);
        auto r = equality_result("moment_finiteness_p" + std::to_string(p), full, part, part.std_error);
        if (!std::isfinite(full.value)) r.verdict = Verdict::indeterminate;
        r.note = "sigma(p) at N against N/2";
        out.push_back(ctx.stamp(r, "|x|^p"));
    }
    return out;
}

// ---- exponential integrability

VerificationResult verify_exp_entropy(const CheckContext& ctx, const CylindricalFunction& f, double tau) {
    const std::string name = "exp_entropy";
    if (!(f.lipschitz_constant() <= tau * (1.0 + 1e-12)))
        throw DomainError("Lipschitz constant of " + f.name() + " exceeds tau");
    double M2tau = 0.0;
    try {
        M2tau = exp_second_moment(ctx.M(), 2.0 * tau);
    } catch (const DivergentIntegral& e) {
        // e^f need not even be integrable here
        return ctx.stamp(vacuous(name, std::string("precondition not met: ") + e.what(), Verdict::indeterminate),
                         f.name());
    }
    const auto& o = ctx.options();
    auto ef = evaluate_rows(ctx.sigma(), [&](const Vector& x) { return std::exp(f.value(x)); }, o.chains);
    const Estimate lhs = entropy_of_values(ef);
    const Estimate rhs = mean_estimate(ef);
    const double constant = ctx.C() * tau * tau * M2tau;
    auto r = inequality_result(name, lhs, rhs, constant,
                               "||h||_1 tau^2 M_{2 tau}, tau = " + fmt(tau) + ", M_{2 tau} = " + fmt(M2tau));
    return ctx.stamp(r, f.name());
}

PsiInverse::PsiInverse(const LevyMeasure& M, double v_max, int points) {
    floor_ = psi_at_zero(M);
    double hi = 1.0;
    for (int i = 0; i < 60 && psi_of(M, hi) < v_max; ++i) hi *= 2.0;
    s_.push_back(0.0);
    log_psi_.push_back(std::log(floor_));
    for (int j = 1; j < points; ++j) {
        const double s = hi * j / (points - 1);
        s_.push_back(s);
        log_psi_.push_back(std::log(psi_of(M, s)));
    }
}

double PsiInverse::operator()(double v) const {
    if (!(v > floor_)) return 0.0;
    const double lv = std::log(v);
    auto it = std::upper_bound(log_psi_.begin(), log_psi_.end(), lv);
    std::size_t j = static_cast<std::size_t>(it - log_psi_.begin());
    j = std::clamp<std::size_t>(j, 1, s_.size() - 1);
    const double w = (lv - log_psi_[j - 1]) / (log_psi_[j] - log_psi_[j - 1]);
    return s_[j - 1] + w * (s_[j] - s_[j - 1]);
}

TailFit fit_tail(const CylindricalFunction& g, const SampleSet& S, const LevyMeasure& M) {
    TailFit fit;
    auto v = evaluate_rows(S, [&](const Vector& x) { return g.value(x); });
    const double n = static_cast<double>(v.size());
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    const double sd = std::sqrt(ss / n);
    std::sort(v.begin(), v.end());
    auto tail = [&](double t) {
        const auto it = std::lower_bound(v.begin(), v.end(), m + t);
        return wilson(static_cast<long long>(v.end() - it), static_cast<long long>(v.size()));
    };
    if (!(sd > 0.0) || v.back() <= m) {
        fit.vacuous = true;
        fit.c0 = fit.c0_lower = fit.c1 = fit.c1_lower = kInf;
        return fit;
    }
    // largest c0 with tail <= exp(-c0 t^2) on (0, t0]
    fit.t0 = sd;
    fit.c0 = fit.c0_lower = kInf;
    for (int k = 1; k <= 8; ++k) {
        const double t = fit.t0 * k / 8.0;
        const Estimate T = tail(t);
        const double up = std::min(T.value + 3.0 * T.std_error, 1.0);
        fit.c0 = std::min(fit.c0, -std::log(T.value) / (t * t));
        fit.c0_lower = std::min(fit.c0_lower, -std::log(up) / (t * t));
    }
    // largest decade with at least 50 exceedances
    const std::size_t need = 50;
    if (v.size() <= need || v[v.size() - need] - m <= 0.0) {
        fit.enough_counts = false;
        return fit;
    }
    fit.t_hi = v[v.size() - need] - m;
    fit.t_lo = fit.t_hi / 10.0;
    fit.c2 = 2.0 * psi_at_zero(M) / fit.t_lo;
    fit.c1 = fit.c1_lower = kInf;
    std::vector<double> lx, ly;
    for (int k = 0; k <= 10; ++k) {
        const double t = fit.t_lo * std::pow(10.0, k / 10.0);
        const Estimate T = tail(t);
        const double up = std::min(T.value + 3.0 * T.std_error, 1.0);
        const double rate = t * psi_inverse(M, fit.c2 * t);
        fit.c1 = std::min(fit.c1, -std::log(T.value) / rate);
        fit.c1_lower = std::min(fit.c1_lower, -std::log(up) / rate);
        if (T.value > 0.0 && T.value < 1.0) {
            lx.push_back(std::log(t));
            ly.push_back(std::log(-std::log(T.value)));
        }
    }
    if (lx.size() >= 2) {
        const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
        const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        fit.decay_slope = sxy / sxx;
    }
    return fit;
}

std::vector<VerificationResult> verify_tail_bound(const CheckContext& ctx, const CylindricalFunction& g) {
    if (!(g.lipschitz_constant() <= 1.0 + 1e-12)) throw DomainError("tail bound needs Lip(g) <= 1");
    std::vector<VerificationResult> out;
    if (ctx.M().tail().kind == TailKind::power) {
        const std::string why = "precondition not met: psi diverges for " + ctx.M().tail().describe();
        out.push_back(ctx.stamp(vacuous("tail_bound_small_t", why, Verdict::indeterminate), g.name()));
        out.push_back(ctx.stamp(vacuous("tail_bound_large_t", why, Verdict::indeterminate), g.name()));
        return out;
    }
    const TailFit fit = fit_tail(g, ctx.sigma(), ctx.M());
    auto row = [&](const std::string& name, double value, double lower, const std::string& note) {
        Estimate coef{value, std::isfinite(value) ? (value - lower) / 3.0 : 0.0, ctx.options().N, EstimateMethod::mc};
        auto r = inequality_result(name, exact(0.0), coef, 1.0, "fitted, the constants are not explicit");
        if (std::isinf(value)) {
            r.margin = kInf;
            r.verdict = Verdict::pass;
        }
        r.note = note;
        return ctx.stamp(r, g.name());
    };
    if (fit.vacuous) {
        out.push_back(row("tail_bound_small_t", kInf, kInf, "tail vanishes beyond the mean"));
        out.push_back(row("tail_bound_large_t", kInf, kInf, "tail vanishes beyond the mean"));
        return out;
    }
    out.push_back(row("tail_bound_small_t", fit.c0, fit.c0_lower,
                      "c0 = min over t in (0, " + fmt(fit.t0) + "] of -log tail / t^2"));
    if (!fit.enough_counts) {
        out.push_back(ctx.stamp(vacuous("tail_bound_large_t", "fewer than 50 exceedances", Verdict::indeterminate),
                                g.name()));
    } else {
        out.push_back(row("tail_bound_large_t", fit.c1, fit.c1_lower,
                          "c1 over t in [" + fmt(fit.t_lo) + ", " + fmt(fit.t_hi) + "], c2 = " + fmt(fit.c2) +
                              ", slope of log(-log tail) vs log t = " + fmt(fit.decay_slope)));
    }
    return out;
}

std::vector<VerificationResult> verify_exp_integrability(const CheckContext& ctx, const CylindricalFunction& g,
                                                         const std::vector<double>& ladder) {
    if (!(g.lipschitz_constant() <= 1.0 + 1e-12)) throw DomainError("exp integrability needs Lip(g) <= 1");
    std::vector<VerificationResult> out;
    if (ctx.M().tail().kind == TailKind::power) {
        out.push_back(ctx.stamp(vacuous("exp_integrability",
                                        "precondition not met: psi diverges for " + ctx.M().tail().describe(),
                                        Verdict::indeterminate),
                                g.name()));
        return out;
    }
    const auto& o = ctx.options();
    const auto gv = evaluate_rows(ctx.sigma(), [&](const Vector& x) { return g.value(x); }, o.chains);
    double gmax = 1.0;
    for (double x : gv) gmax = std::max(gmax, std::abs(x));
    const PsiInverse inv(ctx.M(), gmax);
    std::vector<double> rate(gv.size());
    for (std::size_t i = 0; i < gv.size(); ++i) rate[i] = gv[i] * inv(std::abs(gv[i]));

    std::vector<bool> stable;
    double largest = 0.0;
    for (double c : ladder) {
        std::vector<double> e(rate.size());
        for (std::size_t i = 0; i < rate.size(); ++i) e[i] = std::exp(c * rate[i]);
        const Estimate full = mean_estimate(e);
        const Estimate part = mean_estimate(std::vector<double>(e.begin(), e.begin() + e.size() / 2));
        auto r = equality_result("exp_integrability_c" + fmt(c), full, part, part.std_error);
        const bool ok = std::isfinite(full.value) && std::isfinite(part.value) &&
                        std::abs(full.value - part.value) < 3.0 * part.std_error;
        r.verdict = ok ? Verdict::pass : Verdict::indeterminate;
        r.constant = c;
        r.constant_note = "probe value of c";
        r.note = "int exp(c g psi^{-1}(|g|)) dsigma at N against N/2";
        stable.push_back(ok);
        if (ok) largest = std::max(largest, c);
        out.push_back(ctx.stamp(r, g.name()));
    }
    // the two smallest probes decide
    VerificationResult summary;
    summary.name = "exp_integrability";
    const std::size_t n = stable.size();
    const bool ok = n >= 2 ? (stable[n - 1] && stable[n - 2]) : (n == 1 && stable[0]);
    summary.verdict = ok ? Verdict::pass : Verdict::indeterminate;
    summary.constant = largest;
    summary.constant_note = "largest stable c on the ladder";
    summary.note = ok ? "finite and stable for the two smallest c" : "unstable at a small c";
    out.push_back(ctx.stamp(summary, g.name()));
    return out;
}

VerificationResult verify_tail_slope(const CheckContext& ctx, double expected, double tol, double r_lo,
                                     double r_hi) {
    std::vector<double> norms(static_cast<std::size_t>(ctx.sigma().rows()));
    for (Eigen::Index i = 0; i < ctx.sigma().rows(); ++i) norms[static_cast<std::size_t>(i)] = ctx.sigma().row(i).norm();
    std::sort(norms.begin(), norms.end());
    const long long n = static_cast<long long>(norms.size());
    std::vector<double> lx, ly, w;
    for (int k = 0; k <= 8; ++k) {
        const double R = r_lo * std::pow(r_hi / r_lo, k / 8.0);
        const long long hits = norms.end() - std::upper_bound(norms.begin(), norms.end(), R);
        if (hits == 0) continue;
        const Estimate T = wilson(hits, n);
        lx.push_back(std::log(R));
        ly.push_back(std::log(T.value));
        const double rel = T.std_error / T.value;
        w.push_back(1.0 / (rel * rel));
    }
    VerificationResult r;
    r.name = "tail_slope";
    if (lx.size() < 3) {
        r.verdict = Verdict::indeterminate;
        r.note = "too few exceedances";
        return ctx.stamp(r, "|x|");
    }
    double sw = 0, mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sw += w[i];
        mx += w[i] * lx[i];
        my += w[i] * ly[i];
    }
    mx /= sw;
    my /= sw;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
        sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    r.lhs = {slope, std::sqrt(1.0 / sxx), n, EstimateMethod::mc};
    r.rhs = exact(expected);
    r.constant = tol;
    r.constant_note = "allowed deviation of the fitted exponent";
    r.margin = tol - std::abs(slope - expected);
    r.margin_se = r.lhs.std_error;
    r.verdict = r.margin >= 0.0 ? Verdict::pass : Verdict::fail;
    r.note = "log sigma(|x| > R) against log R, R in [" + fmt(r_lo) + ", " + fmt(r_hi) + "]";
    return ctx.stamp(r, "|x|");
}

// ---- semigroup checks

VerificationResult verify_gradient_surrogate(const CheckContext& ctx, const CylindricalFunction& f, double t,
                                             double p) {
    if (!(t > 0.0)) throw DomainError("gradient surrogate needs t > 0");
    if (!f.is_bounded()) throw DomainError("gradient surrogate uses bounded functions");
    const auto& o = ctx.options();
    const auto& ev = ctx.model().evolved;
    const Matrix Tt = ev.semigroup().T(t);
    const SampleSet Y = head(ctx.mu_t(t), o.inner_mc);
    const double h = ctx.model().h(t);
    const int K = static_cast<int>(Y.rows());
    const double span = f.bounds().supremum - f.infimum();
    const double bound = std::pow(span, p);

    RadialOptions ro;
    ro.tol = {1e-7, 1e-14, 20};
    ro.delta = o.forms.delta;
    ro.power_at_zero = p;
    ro.growth = 0.0;

    VerificationResult worst;
    bool have = false;
    const int points = std::min<int>(o.surrogate_points, static_cast<int>(ctx.sigma().rows()));
    for (int k = 0; k < points; ++k) {
        const Vector x = ctx.sigma().row(k).transpose();
        const Vector base = Tt * x;
        quad::Outcome L{}, R{};
        std::vector<CylindricalFunction::Line> lines_l(K), lines_r(K);
        std::vector<double> f0(K);
        Vector z(base.size());
        for (const auto& ray : ctx.M().rays()) {
            const Vector tdir = Tt * ray.direction;
            for (int j = 0; j < K; ++j) {
                z = base + Y.row(j).transpose();
                std::span<const double> zs(z.data(), z.size());
                lines_l[j] = f.line(zs, std::span<const double>(tdir.data(), tdir.size()));
                lines_r[j] = f.line(zs, std::span<const double>(ray.direction.data(), ray.direction.size()));
                f0[j] = f.value(zs);
            }
            auto phi = [&](const std::vector<CylindricalFunction::Line>& lines) {
                return [&, p](double r) {
                    double s = 0.0;
                    for (int j = 0; j < K; ++j) s += f.value_on(lines[j], r) - f0[j];
                    return std::pow(std::abs(s / K), p);
                };
            };
            L += integrate_ray_bounded(ctx.M(), ray, phi(lines_l), bound, true, ro, o.forms.tail_rel);
            R += integrate_ray_bounded(ctx.M(), ray, phi(lines_r), bound, true, ro, o.forms.tail_rel);
        }
        auto r = inequality_result("gradient_surrogate",
                                   {L.value, L.error, K, EstimateMethod::hybrid},
                                   {R.value, R.error, K, EstimateMethod::hybrid}, h,
                                   "domination function h(t) at t = " + fmt(t));
        r.note = "worst of " + std::to_string(points) +
                 " points; P_t by a common inner sample, so only quadrature error enters";
        if (!have || r.margin - 3.0 * r.margin_se < worst.margin - 3.0 * worst.margin_se) {
            worst = r;
            have = true;
        }
    }
    return ctx.stamp(worst, f.name());
}

std::pair<VerificationResult, VerificationResult> verify_invariance_and_generator(const CheckContext& ctx,
                                                                                  const CylindricalFunction& f,
                                                                                  double t) {
    const auto& o = ctx.options();
    const auto& S = ctx.sigma();
    const Matrix Tt = ctx.model().evolved.semigroup().T(t);
    const SampleSet& Y = ctx.mu_t(t);
    const auto fx = evaluate_rows(S, [&](const Vector& x) { return f.value(x); }, o.chains);
    std::vector<double> moved(fx.size()), diff(fx.size());
    Vector z(S.cols());
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        z = Tt * S.row(i).transpose() + Y.row(i).transpose();
        moved[static_cast<std::size_t>(i)] = f.value(z);
        diff[static_cast<std::size_t>(i)] = moved[static_cast<std::size_t>(i)] - fx[static_cast<std::size_t>(i)];
    }
    auto inv = equality_result("invariance", mean_estimate(moved), mean_estimate(fx), mean_estimate(diff).std_error);
    inv.note = "int P_t f dsigma against m(f), t = " + fmt(t) + ", paired draws";

    const auto& Lf = ctx.generator_values(f);
    const Estimate mean_L = mean_estimate(Lf, EstimateMethod::hybrid);
    auto gen = equality_result("generator", mean_L, exact(0.0), mean_L.std_error);
    gen.note = "int L f dsigma = 0";
    return {ctx.stamp(inv, f.name()), ctx.stamp(gen, f.name())};
}

VerificationResult verify_chain_identity(const CheckContext& ctx, const CylindricalFunction& f) {
    const auto& o = ctx.options();
    const auto& Lf = ctx.generator_values(f);
    const SampleSet rows = head(ctx.sigma(), static_cast<long long>(Lf.size()));
    const Matrix& Q = ctx.model().triple.Q;
    const double span = f.bounds().supremum - f.infimum();
    const double growth = f.is_bounded() ? 0.0 : 2.0;
    IncrementIntegrand sq = [](double a, double b, double) { return (b - a) * (b - a); };
    const auto right = evaluate_rows(
        rows,
        [&](const Vector& x) {
            double v = -increment_integral(f, x, ctx.M(), sq, 2.0, growth, o.forms, span * span);
            if (!Q.isZero(0.0)) {
                const Vector g = f.gradient(x);
                v -= g.dot(Q * g);
            }
            return v;
        },
        o.chains);
    std::vector<double> left(Lf.size()), diff(Lf.size());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        const auto k = static_cast<std::size_t>(i);
        left[k] = 2.0 * f.value(Vector(rows.row(i).transpose())) * Lf[k];
        diff[k] = left[k] - right[k];
    }
    auto r = equality_result("chain_identity", mean_estimate(left, EstimateMethod::hybrid),
                             mean_estimate(right, EstimateMethod::hybrid), mean_estimate(diff).std_error);
    r.note = "int 2 f L f dsigma against minus the Dirichlet form (Phi = xi^2), paired rows";
    return ctx.stamp(r, f.name());
}

VerificationResult verify_log_sobolev_gaussian(const CheckContext& ctx, const CylindricalFunction& f, double p) {
    const auto& model = ctx.model();
    if (!model.has_gaussian_part()) {
        auto r = verify_log_sobolev(ctx, f, p);
        r.name = "log_sobolev_gaussian_p" + fmt(p);
        r.note = "Q = 0: reduces to the plain log-Sobolev check";
        return r;
    }
    if (!(f.infimum() > 0.0)) throw DomainError("needs inf f > 0 (" + f.name() + ")");
    const Matrix& B = model.semigroup.generator();
    const Matrix& Q = model.triple.Q;
    if (!is_symmetric(B, 1e-12) || !commute(B, Q))
        throw DomainError("Gaussian extension is checked for symmetric B commuting with Q");
    const auto& o = ctx.options();
    const Matrix Qinf = gaussian_Qt(model.evolved, kInf);
    if (!(min_eigenvalue_symmetric(Qinf) > 0.0)) throw DomainError("Q_inf must be positive definite");
    const Matrix root = sqrt_psd(Qinf);
    const Matrix root_inv = root.inverse();
    const double Lambda = max_eigenvalue_symmetric(B);
    const double psi_sq_l1 = 1.0 / (2.0 * std::abs(Lambda));
    const Matrix W = root_inv * Q * root_inv;
    const double ratio = max_eigenvalue_symmetric(0.5 * (W + W.transpose()));
    const double cg = 0.5 * p * p * psi_sq_l1 * ratio;

    const Estimate lhs = estimate_entropy(f, p, ctx.sigma(), o.chains);
    const Estimate gauss = mean_estimate(evaluate_rows(
        ctx.sigma(),
        [&](const Vector& x) {
            const Vector g = root * f.gradient(x);
            return std::pow(f.value(x), p - 2.0) * g.squaredNorm();
        },
        o.chains));
    const Estimate jump = nonlocal_entropy_form(f, p, ctx.sigma(), ctx.M(), o.forms);
    Estimate rhs;
    rhs.value = cg * gauss.value + ctx.C() * jump.value;
    rhs.std_error = std::hypot(cg * gauss.std_error, ctx.C() * jump.std_error);
    rhs.N = lhs.N;
    rhs.method = EstimateMethod::hybrid;
    auto r = inequality_result("log_sobolev_gaussian_p" + fmt(p), lhs, rhs, 1.0,
                               "gaussian c = (p^2/2) ||psi^2||_1 ||Q_inf^{-1/2} Q Q_inf^{-1/2}|| = " + fmt(cg) +
                                   ", nonlocal C = ||h||_1 = " + fmt(ctx.C()));
    r.note = "both terms integrated against the convolution gamma * sigma";
    return ctx.stamp(r, f.name());
}

// ---- elementary inequalities

std::vector<VerificationResult> elementary_lemma_suite(std::uint64_t seed, int trials) {
    RandomStream rng(seed, 77);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, rng.uniform()); };
    std::vector<VerificationResult> out;
    auto record = [&](const std::string& name, double worst, long long violations, const std::string& note) {
        VerificationResult r;
        r.name = name;
        r.model = "-";
        r.function = "-";
        r.lhs = {static_cast<double>(violations), 0.0, trials, EstimateMethod::mc};
        r.rhs = exact(0.0);
        r.constant = 1e-12;
        r.constant_note = "slack, relative to the size of the terms";
        r.margin = -worst;
        r.verdict = violations == 0 ? Verdict::pass : Verdict::fail;
        r.note = note;
        r.N = trials;
        r.seed = seed;
        out.push_back(r);
    };
    {
        double worst = -kInf;
        long long bad = 0;
        for (int i = 0; i < trials; ++i) {
            const double r = log_uniform(1e-3, 1e3), s = log_uniform(1e-3, 1e3);
            const double lhs = r * std::log(r) - r - s * std::log(s) + s - (r - s) * std::log(r);
            const double rhs = (r - s) * (r - s) / s;
            const double slack = 1e-12 * (1.0 + std::abs(r * std::log(r)) + std::abs(s * std::log(s)) + rhs);
            const double excess = (lhs - rhs) / slack;
            worst = std::max(worst, excess);
            if (lhs > rhs + slack) ++bad;
        }
        record("lemma_rlogr", worst, bad, "r log r - r - s log s + s - (r - s) log r <= (r - s)^2 / s");
    }
    {
        double worst = -kInf;
        long long bad = 0;
        for (int i = 0; i < trials; ++i) {
            const double a = 20.0 * rng.uniform() - 10.0, b = 20.0 * rng.uniform() - 10.0;
            const double p = 1.0 + 4.0 * rng.uniform();
            const double lhs = std::pow(std::abs(std::abs(a) - std::abs(b)), p);
            const double rhs = std::abs(std::pow(std::abs(a), p) - std::pow(std::abs(b), p));
            const double slack = 1e-12 * (1.0 + std::pow(std::max(std::abs(a), std::abs(b)), p));
            worst = std::max(worst, (lhs - rhs) / slack);
            if (lhs > rhs + slack) ++bad;
        }
        record("lemma_power_difference", worst, bad, "||a| - |b||^p <= ||a|^p - |b|^p|, p > 1");
    }
    {
        double worst = -kInf;
        long long bad = 0;
        for (int i = 0; i < trials; ++i) {
            const double x = rng.uniform(), alpha = 10.0 * rng.uniform();
            const double lhs = std::expm1(alpha * x), rhs = std::expm1(alpha) * x;
            const double slack = 1e-12 * (1.0 + std::abs(rhs));
            worst = std::max(worst, (lhs - rhs) / slack);
            if (lhs > rhs + slack) ++bad;
        }
        record("lemma_exp_chord", worst, bad, "e^{a x} - 1 <= (e^a - 1) x on (0, 1)");
    }
    return out;
}

// ---- suites

std::vector<std::string> suite_names() {
    return {"log_sobolev",       "log_sobolev_dirichlet", "poincare",       "lp_bootstrap",
            "moment_transfer",   "exp_entropy",           "tail_bound",     "exp_integrability",
            "gradient_surrogate", "invariance",           "chain_identity", "log_sobolev_gaussian",
            "elementary"};
}

std::vector<VerificationResult> run_suite(const CheckContext& ctx, const std::string& suite) {
    const auto& s = ctx.suites();
    const double t = ctx.options().time;
    std::vector<VerificationResult> out;
    if (suite == "log_sobolev") {
        for (double p : {1.0, 2.0})
            for (const auto& f : s.positive_infimum) out.push_back(verify_log_sobolev(ctx, f, p));
    } else if (suite == "log_sobolev_dirichlet") {
        for (const auto& f : s.positive_infimum) out.push_back(verify_log_sobolev_dirichlet(ctx, f));
    } else if (suite == "poincare") {
        for (const auto& f : s.mean_zero_ready) out.push_back(verify_poincare(ctx, f));
    } else if (suite == "lp_bootstrap") {
        for (const auto& f : s.mean_zero_ready) out.push_back(verify_lp_bootstrap(ctx, f, 3.0));
    } else if (suite == "moment_transfer") {
        out.push_back(verify_moment_transfer(ctx, 3.0));
    } else if (suite == "exp_entropy") {
        for (const auto& f : s.lipschitz_one) out.push_back(verify_exp_entropy(ctx, f, std::max(f.lipschitz_constant(), 1e-300)));
    } else if (suite == "tail_bound") {
        const auto& g = s.lipschitz_one.front();
        for (auto& r : verify_tail_bound(ctx, g)) out.push_back(std::move(r));
        if (ctx.M().tail().kind == TailKind::power)
            out.push_back(verify_tail_slope(ctx, -ctx.M().tail().parameter));
    } else if (suite == "exp_integrability") {
        for (auto& r : verify_exp_integrability(ctx, s.lipschitz_one.front())) out.push_back(std::move(r));
        if (ctx.M().tail().kind != TailKind::power)
            for (auto& r : verify_moment_finiteness(ctx)) out.push_back(std::move(r));
    } else if (suite == "gradient_surrogate") {
        for (const auto& f : s.positive_infimum) out.push_back(verify_gradient_surrogate(ctx, f, t, 2.0));
    } else if (suite == "invariance") {
        for (const auto& f : s.positive_infimum) {
            auto [a, b] = verify_invariance_and_generator(ctx, f, t);
            out.push_back(std::move(a));
            out.push_back(std::move(b));
        }
    } else if (suite == "chain_identity") {
        for (const auto& f : s.positive_infimum) out.push_back(verify_chain_identity(ctx, f));
    } else if (suite == "log_sobolev_gaussian") {
        for (const auto& f : s.positive_infimum) out.push_back(verify_log_sobolev_gaussian(ctx, f, 2.0));
    } else if (suite == "elementary") {
        out = elementary_lemma_suite(ctx.options().seed);
    } else {
        throw ConfigError("unknown suite '" + suite + "'");
    }
    return out;
}

}  // namespace mehler
