#include <doctest.h>

#include <cmath>

#include "mehler/errors.hpp"
#include "mehler/inequalities.hpp"

using namespace mehler;

namespace {

CheckOptions small(int N = 20000, std::uint64_t seed = 5) {
    CheckOptions o;
    o.N = N;
    o.seed = seed;
    o.forms.max_outer = 512;
    o.generator_outer = 512;
    return o;
}

const CheckContext& koponen_ctx() {
    static const CheckContext ctx(models::build_koponen(), small());
    return ctx;
}

}  // namespace

TEST_CASE("verdict rules") {
    CHECK(inequality_verdict(3.0, 1.0) == Verdict::pass);
    CHECK(inequality_verdict(2.9, 1.0) == Verdict::indeterminate);
    CHECK(inequality_verdict(-3.0, 1.0) == Verdict::indeterminate);
    CHECK(inequality_verdict(-3.1, 1.0) == Verdict::fail);
    CHECK(inequality_verdict(0.0, 0.0) == Verdict::pass);
    CHECK(inequality_verdict(std::nan(""), 1.0) == Verdict::indeterminate);

    CHECK(equality_verdict(3.0, 1.0) == Verdict::pass);
    CHECK(equality_verdict(4.0, 1.0) == Verdict::indeterminate);
    CHECK(equality_verdict(5.0, 1.0) == Verdict::indeterminate);
    CHECK(equality_verdict(5.1, 1.0) == Verdict::fail);
    CHECK(equality_verdict(0.0, 0.0) == Verdict::pass);
    CHECK(equality_verdict(1e-3, 0.0) == Verdict::fail);

    const auto inf = inequality_result("x", {1.0, 0.1}, {kInf, 0.0}, 1.0, "");
    CHECK(inf.verdict == Verdict::pass);
    CHECK(std::isinf(inf.margin));
    const auto r = inequality_result("x", {1.0, 0.0}, {0.4, 0.0}, 2.0, "two");
    CHECK(r.margin == doctest::Approx(-0.2));
    CHECK(r.verdict == Verdict::fail);
    CHECK(to_string(Verdict::indeterminate) == "indeterminate");
}

TEST_CASE("constant functions are trivial passes") {
    const auto& ctx = koponen_ctx();
    const auto c = constant_function(1, 1.7);
    const auto ls = verify_log_sobolev(ctx, c, 2.0);
    CHECK(ls.lhs.value == doctest::Approx(0.0));
    CHECK(ls.rhs.value == 0.0);
    CHECK(ls.verdict == Verdict::pass);
    CHECK(verify_log_sobolev_dirichlet(ctx, c).verdict == Verdict::pass);
    CHECK(verify_poincare(ctx, c).verdict == Verdict::pass);
    CHECK_THROWS_AS(verify_log_sobolev(ctx, profile_function(profiles::sine(), 1, 0), 1.0), DomainError);
}

TEST_CASE("koponen suite at small N") {
    const auto& ctx = koponen_ctx();
    for (const auto& suite : suite_names()) {
        if (suite == "log_sobolev_gaussian") continue;  // covered below
        const auto rows = run_suite(ctx, suite);
        CHECK_FALSE(rows.empty());
        for (const auto& r : rows) {
            INFO(suite << " " << r.name << " " << r.function << " margin " << r.margin << " se " << r.margin_se
                       << " " << r.note);
            CHECK(r.verdict != Verdict::fail);
            if (r.name.rfind("moment_transfer", 0) != 0) CHECK(r.verdict != Verdict::indeterminate);
        }
    }
    CHECK_THROWS_AS(run_suite(ctx, "nonsense"), ConfigError);
}

TEST_CASE("constants scale as stated") {
    const auto& ctx = koponen_ctx();
    const auto f = profile_function(profiles::tanh(), 1, 0, 2.0);
    const auto f2 = profile_function(profiles::tanh(), 1, 0, 4.0, 2.0);  // 2 f
    const auto a = verify_log_sobolev_dirichlet(ctx, f), b = verify_log_sobolev_dirichlet(ctx, f2);
    CHECK(b.constant == doctest::Approx(0.5 * a.constant).epsilon(1e-14));
    CHECK(b.lhs.value == doctest::Approx(2.0 * a.lhs.value).epsilon(1e-12));
    CHECK(b.rhs.value == doctest::Approx(4.0 * a.rhs.value).epsilon(1e-9));

    const auto s = profile_function(profiles::sine(), 1, 0);
    const auto& M = ctx.M();
    for (double tau : {1.0, 0.5}) {
        const auto half = compose_scalar(s, maps::affine(tau, 0.0));
        const auto r = verify_exp_entropy(ctx, half, tau);
        CHECK(r.constant == doctest::Approx(ctx.C() * tau * tau * exp_second_moment(M, 2.0 * tau)).epsilon(1e-14));
        CHECK(r.verdict == Verdict::pass);
    }
    CHECK_THROWS_AS(verify_exp_entropy(ctx, s, 0.5), DomainError);
}

TEST_CASE("L^p bootstrap") {
    const auto& ctx = koponen_ctx();
    const auto& f = ctx.suites().mean_zero_ready.front();
    const auto vac = verify_lp_bootstrap(ctx, f, 3.0);
    CHECK(vac.verdict == Verdict::pass);
    CHECK(std::isinf(vac.rhs.value));
    CHECK(vac.note.find("vacuous") != std::string::npos);

    // alpha = 0.5: p = 2.25 is below 3 - alpha and the bound has content
    const CheckContext light(models::build_koponen(1.0, 0.25), small());
    for (const auto& g : light.suites().mean_zero_ready) {
        const auto r = verify_lp_bootstrap(light, g, 2.25);
        INFO(g.name() << " margin " << r.margin);
        CHECK(std::isfinite(r.rhs.value));
        CHECK(r.rhs.value > 0.0);
        CHECK(r.verdict == Verdict::pass);
    }
    CHECK_THROWS_AS(verify_lp_bootstrap(ctx, f, 9.0), DomainError);
}

TEST_CASE("moment transfer needs a first moment of M") {
    const auto heavy = verify_moment_transfer(koponen_ctx(), 3.0);
    CHECK(heavy.verdict == Verdict::indeterminate);
    CHECK(heavy.note.find("precondition not met") != std::string::npos);
    const CheckContext light(models::build_koponen(1.0, 0.25), small());
    const auto r = verify_moment_transfer(light, 3.0);
    CHECK(r.verdict == Verdict::pass);
    CHECK(std::isfinite(r.rhs.value));
}

TEST_CASE("Gaussian part") {
    const auto& ctx = koponen_ctx();
    const auto& f = ctx.suites().positive_infimum.front();
    const auto plain = verify_log_sobolev(ctx, f, 2.0);
    const auto g0 = verify_log_sobolev_gaussian(ctx, f, 2.0);
    CHECK(g0.margin == plain.margin);
    CHECK(g0.verdict == plain.verdict);

    const CheckContext withq(models::with_gaussian_part(models::build_koponen(), Matrix::Identity(1, 1)), small());
    // (p^2 / 2) (1 / 2 beta) (Q / Q_inf) = 2 * 0.5 * 2
    const auto r = verify_log_sobolev_gaussian(withq, f, 2.0);
    CHECK(r.constant_note.find("= 2,") != std::string::npos);
    CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("elementary inequalities") {
    const auto rows = elementary_lemma_suite(11, 20000);
    CHECK(rows.size() == 3);
    for (const auto& r : rows) {
        INFO(r.name);
        CHECK(r.verdict == Verdict::pass);
        CHECK(r.lhs.value == 0.0);
    }
}

TEST_CASE("stable gradient surrogate is an equality") {
    // M o T_t^{-1} = e^{-alpha beta t} M exactly, so both sides coincide
    const CheckContext ctx(models::build_alpha_stable_1d(), small());
    const auto f = profile_function(profiles::gaussian(), 1, 0, 1.0);
    const auto r = verify_gradient_surrogate(ctx, f, 1.0, 2.0);
    CHECK(std::abs(r.margin) <= 1e-3);
    CHECK(r.verdict != Verdict::fail);
}

TEST_CASE("psi inverse") {
    const auto& M = koponen_ctx().M();
    const PsiInverse inv(M, 100.0);
    CHECK(inv(0.5 * psi_at_zero(M)) == 0.0);
    for (double s : {0.5, 1.0, 2.0}) CHECK(inv(psi_of(M, s)) == doctest::Approx(s).epsilon(2e-3));
    CHECK(inv(10.0) <= inv(20.0));
}
