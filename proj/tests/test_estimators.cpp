#include <doctest.h>

#include <cmath>

#include "mehler/errors.hpp"
#include "mehler/estimators.hpp"
#include "mehler/models.hpp"
#include "support/form_cases.hpp"

using namespace mehler;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

const models::ModelSpec& koponen() {
    static const auto m = models::build_koponen();
    return m;
}

const SampleSet& koponen_sigma() {
    static const SampleSet S = sample_invariant(100000, koponen().evolved, {}, 31);
    return S;
}

// int y^2 M_inf(dy) = (1 / 2 beta) int y^2 M(dy): the curvature of -log of the
// characteristic function at 0 for the symmetric, driftless Koponen sigma
double koponen_variance() {
    const auto k = oracle::koponen(1.0, 0.75);
    return 0.5 * (oracle::simpson_log([](double y) { return y * y; }, k, 1e-8) + oracle::taylor_piece(1.0, 2.0, k, 1e-8));
}

}  // namespace

TEST_CASE("means") {
    const auto& S = koponen_sigma();
    const auto c = estimate_mean(constant_function(1, 2.5), S);
    CHECK(c.value == 2.5);
    CHECK(c.std_error == 0.0);
    const auto odd = estimate_mean(profile_function(profiles::tanh(), 1, 0), S);
    CHECK(std::abs(odd.value) <= 3.0 * odd.std_error);
    const auto sq = estimate_mean(coordinate_square(1, 0), S);
    CHECK(std::abs(sq.value - koponen_variance()) <= 3.0 * sq.std_error);
    const auto m2 = moment(S, 2.0);
    CHECK(std::abs(m2.value - koponen_variance()) <= 3.0 * m2.std_error);
    CHECK(moment(S, 0.0).value == 1.0);
}

TEST_CASE("entropy") {
    SampleSet S(4, 1);
    S << 1.0, 1.0, 3.0, 3.0;
    const auto id = profile_function(profiles::identity(), 1, 0);
    const auto e = estimate_entropy(id, 1.0, S);
    CHECK(std::abs(e.value - (1.5 * std::log(3.0) - 2.0 * std::log(2.0))) <= 1e-14);
    CHECK(std::abs(e.value - 0.2616) <= 1e-4);
    CHECK(estimate_entropy(constant_function(1, 3.0), 2.0, koponen_sigma()).value == doctest::Approx(0.0));
    SampleSet bad(2, 1);
    bad << 1.0, -1.0;
    CHECK_THROWS_AS(estimate_entropy(id, 1.0, bad), DomainError);
    for (const auto& f : standard_suites(1).positive_infimum)
        for (double p : {1.0, 2.0}) CHECK(estimate_entropy(f, p, koponen_sigma()).value >= 0.0);
}

TEST_CASE("forms: elementary properties") {
    const auto S = form_cases::sample_set();
    const auto& M = koponen().triple.M;
    const auto o = form_cases::tight();
    const auto c = constant_function(1, 2.0);
    CHECK(nonlocal_entropy_form(c, 1.0, S, M, o).value == 0.0);
    CHECK(dirichlet_form(c, S, M, o).value == 0.0);
    const auto M25 = models::build_koponen(1.0, 0.25).triple.M;
    CHECK(weighted_increment_form(c, 2.25, S, M25, o).value == 0.0);

    const auto f = profile_function(profiles::sine(), 1, 0, 2.0);
    const auto f2 = profile_function(profiles::sine(), 1, 0, 4.0, 2.0);  // 2 f
    const double a = nonlocal_entropy_form(f, 1.0, S, M, o).value, b = nonlocal_entropy_form(f2, 1.0, S, M, o).value;
    CHECK(std::abs(b - 2.0 * a) <= 1e-9 * b);
    const auto shifted = profile_function(profiles::sine(), 1, 0, 7.0);
    const double d1 = dirichlet_form(f, S, M, o).value, d2 = dirichlet_form(shifted, S, M, o).value;
    CHECK(std::abs(d1 - d2) <= 1e-10 * d1);
    CHECK(d1 > 0.0);

    // halving the singular panel moves the result by quadrature noise only
    auto o2 = o;
    o2.delta = 0.025;
    CHECK(std::abs(dirichlet_form(f, S, M, o2).value - d1) <= 1e-7 * d1);

    CHECK_FALSE(weighted_increment_converges(3.0, M));
    CHECK(weighted_increment_converges(2.25, M25));
    CHECK_THROWS_AS(weighted_increment_form(f, 3.0, S, M, o), DivergentIntegral);
}

TEST_CASE("weighted kernel is 1 outside the unit ball") {
    // measure carried by [1.5, 2.5]: the weighted form is the plain increment integral
    auto bump = [](std::span<const double> y) { return std::abs(y[0]) > 1.5 && std::abs(y[0]) < 2.5 ? 1.0 : 0.0; };
    auto M = LevyMeasure::from_density(1, bump, 0.0, TailClass::compact(2.5));
    const auto f = profile_function(profiles::gaussian(), 1, 0, 1.0);
    const auto S = form_cases::sample_set();
    const double p = 2.5;
    double ref = 0.0;
    const int n = 20000;
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        const double x = S(i, 0), fx = std::pow(1.0 + std::exp(-x * x), p);
        for (double sign : {-1.0, 1.0})
            for (int j = 0; j < n; ++j) {
                const double y = sign * (1.5 + (j + 0.5) / n);
                ref += std::abs(std::pow(1.0 + std::exp(-(x + y) * (x + y)), p) - fx) / n;
            }
    }
    ref /= static_cast<double>(S.rows());
    const double v = weighted_increment_form(f, p, S, M, form_cases::tight()).value;
    CHECK(std::abs(v - ref) <= 1e-6 * ref);
}

TEST_CASE("forms against the double-quadrature oracle") {
    for (const auto& c : form_cases::smooth_cases()) {
        const auto e = form_cases::compare(oracle::Form::entropy, c);
        const auto d = form_cases::compare(oracle::Form::dirichlet, c);
        INFO(c.label << " entropy " << e.value << " vs " << e.reference << ", dirichlet " << d.value << " vs "
                     << d.reference);
        CHECK(e.rel <= 1e-3);
        CHECK(d.rel <= 1e-3);
    }
    for (const auto& c : form_cases::weighted_cases()) {
        const auto w = form_cases::compare(oracle::Form::weighted, c);
        INFO(c.label << " weighted " << w.value << " vs " << w.reference);
        CHECK(w.rel <= 1e-3);
    }
}

TEST_CASE("Levy measure moments") {
    const auto& M = koponen().triple.M;
    const double first = moment(M, 1.0, Region::complement).value;
    CHECK(first <= 2.0 / (2.5 * std::numbers::e));
    CHECK(first > 0.0);
    const auto k = oracle::koponen(1.0, 0.75);
    const double second = oracle::simpson_log([](double y) { return y * y; }, k, 1e-8) +
                          oracle::taylor_piece(1.0, 2.0, k, 1e-8);
    CHECK(std::abs(moment(M, 2.0, Region::whole).value - second) <= 1e-8 * second);
    CHECK_THROWS_AS(moment(M, 1.0, Region::unit_ball), DivergentIntegral);
    CHECK_THROWS_AS(moment(models::build_alpha_stable_1d().triple.M, 2.0, Region::complement), DivergentIntegral);
}

TEST_CASE("tail probabilities") {
    const auto& S = koponen_sigma();
    const auto g = profile_function(profiles::identity(), 1, 0);
    const auto half = tail_probability(g, S, 0.0);
    CHECK(std::abs(half.value - 0.5) <= 3.0 * half.std_error + 1e-3);
    CHECK(tail_probability(g, S, 100.0).value == 0.0);
    const auto curve = tail_curve(g, S, {0.0, 0.2, 0.5, 1.0, 1.5, 2.0, 3.0});
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].value <= curve[i - 1].value);
    const auto w = wilson(0, 1000);
    CHECK(w.value == 0.0);
    CHECK(w.std_error > 0.0);
}

TEST_CASE("semigroup action") {
    const auto& k = koponen();
    const auto f = profile_function(profiles::gaussian(), 1, 0, 0.5);
    const auto z = semigroup_apply(f, 0.0, v1(0.7), 100, k.evolved, {}, 1);
    CHECK(z.value == f.value(v1(0.7)));
    CHECK(z.std_error == 0.0);
    const auto p = semigroup_apply(f, 1.0, v1(0.7), 20000, k.evolved, {}, 2);
    CHECK(std::abs(p.value) <= f.sup_norm() + 3.0 * p.std_error);
    // ergodic limit
    const auto far = semigroup_apply(f, 40.0, v1(2.0), 100000, k.evolved, {}, 3);
    const auto m = estimate_mean(f, koponen_sigma());
    CHECK(std::abs(far.value - m.value) <= 3.0 * std::hypot(far.std_error, m.std_error));
}

TEST_CASE("empirical characteristic function") {
    const auto& S = koponen_sigma();
    const auto zero = empirical_char(S, v1(0.0));
    CHECK(zero.value == Complex(1.0, 0.0));
    const auto a = empirical_char(S, v1(1.3)), b = empirical_char(S, v1(-1.3));
    CHECK(std::abs(a.value - std::conj(b.value)) <= 1e-12);
    CHECK(std::abs(a.value - mu_hat(koponen().evolved, kInf, v1(1.3))) <= 3.0 * std::hypot(a.se_real, a.se_imag));
}

TEST_CASE("standard error shrinks like 1/sqrt(N)") {
    double ratio = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        const SampleSet G = sample_gaussian(Matrix::Identity(1, 1), 4000, 500 + rep);
        const auto f = profile_function(profiles::tanh(), 1, 0);
        ratio += estimate_mean(f, G).std_error / estimate_mean(f, SampleSet(G.topRows(2000))).std_error;
    }
    ratio /= 20.0;
    CHECK(ratio >= 1.0 / (std::sqrt(2.0) * 1.3));
    CHECK(ratio <= 1.3 / std::sqrt(2.0));
}

TEST_CASE("determinism of row evaluation across chains") {
    const auto& S = koponen_sigma();
    const auto f = profile_function(profiles::gaussian(), 1, 0, 1.0);
    FormOptions a, b;
    a.max_outer = 512;
    b = a;
    b.chains = 4;
    CHECK(dirichlet_form(f, S, koponen().triple.M, a).value == dirichlet_form(f, S, koponen().triple.M, b).value);
    CHECK(estimate_entropy(f, 2.0, S, 1).value == estimate_entropy(f, 2.0, S, 3).value);
}
