#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mehler/estimators.hpp"
#include "mehler/models.hpp"
#include "mehler/sampling.hpp"
#include "support/oracles.hpp"

using namespace mehler;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

std::vector<double> column(const SampleSet& S, int j = 0) {
    return std::vector<double>(S.col(j).data(), S.col(j).data() + S.rows());
}

// empirical characteristic function within 3 SE of the target, both parts
void check_char(const SampleSet& S, const Vector& xi, Complex target) {
    const auto e = empirical_char(S, xi);
    INFO("xi=" << xi.transpose() << " emp=" << e.value << " target=" << target);
    CHECK(std::abs(e.value.real() - target.real()) <= 3.0 * e.se_real + 1e-12);
    CHECK(std::abs(e.value.imag() - target.imag()) <= 3.0 * e.se_imag + 1e-12);
}

}  // namespace

TEST_CASE("random streams replay") {
    RandomStream a(7, 3), b(7, 3), c(7, 4);
    bool differ = false;
    for (int i = 0; i < 10; ++i) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        differ |= x != c.uniform();
    }
    CHECK(differ);
    CHECK(a.substream(2).uniform() == b.substream(2).uniform());
}

TEST_CASE("levy increments") {
    JumpScheme scheme;
    RandomStream rng(1);
    CHECK(sample_levy_increment(LevyMeasure::zero(1), 1.0, scheme, rng).norm() == 0.0);

    SUBCASE("koponen mean and second moment") {
        const auto k = models::build_koponen();
        JumpSampler js(k.triple.M, scheme);
        const int N = 100000;
        std::vector<double> x(N), x2(N);
        RandomStream r(2);
        for (int i = 0; i < N; ++i) {
            x[i] = js.increment(1.0, r)(0);
            x2[i] = x[i] * x[i];
        }
        const auto m = mean_estimate(x), m2 = mean_estimate(x2);
        CHECK(std::abs(m.value) <= 3.0 * m.std_error);
        const auto ker = oracle::koponen(1.0, 0.75);
        const double second = oracle::simpson_log([](double y) { return y * y; }, ker, 1e-8) +
                              oracle::taylor_piece(1.0, 2.0, ker, 1e-8);
        CHECK(std::abs(m2.value - second) <= 3.0 * m2.std_error);
    }
    SUBCASE("koponen with a Gaussian part adds trace Q") {
        const auto k = models::with_gaussian_part(models::build_koponen(), Matrix::Constant(1, 1, 2.0));
        IdSampler ids(k.triple, scheme);
        const int N = 100000;
        const double dt = 0.5;
        std::vector<double> x2(N);
        RandomStream r(3);
        for (int i = 0; i < N; ++i) x2[i] = ids.increment(dt, r).squaredNorm();
        const auto ker = oracle::koponen(1.0, 0.75);
        const double second = oracle::simpson_log([](double y) { return y * y; }, ker, 1e-8) +
                              oracle::taylor_piece(1.0, 2.0, ker, 1e-8);
        const auto m2 = mean_estimate(x2);
        CHECK(std::abs(m2.value - (second + 2.0) * dt) <= 3.0 * m2.std_error);
    }
    SUBCASE("stable increments against the exponent") {
        const auto s = models::build_alpha_stable_1d();
        JumpSampler js(s.triple.M, scheme);
        SampleSet S(100000, 1);
        RandomStream r(4);
        for (int i = 0; i < S.rows(); ++i) S(i, 0) = js.increment(1.0, r)(0);
        check_char(S, v1(1.0), std::exp(-characteristic_exponent(s.triple, v1(1.0))));
    }
}

TEST_CASE("OU paths") {
    JumpScheme scheme;
    RandomStream rng(5);
    Matrix B(2, 2);
    B << -1.0, 0.4, 0.0, -0.5;
    SemigroupFamily sg(B);
    const Vector x0 = (Vector(2) << 1.0, -2.0).finished();
    auto none = LevyTriple::make(Vector::Zero(2), Matrix::Zero(2, 2), LevyMeasure::zero(2));
    CHECK((simulate_ou_path(x0, 1.5, none, sg, scheme, rng) - sg.T(1.5) * x0).norm() <= 1e-13);

    auto drift = LevyTriple::make(v1(1.0), Matrix::Zero(1, 1), LevyMeasure::zero(1));
    const double T = 2.0;
    const double z = simulate_ou_path(v1(3.0), T, drift, SemigroupFamily::scalar(1, -1.0), scheme, rng)(0);
    CHECK(std::abs(z - (std::exp(-T) * 3.0 + 1.0 - std::exp(-T))) <= 1e-13);

    SUBCASE("koponen Z(1) from 0 against mu_hat") {
        const auto k = models::build_koponen();
        OuSimulator sim(k.triple, k.semigroup, 1.0, scheme);
        const SampleSet S = fill_blocks(100000, 1, 6, 1, [&](RandomStream& r, Eigen::Ref<Matrix> rows) {
            for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = sim.simulate(Vector::Zero(1), r).transpose();
        });
        for (double xi : {0.5, 1.0, 2.0}) check_char(S, v1(xi), mu_hat(k.evolved, 1.0, v1(xi)));
    }
}

TEST_CASE("mu_t sampler") {
    const auto k = models::build_koponen();
    JumpScheme scheme;
    const SampleSet tiny = sample_mu_t(1e-9, 1000, k.evolved, scheme, 7);
    CHECK(tiny.cwiseAbs().maxCoeff() <= 1e-3);

    const SampleSet S = sample_mu_t(1.0, 100000, k.evolved, scheme, 8);
    for (double xi : {0.5, 1.0, 2.0}) check_char(S, v1(xi), mu_hat(k.evolved, 1.0, v1(xi)));

    // against the path simulator at N = 1e4
    OuSimulator sim(k.triple, k.semigroup, 1.0, scheme);
    const SampleSet P = fill_blocks(10000, 1, 9, 1, [&](RandomStream& r, Eigen::Ref<Matrix> rows) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) rows.row(i) = sim.simulate(Vector::Zero(1), r).transpose();
    });
    const SampleSet A = sample_mu_t(1.0, 10000, k.evolved, scheme, 10);
    CHECK(ks_statistic(column(A), column(P)) < ks_critical_1pct(10000, 10000));
}

TEST_CASE("invariant sampler") {
    JumpScheme scheme;
    auto none = LevyTriple::make(v1(0.0), Matrix::Zero(1, 1), LevyMeasure::zero(1));
    EvolvedTriple ev0(none, SemigroupFamily::scalar(1, -1.0));
    CHECK(sample_invariant(100, ev0, scheme, 1).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS(sample_invariant(10, EvolvedTriple(models::build_koponen().triple, SemigroupFamily::scalar(1, 0.0)),
                                  scheme, 1));

    const auto k = models::build_koponen();
    const SampleSet D = sample_invariant(10000, k.evolved, scheme, 11, InvariantMethod::direct);
    const SampleSet L = sample_invariant(10000, k.evolved, scheme, 12, InvariantMethod::long_horizon);
    CHECK(ks_statistic(column(D), column(L)) < ks_critical_1pct(10000, 10000));

    const SampleSet S = sample_invariant(100000, k.evolved, scheme, 13);
    for (double xi : {0.5, 1.0, 2.0}) check_char(S, v1(xi), mu_hat(k.evolved, kInf, v1(xi)));
}

TEST_CASE("sigma is preserved by one more step") {
    // sigma = (sigma o T_t^{-1}) * mu_t, paired on the same sigma draws
    JumpScheme scheme;
    const double t = 0.5;
    for (const auto& name : models::catalog_names()) {
        const auto m = models::build_named(name);
        const SampleSet S = sample_invariant(100000, m.evolved, scheme, 21);
        const SampleSet Y = sample_mu_t(t, 100000, m.evolved, scheme, 22);
        const SampleSet S2 = (S * m.semigroup.T(t).transpose() + Y).eval();
        for (double xi : {0.5, 1.0, 2.0}) {
            std::vector<double> dre(S.rows()), dim(S.rows());
            for (Eigen::Index i = 0; i < S.rows(); ++i) {
                dre[i] = std::cos(xi * S2(i, 0)) - std::cos(xi * S(i, 0));
                dim[i] = std::sin(xi * S2(i, 0)) - std::sin(xi * S(i, 0));
            }
            const auto a = mean_estimate(dre), b = mean_estimate(dim);
            INFO(name << " xi=" << xi);
            CHECK(std::abs(a.value) <= 3.0 * a.std_error);
            CHECK(std::abs(b.value) <= 3.0 * b.std_error);
        }
    }
}

TEST_CASE("Gaussian sampler") {
    CHECK(sample_gaussian(Matrix::Zero(2, 2), 50, 1).cwiseAbs().maxCoeff() == 0.0);
    const SampleSet G = sample_gaussian(Matrix::Constant(1, 1, 4.0), 100000, 2);
    std::vector<double> sq(G.rows());
    for (Eigen::Index i = 0; i < G.rows(); ++i) sq[i] = G(i, 0) * G(i, 0);
    const auto v = mean_estimate(sq);
    CHECK(std::abs(v.value - 4.0) <= 3.0 * v.std_error);

    Matrix Q = Matrix::Zero(2, 2);
    Q(0, 0) = 1.0;
    Q(1, 1) = 9.0;
    const SampleSet H = sample_gaussian(Q, 100000, 3);
    for (int a = 0; a < 2; ++a)
        for (int b = a; b < 2; ++b) {
            std::vector<double> prod(H.rows());
            for (Eigen::Index i = 0; i < H.rows(); ++i) prod[i] = H(i, a) * H(i, b);
            const auto e = mean_estimate(prod);
            CHECK(std::abs(e.value - Q(a, b)) <= 3.0 * e.std_error);
        }
    CHECK_THROWS(sample_gaussian(Matrix::Constant(1, 1, -1.0), 10, 1));
}

TEST_CASE("determinism across thread counts") {
    const auto s = models::build_alpha_stable_1d();
    JumpScheme scheme;
    const SampleSet a = sample_invariant(5000, s.evolved, scheme, 99, InvariantMethod::direct, 1);
    const SampleSet b = sample_invariant(5000, s.evolved, scheme, 99, InvariantMethod::direct, 4);
    const SampleSet c = sample_invariant(5000, s.evolved, scheme, 99, InvariantMethod::direct, 3);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(sample_mu_t(0.7, 3000, s.evolved, scheme, 5, 1) == sample_mu_t(0.7, 3000, s.evolved, scheme, 5, 4));
    CHECK_FALSE(a == sample_invariant(5000, s.evolved, scheme, 100));

    std::ostringstream out;
    write_csv(out, SampleSet(0, 2));
    CHECK(out.str() == "x1,x2\n");
}
