#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mehler/errors.hpp"
#include "mehler/functions.hpp"

using namespace mehler;

namespace {

// sampled bound violations and finite-difference mismatches over a wide box
void check_certified(const CylindricalFunction& f, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(-30.0, 30.0), N(-3.0, 3.0);
    const int d = f.dimension();
    const double sup = f.sup_norm(), lip = f.lipschitz_constant(), inf = f.infimum();
    for (int i = 0; i < 400; ++i) {
        Vector x(d);
        for (int k = 0; k < d; ++k) x(k) = i % 2 ? U(g) : N(g);
        const double v = f.value(x);
        if (std::isfinite(sup)) CHECK(std::abs(v) <= sup * (1.0 + 1e-9));
        CHECK(v >= inf - 1e-9);
        if (std::isfinite(lip)) CHECK(f.gradient(x).norm() <= lip * (1.0 + 1e-9));
    }
    for (int i = 0; i < 100; ++i) {
        Vector x(d);
        for (int k = 0; k < d; ++k) x(k) = N(g);
        const Vector gr = f.gradient(x);
        const Matrix H = f.hessian(x);
        for (int k = 0; k < d; ++k) {
            const double h = 1e-5;
            Vector a = x, b = x;
            a(k) += h;
            b(k) -= h;
            const double fd = (f.value(a) - f.value(b)) / (2 * h);
            CHECK(std::abs(fd - gr(k)) <= 1e-5 * std::max(1.0, std::abs(gr(k))));
            const Vector hd = (f.gradient(a) - f.gradient(b)) / (2 * h);
            for (int j = 0; j < d; ++j) CHECK(std::abs(hd(j) - H(j, k)) <= 1e-5 * std::max(1.0, std::abs(H(j, k))));
        }
    }
}

}  // namespace

TEST_CASE("evaluation through the projection") {
    const auto sq = coordinate_square(3, 0);
    const Vector x = (Vector(3) << 3.0, -1.0, 2.0).finished();
    CHECK(sq.value(x) == doctest::Approx(9.0));
    CHECK((sq.gradient(x) - (Vector(3) << 6.0, 0.0, 0.0).finished()).norm() == 0.0);
    CHECK(constant_function(2, 4.0).gradient(Vector::Ones(2)).norm() == 0.0);

    const auto t = profile_function(profiles::tanh(), 1, 0, 2.0);
    CHECK(t.infimum() == doctest::Approx(1.0));
    CHECK(t.bounds().supremum == doctest::Approx(3.0));
    CHECK(t.lipschitz_constant() == doctest::Approx(1.0));
    CHECK(t.value(Vector::Zero(1)) == doctest::Approx(2.0));
}

TEST_CASE("composition with scalar maps") {
    const auto f = profile_function(profiles::gaussian(), 1, 0, 0.5);
    const auto same = compose_scalar(f, maps::identity());
    for (double x : {-2.0, 0.1, 1.3}) CHECK(same.value(Vector::Constant(1, x)) == f.value(Vector::Constant(1, x)));
    CHECK(same.infimum() == f.infimum());

    const auto ent = compose_scalar(f, maps::entropy_density());
    CHECK(std::isfinite(ent.value(Vector::Constant(1, 0.3))));
    CHECK_THROWS_AS(compose_scalar(profile_function(profiles::sine(), 1, 0), maps::log()), DomainError);

    SUBCASE("exp of a function bounded by 1") {
        const auto s = profile_function(profiles::sine(), 1, 0);
        const auto e = compose_scalar(s, maps::exp());
        CHECK(e.bounds().supremum == doctest::Approx(std::numbers::e));
        CHECK(e.lipschitz_constant() <= std::numbers::e * s.lipschitz_constant() * (1 + 1e-12));
        // dense sampling oracle for the interval bounds
        double vmax = 0.0, gmax = 0.0;
        for (int i = 0; i <= 200000; ++i) {
            const Vector x = Vector::Constant(1, -10.0 + 20.0 * i / 200000.0);
            vmax = std::max(vmax, e.value(x));
            gmax = std::max(gmax, std::abs(e.gradient(x)(0)));
        }
        CHECK(vmax <= e.bounds().supremum);
        CHECK(vmax >= e.bounds().supremum - 1e-6);
        CHECK(gmax <= e.lipschitz_constant());
    }
    check_certified(compose_scalar(profile_function(profiles::tanh(), 1, 0, 2.0), maps::power(1.5)), 9);
}

TEST_CASE("mollified Lipschitz functions") {
    SUBCASE("constants are fixed") {
        LipschitzInput c{[](std::span<const double>) { return 1.7; }, 2, 0.0, 1.7, 1.7};
        for (int m : {1, 5, 40}) {
            const auto g = mollify_lipschitz(c, 2, m);
            CHECK(g.value((Vector(2) << 0.3, -4.0).finished()) == doctest::Approx(1.7).epsilon(1e-10));
        }
    }
    SUBCASE("absolute value within 1/m") {
        LipschitzInput a{[](std::span<const double> x) { return std::abs(x[0]); }, 1, 1.0, 0.0, kInf};
        const auto g = mollify_lipschitz(a, 1, 100);
        double worst = 0.0, gworst = 0.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -2.0 + 4.0 * i / 4000.0;
            worst = std::max(worst, std::abs(g.value(Vector::Constant(1, x)) - std::abs(x)));
            gworst = std::max(gworst, std::abs(g.gradient(Vector::Constant(1, x))(0)));
        }
        CHECK(worst <= 0.01);
        CHECK(gworst <= 1.0 + 1e-9);
    }
    SUBCASE("sup bounds and convergence in m then n") {
        auto fn = [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return std::min(2.0, std::sqrt(s));
        };
        LipschitzInput in{fn, 3, 1.0, 0.0, 2.0};
        std::mt19937_64 g(2);
        std::uniform_real_distribution<double> U(-1.5, 1.5);
        const auto coarse = mollify_lipschitz(in, 2, 4);
        const auto full = mollify_lipschitz(in, 3, 200);
        for (int i = 0; i < 20; ++i) {
            Vector x(3);
            for (int k = 0; k < 3; ++k) x(k) = U(g);
            CHECK(std::abs(coarse.value(x)) <= 2.0 + 1e-9);
            CHECK(coarse.gradient(x).norm() <= 1.0 + 1e-9);
            CHECK(std::abs(full.value(x) - fn(std::span<const double>(x.data(), 3))) <= 1.0 / 200 + 1e-9);
        }
    }
    LipschitzInput bad{[](std::span<const double>) { return 0.0; }, 1, 1.0};
    CHECK_THROWS_AS(mollify_lipschitz(bad, 2, 3), DomainError);
}

TEST_CASE("standard suites") {
    for (int d : {1, 2}) {
        const auto s = standard_suites(d);
        CHECK(s.positive_infimum.size() >= 10);
        CHECK(s.lipschitz_one.size() >= 10);
        CHECK(s.mean_zero_ready.size() >= 10);
        for (const auto& f : s.positive_infimum) {
            CHECK(f.infimum() > 0.0);
            CHECK(f.infimum() >= 0.2 - 1e-12);
        }
        for (const auto& f : s.lipschitz_one) CHECK(f.lipschitz_constant() <= 1.0 + 1e-12);
        std::uint64_t seed = 100;
        for (const auto* list : {&s.positive_infimum, &s.lipschitz_one, &s.mean_zero_ready})
            for (const auto& f : *list) {
                INFO(f.name());
                check_certified(f, seed++);
            }
    }
    CHECK_THROWS(standard_suites(1).by_name("nonsense"));
}
