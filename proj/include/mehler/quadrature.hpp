#pragma once
// Thin layer over Boost.Math quadrature: adaptive Gauss-Kronrod on finite
// panels, substitutions for the r^e singularity at 0 and for power tails,
// panel doubling for light tails and Ooura's rule for Fourier tails.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "mehler/errors.hpp"

namespace mehler::quad {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    unsigned max_depth = 20;
};

template <class T>
struct BasicOutcome {
    T value{};
    double error = 0.0;
};
using Outcome = BasicOutcome<double>;

template <class T>
BasicOutcome<T>& operator+=(BasicOutcome<T>& a, const BasicOutcome<T>& b) {
    a.value += b.value;
    a.error += b.error;
    return a;
}

namespace detail {

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

// one Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic
template <class F>
auto gk15_panel(F& f, double a, double b) {
    using T = std::decay_t<decltype(f(a))>;
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    using G = boost::math::quadrature::gauss<double, 7>;
    static const auto& xk = GK::abscissa();
    static const auto& wk = GK::weights();
    static const auto& wg = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fv[15];
    fv[0] = f(c);
    for (int i = 1; i < 8; ++i) {
        fv[2 * i - 1] = f(c - h * xk[i]);
        fv[2 * i] = f(c + h * xk[i]);
    }
    T k = fv[0] * wk[0];
    T g = fv[0] * wg[0];
    for (int i = 1; i < 8; ++i) {
        const T pair = fv[2 * i - 1] + fv[2 * i];
        k += pair * wk[i];
        if (i % 2 == 0) g += pair * wg[i / 2];
    }
    const T mean = k * 0.5;
    double asc = wk[0] * std::abs(fv[0] - mean);
    for (int i = 1; i < 8; ++i) asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    asc *= std::abs(h);
    double err = std::abs((k - g) * h);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    return Segment<T>{a, b, k * h, err};
}

}  // namespace detail

// global adaptive Gauss-Kronrod: split the worst panel until the summed
// error estimate is below max(abs, rel*|I|); real or complex integrands
template <class F>
auto integrate(F&& f, double a, double b, const Tolerance& tol = {})
    -> BasicOutcome<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    if (a == b) return {};
    std::vector<detail::Segment<T>> heap;
    heap.push_back(detail::gk15_panel(f, a, b));
    T total = heap.front().value;
    double err = heap.front().error;
    const std::size_t limit = std::size_t(1) << std::min(tol.max_depth, 14u);
    while (err > std::max(tol.abs, tol.rel * std::abs(total)) && heap.size() < limit) {
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b)) ||
            std::abs(worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;  // cannot split further
        }
        auto l = detail::gk15_panel(f, worst.a, mid);
        auto r = detail::gk15_panel(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end());
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end());
    }
    // re-sum to shed the drift of the running totals
    total = T{};
    err = 0.0;
    for (const auto& s : heap) {
        total += s.value;
        err += s.error;
    }
    if (!std::isfinite(std::abs(total)))
        throw QuadratureError("non-finite integral on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    const double target = std::max(tol.abs, tol.rel * std::abs(total));
    if (err > 1000.0 * target && err > 1e-8 * std::max(1.0, std::abs(total)))
        throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "], error " + std::to_string(err));
    return {total, err};
}

// int_0^b f(r) dr where f(r) ~ r^e near 0 (e > -1); r = b u^m flattens it.
// Below r = kCancellationRadius increments like f(x+r) - f(x) are mostly
// rounding, so that stretch is closed with the leading power law (flat in u).
inline constexpr double kCancellationRadius = 1e-7;

template <class F>
auto integrate_from_zero(F&& f, double b, double e, const Tolerance& tol = {}) {
    if (!(e > -1.0))
        throw DivergentIntegral("integrand ~ r^" + std::to_string(e) +
                                " at the origin is not integrable");
    const double m = 1.0 / (1.0 + e);
    using T = std::decay_t<decltype(f(b))>;
    auto g = [&](double u) -> T {
        if (u <= 0.0) return T{};
        return f(b * std::pow(u, m)) * (b * m * std::pow(u, m - 1.0));
    };
    const double u0 = b > kCancellationRadius ? std::pow(kCancellationRadius / b, 1.0 / m) : 0.0;
    try {
        auto out = integrate(g, u0, 1.0, tol);
        if (u0 > 0.0) {
            const T head = g(u0) * u0;
            out.value += head;
            out.error += std::abs(head) * kCancellationRadius;
        }
        return out;
    } catch (const QuadratureError& ex) {
        throw QuadratureError(ex.what(), e);
    }
}

// int_a^inf f(r) dr where f(r) ~ r^-decay (decay > 1); r = a v^-m
template <class F>
auto integrate_power_tail(F&& f, double a, double decay, const Tolerance& tol = {}) {
    if (!(decay > 1.0))
        throw DivergentIntegral("integrand ~ r^-" + std::to_string(decay) +
                                " at infinity is not integrable");
    const double m = 1.0 / (decay - 1.0);
    using T = std::decay_t<decltype(f(a))>;
    auto g = [&](double v) -> T {
        if (v <= 0.0) return T{};
        const double s = std::pow(v, -m);
        if (!std::isfinite(s) || s > 1e250) return T{};
        return f(a * s) * (a * m * s / v);
    };
    try {
        return integrate(g, 0.0, 1.0, tol);
    } catch (const QuadratureError& ex) {
        throw QuadratureError(ex.what(), -decay);
    }
}

// int_a^inf for integrands with faster than polynomial decay: panels of
// doubling width until two consecutive ones are negligible
template <class F>
auto integrate_light_tail(F&& f, double a, const Tolerance& tol = {}, double first_width = 1.0) {
    using T = std::decay_t<decltype(f(a))>;
    BasicOutcome<T> total{};
    double lo = a, w = first_width;
    int quiet = 0;
    for (int k = 0; k < 80; ++k) {
        auto p = integrate(f, lo, lo + w, tol);
        total += p;
        if (std::abs(p.value) <= std::max(tol.abs, 1e-3 * tol.rel * std::abs(total.value))) {
            if (++quiet >= 2) return total;
        } else {
            quiet = 0;
        }
        lo += w;
        w *= 2.0;
    }
    throw QuadratureError("light-tail integral did not settle by r = " + std::to_string(lo));
}

// Gauss-Legendre rule mapped to [a,b]
struct Node {
    double x;
    double w;
};

template <unsigned N>
void append_gauss_panel(std::vector<Node>& out, double a, double b) {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    // boost stores the nonnegative half
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == 0.0) {
            out.push_back({c, h * ws[i]});
        } else {
            out.push_back({c - h * xs[i], h * ws[i]});
            out.push_back({c + h * xs[i], h * ws[i]});
        }
    }
}

}  // namespace mehler::quad
