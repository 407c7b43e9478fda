#pragma once
// Levy measures on R^d in polar form. Every measure is a finite family of
// rays: a unit direction and a radial kernel k with M(A) = sum over rays of
// int chi_A(r theta) k(r) dr. A 1D density gives the two half-lines, a 2D
// density an angular midpoint grid, a spherical measure one ray per atom.

#include <algorithm>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mehler/linalg.hpp"
#include "mehler/quadrature.hpp"

namespace mehler {

inline constexpr double kInfRadius = std::numeric_limits<double>::infinity();

enum class TailKind { gaussian, exponential, power, compact };

struct TailClass {
    TailKind kind = TailKind::gaussian;
    double parameter = 0.0;  // exponential rate, power exponent gamma, or support radius

    static TailClass gaussian() { return {TailKind::gaussian, 0.0}; }
    static TailClass exponential(double rate) { return {TailKind::exponential, rate}; }
    static TailClass power(double gamma) { return {TailKind::power, gamma}; }
    static TailClass compact(double radius) { return {TailKind::compact, radius}; }

    // does int_1^inf r^q e^{s r} k(r) dr converge
    bool admits(double q, double s = 0.0) const;
    std::string describe() const;
};

using Density = std::function<double(std::span<const double>)>;
using RadialKernel = std::function<double(double)>;

struct Ray {
    Vector direction;
    RadialKernel kernel;
    double angular_halfwidth = 0.0;  // 2D grids: half the angular cell, used to jitter samples
};

struct SphereAtom {
    Vector direction;
    double weight;
};

class LevyMeasure {
public:
    static LevyMeasure from_density(int d, Density density, double singularity_order,
                                    TailClass tail, int angular_resolution = 64);
    static LevyMeasure spherical(std::vector<SphereAtom> atoms, RadialKernel radial,
                                 double singularity_order, TailClass tail);
    // used for transformed measures; density is optional
    static LevyMeasure from_rays(int d, std::vector<Ray> rays, double singularity_order,
                                 TailClass tail, std::optional<Density> density = std::nullopt);
    static LevyMeasure zero(int d);

    int dimension() const;
    double singularity_order() const;
    const TailClass& tail() const;
    const std::vector<Ray>& rays() const;
    bool is_zero() const;

    bool has_density() const;
    double density(std::span<const double> y) const;
    double density(const Vector& y) const { return density(std::span<const double>(y.data(), y.size())); }
    const std::vector<SphereAtom>& spherical_atoms() const;  // empty unless built from atoms
    const RadialKernel& radial_profile() const;               // spherical measures only

    LevyMeasure scaled(double factor) const;
    // rays come in opposite pairs with equal kernels (checked on a log grid)
    bool is_symmetric(double rel_tol = 1e-12) const;

private:
    struct Impl;
    explicit LevyMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

struct RadialOptions {
    double delta = 0.05;         // end of the panel that gets the singular substitution
    double power_at_zero = 2.0;  // integrand factor g(r) = O(r^p) at 0
    double growth = 0.0;         // g(r) = O(r^q) at infinity
    double exp_rate = 0.0;       // g(r) = O(e^{s r}) at infinity
    quad::Tolerance tol{};
};

namespace detail {

template <class F>
auto integrate_plain(F&& f, double a, double b, const quad::Tolerance& tol)
    -> quad::BasicOutcome<std::decay_t<decltype(f(a))>> {
    if (b <= a) return {};
    if (a > 0.0 && b / a > 8.0) {
        // spans decades: integrate in log r
        auto g = [&](double v) {
            const double r = std::exp(v);
            return f(r) * r;
        };
        return quad::integrate(g, std::log(a), std::log(b), tol);
    }
    return quad::integrate(f, a, b, tol);
}

}  // namespace detail

// int_lo^hi g(r) k(r) dr along one ray of M, hi may be +inf
template <class G>
auto integrate_ray(const LevyMeasure& M, const Ray& ray, G&& g, double lo, double hi,
                   const RadialOptions& opt = {}) {
    using T = std::decay_t<decltype(g(1.0) * 1.0)>;
    quad::BasicOutcome<T> out{};
    if (hi <= lo) return out;
    const auto& k = ray.kernel;
    auto f = [&](double r) -> T {
        const double kr = k(r);
        return kr == 0.0 ? T{} : T(g(r) * kr);
    };
    const double alpha = M.singularity_order();
    const double delta = opt.delta;
    if (lo < delta) {
        const double b = std::min(delta, hi);
        if (lo == 0.0)
            out += quad::integrate_from_zero(f, b, opt.power_at_zero - 1.0 - alpha, opt.tol);
        else
            out += detail::integrate_plain(f, lo, b, opt.tol);
    }
    if (hi <= delta) return out;
    const double a1 = std::max(lo, delta), b1 = std::min(hi, 1.0);
    if (a1 < b1) out += detail::integrate_plain(f, a1, b1, opt.tol);
    if (hi <= 1.0) return out;
    const double a2 = std::max(lo, 1.0);
    const TailClass& tail = M.tail();
    if (std::isfinite(hi)) {
        double b2 = hi;
        if (tail.kind == TailKind::compact) b2 = std::min(b2, std::max(a2, tail.parameter));
        out += detail::integrate_plain(f, a2, b2, opt.tol);
        return out;
    }
    if (!tail.admits(opt.growth, opt.exp_rate))
        throw DivergentIntegral("tail " + tail.describe() + " too heavy for growth r^" +
                                std::to_string(opt.growth) + " e^{" + std::to_string(opt.exp_rate) +
                                " r}");
    switch (tail.kind) {
        case TailKind::compact:
            out += detail::integrate_plain(f, a2, std::max(a2, tail.parameter), opt.tol);
            break;
        case TailKind::power:
            out += quad::integrate_power_tail(f, a2, 1.0 + tail.parameter - opt.growth, opt.tol);
            break;
        default:
            out += quad::integrate_light_tail(f, a2, opt.tol);
            break;
    }
    return out;
}

// int_0^inf g(r) k(r) dr for g bounded by `bound` beyond r = 1. On power
// tails an oscillating g never settles, so the range is cut once
// bound * M(r > R) drops below tail_rel * |partial|. The remainder is the
// k-weighted mean of g over the last segment times M(r > R), clamped to the
// certified interval ([0, bound] or [-bound, bound]) whose width goes into
// the error.
template <class G>
quad::Outcome integrate_ray_bounded(const LevyMeasure& M, const Ray& ray, G&& g, double bound, bool nonnegative,
                                    const RadialOptions& opt, double tail_rel) {
    if (M.tail().kind != TailKind::power || !std::isfinite(bound)) return integrate_ray(M, ray, g, 0.0, kInfRadius, opt);
    double R = 8.0;
    quad::Outcome out = integrate_ray(M, ray, g, 0.0, R, opt);
    RadialOptions mo = opt;
    mo.growth = 0.0;
    auto mass = [&](double lo, double hi) {
        return integrate_ray(M, ray, [](double) { return 1.0; }, lo, hi, mo).value;
    };
    double tail = mass(R, kInfRadius);
    double last_value = out.value, last_mass = mass(1.0, R);
    while (bound * tail > tail_rel * std::abs(out.value) + opt.tol.abs && R < 1e9) {
        // far panels only need accuracy well inside the remainder band
        RadialOptions fo = opt;
        fo.tol.abs = std::max(opt.tol.abs, 0.1 * tail_rel * std::abs(out.value));
        const quad::Outcome seg = integrate_ray(M, ray, g, R, 8.0 * R, fo);
        out += seg;
        last_value = seg.value;
        last_mass = mass(R, 8.0 * R);
        R *= 8.0;
        tail = mass(R, kInfRadius);
    }
    const double lo = nonnegative ? 0.0 : -bound;
    const double mean = last_mass > 0.0 ? std::clamp(last_value / last_mass, lo, bound) : 0.5 * (lo + bound);
    out.value += mean * tail;
    out.error += (bound - lo) * tail;
    return out;
}

// sum over rays of int_lo^hi r^p k(r) dr
quad::Outcome radial_moment(const LevyMeasure& M, double p, double lo, double hi,
                            const quad::Tolerance& tol = {});

}  // namespace mehler
