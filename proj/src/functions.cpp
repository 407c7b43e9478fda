#include "mehler/functions.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "mehler/errors.hpp"

namespace mehler {

CylindricalFunction::CylindricalFunction(std::string name, int dimension,
                                         std::vector<int> basis_indices, Core core, Bounds bounds)
    : name_(std::move(name)), d_(dimension), idx_(std::move(basis_indices)), core_(std::move(core)),
      bounds_(bounds) {
    if (core_.n < 1 || core_.n > kMaxCoords)
        throw DomainError("cylindrical core must use 1.." + std::to_string(kMaxCoords) + " coordinates");
    if (static_cast<int>(idx_.size()) != core_.n) throw DomainError("basis size does not match core");
    for (int i : idx_)
        if (i < 0 || i >= d_) throw DomainError("basis index outside the ambient dimension");
}

void CylindricalFunction::project(std::span<const double> x, double* xi) const {
    if (static_cast<int>(x.size()) != d_) throw DomainError("point has wrong dimension");
    for (int k = 0; k < core_.n; ++k) xi[k] = x[idx_[k]];
}

double CylindricalFunction::value(std::span<const double> x) const {
    double xi[kMaxCoords];
    project(x, xi);
    return core_.value(xi);
}

Vector CylindricalFunction::gradient(const Vector& x) const {
    double xi[kMaxCoords], g[kMaxCoords];
    project(std::span<const double>(x.data(), x.size()), xi);
    core_.gradient(xi, g);
    Vector out = Vector::Zero(d_);
    for (int k = 0; k < core_.n; ++k) out(idx_[k]) += g[k];
    return out;
}

Matrix CylindricalFunction::hessian(const Vector& x) const {
    double xi[kMaxCoords], h[kMaxCoords * kMaxCoords];
    project(std::span<const double>(x.data(), x.size()), xi);
    core_.hessian(xi, h);
    Matrix out = Matrix::Zero(d_, d_);
    const int n = core_.n;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(idx_[a], idx_[b]) += h[a * n + b];
    return out;
}

CylindricalFunction::Line CylindricalFunction::line(std::span<const double> x,
                                                    std::span<const double> dir) const {
    Line l{};
    project(x, l.base);
    for (int k = 0; k < core_.n; ++k) l.step[k] = dir[idx_[k]];
    return l;
}

double CylindricalFunction::value_on(const Line& l, double r) const {
    double xi[kMaxCoords];
    for (int k = 0; k < core_.n; ++k) xi[k] = l.base[k] + r * l.step[k];
    return core_.value(xi);
}

CylindricalFunction CylindricalFunction::renamed(std::string name) const {
    CylindricalFunction f = *this;
    f.name_ = std::move(name);
    return f;
}

// ---- profiles

namespace profiles {
namespace {
double gauss_f(double u) { return std::exp(-u * u); }
double gauss_df(double u) { return -2.0 * u * std::exp(-u * u); }
double gauss_d2f(double u) { return (4.0 * u * u - 2.0) * std::exp(-u * u); }
double tanh_f(double u) { return std::tanh(u); }
double tanh_df(double u) {
    const double c = std::cosh(u);
    return 1.0 / (c * c);
}
double tanh_d2f(double u) {
    const double t = std::tanh(u);
    return -2.0 * t * (1.0 - t * t);
}
double rat_f(double u) { return 1.0 / (1.0 + u * u); }
double rat_df(double u) {
    const double q = 1.0 + u * u;
    return -2.0 * u / (q * q);
}
double rat_d2f(double u) {
    const double q = 1.0 + u * u;
    return (6.0 * u * u - 2.0) / (q * q * q);
}
double sin_f(double u) { return std::sin(u); }
double cos_f(double u) { return std::cos(u); }
double msin_f(double u) { return -std::sin(u); }
double mcos_f(double u) { return -std::cos(u); }
double og_f(double u) { return u * std::exp(-u * u); }
double og_df(double u) { return (1.0 - 2.0 * u * u) * std::exp(-u * u); }
double og_d2f(double u) { return (4.0 * u * u * u - 6.0 * u) * std::exp(-u * u); }
double atan_f(double u) { return std::atan(u); }
double atan_df(double u) { return 1.0 / (1.0 + u * u); }
double atan_d2f(double u) {
    const double q = 1.0 + u * u;
    return -2.0 * u / (q * q);
}
double sabs_f(double u) { return std::sqrt(1.0 + u * u) - 1.0; }
double sabs_df(double u) { return u / std::sqrt(1.0 + u * u); }
double sabs_d2f(double u) { return std::pow(1.0 + u * u, -1.5); }
double lc_f(double u) {
    const double a = std::abs(u);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}
double id_f(double u) { return u; }
double one_f(double) { return 1.0; }
double zero_f(double) { return 0.0; }
double as_f(double u) { return u / std::sqrt(1.0 + u * u); }
double as_df(double u) { return std::pow(1.0 + u * u, -1.5); }
double as_d2f(double u) { return -3.0 * u * std::pow(1.0 + u * u, -2.5); }
}  // namespace

const Profile& gaussian() {
    static const Profile p{"gauss", gauss_f, gauss_df, gauss_d2f, 0.0, 1.0, 0.8577638849607068, 2.0};
    return p;
}
const Profile& tanh() {
    static const Profile p{"tanh", tanh_f, tanh_df, tanh_d2f, -1.0, 1.0, 1.0, 0.7698003589195011};
    return p;
}
const Profile& rational_bump() {
    static const Profile p{"rational", rat_f, rat_df, rat_d2f, 0.0, 1.0, 0.6495190528383290, 2.0};
    return p;
}
const Profile& sine() {
    static const Profile p{"sin", sin_f, cos_f, msin_f, -1.0, 1.0, 1.0, 1.0};
    return p;
}
const Profile& cosine() {
    static const Profile p{"cos", cos_f, msin_f, mcos_f, -1.0, 1.0, 1.0, 1.0};
    return p;
}
const Profile& odd_gaussian() {
    static const Profile p{"xgauss", og_f, og_df, og_d2f, -0.4288819424803535, 0.4288819424803535, 1.0,
                           1.951784};
    return p;
}
const Profile& arctan() {
    static const Profile p{"atan", atan_f, atan_df, atan_d2f, -std::numbers::pi / 2, std::numbers::pi / 2,
                           1.0, 0.6495190528383290};
    return p;
}
const Profile& smooth_abs() {
    static const Profile p{"sabs", sabs_f, sabs_df, sabs_d2f, 0.0, kInf, 1.0, 1.0};
    return p;
}
const Profile& log_cosh() {
    static const Profile p{"logcosh", lc_f, tanh_f, tanh_df, 0.0, kInf, 1.0, 1.0};
    return p;
}
const Profile& identity() {
    static const Profile p{"coord", id_f, one_f, zero_f, -kInf, kInf, 1.0, 0.0};
    return p;
}
const Profile& algebraic_sigmoid() {
    static const Profile p{"asig", as_f, as_df, as_d2f, -1.0, 1.0, 1.0, 0.8586502};
    return p;
}
}  // namespace profiles

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// products with infinities where 0 * inf means 0
double safe_mul(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : a * b; }

}  // namespace

CylindricalFunction profile_function(const Profile& p, int dimension, int coord, double offset,
                                     double scale, double rate, double shift, std::string name) {
    if (!(rate > 0.0)) throw DomainError("profile rate must be positive");
    if (name.empty()) {
        name = p.name + "(";
        if (rate != 1.0) name += fmt(rate) + "*";
        name += "x" + std::to_string(coord);
        if (shift != 0.0) name += (shift > 0 ? "-" : "+") + fmt(std::abs(shift));
        name += ")";
        if (scale != 1.0) name = fmt(scale) + "*" + name;
        if (offset != 0.0) name = fmt(offset) + "+" + name;
    }
    Core c;
    c.n = 1;
    auto f = p.f, df = p.df, d2f = p.d2f;
    c.value = [=](const double* xi) { return offset + scale * f(rate * (xi[0] - shift)); };
    c.gradient = [=](const double* xi, double* g) { g[0] = scale * rate * df(rate * (xi[0] - shift)); };
    c.hessian = [=](const double* xi, double* h) {
        h[0] = scale * rate * rate * d2f(rate * (xi[0] - shift));
    };
    Bounds b;
    double lo = safe_mul(scale, p.lo), hi = safe_mul(scale, p.hi);
    if (lo > hi) std::swap(lo, hi);
    b.infimum = offset + lo;
    b.supremum = offset + hi;
    b.grad_sup = std::abs(scale) * rate * p.d1;
    b.hess_sup = std::abs(scale) * rate * rate * p.d2;
    return CylindricalFunction(name, dimension, {coord}, c, b);
}

CylindricalFunction constant_function(int dimension, double value) {
    Core c;
    c.n = 1;
    c.value = [value](const double*) { return value; };
    c.gradient = [](const double*, double* g) { g[0] = 0.0; };
    c.hessian = [](const double*, double* h) { h[0] = 0.0; };
    Bounds b{value, value, 0.0, 0.0};
    return CylindricalFunction("const(" + fmt(value) + ")", dimension, {0}, c, b);
}

CylindricalFunction coordinate_square(int dimension, int coord) {
    Core c;
    c.n = 1;
    c.value = [](const double* xi) { return xi[0] * xi[0]; };
    c.gradient = [](const double* xi, double* g) { g[0] = 2.0 * xi[0]; };
    c.hessian = [](const double*, double* h) { h[0] = 2.0; };
    Bounds b{0.0, kInf, kInf, 2.0};
    return CylindricalFunction("x" + std::to_string(coord) + "^2", dimension, {coord}, c, b);
}

// ---- scalar maps

namespace maps {

ScalarMap identity() {
    ScalarMap m;
    m.name = "id";
    m.f = [](double x) { return x; };
    m.df = [](double) { return 1.0; };
    m.d2f = [](double) { return 0.0; };
    m.defined_on = [](double, double) { return true; };
    m.image = [](double lo, double hi) { return std::pair{lo, hi}; };
    m.d1_sup = [](double, double) { return 1.0; };
    m.d2_sup = [](double, double) { return 0.0; };
    return m;
}

ScalarMap exp() {
    ScalarMap m;
    m.name = "exp";
    m.f = [](double x) { return std::exp(x); };
    m.df = m.f;
    m.d2f = m.f;
    m.defined_on = [](double, double) { return true; };
    m.image = [](double lo, double hi) { return std::pair{std::exp(lo), std::exp(hi)}; };
    m.d1_sup = [](double, double hi) { return std::exp(hi); };
    m.d2_sup = [](double, double hi) { return std::exp(hi); };
    return m;
}

ScalarMap square() {
    ScalarMap m;
    m.name = "sq";
    m.f = [](double x) { return x * x; };
    m.df = [](double x) { return 2.0 * x; };
    m.d2f = [](double) { return 2.0; };
    m.defined_on = [](double, double) { return true; };
    m.image = [](double lo, double hi) {
        if (lo >= 0.0) return std::pair{lo * lo, hi * hi};
        if (hi <= 0.0) return std::pair{hi * hi, lo * lo};
        return std::pair{0.0, std::max(lo * lo, hi * hi)};
    };
    m.d1_sup = [](double lo, double hi) { return 2.0 * std::max(std::abs(lo), std::abs(hi)); };
    m.d2_sup = [](double, double) { return 2.0; };
    return m;
}

ScalarMap log() {
    ScalarMap m;
    m.name = "log";
    m.f = [](double x) { return std::log(x); };
    m.df = [](double x) { return 1.0 / x; };
    m.d2f = [](double x) { return -1.0 / (x * x); };
    m.defined_on = [](double lo, double) { return lo > 0.0; };
    m.image = [](double lo, double hi) { return std::pair{std::log(lo), std::log(hi)}; };
    m.d1_sup = [](double lo, double) { return 1.0 / lo; };
    m.d2_sup = [](double lo, double) { return 1.0 / (lo * lo); };
    return m;
}

ScalarMap entropy_density() {
    ScalarMap m;
    m.name = "xlogx-x";
    m.f = [](double x) { return x * std::log(x) - x; };
    m.df = [](double x) { return std::log(x); };
    m.d2f = [](double x) { return 1.0 / x; };
    m.defined_on = [](double lo, double) { return lo > 0.0; };
    m.image = [f = m.f](double lo, double hi) {
        const double a = f(lo), b = std::isfinite(hi) ? f(hi) : kInf;
        const double mn = (lo <= 1.0 && hi >= 1.0) ? -1.0 : std::min(a, b);
        return std::pair{mn, std::max(a, b)};
    };
    m.d1_sup = [](double lo, double hi) { return std::max(std::abs(std::log(lo)), std::abs(std::log(hi))); };
    m.d2_sup = [](double lo, double) { return 1.0 / lo; };
    return m;
}

ScalarMap power(double p) {
    if (!(p > 0.0)) throw DomainError("power map needs p > 0");
    ScalarMap m;
    m.name = "pow" + fmt(p);
    m.f = [p](double x) { return std::pow(x, p); };
    m.df = [p](double x) { return p * std::pow(x, p - 1.0); };
    m.d2f = [p](double x) { return p * (p - 1.0) * std::pow(x, p - 2.0); };
    m.defined_on = [p](double lo, double) { return lo > 0.0 || (lo >= 0.0 && p >= 2.0); };
    m.image = [p](double lo, double hi) { return std::pair{std::pow(lo, p), std::pow(hi, p)}; };
    m.d1_sup = [p](double lo, double hi) {
        return p * std::max(std::pow(lo, p - 1.0), std::pow(hi, p - 1.0));
    };
    m.d2_sup = [p](double lo, double hi) {
        if (p == 1.0) return 0.0;
        return std::abs(p * (p - 1.0)) * std::max(std::pow(lo, p - 2.0), std::pow(hi, p - 2.0));
    };
    return m;
}

ScalarMap capped(double level) {
    if (!(level > 0.0)) throw DomainError("cap level must be positive");
    ScalarMap m;
    m.name = "cap" + fmt(level);
    m.f = [level](double x) { return level * std::tanh(x / level); };
    m.df = [level](double x) {
        const double c = std::cosh(x / level);
        return 1.0 / (c * c);
    };
    m.d2f = [level](double x) {
        const double t = std::tanh(x / level);
        return -2.0 * t * (1.0 - t * t) / level;
    };
    m.defined_on = [](double, double) { return true; };
    m.image = [f = m.f](double lo, double hi) { return std::pair{f(lo), f(hi)}; };
    m.d1_sup = [](double, double) { return 1.0; };
    m.d2_sup = [level](double, double) { return 0.7698003589195011 / level; };
    return m;
}

ScalarMap affine(double a, double b) {
    ScalarMap m;
    m.name = fmt(a) + "*.+" + fmt(b);
    m.f = [a, b](double x) { return a * x + b; };
    m.df = [a](double) { return a; };
    m.d2f = [](double) { return 0.0; };
    m.defined_on = [](double, double) { return true; };
    m.image = [a, b](double lo, double hi) {
        double u = safe_mul(a, lo) + b, v = safe_mul(a, hi) + b;
        if (u > v) std::swap(u, v);
        return std::pair{u, v};
    };
    m.d1_sup = [a](double, double) { return std::abs(a); };
    m.d2_sup = [](double, double) { return 0.0; };
    return m;
}

}  // namespace maps

CylindricalFunction compose_scalar(const CylindricalFunction& f, const ScalarMap& phi) {
    const double lo = f.bounds().infimum, hi = f.bounds().supremum;
    if (!phi.defined_on(lo, hi))
        throw DomainError(phi.name + " is not defined on the range [" + fmt(lo) + ", " + fmt(hi) +
                          "] of " + f.name());
    const Core inner = f.core();
    const int n = inner.n;
    Core c;
    c.n = n;
    auto pf = phi.f, pdf = phi.df, pd2f = phi.d2f;
    c.value = [inner, pf](const double* xi) { return pf(inner.value(xi)); };
    c.gradient = [inner, pdf, n](const double* xi, double* g) {
        inner.gradient(xi, g);
        const double s = pdf(inner.value(xi));
        for (int k = 0; k < n; ++k) g[k] *= s;
    };
    c.hessian = [inner, pdf, pd2f, n](const double* xi, double* h) {
        double g[kMaxCoords];
        inner.gradient(xi, g);
        inner.hessian(xi, h);
        const double v = inner.value(xi), d1 = pdf(v), d2 = pd2f(v);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) h[a * n + b] = d2 * g[a] * g[b] + d1 * h[a * n + b];
    };
    Bounds b;
    auto [ilo, ihi] = phi.image(lo, hi);
    b.infimum = ilo;
    b.supremum = ihi;
    const double d1 = phi.d1_sup(lo, hi), d2 = phi.d2_sup(lo, hi);
    const double gs = f.bounds().grad_sup, hs = f.bounds().hess_sup;
    b.grad_sup = safe_mul(d1, gs);
    b.hess_sup = safe_mul(d2, safe_mul(gs, gs)) + safe_mul(d1, hs);
    return CylindricalFunction(phi.name + "(" + f.name() + ")", f.dimension(), f.basis_indices(), c, b);
}

// ---- mollification

namespace {

double sphere_area(int n) {
    // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double bump_raw(double s) {  // s = |eta|^2
    return s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0;
}

struct BumpDerivs {
    double rho;
    double g;   // d rho / d eta_i = rho * g * eta_i
    double h1;  // d2 rho / d eta_i d eta_j = rho * (h1 eta_i eta_j + h2 delta_ij)
    double h2;
};

BumpDerivs bump_derivs(double s, double z) {
    if (s >= 1.0) return {0.0, 0.0, 0.0, 0.0};
    const double q = 1.0 - s;
    const double rho = std::exp(-1.0 / q) / z;
    const double dphi = -1.0 / (q * q), d2phi = -2.0 / (q * q * q);
    return {rho, 2.0 * dphi, 4.0 * dphi * dphi + 4.0 * d2phi, 2.0 * dphi};
}

double grad_l1(int n) {
    // int |grad rho| over the ball
    const double z = bump_normaliser(n);
    auto f = [&](double r) {
        const double s = r * r;
        if (s >= 1.0) return 0.0;
        const double q = 1.0 - s;
        return std::pow(r, n - 1) * std::exp(-1.0 / q) / z * 2.0 * r / (q * q);
    };
    return sphere_area(n) * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 20, 1e-12);
}

}  // namespace

double bump_normaliser(int n) {
    if (n < 1) throw DomainError("bump dimension must be positive");
    auto f = [n](double r) { return std::pow(r, n - 1) * bump_raw(r * r); };
    const double radial = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 20, 1e-14);
    return sphere_area(n) * radial;
}

CylindricalFunction mollify_lipschitz(const LipschitzInput& in, int n, int m) {
    if (n < 1 || n > in.dimension)
        throw DomainError("truncation dimension " + std::to_string(n) + " exceeds ambient dimension " +
                          std::to_string(in.dimension));
    if (n > 3) throw DomainError("mollification is implemented for n <= 3");
    if (m < 1) throw DomainError("mollification index must be positive");
    const double z = bump_normaliser(n);
    const int d = in.dimension;
    const double inv_m = 1.0 / m;
    auto g = in.g;
    // psi_n(zeta): g on the span of the first n coordinates
    auto psi = [g, d, n](const double* zeta) {
        double y[8] = {0, 0, 0, 0, 0, 0, 0, 0};
        std::vector<double> big;
        double* p = y;
        if (d > 8) {
            big.assign(d, 0.0);
            p = big.data();
        }
        for (int k = 0; k < n; ++k) p[k] = zeta[k];
        return g(std::span<const double>(p, d));
    };

    // which = 0 value, 1 gradient, 2 hessian; out gets 1, n or n*n numbers
    std::function<void(const double*, int, double*)> conv;
    if (n == 1) {
        conv = [psi, z, inv_m, m](const double* xi, int which, double* out) {
            auto f = [&](double eta) {
                const BumpDerivs b = bump_derivs(eta * eta, z);
                if (b.rho == 0.0) return 0.0;
                const double zeta = xi[0] - eta * inv_m;
                const double v = psi(&zeta);
                if (which == 0) return v * b.rho;
                if (which == 1) return v * b.rho * b.g * eta * m;
                return v * b.rho * (b.h1 * eta * eta + b.h2) * double(m) * m;
            };
            // split at the centre so a kink of g at xi does not straddle panels
            using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
            out[0] = GK::integrate(f, -1.0, 0.0, 25, 1e-12) + GK::integrate(f, 0.0, 1.0, 25, 1e-12);
        };
    } else {
        // tensor Gauss-Legendre on [-1,1]^n, two panels per axis
        std::vector<double> nodes, weights;
        using G = boost::math::quadrature::gauss<double, 20>;
        for (double c : {-0.5, 0.5}) {
            const auto& xs = G::abscissa();
            const auto& ws = G::weights();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                for (double sg : {-1.0, 1.0}) {
                    if (xs[i] == 0.0 && sg > 0) continue;
                    nodes.push_back(c + 0.5 * sg * xs[i]);
                    weights.push_back(0.5 * ws[i]);
                }
            }
        }
        // normalise by the rule's own bump mass so constants are reproduced exactly
        double zq = 0.0;
        {
            const int q = static_cast<int>(nodes.size());
            const long total = static_cast<long>(std::pow(q, n));
            for (long t = 0; t < total; ++t) {
                long rem = t;
                double w = 1.0, s = 0.0;
                for (int k = 0; k < n; ++k) {
                    const int i = static_cast<int>(rem % q);
                    rem /= q;
                    w *= weights[i];
                    s += nodes[i] * nodes[i];
                }
                zq += w * bump_raw(s);
            }
        }
        conv = [psi, z = zq, inv_m, m, n, nodes, weights](const double* xi, int which, double* out) {
            const int q = static_cast<int>(nodes.size());
            const int len = which == 0 ? 1 : (which == 1 ? n : n * n);
            for (int i = 0; i < len; ++i) out[i] = 0.0;
            int idx[3] = {0, 0, 0};
            const long total = static_cast<long>(std::pow(q, n));
            for (long t = 0; t < total; ++t) {
                long rem = t;
                double eta[3], w = 1.0, s = 0.0;
                for (int k = 0; k < n; ++k) {
                    idx[k] = static_cast<int>(rem % q);
                    rem /= q;
                    eta[k] = nodes[idx[k]];
                    w *= weights[idx[k]];
                    s += eta[k] * eta[k];
                }
                if (s >= 1.0) continue;
                const BumpDerivs b = bump_derivs(s, z);
                double zeta[3];
                for (int k = 0; k < n; ++k) zeta[k] = xi[k] - eta[k] * inv_m;
                const double v = psi(zeta) * b.rho * w;
                if (which == 0) {
                    out[0] += v;
                } else if (which == 1) {
                    for (int k = 0; k < n; ++k) out[k] += v * b.g * eta[k] * m;
                } else {
                    for (int a = 0; a < n; ++a)
                        for (int c = 0; c < n; ++c)
                            out[a * n + c] += v * (b.h1 * eta[a] * eta[c] + (a == c ? b.h2 : 0.0)) *
                                              double(m) * m;
                }
            }
        };
    }
    Core c;
    c.n = n;
    c.value = [conv](const double* xi) {
        double v;
        conv(xi, 0, &v);
        return v;
    };
    c.gradient = [conv](const double* xi, double* g) { conv(xi, 1, g); };
    c.hessian = [conv](const double* xi, double* h) { conv(xi, 2, h); };
    Bounds b;
    b.infimum = in.infimum;
    b.supremum = in.supremum;
    b.grad_sup = in.lipschitz;
    b.hess_sup = in.lipschitz * m * grad_l1(n);
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    return CylindricalFunction("mollified(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")", d, idx,
                               c, b);
}

// ---- suites

namespace {

CylindricalFunction radial_gaussian_2d(int d, double offset) {
    Core c;
    c.n = 2;
    c.value = [offset](const double* xi) { return offset + std::exp(-(xi[0] * xi[0] + xi[1] * xi[1])); };
    c.gradient = [](const double* xi, double* g) {
        const double e = std::exp(-(xi[0] * xi[0] + xi[1] * xi[1]));
        g[0] = -2.0 * xi[0] * e;
        g[1] = -2.0 * xi[1] * e;
    };
    c.hessian = [](const double* xi, double* h) {
        const double e = std::exp(-(xi[0] * xi[0] + xi[1] * xi[1]));
        h[0] = (4.0 * xi[0] * xi[0] - 2.0) * e;
        h[1] = h[2] = 4.0 * xi[0] * xi[1] * e;
        h[3] = (4.0 * xi[1] * xi[1] - 2.0) * e;
    };
    Bounds b{offset, offset + 1.0, 0.8577638849607068, 2.0};
    return CylindricalFunction(fmt(offset) + "+gauss(|x01|)", d, {0, 1}, c, b);
}

CylindricalFunction smooth_norm_2d(int d) {
    Core c;
    c.n = 2;
    c.value = [](const double* xi) { return std::sqrt(1.0 + xi[0] * xi[0] + xi[1] * xi[1]) - 1.0; };
    c.gradient = [](const double* xi, double* g) {
        const double q = std::sqrt(1.0 + xi[0] * xi[0] + xi[1] * xi[1]);
        g[0] = xi[0] / q;
        g[1] = xi[1] / q;
    };
    c.hessian = [](const double* xi, double* h) {
        const double s = 1.0 + xi[0] * xi[0] + xi[1] * xi[1];
        const double q = std::sqrt(s), q3 = s * q;
        h[0] = 1.0 / q - xi[0] * xi[0] / q3;
        h[1] = h[2] = -xi[0] * xi[1] / q3;
        h[3] = 1.0 / q - xi[1] * xi[1] / q3;
    };
    Bounds b{0.0, kInf, 1.0, 1.0};
    return CylindricalFunction("sabs(|x01|)", d, {0, 1}, c, b);
}

}  // namespace

const std::vector<CylindricalFunction>& Suites::by_name(const std::string& name) const {
    if (name == "positive_infimum") return positive_infimum;
    if (name == "lipschitz_one") return lipschitz_one;
    if (name == "mean_zero_ready") return mean_zero_ready;
    throw DomainError("unknown suite '" + name + "'");
}

Suites standard_suites(int d) {
    using namespace profiles;
    Suites s;
    auto& a = s.positive_infimum;
    a.push_back(profile_function(gaussian(), d, 0, 1.0));
    a.push_back(profile_function(gaussian(), d, 0, 0.5));
    a.push_back(profile_function(gaussian(), d, 0, 0.2, 1.0, 1.0, 1.0));
    a.push_back(profile_function(tanh(), d, 0, 2.0));
    a.push_back(profile_function(tanh(), d, 0, 1.5, 1.0, 2.0));
    a.push_back(profile_function(rational_bump(), d, 0, 0.5));
    a.push_back(profile_function(rational_bump(), d, 0, 0.3, 2.0, 1.0, -0.5));
    a.push_back(profile_function(sine(), d, 0, 1.0, 0.5));
    a.push_back(profile_function(cosine(), d, 0, 0.8, 0.5, 2.0));
    a.push_back(profile_function(gaussian(), d, 0, 0.25, 1.0, 1.5, 0.5));
    a.push_back(profile_function(odd_gaussian(), d, 0, 0.6, 0.4));
    a.push_back(profile_function(arctan(), d, 0, 1.0, 1.0 / std::numbers::pi));
    if (d >= 2) {
        a.push_back(radial_gaussian_2d(d, 0.5));
        a.push_back(profile_function(tanh(), d, 1, 2.0));
    }

    auto& b = s.lipschitz_one;
    b.push_back(profile_function(smooth_abs(), d, 0));
    b.push_back(profile_function(identity(), d, 0));
    b.push_back(profile_function(identity(), d, 0, 0.0, -1.0));
    b.push_back(profile_function(smooth_abs(), d, 0, 0.0, 0.1, 10.0));
    b.push_back(profile_function(smooth_abs(), d, 0, 0.0, 1.0, 1.0, 1.0));
    b.push_back(profile_function(log_cosh(), d, 0));
    b.push_back(profile_function(tanh(), d, 0));
    b.push_back(profile_function(sine(), d, 0));
    b.push_back(profile_function(arctan(), d, 0));
    b.push_back(profile_function(algebraic_sigmoid(), d, 0));
    b.push_back(compose_scalar(profile_function(smooth_abs(), d, 0), maps::capped(3.0)));
    b.push_back(profile_function(smooth_abs(), d, 0, 0.0, 0.5, 2.0, -1.0));
    if (d >= 2) {
        b.push_back(smooth_norm_2d(d));
        b.push_back(profile_function(identity(), d, 1));
    }

    auto& c = s.mean_zero_ready;
    c.push_back(profile_function(tanh(), d, 0));
    c.push_back(profile_function(sine(), d, 0));
    c.push_back(profile_function(cosine(), d, 0));
    c.push_back(profile_function(gaussian(), d, 0));
    c.push_back(profile_function(odd_gaussian(), d, 0));
    c.push_back(profile_function(rational_bump(), d, 0));
    c.push_back(profile_function(tanh(), d, 0, 0.0, 1.0, 1.0, 1.0));
    c.push_back(profile_function(arctan(), d, 0, 0.0, 1.0, 2.0));
    c.push_back(profile_function(gaussian(), d, 0, 0.0, 1.0, 1.0, 0.5));
    c.push_back(profile_function(sine(), d, 0, 0.0, 0.5, 2.0));
    c.push_back(profile_function(algebraic_sigmoid(), d, 0, 0.0, 1.0, 0.5));
    if (d >= 2) {
        c.push_back(radial_gaussian_2d(d, 0.0));
        c.push_back(profile_function(tanh(), d, 1));
    }
    return s;
}

}  // namespace mehler
