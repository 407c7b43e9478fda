#pragma once
// Independent reference computations. They share nothing with the library
// quadrature: composite Simpson / trapezoid rules in log|y| on a fixed grid,
// explicit densities, and an analytic Taylor piece on (-eps, eps).

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// 1D Levy density c e^{-a y^2} / |y|^{1+alpha}; a = 0 gives the pure power kernel
struct Kernel1D {
    double c = 1.0;
    double alpha = 1.5;
    double a = 1.0;
    double y_max = 12.0;  // grid end; the rest is negligible for the cases used
    double operator()(double y) const {
        const double r = std::abs(y);
        return c * std::exp(-a * r * r) * std::pow(r, -1.0 - alpha);
    }
};

inline Kernel1D koponen(double c, double s) { return {c, 2.0 * s, 1.0, 12.0}; }
inline Kernel1D power_kernel(double alpha) { return {1.0, alpha, 0.0, 1e7}; }

// int_{eps < |y| < y_max} g(y) k(y) dy by Simpson in u = log|y|, n even
template <class G>
double simpson_log(const G& g, const Kernel1D& k, double eps, int n = 200000) {
    const double u0 = std::log(eps), u1 = std::log(k.y_max), h = (u1 - u0) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = std::exp(u0 + i * h);
        const double v = (g(y) + g(-y)) * k(y) * y;
        s += v * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
    }
    return s * h / 3.0;
}

// int_{|y|<eps} A |y|^q k(y) dy with k ~ c |y|^{-1-alpha} near 0
inline double taylor_piece(double A, double q, const Kernel1D& k, double eps) {
    return 2.0 * A * k.c * std::pow(eps, q - k.alpha) / (q - k.alpha);
}

struct Fn {
    std::function<double(double)> f, df;
};

enum class Form { entropy, dirichlet, weighted };

// mean over the points xs of the inner integral of the named form
inline double double_quadrature(Form form, const Fn& F, double p, const std::vector<double>& xs, const Kernel1D& k,
                                double eps = 1e-6, int n = 200000) {
    double total = 0.0;
    for (double x : xs) {
        const double fx = F.f(x), dfx = F.df(x);
        double inner = 0.0;
        if (form == Form::entropy) {
            const double fp = std::pow(fx, p);
            auto g = [&](double y) {
                const double d = std::pow(F.f(x + y), p) - fp;
                return d * d / fp;
            };
            const double slope = p * std::pow(fx, p - 1.0) * dfx;
            inner = simpson_log(g, k, eps, n) + taylor_piece(slope * slope / fp, 2.0, k, eps);
        } else if (form == Form::dirichlet) {
            auto g = [&](double y) {
                const double d = F.f(x + y) - fx;
                return d * d;
            };
            inner = simpson_log(g, k, eps, n) + taylor_piece(dfx * dfx, 2.0, k, eps);
        } else {
            const double fp = std::pow(std::abs(fx), p);
            auto g = [&](double y) {
                const double r = std::abs(y);
                const double w = r < 1.0 ? std::pow(r, 2.0 - p) : 1.0;
                return std::abs(std::pow(std::abs(F.f(x + y)), p) - fp) * w;
            };
            const double slope = std::abs(p * std::pow(std::abs(fx), p - 1.0) * dfx);
            inner = simpson_log(g, k, eps, n) + taylor_piece(slope, 3.0 - p, k, eps);
        }
        total += inner;
    }
    return total / static_cast<double>(xs.size());
}

// lambda(xi) = -int (cos(xi y) - 1) k(y) dy for a symmetric kernel, b = 0, Q = 0;
// trapezoid in log|y| on [eps, y_max] plus the Taylor piece on (-eps, eps)
inline double lambda_trapezoid(double xi, const Kernel1D& k, double eps = 1e-5, int n = 400000) {
    const double u0 = std::log(eps), u1 = std::log(k.y_max), h = (u1 - u0) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double y = std::exp(u0 + i * h);
        const double v = 2.0 * (1.0 - std::cos(xi * y)) * k(y) * y;
        s += (i == 0 || i == n) ? 0.5 * v : v;
    }
    return s * h + taylor_piece(0.5 * xi * xi, 2.0, k, eps);
}

}  // namespace oracle
