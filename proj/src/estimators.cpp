#include "mehler/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "mehler/errors.hpp"

namespace mehler {

std::string to_string(EstimateMethod m) {
    switch (m) {
        case EstimateMethod::mc: return "mc";
        case EstimateMethod::quadrature: return "quadrature";
        case EstimateMethod::hybrid: return "hybrid";
    }
    return "?";
}

Estimate mean_estimate(const std::vector<double>& v, EstimateMethod method) {
    if (v.empty()) throw DomainError("empty sample");
    const double n = static_cast<double>(v.size());
    // constant input: exact, so trivial cases do not pick up summation round-off
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); }))
        return {v.front(), 0.0, static_cast<long long>(v.size()), method};
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), static_cast<long long>(v.size()), method};
}

std::vector<double> evaluate_rows(const SampleSet& S, const std::function<double(const Vector&)>& f, int chains) {
    const Eigen::Index n = S.rows();
    std::vector<double> out(static_cast<std::size_t>(n));
    auto run = [&](Eigen::Index first, Eigen::Index stride) {
        Vector x(S.cols());
        for (Eigen::Index i = first; i < n; i += stride) {
            x = S.row(i).transpose();
            out[static_cast<std::size_t>(i)] = f(x);
        }
    };
    const int workers = static_cast<int>(std::max<Eigen::Index>(1, std::min<Eigen::Index>(chains, n)));
    if (workers == 1) {
        run(0, 1);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                run(w, workers);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

Estimate estimate_mean(const CylindricalFunction& f, const SampleSet& S, int chains) {
    return mean_estimate(evaluate_rows(S, [&](const Vector& x) { return f.value(x); }, chains));
}

Estimate entropy_of_values(const std::vector<double>& v) {
    if (v.empty()) throw DomainError("empty sample");
    const double n = static_cast<double>(v.size());
    double A = 0.0, B = 0.0;
    for (double x : v) {
        if (!(x > 0.0)) throw DomainError("entropy needs positive values, got " + std::to_string(x));
        A += x * std::log(x);
        B += x;
    }
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); }))
        return {0.0, 0.0, static_cast<long long>(v.size()), EstimateMethod::mc};
    A /= n;
    B /= n;
    // delta method: Ent = A - B log B, gradient (1, -(log B + 1))
    const double c = std::log(B) + 1.0;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] * std::log(v[i]) - c * v[i];
    Estimate e = mean_estimate(w);
    e.value = std::max(A - B * std::log(B), 0.0);  // Jensen; clips round-off below zero
    return e;
}

Estimate estimate_entropy(const CylindricalFunction& f, double p, const SampleSet& S, int chains) {
    auto v = evaluate_rows(S, [&](const Vector& x) { return std::pow(f.value(x), p); }, chains);
    return entropy_of_values(v);
}

// ---- nonlocal forms

double increment_integral(const CylindricalFunction& f, const Vector& x, const LevyMeasure& M,
                          const IncrementIntegrand& g, double power_at_zero, double growth,
                          const FormOptions& opt, double bound) {
    RadialOptions o;
    o.tol = opt.inner;
    o.delta = opt.delta;
    o.power_at_zero = power_at_zero;
    o.growth = growth;
    const double fx = f.value(x);
    std::span<const double> xs(x.data(), x.size());
    double out = 0.0;
    for (const auto& ray : M.rays()) {
        const auto line = f.line(xs, std::span<const double>(ray.direction.data(), ray.direction.size()));
        auto h = [&](double r) { return g(fx, f.value_on(line, r), r); };
        out += integrate_ray_bounded(M, ray, h, bound, true, o, opt.tail_rel).value;
    }
    return out;
}

namespace {

Estimate outer_average(const SampleSet& S, const FormOptions& opt, const std::function<double(const Vector&)>& inner) {
    const Eigen::Index n = opt.max_outer > 0 ? std::min<Eigen::Index>(S.rows(), opt.max_outer) : S.rows();
    const SampleSet head = S.topRows(n);
    return mean_estimate(evaluate_rows(head, inner, opt.chains), EstimateMethod::hybrid);
}

// growth of |f(x+y) - f(x)| in |y|: 0 for bounded f, 1 for Lipschitz f
double increment_growth(const CylindricalFunction& f) {
    if (f.is_bounded()) return 0.0;
    if (std::isfinite(f.grad_sup_norm())) return 1.0;
    throw DomainError(f.name() + " has no growth bound; forms need bounded or Lipschitz functions");
}

}  // namespace

Estimate nonlocal_entropy_form(const CylindricalFunction& f, double p, const SampleSet& S, const LevyMeasure& M,
                               const FormOptions& opt) {
    if (!(f.infimum() > 0.0)) throw DomainError("entropy form needs inf f > 0 (" + f.name() + ")");
    const double growth = 2.0 * increment_growth(f) * std::max(p, 1.0);
    IncrementIntegrand g = [p](double a, double b, double) {
        const double fa = std::pow(a, p), d = std::pow(b, p) - fa;
        return d * d / fa;
    };
    if (p == 1.0) g = [](double a, double b, double) { return (b - a) * (b - a) / a; };
    const double lo = std::pow(f.infimum(), p), hi = std::pow(f.bounds().supremum, p);
    const double bound = (hi - lo) * (hi - lo) / lo;
    return outer_average(S, opt,
                         [&](const Vector& x) { return increment_integral(f, x, M, g, 2.0, growth, opt, bound); });
}

Estimate dirichlet_form(const CylindricalFunction& f, const SampleSet& S, const LevyMeasure& M,
                        const FormOptions& opt) {
    const double growth = 2.0 * increment_growth(f);
    IncrementIntegrand g = [](double a, double b, double) { return (b - a) * (b - a); };
    const double span = f.bounds().supremum - f.infimum();
    return outer_average(S, opt, [&](const Vector& x) {
        return increment_integral(f, x, M, g, 2.0, growth, opt, span * span);
    });
}

bool weighted_increment_converges(double p, const LevyMeasure& M) {
    return M.is_zero() || p < 3.0 - M.singularity_order();
}

Estimate weighted_increment_form(const CylindricalFunction& f, double p, const SampleSet& S, const LevyMeasure& M,
                                 const FormOptions& opt) {
    if (!(p > 2.0)) throw DomainError("weighted increment form is defined for p > 2");
    if (!weighted_increment_converges(p, M))
        throw DivergentIntegral("weighted increment form diverges at the origin for p >= 3 - singularity order (p = " +
                                std::to_string(p) + ", order " + std::to_string(M.singularity_order()) + ")");
    const double growth = increment_growth(f) * p;
    IncrementIntegrand g = [p](double a, double b, double r) {
        const double d = std::abs(std::pow(std::abs(b), p) - std::pow(std::abs(a), p));
        return r < 1.0 ? d * std::pow(r, 2.0 - p) : d;
    };
    const double bound = std::pow(f.sup_norm(), p);
    return outer_average(S, opt, [&](const Vector& x) {
        return increment_integral(f, x, M, g, 3.0 - p, growth, opt, bound);
    });
}

// ---- moments and tails

Estimate moment(const SampleSet& S, double p, int chains) {
    if (!(p >= 0.0)) throw DomainError("moment order must be nonnegative");
    return mean_estimate(evaluate_rows(S, [p](const Vector& x) { return p == 0.0 ? 1.0 : std::pow(x.norm(), p); },
                                       chains));
}

Estimate moment(const LevyMeasure& M, double p, Region region) {
    if (!(p >= 0.0)) throw DomainError("moment order must be nonnegative");
    if (region != Region::unit_ball && !M.tail().admits(p))
        throw DivergentIntegral("moment of order " + std::to_string(p) + " diverges for tail " + M.tail().describe());
    if (region != Region::complement && p <= M.singularity_order())
        throw DivergentIntegral("moment of order " + std::to_string(p) + " diverges at the origin");
    quad::Outcome o{};
    if (region != Region::complement) o += radial_moment(M, p, 0.0, 1.0);
    if (region != Region::unit_ball) o += radial_moment(M, p, 1.0, kInf);
    return {o.value, o.error, 0, EstimateMethod::quadrature};
}

Estimate wilson(long long hits, long long N) {
    if (N <= 0) throw DomainError("empty sample");
    const double n = static_cast<double>(N), ph = static_cast<double>(hits) / n;
    const double half = std::sqrt(ph * (1.0 - ph) / n + 0.25 / (n * n)) / (1.0 + 1.0 / n);
    return {ph, half, N, EstimateMethod::mc};
}

std::vector<Estimate> tail_curve(const CylindricalFunction& g, const SampleSet& S, const std::vector<double>& ts) {
    const auto v = evaluate_rows(S, [&](const Vector& x) { return g.value(x); });
    const double m = mean_estimate(v).value;
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    std::vector<Estimate> out;
    for (double t : ts) {
        if (!(t >= 0.0)) throw DomainError("tail level must be nonnegative");
        const auto it = std::lower_bound(sorted.begin(), sorted.end(), m + t);
        out.push_back(wilson(static_cast<long long>(sorted.end() - it), static_cast<long long>(v.size())));
    }
    return out;
}

Estimate tail_probability(const CylindricalFunction& g, const SampleSet& S, double t) {
    return tail_curve(g, S, {t}).front();
}

// ---- semigroup

Estimate semigroup_apply(const CylindricalFunction& f, const Matrix& Tt, const Vector& x, const SampleSet& mu_t) {
    const Vector base = Tt * x;
    std::vector<double> v(static_cast<std::size_t>(mu_t.rows()));
    Vector y(base.size());
    for (Eigen::Index i = 0; i < mu_t.rows(); ++i) {
        y = base + mu_t.row(i).transpose();
        v[static_cast<std::size_t>(i)] = f.value(y);
    }
    return mean_estimate(v);
}

Estimate semigroup_apply(const CylindricalFunction& f, double t, const Vector& x, int N, const EvolvedTriple& ev,
                         const JumpScheme& scheme, std::uint64_t seed) {
    if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
    if (t == 0.0) return {f.value(x), 0.0, N, EstimateMethod::mc};
    return semigroup_apply(f, ev.semigroup().T(t), x, sample_mu_t(t, N, ev, scheme, seed));
}

ComplexEstimate empirical_char(const SampleSet& S, const Vector& xi) {
    if (S.rows() == 0) throw DomainError("empty sample");
    std::vector<double> re(static_cast<std::size_t>(S.rows())), im(re.size());
    for (Eigen::Index i = 0; i < S.rows(); ++i) {
        const double a = S.row(i).dot(xi.transpose());
        re[static_cast<std::size_t>(i)] = std::cos(a);
        im[static_cast<std::size_t>(i)] = std::sin(a);
    }
    const Estimate r = mean_estimate(re), m = mean_estimate(im);
    return {Complex(r.value, m.value), r.std_error, m.std_error, r.N};
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DomainError("empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical_1pct(std::size_t n, std::size_t m) {
    const double a = static_cast<double>(n), b = static_cast<double>(m);
    return 1.628 * std::sqrt((a + b) / (a * b));
}

}  // namespace mehler
