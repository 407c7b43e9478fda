#include <algorithm>
#include "mehler/levy_core.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <mutex>
#include <sstream>

#include "mehler/errors.hpp"

namespace mehler {

// ---- triple

void LevyTriple::validate() const {
    const int d = dimension();
    if (d < 1) throw DomainError("triple has empty drift");
    if (Q.rows() != d || Q.cols() != d) throw DomainError("Q has wrong shape");
    if (!is_symmetric(Q, 1e-12)) throw DomainError("Q is not symmetric");
    if (min_eigenvalue_symmetric(Q) < -1e-12) throw DomainError("Q is not positive semidefinite");
    if (M.dimension() != d) throw DomainError("Levy measure dimension differs from the drift");
}

LevyTriple LevyTriple::make(Vector b, Matrix Q, LevyMeasure M) {
    LevyTriple t{std::move(b), std::move(Q), std::move(M)};
    t.validate();
    return t;
}

// ---- evolved triple

struct EvolvedTriple::Cache {
    std::once_flag once;
    std::unique_ptr<LevyTriple> invariant;
};

EvolvedTriple::EvolvedTriple(LevyTriple source, SemigroupFamily semigroup, CoreOptions options)
    : source_(std::move(source)), sg_(std::move(semigroup)), opt_(options), cache_(std::make_shared<Cache>()) {
    source_.validate();
    if (sg_.dimension() != source_.dimension()) throw DomainError("semigroup and triple dimensions differ");
}

namespace {

TailClass moved_tail(const TailClass& tail, double expansion) {
    if (tail.kind == TailKind::compact) return TailClass::compact(tail.parameter * std::max(1.0, expansion));
    return tail;
}

}  // namespace

LevyMeasure EvolvedTriple::pushed_forward(double t) const {
    const LevyMeasure& M = source_.M;
    if (M.is_zero()) return M;
    const int d = dimension();
    if (sg_.is_scalar()) {
        const double tau = std::exp(sg_.scalar_rate() * t);
        std::vector<Ray> rays;
        for (const auto& ray : M.rays()) {
            auto k = ray.kernel;
            rays.push_back({ray.direction, [k, tau](double r) { return k(r / tau) / tau; },
                            ray.angular_halfwidth});
        }
        std::optional<Density> dens;
        if (M.has_density()) {
            dens = [M, tau, d](std::span<const double> y) {
                double z[8];
                for (int i = 0; i < d; ++i) z[i] = y[i] / tau;
                return M.density(std::span<const double>(z, d)) / std::pow(tau, d);
            };
        }
        return LevyMeasure::from_rays(d, std::move(rays), M.singularity_order(), moved_tail(M.tail(), tau), dens);
    }
    if (!M.has_density()) throw DomainError("non-scalar semigroups need a Levy density");
    const Matrix Tinv = sg_.T_inverse(t);
    const double jac = 1.0 / std::abs(sg_.det_T(t));
    Density dens = [M, Tinv, jac, d](std::span<const double> y) {
        Eigen::Map<const Vector> yy(y.data(), d);
        Vector z = Tinv * yy;
        return jac * M.density(z);
    };
    const double expansion = sg_.T(t).operatorNorm();
    return LevyMeasure::from_density(d, dens, M.singularity_order(), moved_tail(M.tail(), expansion));
}

LevyMeasure EvolvedTriple::evolved_measure(double t) const {
    if (t < 0.0) throw DomainError("negative time");
    const LevyMeasure& M = source_.M;
    const int d = dimension();
    if (t == 0.0 || M.is_zero()) return LevyMeasure::zero(d);
    const bool infinite = std::isinf(t);
    if (infinite && !sg_.is_stable()) throw HypothesisError("stability", "M_inf needs a stable semigroup");
    EvolvedTriple self = *this;
    std::optional<Density> dens;
    if (M.has_density()) {
        dens = [self, t, d](std::span<const double> y) {
            return levy_Mt_density(self, t, Vector(Eigen::Map<const Vector>(y.data(), d)));
        };
    }
    if (sg_.is_scalar()) {
        const double rate = sg_.scalar_rate();
        if (rate == 0.0) return M.scaled(t);
        // k_t(r) = (1/(|rate| r)) |int_r^{r e^{-rate t}} k|
        const double factor = infinite ? kInf : std::exp(-rate * t);
        const quad::Tolerance tol = opt_.inner;
        const double delta = opt_.delta;
        std::vector<Ray> rays;
        for (std::size_t j = 0; j < M.rays().size(); ++j) {
            const Ray& ray = M.rays()[j];
            rays.push_back({ray.direction,
                            [M, j, rate, factor, tol, delta](double r) {
                                if (r <= 0.0) return 0.0;
                                const double other = r * factor;
                                const double lo = std::min(r, other), hi = std::max(r, other);
                                RadialOptions o;
                                o.tol = tol;
                                o.delta = delta;
                                const double v =
                                    integrate_ray(M, M.rays()[j], [](double) { return 1.0; }, lo, hi, o).value;
                                return v / (std::abs(rate) * r);
                            },
                            ray.angular_halfwidth});
        }
        const double expansion = rate > 0.0 ? factor : 1.0;
        return LevyMeasure::from_rays(d, std::move(rays), M.singularity_order(), moved_tail(M.tail(), expansion),
                                      dens);
    }
    if (!dens) throw DomainError("non-scalar semigroups need a Levy density");
    const double expansion = infinite ? 1.0 : std::max(1.0, sg_.T(-t).operatorNorm());
    return LevyMeasure::from_density(d, *dens, M.singularity_order(), moved_tail(M.tail(), expansion));
}

LevyTriple EvolvedTriple::at(double t) const {
    return LevyTriple{drift_bt(*this, t), gaussian_Qt(*this, t), evolved_measure(t)};
}

const LevyTriple& EvolvedTriple::invariant() const {
    std::call_once(cache_->once, [this] {
        cache_->invariant = std::make_unique<LevyTriple>(invariant_triple(*this));
    });
    return *cache_->invariant;
}

// ---- characteristic exponent

namespace {

boost::math::quadrature::ooura_fourier_cos<double>& ooura_cos() {
    static boost::math::quadrature::ooura_fourier_cos<double> q(1e-12, 8);
    return q;
}
boost::math::quadrature::ooura_fourier_sin<double>& ooura_sin() {
    static boost::math::quadrature::ooura_fourier_sin<double> q(1e-12, 8);
    return q;
}

}  // namespace

namespace {

Complex ray_exponent_direct(const LevyMeasure& M, const Ray& ray, double u, const quad::Tolerance& tol, double delta) {
    if (u == 0.0) return {0.0, 0.0};
    const double au = std::abs(u), sg = u > 0 ? 1.0 : -1.0;
    RadialOptions o;
    o.tol = tol;
    o.delta = delta;
    o.power_at_zero = 2.0;
    // small jumps: 1 - cos = 2 sin^2(x/2) avoids cancellation
    auto near = [au](double r) {
        const double x = r * au, s = std::sin(0.5 * x);
        const double odd = x < 1e-3 ? -x * x * x / 6.0 * (1.0 - x * x / 20.0) : std::sin(x) - x;
        return Complex(2.0 * s * s, -odd);
    };
    Complex total = integrate_ray(M, ray, near, 0.0, 1.0, o).value;
    const TailClass& tail = M.tail();
    if (tail.kind == TailKind::power) {
        const double mass = integrate_ray(M, ray, [](double) { return 1.0; }, 1.0, kInf, o).value;
        const auto& k = ray.kernel;
        auto shifted = [&k](double t) { return k(1.0 + t); };
        const double C = ooura_cos().integrate(shifted, au).first;
        const double S = ooura_sin().integrate(shifted, au).first;
        const double c = std::cos(au), s = std::sin(au);
        const double cosint = c * C - s * S, sinint = s * C + c * S;
        total += Complex(mass - cosint, -sinint);
    } else {
        auto far = [au](double r) {
            const double x = r * au, s = std::sin(0.5 * x);
            return Complex(2.0 * s * s, -std::sin(x));
        };
        total += integrate_ray(M, ray, far, 1.0, kInf, o).value;
    }
    return {total.real(), sg * total.imag()};
}

}  // namespace

Complex ray_exponent(const LevyMeasure& M, const Ray& ray, double u, const quad::Tolerance& tol, double delta) {
    if (u == 0.0) return {0.0, 0.0};
    const double au = std::abs(u), sg = u > 0 ? 1.0 : -1.0;
    // mass - cos-transform cancels to round-off for tiny u on heavy tails;
    // extend from a decade above with the locally fitted power law
    constexpr double kSmallU = 1e-5;
    if (M.tail().kind == TailKind::power && au < kSmallU) {
        const Complex hi = ray_exponent_direct(M, ray, kSmallU, tol, delta);
        const Complex lo = ray_exponent_direct(M, ray, 0.1 * kSmallU, tol, delta);
        auto extend = [au](double h, double l) {
            if (h == 0.0) return 0.0;
            const double p = (l != 0.0 && l / h > 0.0) ? std::clamp(std::log10(h / l), 0.0, 2.0) : 1.0;
            return h * std::pow(au / kSmallU, p);
        };
        return {extend(hi.real(), lo.real()), sg * extend(hi.imag(), lo.imag())};
    }
    return ray_exponent_direct(M, ray, u, tol, delta);
}

Complex characteristic_exponent(const LevyTriple& triple, const Vector& xi, const quad::Tolerance& tol) {
    if (xi.size() != triple.dimension()) throw DomainError("frequency has wrong dimension");
    if (!xi.allFinite()) throw DomainError("frequency is not finite");
    Complex out(0.5 * xi.dot(triple.Q * xi), -xi.dot(triple.b));
    for (const auto& ray : triple.M.rays()) out += ray_exponent(triple.M, ray, ray.direction.dot(xi), tol);
    return out;
}

// ---- time integrals

namespace {

template <class F>
auto time_integral(F&& f, double t, const quad::Tolerance& tol) {
    if (std::isinf(t)) return quad::integrate_light_tail(f, 0.0, tol);
    return quad::integrate(f, 0.0, t, tol);
}

void require_stable_if_infinite(const SemigroupFamily& sg, double t) {
    if (std::isinf(t) && !sg.is_stable())
        throw HypothesisError("stability", "t = inf needs all eigenvalues of B in the left half plane");
}

}  // namespace

Complex mu_hat(const EvolvedTriple& ev, double t, const Vector& xi) {
    if (t < 0.0) throw DomainError("negative time");
    if (t == 0.0 || xi.isZero(0.0)) return {1.0, 0.0};
    const auto& sg = ev.semigroup();
    require_stable_if_infinite(sg, t);
    const LevyTriple& tr = ev.source();
    const quad::Tolerance inner = ev.options().inner;
    auto f = [&](double s) -> Complex {
        Vector eta = sg.is_scalar() ? Vector(std::exp(sg.scalar_rate() * s) * xi) : Vector(sg.T_adjoint(s) * xi);
        return characteristic_exponent(tr, eta, inner);
    };
    const Complex e = time_integral(f, t, ev.options().outer).value;
    return std::exp(-e);
}

double semigroup_consistency(const EvolvedTriple& ev, double t, double s, const Vector& xi) {
    const Vector moved = ev.semigroup().T_adjoint(s) * xi;
    return std::abs(mu_hat(ev, t + s, xi) - mu_hat(ev, t, moved) * mu_hat(ev, s, xi));
}

Vector drift_bt(const EvolvedTriple& ev, double t) {
    if (t < 0.0) throw DomainError("negative time");
    const auto& sg = ev.semigroup();
    require_stable_if_infinite(sg, t);
    const int d = ev.dimension();
    const LevyTriple& tr = ev.source();
    Vector out = Vector::Zero(d);
    if (t == 0.0) return out;
    // int_0^t T_s b ds from the augmented exponential
    if (tr.b.squaredNorm() > 0.0) {
        if (std::isinf(t)) {
            out = -sg.generator().partialPivLu().solve(tr.b);
        } else if (sg.is_scalar()) {
            const double r = sg.scalar_rate();
            out = (r == 0.0 ? t : std::expm1(r * t) / r) * tr.b;
        } else {
            Matrix aug = Matrix::Zero(d + 1, d + 1);
            aug.topLeftCorner(d, d) = sg.generator() * t;
            aug.topRightCorner(d, 1) = tr.b * t;
            out = expm(aug).topRightCorner(d, 1);
        }
    }
    const LevyMeasure& M = tr.M;
    if (M.is_zero()) return out;
    RadialOptions o;
    o.tol = ev.options().inner;
    o.delta = ev.options().delta;
    o.power_at_zero = 1.0;
    o.growth = 1.0;
    auto r_times = [](double r) { return r; };
    for (const auto& ray : M.rays()) {
        // the jump r*theta lands at r*T_s theta; it changes side of the unit
        // sphere between r = 1 and the crossing radius 1/|T_s theta|
        auto signed_mass = [&](double a) {
            const double rc = 1.0 / a;
            if (rc > 1.0) return integrate_ray(M, ray, r_times, 1.0, rc, o).value;
            if (rc < 1.0) return -integrate_ray(M, ray, r_times, rc, 1.0, o).value;
            return 0.0;
        };
        if (sg.is_scalar()) {
            const double rate = sg.scalar_rate();
            auto f = [&](double s) {
                const double a = std::exp(rate * s);
                return a * signed_mass(a);
            };
            out += time_integral(f, t, ev.options().outer).value * ray.direction;
        } else {
            for (int i = 0; i < d; ++i) {
                auto f = [&](double s) {
                    const Vector v = sg.T(s) * ray.direction;
                    return v(i) * signed_mass(v.norm());
                };
                out(i) += time_integral(f, t, ev.options().outer).value;
            }
        }
    }
    return out;
}

double levy_Mt_density(const EvolvedTriple& ev, double t, const Vector& y) {
    if (t < 0.0) throw DomainError("negative time");
    if (y.isZero(0.0)) throw DomainError("M_t density is evaluated away from the origin");
    const auto& sg = ev.semigroup();
    require_stable_if_infinite(sg, t);
    const LevyMeasure& M = ev.source().M;
    if (t == 0.0 || M.is_zero()) return 0.0;
    const double trace = sg.generator().trace();
    auto f = [&](double s) {
        const Vector z = sg.is_scalar() ? Vector(std::exp(-sg.scalar_rate() * s) * y) : Vector(sg.T_inverse(s) * y);
        return std::exp(-trace * s) * M.density(z);
    };
    return time_integral(f, t, ev.options().outer).value;
}

Matrix gaussian_Qt(const EvolvedTriple& ev, double t) {
    if (t < 0.0) throw DomainError("negative time");
    const auto& sg = ev.semigroup();
    require_stable_if_infinite(sg, t);
    const Matrix& Q = ev.source().Q;
    const int d = ev.dimension();
    Matrix out = Matrix::Zero(d, d);
    if (t == 0.0 || Q.isZero(0.0)) return out;
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            auto f = [&](double s) {
                const Matrix T = sg.T(s);
                return (T.row(i) * Q * T.row(j).transpose())(0, 0);
            };
            out(i, j) = out(j, i) = time_integral(f, t, ev.options().outer).value;
        }
    }
    return out;
}

double integrated_small_jump_mass(const EvolvedTriple& ev, double t) {
    const auto& sg = ev.semigroup();
    require_stable_if_infinite(sg, t);
    const LevyMeasure& M = ev.source().M;
    if (t == 0.0 || M.is_zero()) return 0.0;
    RadialOptions near, far;
    near.tol = far.tol = ev.options().inner;
    near.delta = far.delta = ev.options().delta;
    near.power_at_zero = 2.0;
    auto f = [&](double s) {
        double total = 0.0;
        const Matrix T = sg.T(s);
        for (const auto& ray : M.rays()) {
            const double a = (T * ray.direction).norm();
            const double rc = 1.0 / a;
            total += integrate_ray(M, ray, [a](double r) { return a * a * r * r; }, 0.0, rc, near).value;
            total += integrate_ray(M, ray, [](double) { return 1.0; }, rc, kInf, far).value;
        }
        return total;
    };
    return time_integral(f, t, ev.options().outer).value;
}

LevyTriple invariant_triple(const EvolvedTriple& ev) {
    const HypothesisReport rep = check_hypotheses(ev);
    if (!rep.all_pass()) {
        const std::string name = rep.first_failure();
        throw HypothesisError(name, "invariant measure requires this clause; value " +
                                        std::to_string(rep.clause(name).value));
    }
    const double inf = kInf;
    return LevyTriple{drift_bt(ev, inf), gaussian_Qt(ev, inf), ev.evolved_measure(inf)};
}

// ---- hypotheses

std::string to_string(ClauseVerdict v) {
    switch (v) {
        case ClauseVerdict::pass: return "pass";
        case ClauseVerdict::fail: return "fail";
        case ClauseVerdict::not_verified: return "not_verified";
    }
    return "?";
}

bool HypothesisReport::all_pass() const {
    for (const auto& c : clauses)
        if (c.verdict == ClauseVerdict::fail) return false;
    return true;
}

const Clause& HypothesisReport::clause(const std::string& name) const {
    for (const auto& c : clauses)
        if (c.name == name) return c;
    throw DomainError("no clause named " + name);
}

std::string HypothesisReport::first_failure() const {
    for (const auto& c : clauses)
        if (c.verdict == ClauseVerdict::fail) return c.name;
    return {};
}

HypothesisReport check_hypotheses(const EvolvedTriple& ev) {
    HypothesisReport rep;
    const auto& sg = ev.semigroup();
    const LevyMeasure& M = ev.source().M;

    rep.clauses.push_back({"eigenbasis", sg.is_normal() ? ClauseVerdict::pass : ClauseVerdict::not_verified,
                           sg.is_normal() ? 1.0 : 0.0,
                           sg.is_normal() ? "B is normal" : "B is not normal; no eigenbasis criterion applied"});

    {
        Clause c{"first_moment_outside_unit_ball", ClauseVerdict::pass, 0.0, ""};
        try {
            c.value = psi_at_zero(M);
            c.note = "tail " + M.tail().describe();
            if (!std::isfinite(c.value)) c.verdict = ClauseVerdict::fail;
        } catch (const DivergentIntegral& e) {
            c.verdict = ClauseVerdict::fail;
            c.value = kInf;
            c.note = e.what();
        }
        rep.clauses.push_back(c);
    }

    const bool stable = sg.is_stable();
    rep.clauses.push_back({"stability", stable ? ClauseVerdict::pass : ClauseVerdict::fail, sg.spectral_abscissa(),
                           "spectral abscissa of B"});

    {
        Clause c{"drift_limit", ClauseVerdict::fail, kInf, ""};
        if (!stable) {
            c.note = "no decay: b_t need not converge";
        } else if (rep.clauses[1].verdict == ClauseVerdict::fail) {
            c.note = "first moment outside the unit ball diverges";
        } else {
            // Cauchy along t_k = t0 2^k
            const double t0 = 5.0 / std::abs(sg.omega());
            Vector prev = drift_bt(ev, t0);
            double last = kInf;
            std::vector<double> jumps;
            for (int k = 1; k <= 3; ++k) {
                const Vector cur = drift_bt(ev, t0 * std::pow(2.0, k));
                jumps.push_back((cur - prev).norm());
                prev = cur;
            }
            last = jumps.back();
            const double tol = 1e-6 * std::max(1.0, prev.norm());
            const bool shrinking = jumps[2] <= jumps[0] + 1e-12;
            c.value = last;
            c.verdict = (last <= tol && shrinking) ? ClauseVerdict::pass : ClauseVerdict::fail;
            std::ostringstream os;
            os << "|b_(8t0) - b_(4t0)| with t0 = " << t0;
            c.note = os.str();
        }
        rep.clauses.push_back(c);
    }

    {
        Clause c{"integrated_small_jump_mass", ClauseVerdict::fail, kInf, ""};
        if (!stable) {
            c.note = "no decay: the time integral diverges";
        } else {
            try {
                c.value = integrated_small_jump_mass(ev, kInf);
                c.verdict = std::isfinite(c.value) ? ClauseVerdict::pass : ClauseVerdict::fail;
                c.note = "int_0^inf int (1 ^ |T_s x|^2) M(dx) ds";
            } catch (const Error& e) {
                c.note = e.what();
            }
        }
        rep.clauses.push_back(c);
    }
    return rep;
}

// ---- domination

DominationResult check_domination(const EvolvedTriple& ev, const std::function<double(double)>& h, double t,
                                  const std::vector<Vector>& grid) {
    if (!(t > 0.0)) throw DomainError("domination is checked at t > 0");
    const LevyMeasure& M = ev.source().M;
    const LevyMeasure P = ev.pushed_forward(t);
    const double ht = h(t);
    std::vector<double> margins, refs;
    for (const auto& y : grid) {
        if (y.isZero(0.0)) throw DomainError("domination grid must avoid the origin");
        double m0 = 0.0, m1 = 0.0;
        if (M.has_density() && P.has_density()) {
            m0 = M.density(y);
            m1 = P.density(y);
        } else {
            const double r = y.norm();
            const Vector dir = y / r;
            for (std::size_t j = 0; j < M.rays().size(); ++j) {
                if ((M.rays()[j].direction - dir).norm() > 1e-12) continue;
                m0 += M.rays()[j].kernel(r);
                m1 += P.rays()[j].kernel(r);
            }
        }
        margins.push_back(ht * m0 - m1);
        refs.push_back(std::max(ht * m0, m1));
    }
    DominationResult res{true, 0.0, 0.0, 0.0};
    for (double r : refs) res.scale = std::max(res.scale, r);
    const double sc = res.scale > 0.0 ? res.scale : 1.0;
    double worst = kInf, maxabs = 0.0;
    for (double m : margins) {
        worst = std::min(worst, m / sc);
        maxabs = std::max(maxabs, std::abs(m) / sc);
    }
    res.worst_margin = margins.empty() ? 0.0 : worst;
    res.max_abs_margin = maxabs;
    res.pass = res.worst_margin >= -1e-10;
    return res;
}

std::vector<Vector> domination_grid(int d, int per_decade) {
    std::vector<Vector> g;
    const int n = 4 * per_decade;
    for (int axis = 0; axis < d; ++axis) {
        for (int k = 0; k <= n; ++k) {
            const double r = std::pow(10.0, -3.0 + 4.0 * k / n);
            for (double sgn : {1.0, -1.0}) {
                Vector y = Vector::Zero(d);
                y(axis) = sgn * r;
                g.push_back(y);
            }
        }
    }
    return g;
}

// ---- exponential tail functionals

double psi_of(const LevyMeasure& M, double s) {
    if (s < 0.0) throw DomainError("psi is defined for s >= 0");
    RadialOptions o;
    o.growth = 1.0;
    o.exp_rate = s;
    double total = 0.0;
    for (const auto& ray : M.rays())
        total += integrate_ray(M, ray, [s](double r) { return r * std::exp(s * r); }, 1.0, kInf, o).value;
    return total;
}

double psi_at_zero(const LevyMeasure& M) { return psi_of(M, 0.0); }

double exp_second_moment(const LevyMeasure& M, double s) {
    if (s < 0.0) throw DomainError("exponential moment needs s >= 0");
    RadialOptions o;
    o.growth = 2.0;
    o.exp_rate = s;
    o.power_at_zero = 2.0;
    double total = 0.0;
    for (const auto& ray : M.rays())
        total += integrate_ray(M, ray, [s](double r) { return r * r * std::exp(s * r); }, 0.0, kInf, o).value;
    return total;
}

double psi_inverse(const LevyMeasure& M, double v) {
    const double base = psi_at_zero(M);
    if (!(v > base))
        throw DomainError("psi_inverse: value " + std::to_string(v) + " is not above psi(0+) = " +
                          std::to_string(base));
    const TailClass& tail = M.tail();
    const double cap = tail.kind == TailKind::exponential ? tail.parameter : kInf;
    if (tail.kind == TailKind::power) throw DivergentIntegral("power tails have no exponential moments");
    double lo = 0.0, hi = std::min(1.0, 0.5 * cap);
    while (psi_of(M, hi) < v) {
        lo = hi;
        hi = std::isfinite(cap) ? 0.5 * (hi + cap) : 2.0 * hi;
        if (hi > 1e4 || (std::isfinite(cap) && cap - hi < 1e-12))
            throw DomainError("psi_inverse: bracket expansion failed");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (psi_of(M, mid) < v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---- generator

double apply_generator(const LevyTriple& tr, const SemigroupFamily& sg, const CylindricalFunction& f,
                       const Vector& x, const CoreOptions& opt) {
    const Vector grad = f.gradient(x);
    double out = (sg.generator() * x + tr.b).dot(grad);
    if (!tr.Q.isZero(0.0)) out += 0.5 * (tr.Q * f.hessian(x)).trace();
    const LevyMeasure& M = tr.M;
    if (M.is_zero()) return out;
    const double f0 = f.value(x);
    RadialOptions o;
    o.tol = opt.inner;
    o.delta = opt.delta;
    o.power_at_zero = 2.0;
    o.growth = f.is_bounded() ? 0.0 : (std::isfinite(f.grad_sup_norm()) ? 1.0 : 2.0);
    std::span<const double> xs(x.data(), x.size());
    // inside the singular panel f(x+r) - f(x) - r f'(x) cancels to round-off, which the
    // kernel then amplifies; there use the remainder r^2 int_0^1 (1-u) phi''(u r) du
    const int n = f.n();
    const auto& hess = f.core().hessian;
    for (const auto& ray : M.rays()) {
        const auto line = f.line(xs, std::span<const double>(ray.direction.data(), ray.direction.size()));
        const double slope = grad.dot(ray.direction);
        auto curvature = [&](double s) {
            double pt[kMaxCoords], H[kMaxCoords * kMaxCoords];
            for (int i = 0; i < n; ++i) pt[i] = line.base[i] + s * line.step[i];
            hess(pt, H);
            double c = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) c += line.step[i] * H[i * n + j] * line.step[j];
            return c;
        };
        auto g = [&](double r) {
            if (r < opt.delta)
                return r * r * boost::math::quadrature::gauss<double, 7>::integrate(
                                   [&](double u) { return (1.0 - u) * curvature(u * r); }, 0.0, 1.0);
            return f.value_on(line, r) - f0 - (r < 1.0 ? r * slope : 0.0);
        };
        const double bound = f.bounds().supremum - f.infimum();
        out += integrate_ray_bounded(M, ray, g, bound, false, o, opt.tail_rel).value;
    }
    return out;
}

}  // namespace mehler
