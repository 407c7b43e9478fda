#include "mehler/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "mehler/errors.hpp"

namespace mehler::models {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double h_integral(const std::function<double(double)>& h) {
    return quad::integrate_light_tail(h, 0.0, {1e-13, 1e-16, 25}).value;
}

// construction-time consistency: the closed forms against the generic machinery
void self_check(const ModelSpec& m, bool check_drift) {
    const double hq = h_integral(m.h);
    if (std::abs(hq - m.h_l1) > 1e-9 * std::max(1.0, m.h_l1))
        throw Error(m.name + ": int h = " + num(hq) + " differs from closed form " + num(m.h_l1));
    const auto grid = domination_grid(m.dimension(), 4);
    for (double t : {0.1, 1.0, 5.0}) {
        const auto r = check_domination(m.evolved, m.h, t, grid);
        if (!r.pass) throw Error(m.name + ": domination fails at t = " + num(t));
    }
    if (check_drift && m.known_constants.count("b_inf")) {
        const Vector binf = drift_bt(m.evolved, kInf);
        const double want = m.known_constants.at("b_inf");
        if (std::abs(binf(0) - want) > 1e-6 * std::max(1.0, std::abs(want)))
            throw Error(m.name + ": b_inf = " + num(binf(0)) + " differs from " + num(want));
    }
}

}  // namespace

ModelSpec build_koponen(double c, double s, double beta, double b) {
    if (!(c > 0.0) || !(beta > 0.0)) throw DomainError("koponen: c and beta must be positive");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("koponen: s must lie in (0,1)");
    Density dens = [c, s](std::span<const double> y) {
        const double a = std::abs(y[0]);
        if (a == 0.0) return 0.0;
        return c * std::exp(-a * a) * std::pow(a, -1.0 - 2.0 * s);
    };
    LevyMeasure M = LevyMeasure::from_density(1, dens, 2.0 * s, TailClass::gaussian());
    Vector bv(1);
    bv(0) = b;
    LevyTriple tr = LevyTriple::make(bv, Matrix::Zero(1, 1), M);
    SemigroupFamily sg = SemigroupFamily::scalar(1, -beta);
    const double rate = 2.0 * s * beta;
    ModelSpec m{"koponen", tr, sg, EvolvedTriple(tr, sg), [rate](double t) { return std::exp(-rate * t); },
                1.0 / rate, {}, {{"c", c}, {"s", s}, {"beta", beta}, {"b", b}}};
    auto tail_c = [s](double y) { return std::exp(-y * y) * std::pow(y, -2.0 * s); };
    const double C = 2.0 * c * quad::integrate_light_tail(tail_c, 1.0, {1e-13, 1e-16, 25}).value;
    m.known_constants = {
        {"h_l1", 1.0 / rate},
        {"b_inf", b / beta},
        {"first_moment_bound", 2.0 * c / ((2.0 * s + 1.0) * std::numbers::e)},
        {"small_jump_bound", c / (2.0 * s * s * (1.0 - s) * beta)},
        {"psi_lower_constant", C},
    };
    self_check(m, b != 0.0);
    return m;
}

ModelSpec build_alpha_stable(double alpha, double beta, std::vector<SphereAtom> atoms, Vector b) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("alpha_stable: alpha must lie in (1,2)");
    if (!(beta > 0.0)) throw DomainError("alpha_stable: beta must be positive");
    if (atoms.empty()) throw DomainError("alpha_stable: no sphere atoms");
    // pair every atom with its antipode of equal weight
    std::vector<bool> used(atoms.size(), false);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (used[i]) continue;
        bool ok = false;
        for (std::size_t j = 0; j < atoms.size() && !ok; ++j) {
            if (j == i || used[j]) continue;
            if ((atoms[i].direction + atoms[j].direction).norm() < 1e-12 &&
                std::abs(atoms[i].weight - atoms[j].weight) <= 1e-12 * atoms[i].weight) {
                used[i] = used[j] = ok = true;
            }
        }
        if (!ok) throw DomainError("alpha_stable: sphere atoms are not symmetric (b_inf relies on symmetry)");
    }
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    const int d = static_cast<int>(atoms.front().direction.size());
    if (b.size() != d) throw DomainError("alpha_stable: drift has wrong dimension");
    RadialKernel radial = [alpha](double r) { return r > 0.0 ? std::pow(r, -1.0 - alpha) : 0.0; };
    LevyMeasure M = LevyMeasure::spherical(atoms, radial, alpha, TailClass::power(alpha));
    LevyTriple tr = LevyTriple::make(b, Matrix::Zero(d, d), M);
    SemigroupFamily sg = SemigroupFamily::scalar(d, -beta);
    const double rate = alpha * beta;
    ModelSpec m{"alpha_stable", tr, sg, EvolvedTriple(tr, sg), [rate](double t) { return std::exp(-rate * t); },
                1.0 / rate, {}, {{"alpha", alpha}, {"beta", beta}, {"d", double(d)}, {"sphere_mass", total}}};
    const double small = total * (1.0 / (2.0 - alpha) + 1.0 / alpha);
    m.known_constants = {
        {"h_l1", 1.0 / rate},
        {"b_inf", b(0) / beta},
        {"first_moment", total / (alpha - 1.0)},
        {"small_jump_mass", small},
        {"integrated_small_jump_mass", small / rate},
    };
    self_check(m, b.squaredNorm() > 0.0);
    return m;
}

ModelSpec build_alpha_stable_1d(double alpha, double beta, double b) {
    Vector up(1), down(1), bv(1);
    up(0) = 1.0;
    down(0) = -1.0;
    bv(0) = b;
    ModelSpec m = build_alpha_stable(alpha, beta, {{up, 1.0}, {down, 1.0}}, bv);
    m.parameters["b"] = b;
    return m;
}

double fractional_ou_rate(const Matrix& B, double s) {
    const int d = static_cast<int>(B.rows());
    const double top = max_eigenvalue_symmetric(B);
    return B.trace() - (2.0 * s + d) * top;
}

bool fractional_ou_condition(const Matrix& B, double s) {
    const int d = static_cast<int>(B.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(B, Eigen::EigenvaluesOnly);
    const double min_abs = es.eigenvalues().cwiseAbs().minCoeff();
    return min_abs > std::abs(B.trace()) / (2.0 * s + d);
}

bool fractional_ou_condition_power_case(const Vector& r, double alpha, double s) {
    const int d = static_cast<int>(r.size());
    Eigen::Index imin;
    const double r1 = r.minCoeff(&imin);
    double others = 0.0;
    for (int i = 0; i < d; ++i)
        if (i != imin) others += std::pow(r(i), alpha);
    return r1 > std::pow(others / (2.0 * s + d - 1.0), 1.0 / alpha);
}

ModelSpec build_fractional_ou(const Matrix& Q, const Matrix& B, double s, double c) {
    const int d = static_cast<int>(Q.rows());
    if (d < 1 || d > 2) throw DomainError("fractional_ou: implemented for d = 1, 2");
    if (B.rows() != d || B.cols() != d) throw DomainError("fractional_ou: B has wrong shape");
    if (!(s > 0.5 && s < 1.0)) throw DomainError("fractional_ou: s must lie in (1/2,1)");
    if (!(c > 0.0)) throw DomainError("fractional_ou: c must be positive");
    if (!is_symmetric(Q) || min_eigenvalue_symmetric(Q) <= 0.0)
        throw DomainError("fractional_ou: Q must be symmetric positive definite");
    if (!is_symmetric(B) || max_eigenvalue_symmetric(B) >= 0.0)
        throw DomainError("fractional_ou: B must be symmetric negative definite");
    if (!commute(Q, B)) throw DomainError("fractional_ou: Q and B must commute");
    if (!fractional_ou_condition(B, s))
        throw DomainError("fractional_ou: condition min|lambda_i| > |Tr B|/(2s+d) fails");
    Eigen::SelfAdjointEigenSolver<Matrix> es(Q);
    const Matrix Qmh = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().transpose();
    const double detsqrt = std::sqrt(Q.determinant());
    const double expo = 2.0 * s + d;
    Density dens = [Qmh, detsqrt, expo, c, d](std::span<const double> y) {
        Eigen::Map<const Vector> yy(y.data(), d);
        const double n = (Qmh * yy).norm();
        if (n == 0.0) return 0.0;
        return c / detsqrt * std::pow(n, -expo);
    };
    LevyMeasure M = LevyMeasure::from_density(d, dens, 2.0 * s, TailClass::power(2.0 * s));
    LevyTriple tr = LevyTriple::make(Vector::Zero(d), Matrix::Zero(d, d), M);
    SemigroupFamily sg(B);
    const double rate = fractional_ou_rate(B, s);
    ModelSpec m{"fractional_ou", tr, sg, EvolvedTriple(tr, sg), [rate](double t) { return std::exp(-rate * t); },
                1.0 / rate, {}, {{"s", s}, {"c", c}, {"d", double(d)}}};
    m.known_constants = {{"h_l1", 1.0 / rate}, {"h_rate", rate}, {"tail_exponent", 2.0 * s}};
    self_check(m, false);
    return m;
}

ModelSpec with_gaussian_part(const ModelSpec& model, const Matrix& Q) {
    const int d = model.dimension();
    if (Q.rows() != d || Q.cols() != d) throw DomainError("gaussian part has wrong shape");
    if (!commute(Q, model.semigroup.generator()))
        throw DomainError("gaussian part must commute with B");
    if (Q.isZero(0.0)) return model;
    LevyTriple tr = LevyTriple::make(model.triple.b, model.triple.Q + Q, model.triple.M);
    ModelSpec m = model;
    m.name = model.name + "+gauss";
    m.triple = tr;
    m.evolved = EvolvedTriple(tr, model.semigroup);
    return m;
}

std::vector<std::string> catalog_names() { return {"koponen", "alpha_stable", "fractional_ou"}; }

ModelSpec build_named(const std::string& name, const std::map<std::string, double>& ov) {
    auto take = [&](std::map<std::string, double> defaults) {
        for (const auto& [k, v] : ov) {
            if (!defaults.count(k)) throw ConfigError("model " + name + " has no parameter '" + k + "'");
            defaults[k] = v;
        }
        return defaults;
    };
    ModelSpec m = [&] {
        if (name == "koponen") {
            auto p = take({{"c", 1.0}, {"s", 0.75}, {"beta", 1.0}, {"b", 0.0}, {"q", 0.0}});
            ModelSpec k = build_koponen(p["c"], p["s"], p["beta"], p["b"]);
            if (p["q"] != 0.0) k = with_gaussian_part(k, p["q"] * Matrix::Identity(1, 1));
            return k;
        }
        if (name == "alpha_stable") {
            auto p = take({{"alpha", 1.5}, {"beta", 1.0}, {"b", 0.0}});
            return build_alpha_stable_1d(p["alpha"], p["beta"], p["b"]);
        }
        if (name == "fractional_ou") {
            auto p = take({{"s", 0.75}, {"c", 1.0}, {"q", 1.0}, {"beta", 1.0}});
            return build_fractional_ou(p["q"] * Matrix::Identity(1, 1), -p["beta"] * Matrix::Identity(1, 1),
                                       p["s"], p["c"]);
        }
        throw ConfigError("unknown model '" + name + "'");
    }();
    return m;
}

}  // namespace mehler::models
