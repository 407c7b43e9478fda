#pragma once
// Cylindrical test functions f(x) = core(x[i_1], ..., x[i_n]) carrying exact
// derivatives and certified bounds, plus the named suites used by the checkers.

#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mehler/linalg.hpp"

namespace mehler {

inline constexpr int kMaxCoords = 4;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Core {
    int n = 1;
    std::function<double(const double*)> value;
    std::function<void(const double*, double*)> gradient;  // n entries
    std::function<void(const double*, double*)> hessian;   // n*n, row major
};

struct Bounds {
    double infimum = -kInf;
    double supremum = kInf;
    double grad_sup = kInf;   // sup |Df|, also the Lipschitz constant for these C^1 cores
    double hess_sup = kInf;   // sup of the operator norm of D^2 f
    double sup_norm() const { return std::max(std::abs(infimum), std::abs(supremum)); }
    double lipschitz() const { return grad_sup; }
};

class CylindricalFunction {
public:
    CylindricalFunction(std::string name, int dimension, std::vector<int> basis_indices, Core core,
                        Bounds bounds);

    const std::string& name() const { return name_; }
    int dimension() const { return d_; }
    int n() const { return core_.n; }
    const std::vector<int>& basis_indices() const { return idx_; }
    const Bounds& bounds() const { return bounds_; }
    double sup_norm() const { return bounds_.sup_norm(); }
    double grad_sup_norm() const { return bounds_.grad_sup; }
    double infimum() const { return bounds_.infimum; }
    double lipschitz_constant() const { return bounds_.lipschitz(); }
    bool is_bounded() const { return std::isfinite(sup_norm()); }

    double value(std::span<const double> x) const;
    double value(const Vector& x) const { return value(std::span<const double>(x.data(), x.size())); }
    Vector gradient(const Vector& x) const;
    Matrix hessian(const Vector& x) const;

    // hot path for inner integrals along x + r*dir: project once, then
    // evaluate the core on base + r*step
    struct Line {
        double base[kMaxCoords];
        double step[kMaxCoords];
    };
    Line line(std::span<const double> x, std::span<const double> dir) const;
    double value_on(const Line& l, double r) const;
    // projected coordinates of x and the core gradient there
    void project(std::span<const double> x, double* xi) const;
    const Core& core() const { return core_; }

    CylindricalFunction renamed(std::string name) const;

private:
    std::string name_;
    int d_;
    std::vector<int> idx_;
    Core core_;
    Bounds bounds_;
};

// a scalar profile phi with its range and derivative bounds over R
struct Profile {
    std::string name;
    double (*f)(double);
    double (*df)(double);
    double (*d2f)(double);
    double lo, hi;  // range
    double d1, d2;  // sup |phi'|, sup |phi''|
};

namespace profiles {
const Profile& gaussian();        // e^{-u^2}
const Profile& tanh();
const Profile& rational_bump();   // 1/(1+u^2)
const Profile& sine();
const Profile& cosine();
const Profile& odd_gaussian();    // u e^{-u^2}
const Profile& arctan();
const Profile& smooth_abs();      // sqrt(1+u^2) - 1
const Profile& log_cosh();
const Profile& identity();
const Profile& algebraic_sigmoid();  // u / sqrt(1+u^2)
}  // namespace profiles

// offset + scale * phi(rate * (x[coord] - shift))
CylindricalFunction profile_function(const Profile& p, int dimension, int coord, double offset = 0.0,
                                     double scale = 1.0, double rate = 1.0, double shift = 0.0,
                                     std::string name = {});
CylindricalFunction constant_function(int dimension, double c);
CylindricalFunction coordinate_square(int dimension, int coord);  // x_i^2

// scalar C^2 map with interval bounds, for composition
struct ScalarMap {
    std::string name;
    std::function<double(double)> f, df, d2f;
    // is the map defined on [lo, hi]
    std::function<bool(double, double)> defined_on;
    // range of f on [lo, hi]
    std::function<std::pair<double, double>(double, double)> image;
    // sup |f'| and sup |f''| on [lo, hi]
    std::function<double(double, double)> d1_sup, d2_sup;
};

namespace maps {
ScalarMap identity();
ScalarMap exp();
ScalarMap square();
ScalarMap log();
ScalarMap entropy_density();        // xi log xi - xi
ScalarMap power(double p);          // xi^p on (0, inf)
ScalarMap capped(double level);     // level * tanh(xi / level)
ScalarMap affine(double a, double b);  // a xi + b
}  // namespace maps

CylindricalFunction compose_scalar(const CylindricalFunction& f, const ScalarMap& phi);

// Lipschitz g on R^d (constant L) truncated to the first n coordinates and
// mollified with the unit-mass bump at radius 1/m
struct LipschitzInput {
    std::function<double(std::span<const double>)> g;
    int dimension;
    double lipschitz;
    double infimum = -kInf;
    double supremum = kInf;
};
CylindricalFunction mollify_lipschitz(const LipschitzInput& g, int n, int m);

// standard bump exp(-1/(1-|eta|^2)) on the unit ball of R^n, unit mass
double bump_normaliser(int n);

struct Suites {
    std::vector<CylindricalFunction> positive_infimum;
    std::vector<CylindricalFunction> lipschitz_one;
    std::vector<CylindricalFunction> mean_zero_ready;
    const std::vector<CylindricalFunction>& by_name(const std::string& name) const;
};
Suites standard_suites(int dimension);

}  // namespace mehler
