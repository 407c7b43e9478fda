#pragma once
// Monte Carlo and quadrature estimators over sample sets of the invariant
// law: means, entropy, the nonlocal forms, moments, tails, P_t f.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mehler/functions.hpp"
#include "mehler/levy_core.hpp"
#include "mehler/sampling.hpp"

namespace mehler {

enum class EstimateMethod { mc, quadrature, hybrid };
std::string to_string(EstimateMethod m);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long long N = 0;
    EstimateMethod method = EstimateMethod::mc;
};

struct ComplexEstimate {
    Complex value;
    double se_real = 0.0, se_imag = 0.0;
    long long N = 0;
};

// mean and standard error of a list of iid values
Estimate mean_estimate(const std::vector<double>& v, EstimateMethod method = EstimateMethod::mc);

// f(row) for every row, in parallel over fixed index ranges (order independent of chains)
std::vector<double> evaluate_rows(const SampleSet& S, const std::function<double(const Vector&)>& f,
                                  int chains = 1);

Estimate estimate_mean(const CylindricalFunction& f, const SampleSet& S, int chains = 1);
// Ent(f^p); throws DomainError on a nonpositive value
Estimate estimate_entropy(const CylindricalFunction& f, double p, const SampleSet& S, int chains = 1);
// plug-in entropy of given positive values
Estimate entropy_of_values(const std::vector<double>& v);

struct FormOptions {
    double delta = 0.05;                     // end of the singular panel
    quad::Tolerance inner{1e-9, 1e-14, 20};  // per-sample radial integrals
    int chains = 1;
    long long max_outer = 0;                 // use at most this many rows (0 = all)
    double tail_rel = 1e-3;                  // power tails: cut where the bounded remainder is this small
};

// int int |f^p(x+y) - f^p(x)|^2 / f^p(x) M(dy) sigma(dx)
Estimate nonlocal_entropy_form(const CylindricalFunction& f, double p, const SampleSet& S, const LevyMeasure& M,
                               const FormOptions& opt = {});
// int int |f(x+y) - f(x)|^2 M(dy) sigma(dx)
Estimate dirichlet_form(const CylindricalFunction& f, const SampleSet& S, const LevyMeasure& M,
                        const FormOptions& opt = {});
// int int ||f|^p(x+y) - |f|^p(x)| w(y) M(dy) sigma(dx), w = |y|^{2-p} on the unit ball, 1 outside;
// throws DivergentIntegral when p >= 3 - singularity order
Estimate weighted_increment_form(const CylindricalFunction& f, double p, const SampleSet& S, const LevyMeasure& M,
                                 const FormOptions& opt = {});
bool weighted_increment_converges(double p, const LevyMeasure& M);

// inner integral for one x: int g(f(x), f(x+y), |y|) M(dy)
using IncrementIntegrand = std::function<double(double fx, double fxy, double r)>;
double increment_integral(const CylindricalFunction& f, const Vector& x, const LevyMeasure& M,
                          const IncrementIntegrand& g, double power_at_zero, double growth,
                          const FormOptions& opt, double bound = kInf);

enum class Region { unit_ball, complement, whole };
Estimate moment(const SampleSet& S, double p, int chains = 1);
Estimate moment(const LevyMeasure& M, double p, Region region);

// sigma({g >= m(g) + t}) with the Wilson (z = 1) half width as standard error
Estimate tail_probability(const CylindricalFunction& g, const SampleSet& S, double t);
std::vector<Estimate> tail_curve(const CylindricalFunction& g, const SampleSet& S, const std::vector<double>& ts);
Estimate wilson(long long hits, long long N);

// P_t f(x) = E f(T_t x + Y), Y ~ mu_t given as samples
Estimate semigroup_apply(const CylindricalFunction& f, const Matrix& Tt, const Vector& x, const SampleSet& mu_t);
Estimate semigroup_apply(const CylindricalFunction& f, double t, const Vector& x, int N, const EvolvedTriple& ev,
                         const JumpScheme& scheme, std::uint64_t seed);

ComplexEstimate empirical_char(const SampleSet& S, const Vector& xi);

// two-sample Kolmogorov-Smirnov statistic and its asymptotic 1% critical value
double ks_statistic(std::vector<double> a, std::vector<double> b);
double ks_critical_1pct(std::size_t n, std::size_t m);

}  // namespace mehler
