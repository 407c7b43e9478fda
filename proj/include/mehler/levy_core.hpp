#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mehler/functions.hpp"
#include "mehler/levy_measure.hpp"
#include "mehler/linalg.hpp"
#include "mehler/semigroup.hpp"

namespace mehler {

struct LevyTriple {
    Vector b;
    Matrix Q;
    LevyMeasure M;

    int dimension() const { return static_cast<int>(b.size()); }
    void validate() const;
    static LevyTriple make(Vector b, Matrix Q, LevyMeasure M);
};

struct CoreOptions {
    quad::Tolerance inner{1e-11, 1e-15, 20};  // radial integrals
    quad::Tolerance outer{1e-10, 1e-14, 20};  // time integrals
    double delta = 0.05;                       // singular panel [0, delta]
    double tail_rel = 1e-6;                    // power tail cut, relative to the integral
};

// a source triple moved along the semigroup: gives b_t, Q_t, M_t
class EvolvedTriple {
public:
    EvolvedTriple(LevyTriple source, SemigroupFamily semigroup, CoreOptions options = {});

    const LevyTriple& source() const { return source_; }
    const SemigroupFamily& semigroup() const { return sg_; }
    const CoreOptions& options() const { return opt_; }
    int dimension() const { return source_.dimension(); }

    LevyMeasure pushed_forward(double t) const;   // M o T_t^{-1}
    LevyMeasure evolved_measure(double t) const;  // M_t, t may be +inf
    LevyTriple at(double t) const;                // [b_t, Q_t, M_t]
    // [b_inf, Q_inf, M_inf], computed once and shared by copies
    const LevyTriple& invariant() const;

private:
    LevyTriple source_;
    SemigroupFamily sg_;
    CoreOptions opt_;
    struct Cache;
    std::shared_ptr<Cache> cache_;
};

Complex characteristic_exponent(const LevyTriple& triple, const Vector& xi,
                                const quad::Tolerance& tol = CoreOptions{}.inner);
// contribution of one ray: -int (e^{i r u} - 1 - i r u chi_{r<1}) k(r) dr
Complex ray_exponent(const LevyMeasure& M, const Ray& ray, double u,
                     const quad::Tolerance& tol = CoreOptions{}.inner, double delta = 0.05);

Complex mu_hat(const EvolvedTriple& ev, double t, const Vector& xi);
double semigroup_consistency(const EvolvedTriple& ev, double t, double s, const Vector& xi);
Vector drift_bt(const EvolvedTriple& ev, double t);
double levy_Mt_density(const EvolvedTriple& ev, double t, const Vector& y);
Matrix gaussian_Qt(const EvolvedTriple& ev, double t);
// int (1 ^ |x|^2) M_t(dx) = int_0^t int (1 ^ |T_s x|^2) M(dx) ds
double integrated_small_jump_mass(const EvolvedTriple& ev, double t);
LevyTriple invariant_triple(const EvolvedTriple& ev);

enum class ClauseVerdict { pass, fail, not_verified };
std::string to_string(ClauseVerdict v);

struct Clause {
    std::string name;
    ClauseVerdict verdict;
    double value;
    std::string note;
};

struct HypothesisReport {
    std::vector<Clause> clauses;
    // not_verified clauses are reported but do not count as failures
    bool all_pass() const;
    const Clause& clause(const std::string& name) const;
    std::string first_failure() const;
};

HypothesisReport check_hypotheses(const EvolvedTriple& ev);

struct DominationResult {
    bool pass;
    double worst_margin;    // min over grid of h(t) m(y) - m_t(y), divided by scale
    double max_abs_margin;  // same normalisation
    double scale;           // max over grid of h(t) m(y)
};

DominationResult check_domination(const EvolvedTriple& ev, const std::function<double(double)>& h,
                                  double t, const std::vector<Vector>& grid);
std::vector<Vector> domination_grid(int d, int per_decade = 8);  // +-[1e-3, 10] along each axis

double psi_of(const LevyMeasure& M, double s);
double psi_inverse(const LevyMeasure& M, double v);
double psi_at_zero(const LevyMeasure& M);  // psi(0+), the first moment outside the unit ball
double exp_second_moment(const LevyMeasure& M, double s);  // int |y|^2 e^{s|y|} M(dy)

double apply_generator(const LevyTriple& triple, const SemigroupFamily& sg, const CylindricalFunction& f,
                       const Vector& x, const CoreOptions& opt = {});

}  // namespace mehler
