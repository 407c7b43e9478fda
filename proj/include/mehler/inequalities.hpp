#pragma once
// Verification harness: both sides of each inequality from the estimators,
// the constant assembled from the model, and a verdict with a 3 SE band.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mehler/estimators.hpp"
#include "mehler/models.hpp"

namespace mehler {

enum class Verdict { pass, fail, indeterminate };
std::string to_string(Verdict v);

struct VerificationResult {
    std::string name;      // checker id, e.g. "log_sobolev"
    std::string model;
    std::string function;
    Estimate lhs, rhs;
    double constant = 1.0;
    std::string constant_note;
    double margin = 0.0;     // (constant * rhs - lhs) / scale, or the scaled difference for equalities
    double margin_se = 0.0;  // same scale
    Verdict verdict = Verdict::indeterminate;
    std::string note;
    long long N = 0;
    std::uint64_t seed = 0;
};

// lhs <= constant * rhs: pass iff margin >= 3 se, fail iff margin < -3 se
VerificationResult inequality_result(std::string name, const Estimate& lhs, const Estimate& rhs, double constant,
                                     std::string constant_note);
// lhs == rhs with a given standard error of the difference (paired runs);
// |z| <= 3 pass, 3 < |z| <= 5 indeterminate, beyond fail
VerificationResult equality_result(std::string name, const Estimate& lhs, const Estimate& rhs, double diff_se);
Verdict inequality_verdict(double margin, double se);
Verdict equality_verdict(double diff, double se, double abs_tol = 1e-12);

struct CheckOptions {
    int N = 100000;
    std::uint64_t seed = 0;
    int chains = 1;
    JumpScheme scheme{};
    FormOptions forms{0.05, {1e-9, 1e-14, 20}, 1, 2048, 1e-2};
    int generator_outer = 2048;  // sigma rows used by generator based checks
    double generator_tail_rel = 1e-4;
    int inner_mc = 1024;         // mu_t draws inside P_t for the gradient surrogate
    double time = 1.0;           // t for P_t checks
    int surrogate_points = 5;
};

// one model and its invariant samples, shared by the checkers
class CheckContext {
public:
    CheckContext(models::ModelSpec model, CheckOptions options);

    const models::ModelSpec& model() const { return model_; }
    const CheckOptions& options() const { return opt_; }
    const SampleSet& sigma() const { return sigma_; }
    const Suites& suites() const { return suites_; }
    const LevyMeasure& M() const { return model_.triple.M; }
    double C() const { return model_.h_l1; }
    // seed for an auxiliary stream, fixed per purpose
    std::uint64_t derived_seed(std::uint64_t tag) const;
    // L f at the first generator_outer sigma rows, cached by function name
    const std::vector<double>& generator_values(const CylindricalFunction& f) const;
    // N draws of mu_t, one stream per t, built on first use
    const SampleSet& mu_t(double t) const;
    VerificationResult stamp(VerificationResult r, const std::string& function) const;

private:
    models::ModelSpec model_;
    CheckOptions opt_;
    SampleSet sigma_;
    Suites suites_;
    mutable std::map<std::string, std::vector<double>> generator_cache_;
    mutable std::map<double, SampleSet> mu_cache_;
};

VerificationResult verify_log_sobolev(const CheckContext& ctx, const CylindricalFunction& f, double p);
VerificationResult verify_log_sobolev_dirichlet(const CheckContext& ctx, const CylindricalFunction& f);
VerificationResult verify_poincare(const CheckContext& ctx, const CylindricalFunction& f);
VerificationResult verify_lp_bootstrap(const CheckContext& ctx, const CylindricalFunction& f, double p);
VerificationResult verify_moment_transfer(const CheckContext& ctx, double p);
VerificationResult verify_exp_entropy(const CheckContext& ctx, const CylindricalFunction& f, double tau);
std::vector<VerificationResult> verify_tail_bound(const CheckContext& ctx, const CylindricalFunction& g);
std::vector<VerificationResult> verify_exp_integrability(const CheckContext& ctx, const CylindricalFunction& g,
                                                         const std::vector<double>& ladder = {0.1, 0.05, 0.025});
// sigma(p) for p = 1..max_p with the N versus N/2 stability protocol
std::vector<VerificationResult> verify_moment_finiteness(const CheckContext& ctx, int max_p = 8);
// log sigma(|x| > R) against log R over [r_lo, r_hi]; passes when the slope is within tol of expected
VerificationResult verify_tail_slope(const CheckContext& ctx, double expected, double tol = 0.4, double r_lo = 2.0,
                                     double r_hi = 10.0);
VerificationResult verify_gradient_surrogate(const CheckContext& ctx, const CylindricalFunction& f, double t, double p);
// first: P_t preserves the mean, second: the generator integrates to zero
std::pair<VerificationResult, VerificationResult> verify_invariance_and_generator(const CheckContext& ctx,
                                                                                  const CylindricalFunction& f,
                                                                                  double t);
// int 2 f L f dsigma = - Dirichlet form (the chain rule with Phi = xi^2, Q = 0)
VerificationResult verify_chain_identity(const CheckContext& ctx, const CylindricalFunction& f);
VerificationResult verify_log_sobolev_gaussian(const CheckContext& ctx, const CylindricalFunction& f, double p);
std::vector<VerificationResult> elementary_lemma_suite(std::uint64_t seed, int trials = 100000);

// tail bound constants with their lower confidence limits
struct TailFit {
    double c0 = 0.0, c0_lower = 0.0;
    double c1 = 0.0, c1_lower = 0.0, c2 = 0.0;
    double t0 = 0.0, t_lo = 0.0, t_hi = 0.0;  // small-t range end, large-t decade
    double decay_slope = 0.0;                  // d log(-log tail) / d log t over the decade
    bool vacuous = false;                      // tail identically zero beyond the mean
    bool enough_counts = true;
};
TailFit fit_tail(const CylindricalFunction& g, const SampleSet& S, const LevyMeasure& M);

// psi^{-1} by interpolation in log psi, extended by 0 below psi(0+)
class PsiInverse {
public:
    PsiInverse(const LevyMeasure& M, double v_max, int points = 256);
    double operator()(double v) const;

private:
    double floor_ = 0.0;
    std::vector<double> s_, log_psi_;
};

// names accepted by run_suite
std::vector<std::string> suite_names();
std::vector<VerificationResult> run_suite(const CheckContext& ctx, const std::string& suite);

}  // namespace mehler
