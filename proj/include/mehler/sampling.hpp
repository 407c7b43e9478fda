#pragma once
// Compound-Poisson simulation of infinitely divisible laws and of the
// Ornstein-Uhlenbeck SDE dZ = BZ dt + dY driven by them.

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "mehler/levy_core.hpp"
#include "mehler/random.hpp"

namespace mehler {

enum class SmallJumpPolicy { drop, gaussian_substitute };

struct JumpScheme {
    double epsilon = 0.01;  // jumps below this radius are not simulated one by one
    SmallJumpPolicy policy = SmallJumpPolicy::gaussian_substitute;
    double horizon = 0.0;   // long-horizon runs; 0 picks the time where K e^{wT} <= 1e-6
    int table_points = 10000;
};

// one row per draw
using SampleSet = Matrix;

// Jumps of M above epsilon: total rate, per-ray inverse survival tables,
// the compensator int_{eps<|y|<=1} y M(dy) and the covariance of the
// jumps below eps.
class JumpSampler {
public:
    JumpSampler(const LevyMeasure& M, const JumpScheme& scheme);

    int dimension() const { return d_; }
    double rate() const { return rate_; }             // M(|y| > eps)
    const Vector& compensator() const { return comp_; }
    const Matrix& small_jump_covariance() const { return small_cov_; }

    Vector draw_jump(RandomStream& rng) const;
    // out += scale * jump, no allocation
    void add_jump(double* out, double scale, RandomStream& rng) const;
    double draw_radius(int ray, RandomStream& rng) const;
    // radius from a given uniform in (0, 1)
    double radius_at(int ray, double u) const;

    // increment over dt of the pure-jump part, compensated on the unit ball:
    // Poisson jumps - dt * compensator (+ Gaussian small-jump substitute)
    Vector increment(double dt, RandomStream& rng) const;

private:
    // r at equally spaced values of log S(r), S the survival function above
    // eps normalised to S(eps) = 1
    struct Table {
        std::vector<double> radius;
        double step = 0.0;           // spacing in -log S
        double total = 0.0;          // survival at eps
        double tail_exponent = 0.0;  // Pareto extrapolation beyond the table, 0 = none
    };
    int d_;
    JumpScheme scheme_;
    std::vector<Ray> rays_;
    std::vector<Table> tables_;
    std::vector<double> cumulative_;  // ray choice
    double rate_ = 0.0;
    Vector comp_;
    Matrix small_cov_;
    Matrix small_sqrt_;
};

// draws from [b, Q, M] at unit time
class IdSampler {
public:
    IdSampler(const LevyTriple& triple, const JumpScheme& scheme = {});
    int dimension() const { return jumps_.dimension(); }
    const JumpSampler& jumps() const { return jumps_; }
    Vector draw(RandomStream& rng) const;
    Vector increment(double dt, RandomStream& rng) const;

private:
    Vector b_;
    Matrix q_sqrt_;
    JumpSampler jumps_;
};

// Fills N rows in fixed blocks; block k always uses rng.substream(k), so
// the result does not depend on the number of worker threads.
inline constexpr int kBlockSize = 1024;
SampleSet fill_blocks(int N, int d, std::uint64_t seed, int chains,
                      const std::function<void(RandomStream&, Eigen::Ref<Matrix> rows)>& block);

Vector sample_levy_increment(const LevyMeasure& M, double dt, const JumpScheme& scheme, RandomStream& rng);

// Z(T) of dZ = BZ dt + dY, Y the Levy process of the triple, Z(0) = x0
class OuSimulator {
public:
    OuSimulator(const LevyTriple& triple, const SemigroupFamily& sg, double T, const JumpScheme& scheme = {});
    double horizon() const { return T_; }
    Vector simulate(const Vector& x0, RandomStream& rng) const;

private:
    SemigroupFamily sg_;
    double T_;
    JumpSampler jumps_;
    Matrix TT_;          // e^{TB}
    Vector drift_;       // int_0^T e^{(T-s)B} (b - compensator) ds
    Matrix noise_sqrt_;  // square root of int_0^T e^{uB} (Q + small-jump cov) e^{uB*} du
};

Vector simulate_ou_path(const Vector& x0, double T, const LevyTriple& triple, const SemigroupFamily& sg,
                        const JumpScheme& scheme, RandomStream& rng);

SampleSet sample_mu_t(double t, int N, const EvolvedTriple& ev, const JumpScheme& scheme, std::uint64_t seed,
                      int chains = 1);

enum class InvariantMethod { direct, long_horizon };
SampleSet sample_invariant(int N, const EvolvedTriple& ev, const JumpScheme& scheme, std::uint64_t seed,
                           InvariantMethod method = InvariantMethod::direct, int chains = 1);

SampleSet sample_gaussian(const Matrix& Q, int N, std::uint64_t seed, int chains = 1);

void write_csv(std::ostream& out, const SampleSet& samples);

}  // namespace mehler
