#pragma once

#include <utility>

#include "mehler/linalg.hpp"

namespace mehler {

// T_t = e^{tB} with a growth bound |T_t x| <= K e^{w t} |x|
class SemigroupFamily {
public:
    explicit SemigroupFamily(Matrix B, bool adjoint = false);
    static SemigroupFamily scalar(int d, double rate);  // B = rate * I

    int dimension() const { return static_cast<int>(B_.rows()); }
    const Matrix& generator() const { return B_; }
    bool is_adjoint() const { return adjoint_; }
    SemigroupFamily adjoint() const;

    Matrix T(double t) const;
    Matrix T_adjoint(double t) const;  // e^{t B^*}
    Matrix T_inverse(double t) const;
    double det_T(double t) const;      // e^{t tr B}

    bool is_scalar() const { return scalar_; }
    double scalar_rate() const { return rate_; }  // valid when is_scalar()
    bool is_normal() const { return normal_; }
    bool is_symmetric() const;

    double spectral_abscissa() const { return abscissa_; }
    bool is_stable() const { return abscissa_ < 0.0; }
    double K() const { return K_; }
    double omega() const { return omega_; }
    // smallest T with K e^{w T} <= level (requires w < 0)
    double decay_horizon(double level) const;

private:
    Matrix B_;
    bool adjoint_;
    bool scalar_ = false;
    double rate_ = 0.0;
    bool normal_ = false;
    double abscissa_ = 0.0;
    double K_ = 1.0;
    double omega_ = 0.0;
};

}  // namespace mehler
