#include "mehler/semigroup.hpp"

#include <cmath>

#include "mehler/errors.hpp"

namespace mehler {

SemigroupFamily::SemigroupFamily(Matrix B, bool adjoint) : B_(std::move(B)), adjoint_(adjoint) {
    if (B_.rows() != B_.cols() || B_.rows() == 0) throw DomainError("generator must be a nonempty square matrix");
    if (!B_.allFinite()) throw DomainError("generator has non-finite entries");
    const int d = dimension();
    const double r = B_(0, 0);
    scalar_ = (B_ - r * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
    rate_ = scalar_ ? r : 0.0;
    normal_ = mehler::is_normal(B_);
    abscissa_ = mehler::spectral_abscissa(B_);
    // the logarithmic norm gives K = 1; when it is useless for a stable
    // non-normal B, trade a margin on w for a sampled K
    const double lognorm = mehler::max_eigenvalue_symmetric(B_);
    if (normal_ || lognorm < 0.0 || abscissa_ >= 0.0) {
        K_ = 1.0;
        omega_ = normal_ ? abscissa_ : lognorm;
    } else {
        omega_ = 0.5 * abscissa_;
        double k = 1.0;
        const double tmax = 40.0 / std::abs(omega_);
        for (int i = 1; i <= 4000; ++i) {
            const double t = tmax * i / 4000.0;
            k = std::max(k, expm(t * B_).operatorNorm() * std::exp(-omega_ * t));
        }
        K_ = 1.05 * k;
    }
}

SemigroupFamily SemigroupFamily::scalar(int d, double rate) {
    return SemigroupFamily(rate * Matrix::Identity(d, d));
}

SemigroupFamily SemigroupFamily::adjoint() const { return SemigroupFamily(B_.transpose(), !adjoint_); }

Matrix SemigroupFamily::T(double t) const {
    const int d = dimension();
    if (scalar_) return std::exp(rate_ * t) * Matrix::Identity(d, d);
    return expm(t * B_);
}

Matrix SemigroupFamily::T_adjoint(double t) const {
    const int d = dimension();
    if (scalar_) return std::exp(rate_ * t) * Matrix::Identity(d, d);
    return expm(t * Matrix(B_.transpose()));
}

Matrix SemigroupFamily::T_inverse(double t) const { return T(-t); }

double SemigroupFamily::det_T(double t) const { return std::exp(t * B_.trace()); }

bool SemigroupFamily::is_symmetric() const { return mehler::is_symmetric(B_, 1e-12); }

double SemigroupFamily::decay_horizon(double level) const {
    if (!(omega_ < 0.0)) throw DomainError("semigroup does not decay: growth exponent is nonnegative");
    return std::max(0.0, std::log(level / K_) / omega_);
}

}  // namespace mehler
