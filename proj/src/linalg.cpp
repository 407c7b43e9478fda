#include "mehler/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace mehler {

Matrix expm(const Matrix& A) {
    if (A.rows() == 1) {
        Matrix r(1, 1);
        r(0, 0) = std::exp(A(0, 0));
        return r;
    }
    return A.exp();
}

bool is_symmetric(const Matrix& A, double tol) {
    return A.rows() == A.cols() && (A - A.transpose()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue_symmetric(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double max_eigenvalue_symmetric(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double spectral_abscissa(const Matrix& A) {
    Eigen::EigenSolver<Matrix> es(A, false);
    return es.eigenvalues().real().maxCoeff();
}

bool is_normal(const Matrix& A, double tol) {
    Matrix c = A * A.transpose() - A.transpose() * A;
    return c.cwiseAbs().maxCoeff() <= tol * std::max(1.0, A.squaredNorm());
}

Matrix sqrt_psd(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
    Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

bool commute(const Matrix& A, const Matrix& B, double tol) {
    Matrix c = A * B - B * A;
    return c.cwiseAbs().maxCoeff() <= tol * std::max(1.0, A.norm() * B.norm());
}

}  // namespace mehler
