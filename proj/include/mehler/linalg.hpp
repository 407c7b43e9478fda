#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mehler {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

Matrix expm(const Matrix& A);
bool is_symmetric(const Matrix& A, double tol = 1e-12);
double min_eigenvalue_symmetric(const Matrix& A);
double max_eigenvalue_symmetric(const Matrix& A);
double spectral_abscissa(const Matrix& A);
bool is_normal(const Matrix& A, double tol = 1e-10);
// symmetric PSD square root; tiny negative eigenvalues are clipped
Matrix sqrt_psd(const Matrix& A);
bool commute(const Matrix& A, const Matrix& B, double tol = 1e-10);

}  // namespace mehler
