#pragma once

#include <complex>
#include <Eigen/Dense>

namespace streamkoop {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultRcond = 1e-12;

/// Spectrum of a real square matrix.
///
/// Column j of `right` satisfies A v = lambda_j v and column j of `left`
/// satisfies w^H A = lambda_j w^H. Both are unit 2-norm with their first
/// non-negligible component rotated onto the positive real axis. Eigenvalues
/// are sorted by descending real part, then descending imaginary part.
struct EigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix right;
  ComplexMatrix left;

  Index size() const { return eigenvalues.size(); }
};

/// Moore-Penrose pseudo-inverse. Singular values at or below
/// rcond * sigma_max are treated as zero.
Matrix pinv(const Matrix& a, double rcond = kDefaultRcond);

EigenDecomposition eig(const Matrix& a);

/// Minimum-norm least-squares solution of A X = B.
Matrix lstsq(const Matrix& a, const Matrix& b, double rcond = kDefaultRcond);

double frobenius(const Matrix& a);

/// ||a - b||_F / ||b||_F, or the absolute difference when b is zero.
double relative_frobenius(const Matrix& a, const Matrix& b);

bool all_finite(const Matrix& a);

/// Throws ContractError naming `what` if `a` has a non-finite entry or is empty.
void require_finite(const Matrix& a, const char* what);

}  // namespace streamkoop
