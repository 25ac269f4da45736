#include "streamkoop/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {

std::string dims(const Matrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

// Unit 2-norm, first non-negligible component real and positive.
void normalize_phase(ComplexMatrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const double norm = col.norm();
    if (norm == 0.0) continue;
    col /= norm;
    const double biggest = col.cwiseAbs().maxCoeff();
    for (Index i = 0; i < col.size(); ++i) {
      const double mag = std::abs(col(i));
      if (mag > 1e-12 * biggest) {
        col *= std::conj(col(i)) / mag;
        col(i) = std::complex<double>(mag, 0.0);
        break;
      }
    }
  }
}

bool eigen_order(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

std::vector<Index> sorted_order(const ComplexVector& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return eigen_order(values(i), values(j)); });
  return order;
}

}  // namespace

Matrix pinv(const Matrix& a, double rcond) {
  if (a.size() == 0) throw ContractError("pinv: empty matrix");
  if (!(rcond >= 0.0)) throw ContractError("pinv: rcond must be non-negative");
  require_finite(a, "pinv input");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("pinv: SVD failed to converge for " + dims(a) + " matrix");
  }
  const Vector& sigma = svd.singularValues();
  const double cutoff = sigma.size() > 0 ? rcond * sigma(0) : 0.0;
  Vector inv_sigma(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    inv_sigma(i) = sigma(i) > cutoff && sigma(i) > 0.0 ? 1.0 / sigma(i) : 0.0;
  }
  return svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
}

EigenDecomposition eig(const Matrix& a) {
  if (a.rows() != a.cols() || a.size() == 0) {
    throw ContractError("eig: matrix must be square, got " + dims(a));
  }
  require_finite(a, "eig input");

  Eigen::EigenSolver<Matrix> right_solver(a, true);
  if (right_solver.info() != Eigen::Success) {
    throw NumericalError("eig: QR iteration did not converge for " + dims(a) + " matrix");
  }
  const Matrix at = a.transpose();
  Eigen::EigenSolver<Matrix> left_solver(at, true);
  if (left_solver.info() != Eigen::Success) {
    throw NumericalError("eig: QR iteration did not converge for transposed " + dims(a) +
                         " matrix");
  }

  const ComplexVector values = right_solver.eigenvalues();
  const ComplexMatrix vectors = right_solver.eigenvectors();
  const ComplexVector t_values = left_solver.eigenvalues();
  const ComplexMatrix t_vectors = left_solver.eigenvectors();

  const Index n = a.rows();
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.left.resize(n, n);

  const auto order = sorted_order(values);
  const auto t_order = sorted_order(t_values);
  std::vector<bool> taken(static_cast<std::size_t>(n), false);

  for (Index j = 0; j < n; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    const auto lambda = values(src);
    out.eigenvalues(j) = lambda;
    out.right.col(j) = vectors.col(src);

    // Eigenvalues of A^T equal those of A up to roundoff; pair each one with
    // the nearest unclaimed eigenvalue of the transpose, scanning in sort
    // order so exact ties resolve identically on both sides.
    Index best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      const Index cand = t_order[static_cast<std::size_t>(k)];
      if (taken[static_cast<std::size_t>(cand)]) continue;
      const double dist = std::abs(t_values(cand) - lambda);
      if (dist < best_dist) {
        best_dist = dist;
        best = cand;
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    // A^T u = lambda u  implies  conj(u)^H A = lambda conj(u)^H.
    out.left.col(j) = t_vectors.col(best).conjugate();
  }

  normalize_phase(out.right);
  normalize_phase(out.left);
  return out;
}

Matrix lstsq(const Matrix& a, const Matrix& b, double rcond) {
  if (a.rows() != b.rows()) {
    throw ContractError("lstsq: row mismatch, A is " + dims(a) + " and B is " + dims(b));
  }
  require_finite(a, "lstsq A");
  require_finite(b, "lstsq B");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(rcond);
  cod.compute(a);
  return cod.solve(b);
}

double frobenius(const Matrix& a) { return a.norm(); }

double relative_frobenius(const Matrix& a, const Matrix& b) {
  const double diff = (a - b).norm();
  const double ref = b.norm();
  return ref > 0.0 ? diff / ref : diff;
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

void require_finite(const Matrix& a, const char* what) {
  if (a.size() == 0) throw ContractError(std::string(what) + ": empty matrix");
  if (!a.allFinite()) throw ContractError(std::string(what) + ": non-finite entry");
}

}  // namespace streamkoop
