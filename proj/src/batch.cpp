#include "streamkoop/batch.hpp"

#include <string>

#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {

void check_lifted(const Matrix& past, const Matrix& future) {
  if (past.rows() != future.rows() || past.cols() != future.cols()) {
    throw ContractError("lifted snapshots differ in shape");
  }
  if (past.cols() < 1) throw ContractError("lifted snapshots: no samples");
}

void check_dims(const SnapshotPairs& data, const Dictionary& dictionary) {
  if (data.state_dim() != dictionary.state_dim()) {
    throw ContractError("snapshot state dimension " + std::to_string(data.state_dim()) +
                        " does not match dictionary state dimension " +
                        std::to_string(dictionary.state_dim()));
  }
}

}  // namespace

Matrix edmd_operator(const Matrix& lifted_past, const Matrix& lifted_future, double rcond) {
  check_lifted(lifted_past, lifted_future);
  return lifted_future * pinv(lifted_past, rcond);
}

KoopmanModel edmd_fit(const SnapshotPairs& data, const Dictionary& dictionary, double rcond) {
  check_dims(data, dictionary);
  Matrix op = edmd_operator(dictionary.lift_batch(data.past()),
                            dictionary.lift_batch(data.future()), rcond);
  return KoopmanModel(std::move(op), dictionary, data.size(), 0.0);
}

Matrix ridge_operator(const Matrix& lifted_past, const Matrix& lifted_future, double delta) {
  check_lifted(lifted_past, lifted_future);
  if (!(delta > 0.0)) throw ContractError("ridge: delta must be positive");
  const Index k = lifted_past.rows();
  Matrix gram = Matrix::Identity(k, k) * delta;
  gram.selfadjointView<Eigen::Lower>().rankUpdate(lifted_past);
  Eigen::LLT<Matrix, Eigen::Lower> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ridge: regularized Gram matrix is not positive definite");
  }
  // K G = Y_f Y_p^T with G symmetric, so G K^T = Y_p Y_f^T.
  const Matrix rhs = lifted_past * lifted_future.transpose();
  return llt.solve(rhs).transpose();
}

KoopmanModel ridge_fit(const SnapshotPairs& data, const Dictionary& dictionary, double delta) {
  check_dims(data, dictionary);
  Matrix op = ridge_operator(dictionary.lift_batch(data.past()),
                             dictionary.lift_batch(data.future()), delta);
  return KoopmanModel(std::move(op), dictionary, data.size(), delta);
}

KoopmanModel dmd_fit(const SnapshotPairs& data, double rcond) {
  return edmd_fit(data, Dictionary::linear(data.state_dim()), rcond);
}

}  // namespace streamkoop
