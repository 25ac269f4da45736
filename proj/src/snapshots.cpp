#include "streamkoop/snapshots.hpp"

#include <string>

#include "streamkoop/errors.hpp"

namespace streamkoop {

SnapshotPairs::SnapshotPairs(Matrix past, Matrix future)
    : past_(std::move(past)), future_(std::move(future)) {
  if (past_.rows() != future_.rows() || past_.cols() != future_.cols()) {
    throw ContractError("snapshot pairs: past is " + std::to_string(past_.rows()) + "x" +
                        std::to_string(past_.cols()) + " but future is " +
                        std::to_string(future_.rows()) + "x" + std::to_string(future_.cols()));
  }
  if (past_.cols() < 1) throw ContractError("snapshot pairs: no samples");
  require_finite(past_, "snapshot past states");
  require_finite(future_, "snapshot future states");
}

SnapshotPairs SnapshotPairs::head(Index count) const {
  if (count < 1 || count > size()) {
    throw ContractError("snapshot pairs: head(" + std::to_string(count) + ") out of range 1.." +
                        std::to_string(size()));
  }
  return SnapshotPairs(past_.leftCols(count), future_.leftCols(count));
}

Matrix SnapshotPairs::trajectory() const {
  Matrix states(state_dim(), size() + 1);
  states.leftCols(size()) = past_;
  states.col(size()) = future_.col(size() - 1);
  return states;
}

SnapshotPairs SnapshotPairs::from_trajectory(const Matrix& states) {
  if (states.cols() < 2) throw ContractError("from_trajectory: need at least two states");
  const Index m = states.cols() - 1;
  return SnapshotPairs(states.leftCols(m), states.rightCols(m));
}

}  // namespace streamkoop
