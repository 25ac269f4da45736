#pragma once

#include "streamkoop/numlin.hpp"

namespace streamkoop {

/// Paired state samples: column i of `future` is the image of column i of
/// `past` under one step of the dynamics.
class SnapshotPairs {
 public:
  SnapshotPairs(Matrix past, Matrix future);

  const Matrix& past() const { return past_; }
  const Matrix& future() const { return future_; }
  Index state_dim() const { return past_.rows(); }
  Index size() const { return past_.cols(); }

  /// The first `count` pairs.
  SnapshotPairs head(Index count) const;

  /// [x_1 .. x_M, y_M]: the M+1 states of a single sampled trajectory.
  /// Only meaningful when future.col(i) == past.col(i + 1).
  Matrix trajectory() const;

  /// Pairs (s_i, s_{i+1}) from the columns of a state sequence (N x T, T >= 2).
  static SnapshotPairs from_trajectory(const Matrix& states);

 private:
  Matrix past_;
  Matrix future_;
};

}  // namespace streamkoop
