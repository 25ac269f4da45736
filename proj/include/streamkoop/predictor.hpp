#pragma once

#include "streamkoop/model.hpp"

namespace streamkoop {

/// Lifted-space linear predictor: z_0 = lift(x0), z_n = K z_{n-1},
/// x_n = C z_n, with the output map C fit by least squares.
class Predictor {
 public:
  Predictor(KoopmanModel model, Matrix output_map);

  /// Fits C minimizing sum_i ||x_i - C lift(x_i)||^2 over the columns of
  /// `states` (N x M). The identity dictionary yields C = I exactly.
  static Predictor fit(const Matrix& states, KoopmanModel model, double rcond = kDefaultRcond);

  const KoopmanModel& model() const { return model_; }
  const Matrix& output_map() const { return output_map_; }
  Index state_dim() const { return output_map_.rows(); }

  /// N x (steps + 1). Column 0 is C lift(x0), not x0 itself.
  Matrix predict(const Vector& x0, Index steps) const;

 private:
  KoopmanModel model_;
  Matrix output_map_;
};

/// Mean of the squared entrywise error over all states and columns.
double rolling_mse(const Matrix& truth, const Matrix& pred);

/// Squared error averaged over states, one value per column.
Vector per_step_mse(const Matrix& truth, const Matrix& pred);

}  // namespace streamkoop
