#include "streamkoop/predictor.hpp"

#include <string>

#include "streamkoop/errors.hpp"

namespace streamkoop {

Predictor::Predictor(KoopmanModel model, Matrix output_map)
    : model_(std::move(model)), output_map_(std::move(output_map)) {
  if (output_map_.cols() != model_.feature_dim() ||
      output_map_.rows() != model_.dictionary().state_dim()) {
    throw ContractError("predictor: output map is " + std::to_string(output_map_.rows()) + "x" +
                        std::to_string(output_map_.cols()) + ", expected " +
                        std::to_string(model_.dictionary().state_dim()) + "x" +
                        std::to_string(model_.feature_dim()));
  }
}

Predictor Predictor::fit(const Matrix& states, KoopmanModel model, double rcond) {
  const Dictionary& dict = model.dictionary();
  if (states.cols() < 1) throw ContractError("fit_C: need at least one state");
  if (states.rows() != dict.state_dim()) {
    throw ContractError("fit_C: states have " + std::to_string(states.rows()) +
                        " rows, dictionary expects " + std::to_string(dict.state_dim()));
  }
  require_finite(states, "fit_C states");
  if (dict.kind() == DictionaryKind::Linear) {
    Matrix identity = Matrix::Identity(dict.state_dim(), dict.state_dim());
    return Predictor(std::move(model), std::move(identity));
  }
  Matrix c = states * pinv(dict.lift_batch(states), rcond);
  return Predictor(std::move(model), std::move(c));
}

Matrix Predictor::predict(const Vector& x0, Index steps) const {
  if (steps < 0) throw ContractError("predict: steps must be >= 0");
  const Matrix& k = model_.matrix();
  Vector z = model_.dictionary().lift(x0);
  Vector next(z.size());
  Matrix out(state_dim(), steps + 1);
  out.col(0).noalias() = output_map_ * z;
  for (Index n = 1; n <= steps; ++n) {
    next.noalias() = k * z;
    z.swap(next);
    if (!z.allFinite()) {
      throw DivergenceError("predict: lifted state overflowed", static_cast<std::size_t>(n));
    }
    out.col(n).noalias() = output_map_ * z;
  }
  if (!out.allFinite()) {
    throw DivergenceError("predict: reconstructed state overflowed",
                          static_cast<std::size_t>(steps));
  }
  return out;
}

double rolling_mse(const Matrix& truth, const Matrix& pred) {
  if (truth.rows() != pred.rows() || truth.cols() != pred.cols()) {
    throw ContractError("rolling_mse: shape mismatch");
  }
  if (truth.size() == 0) throw ContractError("rolling_mse: empty input");
  return (truth - pred).squaredNorm() / static_cast<double>(truth.size());
}

Vector per_step_mse(const Matrix& truth, const Matrix& pred) {
  if (truth.rows() != pred.rows() || truth.cols() != pred.cols()) {
    throw ContractError("per_step_mse: shape mismatch");
  }
  if (truth.size() == 0) throw ContractError("per_step_mse: empty input");
  return (truth - pred).colwise().squaredNorm().transpose() / static_cast<double>(truth.rows());
}

}  // namespace streamkoop
