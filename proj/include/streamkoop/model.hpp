#pragma once

#include <json.hpp>

#include "streamkoop/dictionary.hpp"
#include "streamkoop/numlin.hpp"

namespace streamkoop {

/// Finite-dimensional Koopman approximation: a K x K matrix acting on the
/// feature coordinates defined by `dictionary`, so that
/// operator * lift(x) approximates lift(T(x)).
class KoopmanModel {
 public:
  KoopmanModel(Matrix op, Dictionary dictionary, Index sample_count, double regularization);

  const Matrix& matrix() const { return op_; }
  const Dictionary& dictionary() const { return dictionary_; }
  Index feature_dim() const { return op_.rows(); }
  Index sample_count() const { return sample_count_; }
  /// Ridge weight delta; zero for the pure pseudo-inverse fit.
  double regularization() const { return regularization_; }

  nlohmann::json to_json() const;
  static KoopmanModel from_json(const nlohmann::json& doc);

 private:
  Matrix op_;
  Dictionary dictionary_;
  Index sample_count_;
  double regularization_;
};

nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& doc);

}  // namespace streamkoop
