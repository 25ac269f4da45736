#include "streamkoop/model.hpp"

#include <string>
#include <vector>

#include "streamkoop/errors.hpp"

namespace streamkoop {

KoopmanModel::KoopmanModel(Matrix op, Dictionary dictionary, Index sample_count,
                           double regularization)
    : op_(std::move(op)),
      dictionary_(std::move(dictionary)),
      sample_count_(sample_count),
      regularization_(regularization) {
  const Index k = dictionary_.feature_dim();
  if (op_.rows() != k || op_.cols() != k) {
    throw ContractError("koopman model: operator is " + std::to_string(op_.rows()) + "x" +
                        std::to_string(op_.cols()) + " but dictionary has " +
                        std::to_string(k) + " features");
  }
  if (sample_count_ < 0) throw ContractError("koopman model: negative sample count");
  if (!(regularization_ >= 0.0)) throw ContractError("koopman model: negative regularization");
}

nlohmann::json matrix_to_json(const Matrix& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(flat)}};
}

Matrix matrix_from_json(const nlohmann::json& doc) {
  try {
    const auto rows = doc.at("rows").get<Index>();
    const auto cols = doc.at("cols").get<Index>();
    const auto flat = doc.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 || static_cast<Index>(flat.size()) != rows * cols) {
      throw ContractError("matrix json: data length does not match rows*cols");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) m(i, j) = flat[static_cast<std::size_t>(i * cols + j)];
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("matrix json: ") + e.what());
  }
}

nlohmann::json KoopmanModel::to_json() const {
  return {{"operator", matrix_to_json(op_)},
          {"dictionary", dictionary_.to_json()},
          {"sample_count", sample_count_},
          {"regularization", regularization_}};
}

KoopmanModel KoopmanModel::from_json(const nlohmann::json& doc) {
  try {
    return KoopmanModel(matrix_from_json(doc.at("operator")),
                        Dictionary::from_json(doc.at("dictionary")),
                        doc.at("sample_count").get<Index>(),
                        doc.at("regularization").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("model json: ") + e.what());
  }
}

}  // namespace streamkoop
