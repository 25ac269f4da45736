#include "streamkoop/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "streamkoop/errors.hpp"

namespace streamkoop {

const char* to_string(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::Linear:
      return "linear";
    case DictionaryKind::GaussianRbf:
      return "rbf";
  }
  return "unknown";
}

Dictionary Dictionary::linear(Index state_dim) {
  if (state_dim < 1) throw ContractError("linear dictionary: state_dim must be >= 1");
  Dictionary d;
  d.kind_ = DictionaryKind::Linear;
  d.state_dim_ = state_dim;
  return d;
}

Dictionary Dictionary::gaussian_rbf(Matrix centers, double sigma, bool include_state) {
  if (centers.rows() < 1 || centers.cols() < 1) {
    throw ContractError("rbf dictionary: need at least one center of positive dimension");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ContractError("rbf dictionary: sigma must be positive and finite");
  }
  require_finite(centers, "rbf centers");
  Dictionary d;
  d.kind_ = DictionaryKind::GaussianRbf;
  d.state_dim_ = centers.cols();
  d.centers_ = std::move(centers);
  d.sigma_ = sigma;
  d.include_state_ = include_state;
  return d;
}

Dictionary Dictionary::rbf_from_data(const Matrix& states, Index count, double sigma,
                                     std::uint64_t seed, bool include_state) {
  if (count < 1) throw ContractError("rbf_from_data: count must be >= 1");
  if (count > states.cols()) {
    throw ContractError("rbf_from_data: count " + std::to_string(count) + " exceeds " +
                        std::to_string(states.cols()) + " available samples");
  }
  require_finite(states, "rbf_from_data states");

  std::vector<Index> columns(static_cast<std::size_t>(states.cols()));
  std::iota(columns.begin(), columns.end(), Index{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots become the sample.
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, states.cols() - 1);
    std::swap(columns[static_cast<std::size_t>(i)],
              columns[static_cast<std::size_t>(pick(rng))]);
  }

  Matrix centers(count, states.rows());
  for (Index j = 0; j < count; ++j) {
    centers.row(j) = states.col(columns[static_cast<std::size_t>(j)]).transpose();
  }
  Dictionary d = gaussian_rbf(std::move(centers), sigma, include_state);
  d.seed_ = seed;
  return d;
}

Index Dictionary::feature_dim() const {
  if (kind_ == DictionaryKind::Linear) return state_dim_;
  return centers_.rows() + (include_state_ ? state_dim_ : 0);
}

Vector Dictionary::lift(const Vector& x) const {
  if (x.size() != state_dim_) {
    throw ContractError("lift: state has length " + std::to_string(x.size()) +
                        ", dictionary expects " + std::to_string(state_dim_));
  }
  if (kind_ == DictionaryKind::Linear) return x;

  Vector out(feature_dim());
  const double inv_s2 = 1.0 / (sigma_ * sigma_);
  for (Index j = 0; j < centers_.rows(); ++j) {
    const double d2 = (x - centers_.row(j).transpose()).squaredNorm();
    out(j) = std::exp(-d2 * inv_s2);
  }
  if (include_state_) out.tail(state_dim_) = x;
  return out;
}

Matrix Dictionary::lift_batch(const Matrix& states) const {
  if (states.rows() != state_dim_) {
    throw ContractError("lift_batch: states have " + std::to_string(states.rows()) +
                        " rows, dictionary expects " + std::to_string(state_dim_));
  }
  if (kind_ == DictionaryKind::Linear) return states;
  Matrix out(feature_dim(), states.cols());
  for (Index m = 0; m < states.cols(); ++m) out.col(m) = lift(states.col(m));
  return out;
}

nlohmann::json Dictionary::to_json() const {
  nlohmann::json doc;
  doc["kind"] = to_string(kind_);
  doc["state_dim"] = state_dim_;
  if (kind_ == DictionaryKind::GaussianRbf) {
    doc["sigma"] = sigma_;
    doc["include_state"] = include_state_;
    doc["center_count"] = centers_.rows();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(centers_.size()));
    for (Index i = 0; i < centers_.rows(); ++i) {
      for (Index j = 0; j < centers_.cols(); ++j) flat.push_back(centers_(i, j));
    }
    doc["centers"] = std::move(flat);
    if (seed_) doc["seed"] = *seed_;
  }
  return doc;
}

Dictionary Dictionary::from_json(const nlohmann::json& doc) {
  try {
    const auto kind = doc.at("kind").get<std::string>();
    const auto state_dim = doc.at("state_dim").get<Index>();
    if (kind == "linear") return linear(state_dim);
    if (kind != "rbf") throw ContractError("dictionary json: unknown kind '" + kind + "'");

    const auto flat = doc.at("centers").get<std::vector<double>>();
    if (state_dim < 1 || flat.size() % static_cast<std::size_t>(state_dim) != 0) {
      throw ContractError("dictionary json: centers length is not a multiple of state_dim");
    }
    const Index count = static_cast<Index>(flat.size()) / state_dim;
    Matrix centers(count, state_dim);
    for (Index i = 0; i < count; ++i) {
      for (Index j = 0; j < state_dim; ++j) {
        centers(i, j) = flat[static_cast<std::size_t>(i * state_dim + j)];
      }
    }
    Dictionary d = gaussian_rbf(std::move(centers), doc.at("sigma").get<double>(),
                                doc.value("include_state", false));
    if (doc.contains("seed")) d.seed_ = doc.at("seed").get<std::uint64_t>();
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("dictionary json: ") + e.what());
  }
}

bool operator==(const Dictionary& a, const Dictionary& b) {
  return a.kind_ == b.kind_ && a.state_dim_ == b.state_dim_ && a.sigma_ == b.sigma_ &&
         a.include_state_ == b.include_state_ && a.seed_ == b.seed_ &&
         a.centers_.rows() == b.centers_.rows() && a.centers_.cols() == b.centers_.cols() &&
         a.centers_ == b.centers_;
}

}  // namespace streamkoop
