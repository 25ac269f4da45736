#pragma once

#include <cstdint>
#include <optional>

#include <json.hpp>

#include "streamkoop/numlin.hpp"

namespace streamkoop {

enum class DictionaryKind { Linear, GaussianRbf };

/// Observable map from state space R^N into feature space R^K.
///
/// Linear returns the state itself (K = N). GaussianRbf evaluates
/// exp(-||x - c_j||^2 / sigma^2) for every center c_j (rows of `centers`),
/// optionally followed by the raw state coordinates.
class Dictionary {
 public:
  static Dictionary linear(Index state_dim);
  static Dictionary gaussian_rbf(Matrix centers, double sigma, bool include_state = false);

  /// Draws `count` centers uniformly without replacement from the columns of
  /// `states` (N x M). Deterministic for a fixed seed.
  static Dictionary rbf_from_data(const Matrix& states, Index count, double sigma,
                                  std::uint64_t seed, bool include_state = false);

  DictionaryKind kind() const { return kind_; }
  Index state_dim() const { return state_dim_; }
  Index feature_dim() const;
  Index center_count() const { return centers_.rows(); }
  const Matrix& centers() const { return centers_; }
  double sigma() const { return sigma_; }
  bool include_state() const { return include_state_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  Vector lift(const Vector& x) const;

  /// Column m of the result is lift(X.col(m)).
  Matrix lift_batch(const Matrix& states) const;

  nlohmann::json to_json() const;
  static Dictionary from_json(const nlohmann::json& doc);

  friend bool operator==(const Dictionary& a, const Dictionary& b);

 private:
  Dictionary() = default;

  DictionaryKind kind_ = DictionaryKind::Linear;
  Index state_dim_ = 0;
  Matrix centers_;
  double sigma_ = 0.0;
  bool include_state_ = false;
  std::optional<std::uint64_t> seed_;
};

const char* to_string(DictionaryKind kind);

}  // namespace streamkoop
