#pragma once

#include <vector>

#include <json.hpp>

#include "streamkoop/dictionary.hpp"
#include "streamkoop/model.hpp"
#include "streamkoop/snapshots.hpp"

namespace streamkoop {

inline constexpr double kDefaultDelta = 1e-4;

/// Running state of the recursive EDMD estimator.
///
/// Holds phi^{-1} = (delta I + sum a_i a_i^T)^{-1} and z = sum b_i a_i^T, where
/// a_i, b_i are the lifted past/future samples absorbed so far. Each update
/// costs O(K^2) and touches no sample history; the operator z * phi^{-1} is
/// only formed when current_operator() is called.
///
/// Single writer: concurrent update() calls must be serialized by the caller.
class StreamState {
 public:
  StreamState(Dictionary dictionary, double delta = kDefaultDelta);

  /// Lifts (x, y) and absorbs the pair.
  void update(const Vector& x, const Vector& y);

  /// Absorbs an already-lifted pair (a = lift(x), b = lift(y)).
  void update_lifted(const Vector& a, const Vector& b);

  /// K = z * phi^{-1}. The zero operator before any update.
  KoopmanModel current_operator() const;
  Matrix operator_matrix() const;

  const Matrix& phi_inv() const { return phi_inv_; }
  const Matrix& z() const { return z_; }
  Index count() const { return count_; }
  double delta() const { return delta_; }
  const Dictionary& dictionary() const { return dictionary_; }
  Index feature_dim() const { return phi_inv_.rows(); }

  /// Checkpoint with full double precision; from_json(to_json()) continues
  /// bit-identically.
  nlohmann::json to_json() const;
  static StreamState from_json(const nlohmann::json& doc);

 private:
  Dictionary dictionary_;
  double delta_;
  Index count_ = 0;
  Matrix phi_inv_;
  Matrix z_;
  Vector work_;
};

/// Functional form: returns the state after absorbing (x, y).
StreamState updated(StreamState state, const Vector& x, const Vector& y);

struct StreamCheckpoint {
  Index count;
  KoopmanModel model;
};

/// Streams `data` in column order and records the operator after every
/// multiple of `snapshot_every` samples and after the final sample.
std::vector<StreamCheckpoint> fit_stream(const SnapshotPairs& data, const Dictionary& dictionary,
                                         double delta, Index snapshot_every);

}  // namespace streamkoop
