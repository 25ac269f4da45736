#include "streamkoop/stream.hpp"

#include <cmath>
#include <string>

#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {
constexpr double kMinDenominator = 1e-14;
}

StreamState::StreamState(Dictionary dictionary, double delta)
    : dictionary_(std::move(dictionary)), delta_(delta) {
  if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
    throw ContractError("stream: delta must be positive and finite");
  }
  const Index k = dictionary_.feature_dim();
  phi_inv_ = Matrix::Identity(k, k) / delta_;
  z_ = Matrix::Zero(k, k);
  work_.resize(k);
}

void StreamState::update(const Vector& x, const Vector& y) {
  if (!x.allFinite() || !y.allFinite()) throw DataError("stream: non-finite state sample");
  update_lifted(dictionary_.lift(x), dictionary_.lift(y));
}

void StreamState::update_lifted(const Vector& a, const Vector& b) {
  const Index k = feature_dim();
  if (a.size() != k || b.size() != k) {
    throw ContractError("stream: lifted sample has length " + std::to_string(a.size()) +
                        ", expected " + std::to_string(k));
  }
  if (!a.allFinite() || !b.allFinite()) throw DataError("stream: non-finite lifted features");

  // Sherman-Morrison: (P^{-1} + a a^T)^{-1} = P - P a a^T P / (1 + a^T P a).
  work_.noalias() = phi_inv_ * a;
  const double denom = 1.0 + a.dot(work_);
  if (!(denom > kMinDenominator)) {
    throw NumericalError("stream: Sherman-Morrison denominator " + std::to_string(denom) +
                         " is not positive; phi_inv is corrupted");
  }
  phi_inv_.noalias() -= (work_ / denom) * work_.transpose();
  phi_inv_ = 0.5 * (phi_inv_ + phi_inv_.transpose()).eval();

  z_.noalias() += b * a.transpose();
  ++count_;
}

Matrix StreamState::operator_matrix() const {
  Matrix k(z_.rows(), z_.cols());
  k.noalias() = z_ * phi_inv_;
  return k;
}

KoopmanModel StreamState::current_operator() const {
  return KoopmanModel(operator_matrix(), dictionary_, count_, delta_);
}

nlohmann::json StreamState::to_json() const {
  return {{"delta", delta_},
          {"count", count_},
          {"phi_inv", matrix_to_json(phi_inv_)},
          {"z", matrix_to_json(z_)},
          {"dictionary", dictionary_.to_json()}};
}

StreamState StreamState::from_json(const nlohmann::json& doc) {
  try {
    StreamState state(Dictionary::from_json(doc.at("dictionary")), doc.at("delta").get<double>());
    Matrix phi_inv = matrix_from_json(doc.at("phi_inv"));
    Matrix z = matrix_from_json(doc.at("z"));
    const Index k = state.feature_dim();
    if (phi_inv.rows() != k || phi_inv.cols() != k || z.rows() != k || z.cols() != k) {
      throw ContractError("stream checkpoint: matrix shapes do not match the dictionary");
    }
    const auto count = doc.at("count").get<Index>();
    if (count < 0) throw ContractError("stream checkpoint: negative count");
    state.phi_inv_ = std::move(phi_inv);
    state.z_ = std::move(z);
    state.count_ = count;
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("stream checkpoint: ") + e.what());
  }
}

StreamState updated(StreamState state, const Vector& x, const Vector& y) {
  state.update(x, y);
  return state;
}

std::vector<StreamCheckpoint> fit_stream(const SnapshotPairs& data, const Dictionary& dictionary,
                                         double delta, Index snapshot_every) {
  if (snapshot_every < 1) throw ContractError("fit_stream: snapshot_every must be >= 1");
  if (data.state_dim() != dictionary.state_dim()) {
    throw ContractError("fit_stream: data and dictionary state dimensions differ");
  }
  StreamState state(dictionary, delta);
  std::vector<StreamCheckpoint> out;
  for (Index i = 0; i < data.size(); ++i) {
    try {
      state.update(data.past().col(i), data.future().col(i));
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + " at sample " + std::to_string(i));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at sample " + std::to_string(i));
    }
    const Index n = i + 1;
    if (n % snapshot_every == 0 || n == data.size()) {
      out.push_back({n, state.current_operator()});
    }
  }
  return out;
}

}  // namespace streamkoop
