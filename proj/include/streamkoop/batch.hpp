#pragma once

#include "streamkoop/dictionary.hpp"
#include "streamkoop/model.hpp"
#include "streamkoop/snapshots.hpp"

namespace streamkoop {

/// EDMD: K = Y_f * pinv(Y_p), the Frobenius least-squares solution of
/// min ||K Y_p - Y_f|| over the lifted snapshots.
KoopmanModel edmd_fit(const SnapshotPairs& data, const Dictionary& dictionary,
                      double rcond = kDefaultRcond);

/// EDMD on features that are already lifted (K x M each).
Matrix edmd_operator(const Matrix& lifted_past, const Matrix& lifted_future,
                     double rcond = kDefaultRcond);

/// Tikhonov-regularized EDMD: K = Y_f Y_p^T (delta I + Y_p Y_p^T)^{-1}.
/// This is the closed form of the recursive estimator started from
/// phi_0 = delta I, z_0 = 0.
KoopmanModel ridge_fit(const SnapshotPairs& data, const Dictionary& dictionary, double delta);

Matrix ridge_operator(const Matrix& lifted_past, const Matrix& lifted_future, double delta);

/// DMD: EDMD with the identity dictionary.
KoopmanModel dmd_fit(const SnapshotPairs& data, double rcond = kDefaultRcond);

}  // namespace streamkoop
