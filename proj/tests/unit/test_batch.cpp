#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "streamkoop/batch.hpp"
#include "streamkoop/errors.hpp"

using namespace streamkoop;
using streamkoop::testing::gauss_jordan_inverse;
using streamkoop::testing::linear_trajectory;
using streamkoop::testing::random_matrix;
using streamkoop::testing::random_vector;
using streamkoop::testing::stable_linear_map;

TEST_CASE("edmd of the identity system is the identity") {
  const SnapshotPairs data(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  CHECK((edmd_fit(data, Dictionary::linear(2)).matrix() - Matrix::Identity(2, 2)).norm() < 1e-15);
}

TEST_CASE("edmd recovers a diagonal map") {
  Matrix a(2, 2);
  a << 0.9, 0, 0, 0.5;
  const auto model = edmd_fit(SnapshotPairs(Matrix::Identity(2, 2), a), Dictionary::linear(2));
  CHECK((model.matrix() - a).norm() < 1e-15);
  CHECK(model.regularization() == 0.0);
  CHECK(model.sample_count() == 2);
}

TEST_CASE("edmd recovers a random linear system from a trajectory") {
  const Matrix a = random_matrix(4, 4, 17, 0.4);
  const Matrix traj = linear_trajectory(a, random_vector(4, 18), 20);
  const auto data = SnapshotPairs::from_trajectory(traj);
  CHECK(data.size() == 20);
  CHECK((edmd_fit(data, Dictionary::linear(4)).matrix() - a).norm() <= 1e-8);
}

TEST_CASE("dmd recovers a rotation") {
  Matrix r(2, 2);
  r << std::cos(0.1), -std::sin(0.1), std::sin(0.1), std::cos(0.1);
  CHECK((dmd_fit(SnapshotPairs(Matrix::Identity(2, 2), r)).matrix() - r).norm() < 1e-15);
}

TEST_CASE("dmd recovers a 10-state linear system") {
  const Matrix a = stable_linear_map(10, 0.95, 3);
  const auto data = SnapshotPairs::from_trajectory(linear_trajectory(a, random_vector(10, 4), 40));
  CHECK((dmd_fit(data).matrix() - a).norm() <= 1e-8);
}

TEST_CASE("dmd is bit-identical to edmd with a linear dictionary") {
  const auto data = SnapshotPairs(random_matrix(5, 30, 1), random_matrix(5, 30, 2));
  CHECK(dmd_fit(data).matrix() == edmd_fit(data, Dictionary::linear(5)).matrix());
}

TEST_CASE("ridge with a single sample") {
  Matrix yp = Matrix::Zero(2, 1);
  Matrix yf = Matrix::Zero(2, 1);
  yp(0, 0) = 1.0;
  yf(1, 0) = 1.0;
  const auto model = ridge_fit(SnapshotPairs(yp, yf), Dictionary::linear(2), 1.0);
  Matrix expected = Matrix::Zero(2, 2);
  expected(1, 0) = 0.5;
  CHECK((model.matrix() - expected).norm() < 1e-15);
  CHECK(model.regularization() == 1.0);
}

TEST_CASE("ridge shrinks to zero for huge delta") {
  const auto data = SnapshotPairs(random_matrix(3, 20, 5), random_matrix(3, 20, 6));
  CHECK(ridge_fit(data, Dictionary::linear(3), 1e12).matrix().norm() <= 1e-6);
}

TEST_CASE("ridge matches an explicit dense inverse") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix yp = random_matrix(6, 25, seed);
    const Matrix yf = random_matrix(6, 25, seed + 300);
    const double delta = 1e-3 * (1 + static_cast<double>(seed));
    const Matrix reference = yf * yp.transpose() *
                             gauss_jordan_inverse(delta * Matrix::Identity(6, 6) + yp * yp.transpose());
    CAPTURE(seed);
    CHECK(relative_frobenius(ridge_operator(yp, yf, delta), reference) <= 1e-12);
  }
}

TEST_CASE("ridge approaches edmd as delta vanishes") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix yp = random_matrix(8, 40, seed);
    const Matrix yf = random_matrix(8, 40, seed + 77);
    const double delta = 1e-10 * (yp * yp.transpose()).trace() / 8.0;
    CAPTURE(seed);
    CHECK(relative_frobenius(ridge_operator(yp, yf, delta), edmd_operator(yp, yf)) <= 1e-6);
  }
  const auto data = SnapshotPairs(random_matrix(3, 30, 1), random_matrix(3, 30, 2));
  CHECK(relative_frobenius(ridge_fit(data, Dictionary::linear(3), 1e-10).matrix(),
                           edmd_fit(data, Dictionary::linear(3)).matrix()) <= 1e-6);
}

TEST_CASE("edmd minimizes the Frobenius residual") {
  const Matrix yp = random_matrix(5, 30, 21);
  const Matrix yf = random_matrix(5, 30, 22);
  const Matrix k = edmd_operator(yp, yf);
  const double best = (k * yp - yf).norm();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Matrix e = random_matrix(5, 5, 500 + seed);
    e *= 1e-3 / e.norm();
    CHECK(best <= ((k + e) * yp - yf).norm());
  }
}

TEST_CASE("edmd with an rbf dictionary lifts both sides") {
  const Matrix x = random_matrix(2, 30, 8);
  const Matrix y = random_matrix(2, 30, 9);
  const auto d = Dictionary::rbf_from_data(x, 10, 1.0, 3);
  const auto model = edmd_fit(SnapshotPairs(x, y), d);
  CHECK(model.feature_dim() == 10);
  CHECK(model.matrix() == edmd_operator(d.lift_batch(x), d.lift_batch(y)));
}

TEST_CASE("batch fits reject bad input") {
  const auto data = SnapshotPairs(random_matrix(3, 5, 1), random_matrix(3, 5, 2));
  CHECK_THROWS_AS(edmd_fit(data, Dictionary::linear(2)), ContractError);
  CHECK_THROWS_AS(ridge_fit(data, Dictionary::linear(3), 0.0), ContractError);
  CHECK_THROWS_AS(ridge_fit(data, Dictionary::linear(3), -1.0), ContractError);
  CHECK_THROWS_AS(edmd_operator(Matrix::Zero(3, 4), Matrix::Zero(3, 5)), ContractError);
  CHECK_THROWS_AS(SnapshotPairs(Matrix::Zero(2, 3), Matrix::Zero(2, 4)), ContractError);
  CHECK_THROWS_AS(SnapshotPairs(Matrix::Zero(2, 0), Matrix::Zero(2, 0)), ContractError);
}

TEST_CASE("snapshot pairs helpers") {
  Matrix traj(1, 4);
  traj << 1, 2, 3, 4;
  const auto data = SnapshotPairs::from_trajectory(traj);
  CHECK(data.size() == 3);
  CHECK(data.future()(0, 0) == 2.0);
  CHECK(data.trajectory() == traj);
  CHECK(data.head(2).size() == 2);
  CHECK(data.head(2).future()(0, 1) == 3.0);
  CHECK_THROWS_AS(data.head(4), ContractError);
  for (Index i = 0; i + 1 < data.size(); ++i) CHECK(data.future().col(i) == data.past().col(i + 1));
}

TEST_CASE("model json round trip") {
  const auto model = ridge_fit(SnapshotPairs(random_matrix(2, 9, 1), random_matrix(2, 9, 2)),
                               Dictionary::linear(2), 1e-4);
  const auto back = KoopmanModel::from_json(nlohmann::json::parse(model.to_json().dump()));
  CHECK(back.matrix() == model.matrix());
  CHECK(back.sample_count() == 9);
  CHECK(back.regularization() == 1e-4);
  CHECK(back.dictionary() == model.dictionary());
}
