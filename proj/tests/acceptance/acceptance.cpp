// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "streamkoop/batch.hpp"
#include "streamkoop/csv.hpp"
#include "streamkoop/experiment.hpp"
#include "streamkoop/predictor.hpp"
#include "streamkoop/spectral.hpp"
#include "streamkoop/stream.hpp"
#include "streamkoop/systems.hpp"

using namespace streamkoop;
using namespace streamkoop::testing;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome recursive_batch_equivalence() {
  struct Case {
    Index n, k, m;
  };
  const Case cases[] = {{2, 2, 7}, {5, 10, 200}, {2, 60, 500}};
  double worst = 0.0;
  std::uint64_t seed = 100;
  for (const auto& c : cases) {
    for (const double delta : {1e-4, 1e-2}) {
      const Matrix x = random_matrix(c.n, c.m, ++seed);
      const Matrix y = random_matrix(c.n, c.m, ++seed);
      const Dictionary d = c.k == c.n ? Dictionary::linear(c.n)
                                      : Dictionary::rbf_from_data(x, c.k, 1.0, seed);
      StreamState s(d, delta);
      for (Index i = 0; i < c.m; ++i) s.update(x.col(i), y.col(i));
      const double err =
          relative_frobenius(s.operator_matrix(), ridge_fit(SnapshotPairs(x, y), d, delta).matrix());
      worst = std::max(worst, err);
    }
  }
  return {worst <= 1e-8, "max relative error " + fmt("%.3g", worst) + " (limit 1e-8)"};
}

Outcome small_delta_consistency() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Matrix x = random_matrix(5, 200, 200 + seed);
    const Matrix y = random_matrix(5, 200, 300 + seed);
    const Dictionary d = Dictionary::rbf_from_data(x, 10, 2.0, seed);
    const Matrix yp = d.lift_batch(x);
    const double delta = 1e-10 * (yp * yp.transpose()).trace() / static_cast<double>(d.feature_dim());
    StreamState s(d, delta);
    for (Index i = 0; i < x.cols(); ++i) s.update(x.col(i), y.col(i));
    const double err = relative_frobenius(s.operator_matrix(), edmd_fit(SnapshotPairs(x, y), d).matrix());
    worst = std::max(worst, err);
  }
  return {worst <= 1e-6, "max relative error " + fmt("%.3g", worst) + " (limit 1e-6)"};
}

Outcome sherman_morrison_drift() {
  const auto data = simulate_vdp(VanDerPolConfig{});
  const auto d = Dictionary::rbf_from_data(data.past(), 60, 0.3, 7);
  const double delta = 1e-4;
  StreamState s(d, delta);
  Matrix phi = delta * Matrix::Identity(60, 60);
  for (Index i = 0; i < data.size(); ++i) {
    const Vector a = d.lift(data.past().col(i));
    s.update(data.past().col(i), data.future().col(i));
    phi += a * a.transpose();
  }
  const double drift = (s.phi_inv() * phi - Matrix::Identity(60, 60)).norm();
  return {drift <= 1e-7, "||P phi - I||_F = " + fmt("%.3g", drift) + " after " +
                             std::to_string(data.size()) + " samples (limit 1e-7)"};
}

Outcome linear_system_exactness() {
  // Independent state samples paired with their images under A.
  const Matrix a = stable_linear_map(10, 0.95, 11);
  const Matrix x = random_matrix(10, 100, 12);
  const Matrix y = a * x;
  const double delta = 1e-10 * (x * x.transpose()).trace() / 10.0;
  StreamState s(Dictionary::linear(10), delta);
  for (Index i = 0; i < x.cols(); ++i) s.update(x.col(i), y.col(i));
  const double op_err = (s.operator_matrix() - a).norm();

  const auto predictor = Predictor::fit(x, s.current_operator());
  const Vector start = random_vector(10, 13);
  const Matrix pred = predictor.predict(start, 50);
  const Matrix truth = linear_trajectory(a, start, 50);
  double step_err = 0.0;
  for (Index n = 0; n <= 50; ++n) step_err = std::max(step_err, (pred.col(n) - truth.col(n)).norm());
  return {op_err <= 1e-6 && step_err <= 1e-6,
          "||K - A||_F = " + fmt("%.3g", op_err) + ", worst 50-step error " + fmt("%.3g", step_err) +
              " (limits 1e-6, delta " + fmt("%.3g", delta) + ")"};
}

struct VdpModels {
  SnapshotPairs data;
  std::vector<StreamCheckpoint> checkpoints;
};

const VdpModels& vdp_models() {
  static const VdpModels models = [] {
    auto data = simulate_vdp(VanDerPolConfig{});
    const auto d = Dictionary::rbf_from_data(data.past(), 60, 0.3, 7);
    auto cps = fit_stream(data, d, 1e-4, 500);
    return VdpModels{std::move(data), std::move(cps)};
  }();
  return models;
}

Outcome vdp_spectrum() {
  const auto& m = vdp_models();
  std::string detail;
  double lead = 0.0, top = 0.0;
  for (const auto& cp : m.checkpoints) {
    const auto e = spectrum(cp.model);
    double maxmod = 0.0;
    for (Index j = 0; j < e.size(); ++j) maxmod = std::max(maxmod, std::abs(e.eigenvalues(j)));
    detail += "M=" + std::to_string(cp.count) + " max|l|=" + fmt("%.5f", maxmod) + "; ";
    if (cp.count == 2500) {
      lead = std::abs(e.eigenvalues(0));
      top = maxmod;
    }
  }
  detail += "leading |l| at 2500 = " + fmt("%.5f", lead);
  return {std::abs(top - 1.0) <= 0.05 && top <= 1.05, detail};
}

Outcome vdp_eigenfunction_localization() {
  const auto& m = vdp_models();
  const KoopmanModel& model = m.checkpoints.back().model;

  // Limit-cycle set: second half of a long reference trajectory.
  VanDerPolConfig ref;
  ref.steps = 100000;
  const Matrix traj = simulate_vdp(ref).trajectory();
  std::vector<Vector> cycle;
  for (Index t = 50000; t <= ref.steps; t += 10) cycle.push_back(traj.col(t));

  const GridSpec grid;
  const auto field = eigenfunction_on_grid(model, 0, grid);
  double near_sum = 0.0, far_sum = 0.0;
  Index near_n = 0, far_n = 0;
  for (Index r = 0; r < field.values.rows(); ++r) {
    for (Index c = 0; c < field.values.cols(); ++c) {
      Vector p(2);
      p << field.grid_x1(c), field.grid_x2(r);
      double dist = std::numeric_limits<double>::infinity();
      for (const auto& q : cycle) dist = std::min(dist, (p - q).norm());
      const double v = std::abs(field.values(r, c));
      if (dist <= 0.2) {
        near_sum += v;
        ++near_n;
      } else if (dist > 1.0) {
        far_sum += v;
        ++far_n;
      }
    }
  }
  const double near_mean = near_sum / static_cast<double>(near_n);
  const double far_mean = far_sum / static_cast<double>(far_n);
  const double ratio = near_mean / far_mean;
  return {ratio >= 2.0, "near/far mean |phi| ratio " + fmt("%.3f", ratio) + " (" + std::to_string(near_n) +
                            " near, " + std::to_string(far_n) + " far points; limit 2)"};
}

ExperimentResult run_preset(SystemKind system) {
  auto cfg = ExperimentConfig::preset(system);
  cfg.timing.enabled = false;
  cfg.output_dir = std::filesystem::temp_directory_path() / ("streamkoop_acceptance_" + std::string(to_string(system)));
  auto result = run_experiment(cfg);
  std::filesystem::remove_all(cfg.output_dir);
  return result;
}

Outcome prediction_trends() {
  const auto ring = run_preset(SystemKind::Ring);
  const auto burgers = run_preset(SystemKind::Burgers);
  const double r0 = ring.checkpoints.front().horizon_mse.value();
  const double r1 = ring.checkpoints.back().horizon_mse.value();
  const double b0 = burgers.checkpoints.front().horizon_mse.value();
  const double b1 = burgers.checkpoints.back().horizon_mse.value();
  const bool pass = r1 <= 0.5 * r0 && b1 <= 0.5 * b0 && r1 <= 1e-3;
  return {pass, "ring " + fmt("%.3g", r0) + " -> " + fmt("%.3g", r1) + ", burgers " + fmt("%.3g", b0) + " -> " +
                    fmt("%.3g", b1)};
}

Outcome timing() {
  auto vdp = ExperimentConfig::preset(SystemKind::Vdp);
  vdp.timing.checkpoints = {1500, 2000, 2500};
  const auto r1 = bench_compare(vdp);

  auto ring = ExperimentConfig::preset(SystemKind::Ring);
  RingOscillatorConfig sys = RingOscillatorConfig::from_json(ring.system_params);
  sys.n_osc = 50;
  ring.system_params = sys.to_json();
  ring.timing.checkpoints = {200, 250, 300};
  const auto r2 = bench_compare(ring);

  bool pass = r1.feature_dim == 60 && r2.feature_dim == 100;
  std::string detail;
  for (const auto* r : {&r1, &r2}) {
    for (const auto& c : r->checkpoints) pass = pass && c.speedup >= 2.0;
    pass = pass && r->batch_slope >= r->recursive_slope + 0.5;
    detail += "K=" + std::to_string(r->feature_dim) + " speedup at M=" +
              std::to_string(r->checkpoints.back().samples) + " " + fmt("%.1f", r->checkpoints.back().speedup) +
              ", slopes " + fmt("%.2f", r->batch_slope) + " vs " + fmt("%.2f", r->recursive_slope) + "; ";
  }
  return {pass, detail};
}

Outcome property_suites() {
  Index failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix a = random_matrix(1 + static_cast<Index>(seed % 20), 1 + static_cast<Index>((seed * 7) % 20), seed);
    const Matrix p = pinv(a);
    if ((a * p * a - a).norm() > 1e-8 * a.norm()) ++failures;

    const Matrix x = random_matrix(3, 60, 1000 + seed);
    const Matrix y = random_matrix(3, 60, 2000 + seed);
    const auto d = Dictionary::rbf_from_data(x, 10, 1.5, seed);
    StreamState s(d, 1e-3);
    for (Index i = 0; i < 60; ++i) {
      s.update(x.col(i), y.col(i));
      if ((s.phi_inv() - s.phi_inv().transpose()).norm() > 1e-10) ++failures;
    }
    if (relative_frobenius(s.operator_matrix(), ridge_fit(SnapshotPairs(x, y), d, 1e-3).matrix()) > 1e-8) {
      ++failures;
    }

    const SnapshotPairs pairs(x, y);
    std::ostringstream first;
    write_snapshots_csv(first, pairs);
    std::istringstream in(first.str());
    const auto back = read_snapshots_csv(in);
    std::ostringstream second;
    write_snapshots_csv(second, back);
    if (back.past() != x || back.future() != y || second.str() != first.str()) ++failures;
  }
  return {failures == 0, std::to_string(failures) + " failures over 100 seeds (pinv, symmetry, equivalence, csv)"};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> check;
    double budget_s;  // 0: no runtime limit
  };
  const std::vector<Criterion> criteria = {
      {"1 recursive-batch equivalence", recursive_batch_equivalence, 10.0},
      {"2 small-delta consistency", small_delta_consistency, 5.0},
      {"3 inverse drift", sherman_morrison_drift, 30.0},
      {"4 linear-system exactness", linear_system_exactness, 0.0},
      {"5 van der pol spectrum", vdp_spectrum, 0.0},
      {"6 eigenfunction localization", vdp_eigenfunction_localization, 0.0},
      {"7 prediction-error trends", prediction_trends, 0.0},
      {"8 timing", timing, 300.0},
      {"9 property suites", property_suites, 0.0},
  };
  int failed = 0;
  for (const auto& [name, check, budget] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > 0.0 && secs > budget) {
      o.pass = false;
      o.detail += fmt(" (over the %.0fs budget)", budget);
    }
    std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
