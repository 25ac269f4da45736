#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "streamkoop/csv.hpp"
#include "streamkoop/errors.hpp"
#include "streamkoop/experiment.hpp"
#include "streamkoop/systems.hpp"

using namespace streamkoop;
using streamkoop::testing::random_matrix;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("streamkoop_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_ring(const std::filesystem::path& out) {
  auto cfg = ExperimentConfig::preset(SystemKind::Ring);
  RingOscillatorConfig ring;
  ring.n_osc = 6;
  ring.steps = 120;
  cfg.system_params = ring.to_json();
  cfg.snapshot_points = {20, 40, 60};
  cfg.prediction = {true, PredictionMode::Holdout, 10, 101};
  cfg.timing = {true, 1, false, {40, 60}};
  cfg.delta_sweep = {1e-4, 1e-2};
  cfg.output_dir = out;
  return cfg;
}

}  // namespace

TEST_CASE("index lists") {
  CHECK(parse_index_list("1500,2000,2500") == std::vector<Index>{1500, 2000, 2500});
  CHECK(parse_index_list("50:80:10") == std::vector<Index>{50, 60, 70, 80});
  CHECK(parse_index_list("5:12:5") == std::vector<Index>{5, 10});
  CHECK_THROWS_AS(parse_index_list("a,b"), ContractError);
  CHECK_THROWS_AS(parse_index_list("1:5"), ContractError);
  CHECK_THROWS_AS(parse_index_list("1:5:0"), ContractError);
  CHECK_THROWS_AS(parse_index_list(""), ContractError);
}

TEST_CASE("system names") {
  CHECK(parse_system("vdp") == SystemKind::Vdp);
  CHECK(parse_system("csv-input") == SystemKind::CsvInput);
  CHECK(std::string(to_string(SystemKind::Burgers)) == "burgers");
  CHECK_THROWS_AS(parse_system("lorenz"), ContractError);
}

TEST_CASE("presets are valid and match the reference settings") {
  const auto vdp = ExperimentConfig::preset(SystemKind::Vdp);
  vdp.validate();
  CHECK(vdp.dictionary.kind == DictionaryKind::GaussianRbf);
  CHECK(vdp.dictionary.rbf_count == 60);
  CHECK(vdp.dictionary.sigma == 0.3);
  CHECK(vdp.delta == 1e-4);
  CHECK(vdp.snapshot_points.back() == 2500);

  const auto ring = ExperimentConfig::preset(SystemKind::Ring);
  ring.validate();
  CHECK(ring.dictionary.kind == DictionaryKind::Linear);
  CHECK(ring.snapshot_points.front() == 50);
  CHECK(ring.snapshot_points.back() == 300);
  CHECK(ring.prediction.holdout_start == 401);
  CHECK(ring.prediction.horizon == 50);

  const auto burgers = ExperimentConfig::preset(SystemKind::Burgers);
  burgers.validate();
  CHECK(burgers.snapshot_points.back() == 500);
  CHECK(burgers.prediction.holdout_start == 701);
  CHECK(BurgersConfig::from_json(burgers.system_params).sample_steps() >= 750);
}

TEST_CASE("config json round trip and overrides") {
  auto cfg = ExperimentConfig::preset(SystemKind::Ring);
  cfg.delta = 3e-3;
  cfg.delta_sweep = {1e-4, 1e-3};
  cfg.seed = 99;
  const auto back = ExperimentConfig::from_json(nlohmann::json::parse(cfg.to_json().dump()));
  CHECK(back.to_json() == cfg.to_json());

  const auto layered = ExperimentConfig::from_json({{"system", "vdp"}, {"delta", 0.5}});
  CHECK(layered.delta == 0.5);
  CHECK(layered.dictionary.rbf_count == 60);
}

TEST_CASE("config validation names the field") {
  auto cfg = ExperimentConfig::preset(SystemKind::Ring);
  cfg.snapshot_points = {50, 40};
  try {
    cfg.validate();
    FAIL("expected a contract error");
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).find("snapshot_points") != std::string::npos);
  }
  cfg = ExperimentConfig::preset(SystemKind::Ring);
  cfg.prediction.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  cfg = ExperimentConfig::preset(SystemKind::Ring);
  cfg.delta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractError);
  CHECK_THROWS_AS(ExperimentConfig::from_json({{"system", "vdp"}, {"prediction", {{"mode", "later"}}}}),
                  ContractError);
}

TEST_CASE("log-log slope") {
  CHECK(log_log_slope({1, 2, 4}, {3, 12, 48}) == doctest::Approx(2.0));
  CHECK(log_log_slope({10, 100}, {5, 50}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(log_log_slope({1}, {1}), ContractError);
}

TEST_CASE("bench report is consistent") {
  const Matrix yp = random_matrix(10, 120, 1);
  const Matrix yf = random_matrix(10, 120, 2);
  BenchOptions options;
  options.checkpoints = {40, 80, 120};
  options.repeats = 2;
  const auto report = bench_compare(yp, yf, options);
  REQUIRE(report.checkpoints.size() == 3);
  CHECK(report.feature_dim == 10);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& c = report.checkpoints[i];
    CHECK(c.recursive_s > 0.0);
    CHECK(c.batch_s > 0.0);
    CHECK(c.speedup == doctest::Approx(c.batch_s / c.recursive_s));
    CHECK(c.ridge_rel_err <= 1e-8);
    CHECK(c.pinv_rel_err <= 1e-4);
    if (i > 0) {
      CHECK(c.recursive_s > report.checkpoints[i - 1].recursive_s);
      CHECK(c.batch_s > report.checkpoints[i - 1].batch_s);
    }
  }
  const auto json = report.to_json();
  CHECK(json["checkpoints"].size() == 3);
  CHECK(json.contains("batch_slope"));
}

TEST_CASE("bench with a single sample") {
  const Matrix yp = random_matrix(10, 5, 3);
  const Matrix yf = random_matrix(10, 5, 4);
  BenchOptions options;
  options.checkpoints = {1};
  options.repeats = 25;
  const auto report = bench_compare(yp, yf, options);
  REQUIRE(report.checkpoints.size() == 1);
  CHECK(report.checkpoints[0].speedup >= 0.1);
  CHECK(report.checkpoints[0].speedup <= 10.0);
}

TEST_CASE("bench rejects bad options") {
  const Matrix yp = random_matrix(3, 5, 3);
  BenchOptions options;
  options.checkpoints = {6};
  CHECK_THROWS_AS(bench_compare(yp, yp, options), ContractError);
  options.checkpoints = {};
  CHECK_THROWS_AS(bench_compare(yp, yp, options), ContractError);
  options.checkpoints = {2};
  options.repeats = 0;
  CHECK_THROWS_AS(bench_compare(yp, yp, options), ContractError);
}

TEST_CASE("experiment artifacts are reproducible") {
  const auto dir_a = scratch("run_a");
  const auto dir_b = scratch("run_b");
  const auto a = run_experiment(small_ring(dir_a));
  const auto b = run_experiment(small_ring(dir_b));
  REQUIRE(a.checkpoints.size() == 3);
  REQUIRE(a.files.size() == b.files.size());
  for (const auto& f : a.files) {
    const auto name = f.filename().string();
    CHECK(std::filesystem::exists(dir_b / name));
    if (name == "timing.json" || name == "experiment_config.json") continue;
    CAPTURE(name);
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
  }
  for (const char* name : {"dataset.csv", "dataset_config.json", "spectrum_M20.csv", "spectrum_M60.csv",
                           "mse_per_step.csv", "mse_summary.csv", "equivalence.csv", "delta_sweep.csv",
                           "timing.json", "model_M60.json", "stream_state.json"}) {
    CAPTURE(name);
    CHECK(std::filesystem::exists(dir_a / name));
  }
  for (const auto& cp : a.checkpoints) {
    CHECK(cp.horizon_mse.has_value());
    CHECK(cp.step_mse.size() == 10);
    CHECK(cp.ridge_rel_err <= 1e-6);
  }
  CHECK(a.delta_sweep.size() == 2);
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("immediate prediction window") {
  const auto dir = scratch("immediate");
  auto cfg = small_ring(dir);
  cfg.prediction.mode = PredictionMode::Immediate;
  cfg.timing.enabled = false;
  cfg.delta_sweep.clear();
  const auto result = run_experiment(cfg);
  const std::string per_step = slurp(dir / "mse_per_step.csv");
  CHECK(per_step.rfind("checkpoint,step,t,mse\n20,1,21,", 0) == 0);
  CHECK(result.checkpoints.back().horizon_mse.value() < result.checkpoints.front().horizon_mse.value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment from a csv file") {
  const auto dir = scratch("csv");
  std::filesystem::create_directories(dir);
  VanDerPolConfig vdp;
  vdp.steps = 200;
  save_snapshots_csv(dir / "input.csv", simulate_vdp(vdp));
  auto cfg = ExperimentConfig::preset(SystemKind::CsvInput);
  cfg.input_csv = dir / "input.csv";
  cfg.dictionary = {DictionaryKind::GaussianRbf, 20, 0.5, false};
  cfg.snapshot_points = {100, 150};
  cfg.prediction = {true, PredictionMode::Immediate, 20, 0};
  cfg.output_dir = dir / "out";
  const auto result = run_experiment(cfg);
  CHECK(result.checkpoints.size() == 2);
  CHECK(result.checkpoints.back().model.feature_dim() == 20);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment rejects checkpoints beyond the data") {
  auto cfg = small_ring(scratch("too_far"));
  cfg.snapshot_points = {500};
  CHECK_THROWS_AS(run_experiment(cfg), ContractError);
}
