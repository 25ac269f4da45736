#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamkoop/dictionary.hpp"
#include "streamkoop/model.hpp"
#include "streamkoop/snapshots.hpp"

namespace streamkoop {

enum class SystemKind { Vdp, Ring, Burgers, CsvInput };
enum class PredictionMode { Immediate, Holdout };

const char* to_string(SystemKind kind);
const char* to_string(PredictionMode mode);
SystemKind parse_system(const std::string& name);

struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::Linear;
  Index rbf_count = 60;
  double sigma = 0.3;
  bool include_state = false;
};

struct PredictionSpec {
  bool enabled = true;
  PredictionMode mode = PredictionMode::Holdout;
  Index horizon = 50;
  /// First predicted time index in holdout mode; the rollout starts from the
  /// true state one step earlier.
  Index holdout_start = 401;
};

struct TimingSpec {
  bool enabled = false;
  Index repeats = 1;
  bool eig_every_step = false;
  /// Defaults to the experiment's snapshot points when empty.
  std::vector<Index> checkpoints;
};

/// A full experiment: dataset, dictionary, streamed checkpoints, prediction
/// errors and (optionally) the streaming-versus-batch timing comparison.
///
/// Time index t refers to column t of the sampled trajectory (t = 0 is the
/// initial state). Checkpoint M means the first M snapshot pairs, i.e.
/// states 0..M.
struct ExperimentConfig {
  SystemKind system = SystemKind::Vdp;
  /// System parameters in the simulator's JSON form (see systems.hpp).
  nlohmann::json system_params = nlohmann::json::object();
  std::filesystem::path input_csv;
  DictionarySpec dictionary;
  double delta = 1e-4;
  std::vector<Index> snapshot_points;
  PredictionSpec prediction;
  TimingSpec timing;
  std::vector<double> delta_sweep;
  /// Leading eigenfunctions sampled on `grid` per checkpoint (2-D systems only).
  Index eigenfunctions = 0;
  nlohmann::json grid = nlohmann::json::object();
  std::uint64_t seed = 7;
  std::filesystem::path output_dir = "out";

  /// Throws ContractError naming the offending field.
  void validate() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& doc);

  /// Settings reproducing the published experiments for each system.
  static ExperimentConfig preset(SystemKind system);
};

/// Parses "a,b,c" or "start:stop:step" (inclusive stop).
std::vector<Index> parse_index_list(const std::string& text);

struct Dataset {
  SnapshotPairs pairs;
  Matrix states;  ///< N x (M + 1) trajectory
  nlohmann::json config;
};

Dataset generate_dataset(const ExperimentConfig& cfg);

Dictionary build_dictionary(const ExperimentConfig& cfg, const Matrix& training_states);

struct TimingCheckpoint {
  Index samples = 0;
  double recursive_s = 0.0;
  double batch_s = 0.0;
  double speedup = 0.0;
  /// Untimed cross-checks of the streamed operator at this checkpoint.
  double ridge_rel_err = 0.0;
  double pinv_rel_err = 0.0;
};

struct TimingReport {
  Index feature_dim = 0;
  Index repeats = 1;
  bool eig_every_step = false;
  double lift_s = 0.0;
  double recursive_total_s = 0.0;
  double batch_total_s = 0.0;
  /// Least-squares slope of log(cumulative time) against log(M).
  double recursive_slope = 0.0;
  double batch_slope = 0.0;
  std::vector<TimingCheckpoint> checkpoints;

  nlohmann::json to_json() const;
};

struct BenchOptions {
  std::vector<Index> checkpoints;
  Index repeats = 1;
  bool eig_every_step = false;
  double delta = 1e-4;
  double rcond = kDefaultRcond;
};

/// Times the recursive arm (one rank-1 update plus operator formation per
/// sample) against the batch arm (EDMD recomputed from scratch per sample) on
/// pre-lifted data. Cumulative seconds at each checkpoint are the median over
/// repeats.
TimingReport bench_compare(const Matrix& lifted_past, const Matrix& lifted_future,
                           const BenchOptions& options);

/// Generates and lifts the experiment's data, then runs the lifted benchmark.
TimingReport bench_compare(const ExperimentConfig& cfg);

struct CheckpointResult {
  Index samples = 0;
  KoopmanModel model;
  double ridge_rel_err = 0.0;
  double pinv_rel_err = 0.0;
  std::optional<double> horizon_mse;
  Vector step_mse;
};

struct ExperimentResult {
  std::vector<CheckpointResult> checkpoints;
  std::vector<std::pair<double, double>> delta_sweep;  ///< (delta, horizon MSE)
  std::optional<TimingReport> timing;
  std::vector<std::filesystem::path> files;
};

/// Runs the experiment and writes its artifacts under cfg.output_dir.
/// Everything except timing.json is byte-for-byte reproducible.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Log-log least-squares slope of y against x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace streamkoop
