// streamkoop: command-line front end for dataset generation, batch and
// streaming Koopman fits, prediction, spectra and the timing benchmark.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 I/O error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamkoop/batch.hpp"
#include "streamkoop/csv.hpp"
#include "streamkoop/errors.hpp"
#include "streamkoop/experiment.hpp"
#include "streamkoop/predictor.hpp"
#include "streamkoop/spectral.hpp"
#include "streamkoop/stream.hpp"
#include "streamkoop/systems.hpp"

namespace fs = std::filesystem;
using namespace streamkoop;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(std::string("invalid JSON in ") + path.string() + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void write_json_file(const fs::path& path, const nlohmann::json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

// "key=value" with value parsed as JSON, falling back to a plain string.
void apply_params(nlohmann::json& target, const std::vector<std::string>& params) {
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ContractError("--param: expected key=value, got '" + p + "'");
    }
    const std::string key = p.substr(0, eq);
    const std::string value = p.substr(eq + 1);
    try {
      target[key] = nlohmann::json::parse(value);
    } catch (const nlohmann::json::parse_error&) {
      target[key] = value;
    }
  }
}

struct DictOptions {
  std::string kind;
  Index rbf_count = 60;
  double sigma = 0.3;
  bool include_state = false;
  std::uint64_t seed = 7;
};

void add_dict_options(CLI::App* cmd, DictOptions& opts) {
  cmd->add_option("--dict", opts.kind, "Dictionary: linear or rbf")
      ->check(CLI::IsMember({"linear", "rbf"}));
  cmd->add_option("--rbf-count", opts.rbf_count, "Number of Gaussian RBF centers");
  cmd->add_option("--sigma", opts.sigma, "Gaussian RBF width");
  cmd->add_flag("--include-state", opts.include_state, "Append raw state to RBF features");
  cmd->add_option("--seed", opts.seed, "Seed for RBF center sampling");
}

Dictionary make_dictionary(const DictOptions& opts, const SnapshotPairs& data) {
  if (opts.kind.empty() || opts.kind == "linear") return Dictionary::linear(data.state_dim());
  return Dictionary::rbf_from_data(data.past(), opts.rbf_count, opts.sigma, opts.seed,
                                   opts.include_state);
}

// --- simulate ----------------------------------------------------------------

struct SimulateOptions {
  std::string system;
  fs::path config;
  std::vector<std::string> params;
  fs::path out = ".";
};

int run_simulate(const SimulateOptions& opts) {
  ExperimentConfig cfg = ExperimentConfig::preset(parse_system(opts.system));
  if (cfg.system == SystemKind::CsvInput) throw ContractError("simulate: choose vdp, ring or burgers");
  if (!opts.config.empty()) {
    for (const auto& [k, v] : read_json(opts.config).items()) cfg.system_params[k] = v;
  }
  apply_params(cfg.system_params, opts.params);
  const Dataset data = generate_dataset(cfg);
  fs::create_directories(opts.out);
  std::ostringstream csv;
  write_snapshots_csv(csv, data.pairs);
  write_file(opts.out / "dataset.csv", csv.str());
  write_json_file(opts.out / "dataset_config.json", data.config);
  std::cout << "wrote " << data.pairs.size() << " snapshot pairs of dimension "
            << data.pairs.state_dim() << " to " << (opts.out / "dataset.csv").string() << "\n";
  return 0;
}

// --- fit-batch ---------------------------------------------------------------

struct FitBatchOptions {
  fs::path data;
  std::string method = "edmd";
  DictOptions dict;
  double delta = kDefaultDelta;
  double rcond = kDefaultRcond;
  fs::path out = "model.json";
};

int run_fit_batch(const FitBatchOptions& opts) {
  const SnapshotPairs data = ingest_csv(opts.data);
  const Dictionary dict = make_dictionary(opts.dict, data);
  std::optional<KoopmanModel> model;
  if (opts.method == "edmd") {
    model = edmd_fit(data, dict, opts.rcond);
  } else if (opts.method == "ridge") {
    model = ridge_fit(data, dict, opts.delta);
  } else {
    if (dict.kind() != DictionaryKind::Linear) throw ContractError("--method dmd implies --dict linear");
    model = dmd_fit(data, opts.rcond);
  }
  write_json_file(opts.out, model->to_json());
  std::cout << opts.method << " fit: K is " << model->feature_dim() << "x" << model->feature_dim()
            << " from " << model->sample_count() << " samples -> " << opts.out.string() << "\n";
  return 0;
}

// --- fit-stream --------------------------------------------------------------

struct FitStreamOptions {
  fs::path data;
  DictOptions dict;
  double delta = kDefaultDelta;
  std::string snapshots;
  Index every = 0;
  fs::path resume;
  fs::path out = "stream_out";
};

int run_fit_stream(const FitStreamOptions& opts) {
  const SnapshotPairs data = ingest_csv(opts.data);
  std::optional<StreamState> state;
  if (!opts.resume.empty()) {
    state = StreamState::from_json(read_json(opts.resume));
    if (state->dictionary().state_dim() != data.state_dim()) {
      throw ContractError("--resume: checkpoint dictionary does not match the data dimension");
    }
  } else {
    state.emplace(make_dictionary(opts.dict, data), opts.delta);
  }
  const Index start = state->count();
  const Index end = start + data.size();
  std::vector<Index> points;
  if (!opts.snapshots.empty()) points = parse_index_list(opts.snapshots);
  const auto wanted = [&](Index n) {
    if (n == end) return true;
    if (opts.every > 0 && n % opts.every == 0) return true;
    return std::find(points.begin(), points.end(), n) != points.end();
  };

  fs::create_directories(opts.out);
  write_json_file(opts.out / "dictionary.json", state->dictionary().to_json());
  for (Index i = 0; i < data.size(); ++i) {
    state->update(data.past().col(i), data.future().col(i));
    const Index n = state->count();
    if (wanted(n)) {
      const auto path = opts.out / ("model_M" + std::to_string(n) + ".json");
      write_json_file(path, state->current_operator().to_json());
      std::cout << "checkpoint M=" << n << " -> " << path.string() << "\n";
    }
  }
  write_json_file(opts.out / "stream_state.json", state->to_json());
  return 0;
}

// --- predict -----------------------------------------------------------------

struct PredictOptions {
  fs::path model;
  fs::path data;
  Index start = 0;
  Index horizon = 50;
  double rcond = kDefaultRcond;
  fs::path out = "prediction.csv";
};

int run_predict(const PredictOptions& opts) {
  KoopmanModel model = KoopmanModel::from_json(read_json(opts.model));
  const SnapshotPairs data = ingest_csv(opts.data);
  const Matrix states = data.trajectory();
  const Index trained = std::max<Index>(model.sample_count(), 1);
  if (trained + 1 > states.cols()) {
    throw ContractError("--data: model was trained on " + std::to_string(trained) +
                        " samples but the trajectory has only " + std::to_string(states.cols()) +
                        " states");
  }
  if (opts.start < 1 || opts.start > states.cols()) {
    throw ContractError("--start: must lie in 1.." + std::to_string(states.cols()));
  }
  if (opts.horizon < 1) throw ContractError("--horizon: must be >= 1");
  const Predictor predictor = Predictor::fit(states.leftCols(trained + 1), std::move(model), opts.rcond);
  const Matrix pred = predictor.predict(states.col(opts.start - 1), opts.horizon).rightCols(opts.horizon);
  const Index available = std::max<Index>(0, std::min(opts.horizon, states.cols() - opts.start));
  Matrix truth;
  std::ostringstream csv;
  if (available == opts.horizon) {
    truth = states.middleCols(opts.start, opts.horizon);
    write_prediction_csv(csv, pred, truth, opts.start);
    std::cout << "horizon-average MSE " << format_double(rolling_mse(truth, pred)) << "\n";
  } else {
    write_prediction_csv(csv, pred, Matrix{}, opts.start);
  }
  write_file(opts.out, csv.str());
  return 0;
}

// --- spectrum ----------------------------------------------------------------

struct SpectrumOptions {
  fs::path model;
  fs::path out = "spectrum.csv";
  Index eigenfunction = -1;
  std::vector<double> grid{-3.0, 3.0, 100, -3.0, 3.0, 100};
  fs::path field_out = "eigenfunction.csv";
};

int run_spectrum(const SpectrumOptions& opts) {
  const KoopmanModel model = KoopmanModel::from_json(read_json(opts.model));
  const EigenDecomposition eigs = spectrum(model);
  std::ostringstream csv;
  write_spectrum_csv(csv, eigs);
  write_file(opts.out, csv.str());
  std::cout << "leading eigenvalue " << format_double(eigs.eigenvalues(0).real()) << " + "
            << format_double(eigs.eigenvalues(0).imag()) << "i -> " << opts.out.string() << "\n";
  if (opts.eigenfunction >= 0) {
    if (opts.grid.size() != 6) throw ContractError("--grid: expected x1min,x1max,n1,x2min,x2max,n2");
    GridSpec grid{opts.grid[0], opts.grid[1], static_cast<Index>(opts.grid[2]),
                  opts.grid[3], opts.grid[4], static_cast<Index>(opts.grid[5])};
    std::ostringstream field;
    write_field_csv(field, eigenfunction_on_grid(model, opts.eigenfunction, grid));
    write_file(opts.field_out, field.str());
  }
  return 0;
}

// --- run / bench ---------------------------------------------------------------

struct ExperimentOptions {
  std::string system;
  fs::path config;
  fs::path input;
  std::vector<std::string> params;
  DictOptions dict;
  std::optional<double> delta;
  std::string snapshots;
  std::optional<Index> horizon;
  std::optional<Index> holdout_start;
  std::string mode;
  std::string delta_sweep;
  std::optional<Index> repeats;
  bool eig_every_step = false;
  bool no_timing = false;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& opts) {
  cmd->add_option("--system", opts.system, "vdp, ring, burgers or csv-input")
      ->check(CLI::IsMember({"vdp", "ring", "burgers", "csv-input"}));
  cmd->add_option("--config", opts.config, "Experiment JSON file");
  cmd->add_option("--input", opts.input, "Snapshot CSV for csv-input");
  cmd->add_option("--param", opts.params, "System parameter override key=value (repeatable)");
  cmd->add_option("--dict", opts.dict.kind, "Dictionary: linear or rbf")
      ->check(CLI::IsMember({"linear", "rbf"}));
  cmd->add_option("--rbf-count", opts.dict.rbf_count, "Number of Gaussian RBF centers");
  cmd->add_option("--sigma", opts.dict.sigma, "Gaussian RBF width");
  cmd->add_option("--delta", opts.delta, "Initialization parameter delta");
  cmd->add_option("--snapshots", opts.snapshots, "Checkpoints: a,b,c or start:stop:step");
  cmd->add_option("--horizon", opts.horizon, "Prediction horizon");
  cmd->add_option("--holdout-start", opts.holdout_start, "First predicted step in holdout mode");
  cmd->add_option("--mode", opts.mode, "Prediction mode")
      ->check(CLI::IsMember({"immediate", "holdout", "off"}));
  cmd->add_option("--delta-sweep", opts.delta_sweep, "Comma-separated deltas to score");
  cmd->add_option("--repeats", opts.repeats, "Timing repeats (median reported)");
  cmd->add_flag("--eig-every-step", opts.eig_every_step,
                "Both timing arms also compute eigenvalues at every step");
  cmd->add_flag("--no-timing", opts.no_timing, "Skip the timing comparison");
  cmd->add_option("--seed", opts.seed, "Seed for RBF centers");
  cmd->add_option("--out", opts.out, "Output directory");
}

ExperimentConfig resolve_experiment(const ExperimentOptions& opts, CLI::App* cmd) {
  ExperimentConfig cfg;
  if (!opts.config.empty()) {
    nlohmann::json doc = read_json(opts.config);
    if (!opts.system.empty()) doc["system"] = opts.system;
    cfg = ExperimentConfig::from_json(doc);
  } else {
    if (opts.system.empty()) throw ContractError("--system or --config is required");
    cfg = ExperimentConfig::preset(parse_system(opts.system));
  }
  if (!opts.input.empty()) cfg.input_csv = opts.input;
  apply_params(cfg.system_params, opts.params);
  if (!opts.dict.kind.empty()) {
    cfg.dictionary.kind = opts.dict.kind == "rbf" ? DictionaryKind::GaussianRbf : DictionaryKind::Linear;
  }
  if (cmd->count("--rbf-count")) cfg.dictionary.rbf_count = opts.dict.rbf_count;
  if (cmd->count("--sigma")) cfg.dictionary.sigma = opts.dict.sigma;
  if (opts.delta) cfg.delta = *opts.delta;
  if (!opts.snapshots.empty()) cfg.snapshot_points = parse_index_list(opts.snapshots);
  if (opts.horizon) cfg.prediction.horizon = *opts.horizon;
  if (opts.holdout_start) cfg.prediction.holdout_start = *opts.holdout_start;
  if (opts.mode == "off") {
    cfg.prediction.enabled = false;
  } else if (!opts.mode.empty()) {
    cfg.prediction.enabled = true;
    cfg.prediction.mode = opts.mode == "immediate" ? PredictionMode::Immediate : PredictionMode::Holdout;
  }
  if (!opts.delta_sweep.empty()) {
    cfg.delta_sweep.clear();
    std::stringstream ss(opts.delta_sweep);
    for (std::string part; std::getline(ss, part, ',');) {
      try {
        cfg.delta_sweep.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw ContractError("--delta-sweep: '" + part + "' is not a number");
      }
    }
  }
  if (opts.repeats) cfg.timing.repeats = *opts.repeats;
  if (opts.eig_every_step) cfg.timing.eig_every_step = true;
  if (opts.no_timing) cfg.timing.enabled = false;
  if (opts.seed) cfg.seed = *opts.seed;
  if (!opts.out.empty()) cfg.output_dir = opts.out;
  return cfg;
}

int run_run(const ExperimentOptions& opts, CLI::App* cmd) {
  const ExperimentConfig cfg = resolve_experiment(opts, cmd);
  const ExperimentResult result = run_experiment(cfg);
  for (const auto& cp : result.checkpoints) {
    std::cout << "M=" << cp.samples << "  ridge_rel_err=" << format_double(cp.ridge_rel_err);
    if (cp.horizon_mse) std::cout << "  horizon_mse=" << format_double(*cp.horizon_mse);
    std::cout << "\n";
  }
  if (result.timing) {
    for (const auto& t : result.timing->checkpoints) {
      std::cout << "timing M=" << t.samples << "  recursive=" << t.recursive_s
                << "s  batch=" << t.batch_s << "s  speedup=" << t.speedup << "\n";
    }
  }
  std::cout << "wrote " << result.files.size() << " files to " << cfg.output_dir.string() << "\n";
  return 0;
}

int run_bench(ExperimentOptions opts, CLI::App* cmd) {
  ExperimentConfig cfg = resolve_experiment(opts, cmd);
  if (!opts.snapshots.empty()) cfg.timing.checkpoints = cfg.snapshot_points;
  cfg.timing.enabled = true;
  const TimingReport report = bench_compare(cfg);
  const nlohmann::json doc = report.to_json();
  std::cout << "   M   recursive_s     batch_s   speedup\n";
  for (const auto& t : report.checkpoints) {
    std::cout << t.samples << "  " << t.recursive_s << "  " << t.batch_s << "  " << t.speedup << "\n";
  }
  std::cout << "log-log slopes: recursive " << report.recursive_slope << ", batch "
            << report.batch_slope << "\n";
  const fs::path out = opts.out.empty() ? fs::path("timing.json") : fs::path(opts.out);
  write_json_file(out, doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming and batch Koopman operator identification"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a dataset from a built-in system");
  simulate->add_option("system", sim.system, "vdp, ring or burgers")
      ->required()
      ->check(CLI::IsMember({"vdp", "ring", "burgers"}));
  simulate->add_option("--config", sim.config, "System parameter JSON");
  simulate->add_option("--param", sim.params, "Parameter override key=value (repeatable)");
  simulate->add_option("--out", sim.out, "Output directory");

  FitBatchOptions batch;
  auto* fit_batch = app.add_subcommand("fit-batch", "Fit K from the whole dataset");
  fit_batch->add_option("--data", batch.data, "Snapshot CSV")->required();
  fit_batch->add_option("--method", batch.method, "edmd, ridge or dmd")
      ->check(CLI::IsMember({"edmd", "ridge", "dmd"}));
  add_dict_options(fit_batch, batch.dict);
  fit_batch->add_option("--delta", batch.delta, "Ridge weight for --method ridge");
  fit_batch->add_option("--rcond", batch.rcond, "Pseudo-inverse cutoff");
  fit_batch->add_option("--out", batch.out, "Model JSON path");

  FitStreamOptions stream;
  auto* fit_stream = app.add_subcommand("fit-stream", "Stream samples through the recursive estimator");
  fit_stream->add_option("--data", stream.data, "Snapshot CSV")->required();
  add_dict_options(fit_stream, stream.dict);
  fit_stream->add_option("--delta", stream.delta, "Initialization parameter delta");
  fit_stream->add_option("--snapshots", stream.snapshots, "Sample counts to save models at");
  fit_stream->add_option("--every", stream.every, "Also save a model every N samples");
  fit_stream->add_option("--resume", stream.resume, "Continue from a stream_state.json");
  fit_stream->add_option("--out", stream.out, "Output directory");

  PredictOptions pred;
  auto* predict = app.add_subcommand("predict", "Roll a model forward from a trajectory state");
  predict->add_option("--model", pred.model, "Model JSON")->required();
  predict->add_option("--data", pred.data, "Trajectory snapshot CSV")->required();
  predict->add_option("--start", pred.start, "First predicted time index")->required();
  predict->add_option("--horizon", pred.horizon, "Number of predicted steps");
  predict->add_option("--rcond", pred.rcond, "Pseudo-inverse cutoff for the output map");
  predict->add_option("--out", pred.out, "Prediction CSV path");

  SpectrumOptions spec;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues and eigenfunctions of a model");
  spectrum_cmd->add_option("--model", spec.model, "Model JSON")->required();
  spectrum_cmd->add_option("--out", spec.out, "Spectrum CSV path");
  spectrum_cmd->add_option("--eigenfunction", spec.eigenfunction, "Eigenfunction index to sample");
  spectrum_cmd->add_option("--grid", spec.grid, "x1min x1max n1 x2min x2max n2")->expected(6)->delimiter(',');
  spectrum_cmd->add_option("--field-out", spec.field_out, "Eigenfunction CSV path");

  ExperimentOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "Streaming versus batch timing comparison");
  add_experiment_options(bench, bench_opts);

  ExperimentOptions run_opts;
  auto* run = app.add_subcommand("run", "Full experiment: data, checkpoints, prediction, timing");
  add_experiment_options(run, run_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*fit_batch) return run_fit_batch(batch);
    if (*fit_stream) return run_fit_stream(stream);
    if (*predict) return run_predict(pred);
    if (*spectrum_cmd) return run_spectrum(spec);
    if (*bench) return run_bench(bench_opts, bench);
    if (*run) return run_run(run_opts, run);
  } catch (const ContractError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
