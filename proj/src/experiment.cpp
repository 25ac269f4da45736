#include "streamkoop/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "streamkoop/batch.hpp"
#include "streamkoop/csv.hpp"
#include "streamkoop/errors.hpp"
#include "streamkoop/predictor.hpp"
#include "streamkoop/spectral.hpp"
#include "streamkoop/stream.hpp"
#include "streamkoop/systems.hpp"

namespace streamkoop {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_text(const std::filesystem::path& path, const std::string& text,
                std::vector<std::filesystem::path>& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
  files.push_back(path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc,
                std::vector<std::filesystem::path>& files) {
  write_text(path, doc.dump(2) + "\n", files);
}

GridSpec grid_from_json(const nlohmann::json& doc) {
  GridSpec grid;
  const auto axis = [&](const char* key, double& lo, double& hi, Index& count) {
    if (!doc.contains(key)) return;
    const auto v = doc.at(key).get<std::vector<double>>();
    if (v.size() != 3) throw ContractError(std::string("grid.") + key + ": expected [min, max, count]");
    lo = v[0];
    hi = v[1];
    count = static_cast<Index>(v[2]);
  };
  axis("x1", grid.x1_min, grid.x1_max, grid.x1_count);
  axis("x2", grid.x2_min, grid.x2_max, grid.x2_count);
  return grid;
}

bool is_single_trajectory(const SnapshotPairs& pairs) {
  for (Index i = 0; i + 1 < pairs.size(); ++i) {
    if (pairs.future().col(i) != pairs.past().col(i + 1)) return false;
  }
  return true;
}

struct Window {
  Index start_state;  // time index of the rollout's initial state
  Index first;        // first compared time index
};

Window prediction_window(const PredictionSpec& spec, Index samples) {
  if (spec.mode == PredictionMode::Immediate) return {samples, samples + 1};
  return {spec.holdout_start - 1, spec.holdout_start};
}

struct PredictionOutcome {
  double horizon_mse;
  Vector step_mse;
};

PredictionOutcome evaluate_prediction(const KoopmanModel& model, const Matrix& states,
                                      const PredictionSpec& spec, Index samples) {
  const Window w = prediction_window(spec, samples);
  if (w.first + spec.horizon - 1 >= states.cols()) {
    throw ContractError("prediction: window ends at t=" +
                        std::to_string(w.first + spec.horizon - 1) + " but data stops at t=" +
                        std::to_string(states.cols() - 1));
  }
  const Predictor predictor = Predictor::fit(states.leftCols(samples + 1), model);
  const Matrix rollout = predictor.predict(states.col(w.start_state), spec.horizon);
  const Matrix pred = rollout.rightCols(spec.horizon);
  const Matrix truth = states.middleCols(w.first, spec.horizon);
  return {rolling_mse(truth, pred), per_step_mse(truth, pred)};
}

std::vector<Index> sorted_unique(std::vector<Index> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const char* to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::Vdp:
      return "vdp";
    case SystemKind::Ring:
      return "ring";
    case SystemKind::Burgers:
      return "burgers";
    case SystemKind::CsvInput:
      return "csv-input";
  }
  return "unknown";
}

const char* to_string(PredictionMode mode) {
  return mode == PredictionMode::Immediate ? "immediate" : "holdout";
}

SystemKind parse_system(const std::string& name) {
  if (name == "vdp") return SystemKind::Vdp;
  if (name == "ring") return SystemKind::Ring;
  if (name == "burgers") return SystemKind::Burgers;
  if (name == "csv-input" || name == "csv") return SystemKind::CsvInput;
  throw ContractError("system: unknown system '" + name + "'");
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  const auto to_index = [&](const std::string& s) -> Index {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) {
      throw ContractError("snapshots: '" + s + "' is not an integer");
    }
    return static_cast<Index>(v);
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ContractError("snapshots: range must be start:stop:step");
    const Index start = to_index(parts[0]);
    const Index stop = to_index(parts[1]);
    const Index step = to_index(parts[2]);
    if (step < 1) throw ContractError("snapshots: range step must be >= 1");
    for (Index v = start; v <= stop; v += step) out.push_back(v);
  } else {
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
      if (!part.empty()) out.push_back(to_index(part));
    }
  }
  if (out.empty()) throw ContractError("snapshots: empty list");
  return out;
}

void ExperimentConfig::validate() const {
  if (!(delta > 0.0)) throw ContractError("delta: must be positive");
  if (snapshot_points.empty()) throw ContractError("snapshot_points: must not be empty");
  for (std::size_t i = 0; i < snapshot_points.size(); ++i) {
    if (snapshot_points[i] < 1) throw ContractError("snapshot_points: entries must be >= 1");
    if (i > 0 && snapshot_points[i] <= snapshot_points[i - 1]) {
      throw ContractError("snapshot_points: must be strictly increasing");
    }
  }
  if (prediction.horizon < 1) throw ContractError("prediction.horizon: must be >= 1");
  if (prediction.mode == PredictionMode::Holdout && prediction.holdout_start < 1) {
    throw ContractError("prediction.holdout_start: must be >= 1");
  }
  if (timing.repeats < 1) throw ContractError("timing.repeats: must be >= 1");
  for (std::size_t i = 0; i < timing.checkpoints.size(); ++i) {
    if (timing.checkpoints[i] < 1 || (i > 0 && timing.checkpoints[i] <= timing.checkpoints[i - 1])) {
      throw ContractError("timing.checkpoints: must be positive and strictly increasing");
    }
  }
  for (const double d : delta_sweep) {
    if (!(d > 0.0)) throw ContractError("delta_sweep: entries must be positive");
  }
  if (dictionary.kind == DictionaryKind::GaussianRbf) {
    if (dictionary.rbf_count < 1) throw ContractError("dictionary.rbf_count: must be >= 1");
    if (!(dictionary.sigma > 0.0)) throw ContractError("dictionary.sigma: must be positive");
  }
  if (eigenfunctions < 0) throw ContractError("eigenfunctions: must be >= 0");
  if (system == SystemKind::CsvInput && input_csv.empty()) {
    throw ContractError("input: csv-input requires an input path");
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json dict = {{"kind", streamkoop::to_string(dictionary.kind)}};
  if (dictionary.kind == DictionaryKind::GaussianRbf) {
    dict["count"] = dictionary.rbf_count;
    dict["sigma"] = dictionary.sigma;
    dict["include_state"] = dictionary.include_state;
  }
  nlohmann::json doc = {
      {"system", streamkoop::to_string(system)},
      {"system_params", system_params},
      {"dictionary", dict},
      {"delta", delta},
      {"snapshot_points", snapshot_points},
      {"prediction",
       {{"enabled", prediction.enabled},
        {"mode", streamkoop::to_string(prediction.mode)},
        {"horizon", prediction.horizon},
        {"holdout_start", prediction.holdout_start}}},
      {"timing",
       {{"enabled", timing.enabled},
        {"repeats", timing.repeats},
        {"eig_every_step", timing.eig_every_step},
        {"checkpoints", timing.checkpoints}}},
      {"delta_sweep", delta_sweep},
      {"eigenfunctions", eigenfunctions},
      {"grid", grid},
      {"seed", seed},
      {"output_dir", output_dir.string()},
  };
  if (!input_csv.empty()) doc["input"] = input_csv.string();
  return doc;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  try {
    const SystemKind system = parse_system(doc.at("system").get<std::string>());
    ExperimentConfig cfg = preset(system);
    if (doc.contains("system_params")) {
      for (const auto& [key, value] : doc.at("system_params").items()) {
        cfg.system_params[key] = value;
      }
    }
    if (doc.contains("input")) cfg.input_csv = doc.at("input").get<std::string>();
    if (doc.contains("dictionary")) {
      const auto& d = doc.at("dictionary");
      const auto kind = d.value("kind", std::string(streamkoop::to_string(cfg.dictionary.kind)));
      if (kind == "linear") {
        cfg.dictionary.kind = DictionaryKind::Linear;
      } else if (kind == "rbf") {
        cfg.dictionary.kind = DictionaryKind::GaussianRbf;
      } else {
        throw ContractError("dictionary.kind: unknown kind '" + kind + "'");
      }
      cfg.dictionary.rbf_count = d.value("count", cfg.dictionary.rbf_count);
      cfg.dictionary.sigma = d.value("sigma", cfg.dictionary.sigma);
      cfg.dictionary.include_state = d.value("include_state", cfg.dictionary.include_state);
    }
    cfg.delta = doc.value("delta", cfg.delta);
    if (doc.contains("snapshot_points")) {
      const auto& s = doc.at("snapshot_points");
      cfg.snapshot_points =
          s.is_string() ? parse_index_list(s.get<std::string>()) : s.get<std::vector<Index>>();
    }
    if (doc.contains("prediction")) {
      const auto& p = doc.at("prediction");
      cfg.prediction.enabled = p.value("enabled", cfg.prediction.enabled);
      const auto mode = p.value("mode", std::string(streamkoop::to_string(cfg.prediction.mode)));
      if (mode == "immediate") {
        cfg.prediction.mode = PredictionMode::Immediate;
      } else if (mode == "holdout") {
        cfg.prediction.mode = PredictionMode::Holdout;
      } else {
        throw ContractError("prediction.mode: unknown mode '" + mode + "'");
      }
      cfg.prediction.horizon = p.value("horizon", cfg.prediction.horizon);
      cfg.prediction.holdout_start = p.value("holdout_start", cfg.prediction.holdout_start);
    }
    if (doc.contains("timing")) {
      const auto& t = doc.at("timing");
      cfg.timing.enabled = t.value("enabled", cfg.timing.enabled);
      cfg.timing.repeats = t.value("repeats", cfg.timing.repeats);
      cfg.timing.eig_every_step = t.value("eig_every_step", cfg.timing.eig_every_step);
      if (t.contains("checkpoints")) {
        cfg.timing.checkpoints = t.at("checkpoints").get<std::vector<Index>>();
      }
    }
    if (doc.contains("delta_sweep")) cfg.delta_sweep = doc.at("delta_sweep").get<std::vector<double>>();
    cfg.eigenfunctions = doc.value("eigenfunctions", cfg.eigenfunctions);
    if (doc.contains("grid")) cfg.grid = doc.at("grid");
    cfg.seed = doc.value("seed", cfg.seed);
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("experiment config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::preset(SystemKind system) {
  ExperimentConfig cfg;
  cfg.system = system;
  cfg.delta = kDefaultDelta;
  switch (system) {
    case SystemKind::Vdp:
      cfg.system_params = VanDerPolConfig{}.to_json();
      cfg.dictionary = {DictionaryKind::GaussianRbf, 60, 0.3, false};
      cfg.snapshot_points = {500, 1000, 1500, 2000, 2500};
      cfg.prediction.enabled = false;
      cfg.timing = {true, 1, false, {1500, 2000, 2500}};
      cfg.eigenfunctions = 2;
      break;
    case SystemKind::Ring: {
      RingOscillatorConfig ring;
      ring.steps = 460;
      cfg.system_params = ring.to_json();
      cfg.snapshot_points = parse_index_list("50:300:10");
      cfg.prediction = {true, PredictionMode::Holdout, 50, 401};
      cfg.timing = {true, 1, false, {200, 250, 300}};
      break;
    }
    case SystemKind::Burgers: {
      BurgersConfig burgers;
      // Sampled every 0.001 so 760 steps stay inside t in [0, 1] and the
      // explicit scheme is stable without substeps.
      burgers.dt = 0.001;
      burgers.t_final = 0.76;
      cfg.system_params = burgers.to_json();
      cfg.snapshot_points = parse_index_list("50:500:10");
      cfg.prediction = {true, PredictionMode::Holdout, 50, 701};
      cfg.timing = {true, 1, false, {350, 400, 450, 500}};
      break;
    }
    case SystemKind::CsvInput:
      cfg.system_params = nlohmann::json::object();
      cfg.snapshot_points = {};
      cfg.prediction.enabled = false;
      break;
  }
  return cfg;
}

Dataset generate_dataset(const ExperimentConfig& cfg) {
  switch (cfg.system) {
    case SystemKind::Vdp: {
      const auto sys = VanDerPolConfig::from_json(cfg.system_params);
      auto pairs = simulate_vdp(sys);
      Matrix states = pairs.trajectory();
      return {std::move(pairs), std::move(states), sys.to_json()};
    }
    case SystemKind::Ring: {
      const auto sys = RingOscillatorConfig::from_json(cfg.system_params);
      auto pairs = simulate_ring(sys);
      Matrix states = pairs.trajectory();
      return {std::move(pairs), std::move(states), sys.to_json()};
    }
    case SystemKind::Burgers: {
      const auto sys = BurgersConfig::from_json(cfg.system_params);
      auto pairs = simulate_burgers(sys);
      Matrix states = pairs.trajectory();
      return {std::move(pairs), std::move(states), sys.to_json()};
    }
    case SystemKind::CsvInput: {
      auto pairs = ingest_csv(cfg.input_csv);
      Matrix states = is_single_trajectory(pairs) ? pairs.trajectory() : Matrix{};
      return {std::move(pairs), std::move(states),
              {{"system", "csv-input"}, {"input", cfg.input_csv.string()}}};
    }
  }
  throw ContractError("system: unsupported");
}

Dictionary build_dictionary(const ExperimentConfig& cfg, const Matrix& training_states) {
  if (cfg.dictionary.kind == DictionaryKind::Linear) {
    return Dictionary::linear(training_states.rows());
  }
  return Dictionary::rbf_from_data(training_states, cfg.dictionary.rbf_count,
                                   cfg.dictionary.sigma, cfg.seed, cfg.dictionary.include_state);
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractError("log_log_slope: need at least two matching points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ContractError("log_log_slope: x values are identical");
  return (n * sxy - sx * sy) / denom;
}

nlohmann::json TimingReport::to_json() const {
  nlohmann::json cps = nlohmann::json::array();
  for (const auto& c : checkpoints) {
    cps.push_back({{"M", c.samples},
                   {"recursive_cum_s", c.recursive_s},
                   {"batch_cum_s", c.batch_s},
                   {"speedup", c.speedup},
                   {"ridge_rel_err", c.ridge_rel_err},
                   {"pinv_rel_err", c.pinv_rel_err}});
  }
  return {{"feature_dim", feature_dim},
          {"repeats", repeats},
          {"eig_every_step", eig_every_step},
          {"lift_s", lift_s},
          {"recursive_total_s", recursive_total_s},
          {"batch_total_s", batch_total_s},
          {"recursive_slope", recursive_slope},
          {"batch_slope", batch_slope},
          {"checkpoints", std::move(cps)}};
}

TimingReport bench_compare(const Matrix& lifted_past, const Matrix& lifted_future,
                           const BenchOptions& options) {
  if (lifted_past.rows() != lifted_future.rows() || lifted_past.cols() != lifted_future.cols()) {
    throw ContractError("bench: lifted snapshot shapes differ");
  }
  if (options.repeats < 1) throw ContractError("bench: repeats must be >= 1");
  const std::vector<Index> checkpoints = sorted_unique(options.checkpoints);
  if (checkpoints.empty() || checkpoints.front() < 1) {
    throw ContractError("bench: checkpoints must be non-empty and positive");
  }
  const Index last = checkpoints.back();
  if (last > lifted_past.cols()) {
    throw ContractError("bench: checkpoint " + std::to_string(last) + " exceeds " +
                        std::to_string(lifted_past.cols()) + " samples");
  }
  const Index k = lifted_past.rows();
  const Dictionary features = Dictionary::linear(k);
  const std::size_t n_cp = checkpoints.size();

  std::vector<std::vector<double>> rec(n_cp), bat(n_cp);
  volatile double sink = 0.0;

  for (Index rep = 0; rep < options.repeats; ++rep) {
    {
      StreamState state(features, options.delta);
      std::size_t next = 0;
      double elapsed = 0.0;
      for (Index m = 0; m < last; ++m) {
        const auto start = Clock::now();
        state.update_lifted(lifted_past.col(m), lifted_future.col(m));
        const Matrix op = state.operator_matrix();
        if (options.eig_every_step) {
          Eigen::EigenSolver<Matrix> es(op, false);
          sink = sink + es.eigenvalues()(0).real();
        }
        sink = sink + op(0, 0);
        elapsed += seconds_since(start);
        if (m + 1 == checkpoints[next]) rec[next++].push_back(elapsed);
      }
    }
    {
      std::size_t next = 0;
      double elapsed = 0.0;
      for (Index m = 0; m < last; ++m) {
        const auto start = Clock::now();
        const Matrix op = edmd_operator(lifted_past.leftCols(m + 1), lifted_future.leftCols(m + 1),
                                        options.rcond);
        if (options.eig_every_step) {
          Eigen::EigenSolver<Matrix> es(op, false);
          sink = sink + es.eigenvalues()(0).real();
        }
        sink = sink + op(0, 0);
        elapsed += seconds_since(start);
        if (m + 1 == checkpoints[next]) bat[next++].push_back(elapsed);
      }
    }
  }

  TimingReport report;
  report.feature_dim = k;
  report.repeats = options.repeats;
  report.eig_every_step = options.eig_every_step;

  // Untimed cross-checks of the streamed operator against both batch fits.
  StreamState state(features, options.delta);
  std::size_t next = 0;
  std::vector<double> xs, rec_t, bat_t;
  for (Index m = 0; m < last; ++m) {
    state.update_lifted(lifted_past.col(m), lifted_future.col(m));
    if (m + 1 != checkpoints[next]) continue;
    const Matrix streamed = state.operator_matrix();
    const auto cols = m + 1;
    TimingCheckpoint cp;
    cp.samples = cols;
    cp.recursive_s = median(rec[next]);
    cp.batch_s = median(bat[next]);
    cp.speedup = cp.batch_s / cp.recursive_s;
    cp.ridge_rel_err = relative_frobenius(
        streamed, ridge_operator(lifted_past.leftCols(cols), lifted_future.leftCols(cols),
                                 options.delta));
    cp.pinv_rel_err = relative_frobenius(
        streamed, edmd_operator(lifted_past.leftCols(cols), lifted_future.leftCols(cols),
                                options.rcond));
    report.checkpoints.push_back(cp);
    xs.push_back(static_cast<double>(cols));
    rec_t.push_back(cp.recursive_s);
    bat_t.push_back(cp.batch_s);
    ++next;
  }
  report.recursive_total_s = report.checkpoints.back().recursive_s;
  report.batch_total_s = report.checkpoints.back().batch_s;
  if (xs.size() >= 2) {
    report.recursive_slope = log_log_slope(xs, rec_t);
    report.batch_slope = log_log_slope(xs, bat_t);
  }
  return report;
}

TimingReport bench_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = generate_dataset(cfg);
  const std::vector<Index> checkpoints =
      cfg.timing.checkpoints.empty() ? cfg.snapshot_points : cfg.timing.checkpoints;
  const Index last = *std::max_element(checkpoints.begin(), checkpoints.end());
  if (last > data.pairs.size()) {
    throw ContractError("timing.checkpoints: " + std::to_string(last) + " exceeds the " +
                        std::to_string(data.pairs.size()) + " available samples");
  }
  const SnapshotPairs training = data.pairs.head(last);
  const Dictionary dict = build_dictionary(cfg, training.past());

  const auto start = Clock::now();
  const Matrix past = dict.lift_batch(training.past());
  const Matrix future = dict.lift_batch(training.future());
  const double lift_s = seconds_since(start);

  BenchOptions options;
  options.checkpoints = checkpoints;
  options.repeats = cfg.timing.repeats;
  options.eig_every_step = cfg.timing.eig_every_step;
  options.delta = cfg.delta;
  TimingReport report = bench_compare(past, future, options);
  report.lift_s = lift_s;
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  auto& files = result.files;

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());
  const auto path = [&](const std::string& name) { return cfg.output_dir / name; };

  const Dataset data = generate_dataset(cfg);
  const Index last = cfg.snapshot_points.back();
  if (last > data.pairs.size()) {
    throw ContractError("snapshot_points: " + std::to_string(last) + " exceeds the " +
                        std::to_string(data.pairs.size()) + " available samples");
  }
  if (cfg.prediction.enabled && data.states.size() == 0) {
    throw ContractError("prediction: input pairs do not form a single trajectory");
  }

  {
    std::ostringstream csv;
    write_snapshots_csv(csv, data.pairs);
    write_text(path("dataset.csv"), csv.str(), files);
  }
  write_json(path("dataset_config.json"), data.config, files);
  write_json(path("experiment_config.json"), cfg.to_json(), files);

  const SnapshotPairs training = data.pairs.head(last);
  const Dictionary dict = build_dictionary(cfg, training.past());
  write_json(path("dictionary.json"), dict.to_json(), files);

  const GridSpec grid = grid_from_json(cfg.grid);
  const bool eigenfunction_output = cfg.eigenfunctions > 0 && dict.state_dim() == 2;

  std::ostringstream per_step, summary, equivalence;
  per_step << "checkpoint,step,t,mse\n";
  summary << "checkpoint,horizon_avg_mse\n";
  equivalence << "checkpoint,ridge_rel_err,pinv_rel_err\n";

  StreamState state(dict, cfg.delta);
  std::size_t next = 0;
  for (Index m = 0; m < last; ++m) {
    state.update(training.past().col(m), training.future().col(m));
    if (m + 1 != cfg.snapshot_points[next]) continue;
    ++next;
    const Index samples = m + 1;
    const std::string tag = "M" + std::to_string(samples);

    KoopmanModel model = state.current_operator();
    const SnapshotPairs seen = training.head(samples);
    CheckpointResult cp{samples, model, 0.0, 0.0, std::nullopt, Vector{}};
    cp.ridge_rel_err = relative_frobenius(model.matrix(), ridge_fit(seen, dict, cfg.delta).matrix());
    cp.pinv_rel_err = relative_frobenius(model.matrix(), edmd_fit(seen, dict).matrix());
    equivalence << samples << ',' << format_double(cp.ridge_rel_err) << ','
                << format_double(cp.pinv_rel_err) << '\n';

    const EigenDecomposition eigs = spectrum(model);
    {
      std::ostringstream csv;
      write_spectrum_csv(csv, eigs);
      write_text(path("spectrum_" + tag + ".csv"), csv.str(), files);
    }
    if (eigenfunction_output) {
      const Index count = std::min(cfg.eigenfunctions, model.feature_dim());
      for (Index j = 0; j < count; ++j) {
        std::ostringstream csv;
        write_field_csv(csv, eigenfunction_on_grid(model, j, grid));
        write_text(path("eigenfunction_" + tag + "_j" + std::to_string(j) + ".csv"), csv.str(),
                   files);
      }
    }
    if (cfg.prediction.enabled) {
      const auto outcome = evaluate_prediction(model, data.states, cfg.prediction, samples);
      const Index first = prediction_window(cfg.prediction, samples).first;
      for (Index s = 0; s < outcome.step_mse.size(); ++s) {
        per_step << samples << ',' << s + 1 << ',' << first + s << ','
                 << format_double(outcome.step_mse(s)) << '\n';
      }
      summary << samples << ',' << format_double(outcome.horizon_mse) << '\n';
      cp.horizon_mse = outcome.horizon_mse;
      cp.step_mse = outcome.step_mse;
    }
    if (samples == last) write_json(path("model_" + tag + ".json"), model.to_json(), files);
    result.checkpoints.push_back(std::move(cp));
  }

  write_text(path("equivalence.csv"), equivalence.str(), files);
  if (cfg.prediction.enabled) {
    write_text(path("mse_per_step.csv"), per_step.str(), files);
    write_text(path("mse_summary.csv"), summary.str(), files);
  }
  write_json(path("stream_state.json"), state.to_json(), files);

  if (!cfg.delta_sweep.empty()) {
    if (!cfg.prediction.enabled) {
      throw ContractError("delta_sweep: requires prediction to score each delta");
    }
    std::ostringstream csv;
    csv << "delta,horizon_avg_mse\n";
    for (const double delta : cfg.delta_sweep) {
      StreamState sweep(dict, delta);
      for (Index m = 0; m < last; ++m) sweep.update(training.past().col(m), training.future().col(m));
      const auto outcome =
          evaluate_prediction(sweep.current_operator(), data.states, cfg.prediction, last);
      csv << format_double(delta) << ',' << format_double(outcome.horizon_mse) << '\n';
      result.delta_sweep.emplace_back(delta, outcome.horizon_mse);
    }
    write_text(path("delta_sweep.csv"), csv.str(), files);
  }

  if (cfg.timing.enabled) {
    result.timing = bench_compare(cfg);
    write_json(path("timing.json"), result.timing->to_json(), files);
  }
  return result;
}

}  // namespace streamkoop
