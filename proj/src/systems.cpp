#include "streamkoop/systems.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <string>

#include "streamkoop/errors.hpp"

namespace streamkoop {

namespace {

constexpr double kMaxVdpSubstep = 0.01;
constexpr double kBurgersTargetDiffusion = 0.25;
constexpr double kBlowUp = 1e8;

template <class T>
T json_get(const nlohmann::json& doc, const char* key, T fallback) {
  return doc.contains(key) ? doc.at(key).get<T>() : fallback;
}

void check_state(const Vector& x, Index step, const char* system) {
  if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUp) {
    throw DivergenceError(std::string(system) + ": state diverged",
                          static_cast<std::size_t>(step));
  }
}

}  // namespace

// --- Van der Pol -----------------------------------------------------------

void VanDerPolConfig::validate() const {
  if (!(dt > 0.0)) throw ContractError("vdp: dt must be positive");
  if (steps < 1) throw ContractError("vdp: steps must be >= 1");
  if (!std::isfinite(mu) || !std::isfinite(x1) || !std::isfinite(x2)) {
    throw ContractError("vdp: parameters must be finite");
  }
}

nlohmann::json VanDerPolConfig::to_json() const {
  return {{"system", "vdp"}, {"mu", mu}, {"dt", dt}, {"steps", steps}, {"x0", {x1, x2}}};
}

VanDerPolConfig VanDerPolConfig::from_json(const nlohmann::json& doc) {
  VanDerPolConfig cfg;
  cfg.mu = json_get(doc, "mu", cfg.mu);
  cfg.dt = json_get(doc, "dt", cfg.dt);
  cfg.steps = json_get(doc, "steps", cfg.steps);
  if (doc.contains("x0")) {
    const auto x0 = doc.at("x0").get<std::vector<double>>();
    if (x0.size() != 2) throw ContractError("vdp: x0 must have two entries");
    cfg.x1 = x0[0];
    cfg.x2 = x0[1];
  }
  return cfg;
}

Vector vdp_rhs(double mu, const Vector& x) {
  Vector dx(2);
  dx(0) = x(1);
  dx(1) = mu * (1.0 - x(0) * x(0)) * x(1) - x(0);
  return dx;
}

SnapshotPairs simulate_vdp(const VanDerPolConfig& cfg) {
  cfg.validate();
  const Index substeps =
      cfg.dt > kMaxVdpSubstep ? static_cast<Index>(std::ceil(cfg.dt / kMaxVdpSubstep)) : 1;
  const double h = cfg.dt / static_cast<double>(substeps);
  const auto rhs = [mu = cfg.mu](const Vector& x) { return vdp_rhs(mu, x); };

  Matrix states(2, cfg.steps + 1);
  Vector x(2);
  x << cfg.x1, cfg.x2;
  states.col(0) = x;
  for (Index i = 1; i <= cfg.steps; ++i) {
    for (Index s = 0; s < substeps; ++s) x = rk4_step(rhs, x, h);
    check_state(x, i, "vdp");
    states.col(i) = x;
  }
  return SnapshotPairs::from_trajectory(states);
}

// --- Ring of oscillators ---------------------------------------------------

void RingOscillatorConfig::validate() const {
  if (n_osc < 3) throw ContractError("ring: n_osc must be >= 3");
  if (!(damping >= 0.0)) throw ContractError("ring: damping must be non-negative");
  if (!(dt > 0.0)) throw ContractError("ring: dt must be positive");
  if (steps < 1) throw ContractError("ring: steps must be >= 1");
  const auto n = static_cast<std::size_t>(n_osc);
  if ((!theta0.empty() && theta0.size() != n) || (!thetadot0.empty() && thetadot0.size() != n)) {
    throw ContractError("ring: initial vectors must have n_osc entries");
  }
}

Vector RingOscillatorConfig::initial_state() const {
  Vector x(2 * n_osc);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (Index k = 0; k < n_osc; ++k) {
    x(k) = theta0.empty() ? unif(rng) : theta0[static_cast<std::size_t>(k)];
  }
  for (Index k = 0; k < n_osc; ++k) {
    x(n_osc + k) = thetadot0.empty() ? unif(rng) : thetadot0[static_cast<std::size_t>(k)];
  }
  return x;
}

nlohmann::json RingOscillatorConfig::to_json() const {
  nlohmann::json doc = {{"system", "ring"}, {"n_osc", n_osc}, {"damping", damping},
                        {"dt", dt},         {"steps", steps}, {"seed", seed}};
  if (!theta0.empty()) doc["theta0"] = theta0;
  if (!thetadot0.empty()) doc["thetadot0"] = thetadot0;
  return doc;
}

RingOscillatorConfig RingOscillatorConfig::from_json(const nlohmann::json& doc) {
  RingOscillatorConfig cfg;
  cfg.n_osc = json_get(doc, "n_osc", cfg.n_osc);
  cfg.damping = json_get(doc, "damping", cfg.damping);
  cfg.dt = json_get(doc, "dt", cfg.dt);
  cfg.steps = json_get(doc, "steps", cfg.steps);
  cfg.seed = json_get(doc, "seed", cfg.seed);
  cfg.theta0 = json_get(doc, "theta0", cfg.theta0);
  cfg.thetadot0 = json_get(doc, "thetadot0", cfg.thetadot0);
  return cfg;
}

Matrix ring_laplacian(Index n) {
  if (n < 3) throw ContractError("ring_laplacian: need at least 3 nodes");
  Matrix l = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    l(k, k) = 2.0;
    l(k, (k + 1) % n) = -1.0;
    l(k, (k + n - 1) % n) = -1.0;
  }
  return l;
}

SnapshotPairs simulate_ring(const RingOscillatorConfig& cfg) {
  cfg.validate();
  const Index n = cfg.n_osc;
  const double d = cfg.damping;
  // The Laplacian is applied through its stencil; ring_laplacian() is the
  // dense form of the same operator.
  const auto rhs = [n, d](const Vector& x) {
    Vector dx(2 * n);
    for (Index k = 0; k < n; ++k) {
      const double lap = 2.0 * x(k) - x((k + 1) % n) - x((k + n - 1) % n);
      dx(k) = x(n + k);
      dx(n + k) = -lap - d * x(n + k);
    }
    return dx;
  };

  Matrix states(2 * n, cfg.steps + 1);
  Vector x = cfg.initial_state();
  states.col(0) = x;
  for (Index i = 1; i <= cfg.steps; ++i) {
    x = rk4_step(rhs, x, cfg.dt);
    check_state(x, i, "ring");
    states.col(i) = x;
  }
  return SnapshotPairs::from_trajectory(states);
}

// --- Burgers -----------------------------------------------------------------

const char* to_string(BurgersLayout layout) {
  switch (layout) {
    case BurgersLayout::Interior:
      return "interior";
    case BurgersLayout::WithRightBoundary:
      return "with_right_boundary";
    case BurgersLayout::FullGrid:
      return "full";
  }
  return "unknown";
}

void BurgersConfig::validate() const {
  if (!(dx > 0.0) || !(dt > 0.0)) throw ContractError("burgers: dx and dt must be positive");
  if (!(viscosity >= 0.0)) throw ContractError("burgers: viscosity must be non-negative");
  if (!(t_final > 0.0)) throw ContractError("burgers: t_final must be positive");
  if (substeps < 0) throw ContractError("burgers: substeps must be >= 0");
  const double cells = 1.0 / dx;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells || std::round(cells) < 2) {
    throw ContractError("burgers: 1/dx must be an integer >= 2");
  }
  if (sample_steps() < 1) throw ContractError("burgers: t_final must cover at least one step");
}

Index BurgersConfig::grid_points() const { return static_cast<Index>(std::round(1.0 / dx)) + 1; }

Index BurgersConfig::sample_steps() const {
  return static_cast<Index>(std::round(t_final / dt));
}

Index BurgersConfig::effective_substeps() const {
  if (substeps > 0) return substeps;
  const double r = dt * viscosity / (dx * dx);
  return std::max<Index>(1, static_cast<Index>(std::ceil(r / kBurgersTargetDiffusion - 1e-12)));
}

double BurgersConfig::diffusion_number() const {
  return dt / static_cast<double>(effective_substeps()) * viscosity / (dx * dx);
}

Index BurgersConfig::state_dim() const {
  switch (layout) {
    case BurgersLayout::Interior:
      return grid_points() - 2;
    case BurgersLayout::WithRightBoundary:
      return grid_points() - 1;
    case BurgersLayout::FullGrid:
      return grid_points();
  }
  return grid_points();
}

nlohmann::json BurgersConfig::to_json() const {
  return {{"system", "burgers"},
          {"viscosity", viscosity},
          {"dx", dx},
          {"dt", dt},
          {"t_final", t_final},
          {"amplitude", amplitude},
          {"substeps", substeps},
          {"effective_substeps", effective_substeps()},
          {"layout", to_string(layout)}};
}

BurgersConfig BurgersConfig::from_json(const nlohmann::json& doc) {
  BurgersConfig cfg;
  cfg.viscosity = json_get(doc, "viscosity", cfg.viscosity);
  cfg.dx = json_get(doc, "dx", cfg.dx);
  cfg.dt = json_get(doc, "dt", cfg.dt);
  cfg.t_final = json_get(doc, "t_final", cfg.t_final);
  cfg.amplitude = json_get(doc, "amplitude", cfg.amplitude);
  cfg.substeps = json_get(doc, "substeps", cfg.substeps);
  const auto layout = json_get<std::string>(doc, "layout", "interior");
  if (layout == "interior") {
    cfg.layout = BurgersLayout::Interior;
  } else if (layout == "with_right_boundary") {
    cfg.layout = BurgersLayout::WithRightBoundary;
  } else if (layout == "full") {
    cfg.layout = BurgersLayout::FullGrid;
  } else {
    throw ContractError("burgers: unknown layout '" + layout + "'");
  }
  return cfg;
}

Vector burgers_grid(const BurgersConfig& cfg) {
  const Index n = cfg.grid_points();
  Vector x(n);
  for (Index j = 0; j < n; ++j) x(j) = static_cast<double>(j) * cfg.dx;
  x(n - 1) = 1.0;
  return x;
}

Matrix simulate_burgers_field(const BurgersConfig& cfg) {
  cfg.validate();
  if (!cfg.is_stable()) {
    std::clog << "warning: burgers diffusion number " << cfg.diffusion_number()
              << " exceeds 0.5; the explicit scheme is unstable\n";
  }
  const Index n = cfg.grid_points();
  const Index steps = cfg.sample_steps();
  const Index substeps = cfg.effective_substeps();
  const double h = cfg.dt / static_cast<double>(substeps);
  const double diff = h * cfg.viscosity / (cfg.dx * cfg.dx);
  const double conv = h / (2.0 * cfg.dx);

  const Vector grid = burgers_grid(cfg);
  Vector u(n);
  for (Index j = 0; j < n; ++j) u(j) = cfg.amplitude * std::sin(2.0 * std::numbers::pi * grid(j));
  u(0) = 0.0;
  u(n - 1) = 0.0;

  Matrix field(n, steps + 1);
  field.col(0) = u;
  Vector next(n);
  for (Index i = 1; i <= steps; ++i) {
    for (Index s = 0; s < substeps; ++s) {
      next(0) = 0.0;
      next(n - 1) = 0.0;
      for (Index j = 1; j + 1 < n; ++j) {
        next(j) = u(j) - conv * u(j) * (u(j + 1) - u(j - 1)) +
                  diff * (u(j + 1) - 2.0 * u(j) + u(j - 1));
      }
      u.swap(next);
    }
    check_state(u, i, "burgers");
    field.col(i) = u;
  }
  return field;
}

SnapshotPairs simulate_burgers(const BurgersConfig& cfg) {
  const Matrix field = simulate_burgers_field(cfg);
  const Index n = field.rows();
  switch (cfg.layout) {
    case BurgersLayout::Interior:
      return SnapshotPairs::from_trajectory(field.middleRows(1, n - 2));
    case BurgersLayout::WithRightBoundary:
      return SnapshotPairs::from_trajectory(field.bottomRows(n - 1));
    case BurgersLayout::FullGrid:
      break;
  }
  return SnapshotPairs::from_trajectory(field);
}

}  // namespace streamkoop
