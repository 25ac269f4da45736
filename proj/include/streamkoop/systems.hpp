#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "streamkoop/numlin.hpp"
#include "streamkoop/snapshots.hpp"

namespace streamkoop {

/// Classical fourth-order Runge-Kutta step for x' = f(x).
template <class Rhs>
Vector rk4_step(Rhs&& f, const Vector& x, double h) {
  const Vector k1 = f(x);
  const Vector k2 = f(x + 0.5 * h * k1);
  const Vector k3 = f(x + 0.5 * h * k2);
  const Vector k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Van der Pol: x1' = x2, x2' = mu (1 - x1^2) x2 - x1.
struct VanDerPolConfig {
  double mu = 0.2;
  double dt = 0.01;
  Index steps = 2500;
  double x1 = 2.0;
  double x2 = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
  static VanDerPolConfig from_json(const nlohmann::json& doc);
};

Vector vdp_rhs(double mu, const Vector& x);

/// Samples at t = i dt, i = 0..steps. Integration substeps never exceed 0.01.
SnapshotPairs simulate_vdp(const VanDerPolConfig& cfg);

// Ring of damped linear oscillators: theta_k'' = -(L theta)_k - d theta_k'.
// State ordering is (theta_1..theta_N, theta_1'..theta_N').
struct RingOscillatorConfig {
  Index n_osc = 100;
  double damping = 2.0;
  double dt = 0.1;
  Index steps = 500;
  /// Used to draw theta0 and thetadot0 uniformly from [-1, 1] when they are empty.
  std::uint64_t seed = 1;
  std::vector<double> theta0;
  std::vector<double> thetadot0;

  void validate() const;
  Vector initial_state() const;
  nlohmann::json to_json() const;
  static RingOscillatorConfig from_json(const nlohmann::json& doc);
};

/// Unweighted ring-graph Laplacian: 2 on the diagonal, -1 for k +/- 1 mod n.
Matrix ring_laplacian(Index n);

SnapshotPairs simulate_ring(const RingOscillatorConfig& cfg);

enum class BurgersLayout {
  Interior,            ///< nodes 1..n-2 (boundaries implicit)
  WithRightBoundary,   ///< nodes 1..n-1
  FullGrid,            ///< nodes 0..n-1
};

// Viscous Burgers u_t + u u_x = k u_xx on [0, 1], u(0, t) = u(1, t) = 0,
// u(x, 0) = amplitude * sin(2 pi x). Explicit forward Euler in time with
// central differences in space.
struct BurgersConfig {
  double viscosity = 0.01;
  double dx = 0.01;
  double dt = 0.02;
  double t_final = 1.0;
  double amplitude = 1.0;
  /// Euler substeps per sample interval; 0 picks the smallest count that
  /// keeps dt_sub * k / dx^2 <= 0.25.
  Index substeps = 0;
  BurgersLayout layout = BurgersLayout::Interior;

  void validate() const;
  Index grid_points() const;
  Index sample_steps() const;
  Index effective_substeps() const;
  /// k dt_sub / dx^2 for the substep actually taken.
  double diffusion_number() const;
  bool is_stable() const { return diffusion_number() <= 0.5; }
  Index state_dim() const;

  nlohmann::json to_json() const;
  static BurgersConfig from_json(const nlohmann::json& doc);
};

/// Grid node coordinates, 0..1 inclusive.
Vector burgers_grid(const BurgersConfig& cfg);

/// Full-grid field, one column per sample time (grid_points x (steps + 1)).
Matrix simulate_burgers_field(const BurgersConfig& cfg);

SnapshotPairs simulate_burgers(const BurgersConfig& cfg);

const char* to_string(BurgersLayout layout);

}  // namespace streamkoop
