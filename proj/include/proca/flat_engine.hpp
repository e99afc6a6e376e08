#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "proca/elliptic.hpp"
#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

/// Evolved state of the flat-background system: the potential time
/// component and its evolved time derivative, the spatial components and
/// theirs, and the independently evolved phi = d_t A_0 with its derivative.
/// On the continuum constraint surface phi = da0 and
/// (1 - lambda) da0 = div(ai); numerically both are monitor quantities.
struct FlatState {
  ScalarField a0, da0;
  Vec3Field ai, dai;
  ScalarField phi, dphi;
  double t = 0.0;

  FlatState() = default;
  explicit FlatState(const GridSpec& grid);
  /// this += c * other over all field members (t untouched).
  void axpy(double c, const FlatState& other);
};

/// Per-sample norms of the constraint residuals and field amplitudes.
struct MonitorReport {
  double t = 0.0;
  double a0_l2 = 0.0, ai_l2 = 0.0, phi_l2 = 0.0;
  double c1_l2 = 0.0, c1_linf = 0.0;   // C1 = phi - d_t A_0
  double c2_l2 = 0.0, c2_linf = 0.0;   // C2 = (1-lambda) d_t A_0 - div A
  double gauss_l2 = 0.0, gauss_linf = 0.0;
};

struct EvolveOptions {
  double t_end = 1.0;
  double dt = 0.0;
  int sample_every = 1;
  bool store_levels = false;
  /// Optional per-step scalar probe (e.g. a single grid point), recorded at
  /// every step including t = 0.
  std::function<double(const FlatState&)> probe;
  /// Optional per-step callback (snapshots etc.), called after each step.
  std::function<void(const FlatState&, int step)> on_step;
};

struct FlatEvolveResult {
  FlatState state;
  std::vector<MonitorReport> monitors;
  /// Last three time levels, uniformly spaced, oldest first.
  std::optional<std::array<FlatState, 3>> levels;
  std::vector<double> probe_series;
  double dt = 0.0;
};

/// Method-of-lines engine for the constant-index flat-background system
/// with lambda < 1: constrained initialization, classical four-stage
/// Runge-Kutta stepping, and constraint monitoring.
class FlatEngine {
 public:
  FlatEngine(const MediumSpec& medium, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  const MediumSpec& medium() const { return medium_; }

  /// Fastest characteristic speed max(1/n, 1/sqrt(1-lambda)).
  double max_speed() const;
  /// Stability bound of the integrator for this grid and medium.
  double max_stable_dt() const;
  /// Conventional step from a CFL factor: dt = cfl * h_min / c_max.
  double dt_from_cfl(double cfl) const;

  /// Builds the constrained state from free data (A_i, d_t A_i):
  /// A_0 from the screened-Poisson solve, d_t A_0 and phi from the
  /// divergence constraint. Requires mu_p > 0.
  FlatState init_from_free_data(const Vec3Field& ai, const Vec3Field& dai) const;

  /// First-order-in-time right-hand side; writes the derivative into `out`.
  void rhs(const FlatState& state, FlatState& out) const;

  /// One RK4 step; throws CflError when dt exceeds the stability bound.
  FlatState step(const FlatState& state, double dt) const;

  MonitorReport monitors(const FlatState& state) const;

  FlatEvolveResult evolve(FlatState state, const EvolveOptions& opts) const;

  /// L2 residual of the second-order field equation per spacetime
  /// component, evaluated on three consecutive stored levels with centered
  /// time differences. The time component needs no second time derivative
  /// of A_0 (those terms cancel structurally): it reads only the center
  /// a0 and the outer-level ai fields.
  std::array<double, 4> fieldeq_residual(
      const std::array<FlatState, 3>& levels) const;

 private:
  void check_state(const FlatState& s) const;

  MediumSpec medium_;
  GridSpec grid_;
  double n_ = 1.0;
  double lambda_ = 0.0;
  double mu2_ = 0.0;
};

}  // namespace proca
