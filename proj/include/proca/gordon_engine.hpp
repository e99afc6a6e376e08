#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "proca/elliptic.hpp"
#include "proca/geometry.hpp"
#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

/// Evolved state of the optical-metric system: the rescaled potential
/// At_mu = n A_mu and its time derivative Pi_mu. On the constraint surface
/// the divergence of gamma^{ab} At_b vanishes and the Gauss constraint
/// holds; numerically both are monitor quantities.
struct GordonState {
  CovectorField atld;
  CovectorField pi;
  double t = 0.0;

  GordonState() = default;
  explicit GordonState(const GridSpec& grid) : atld(grid), pi(grid) {}
  void axpy(double c, const GordonState& other);
};

struct GordonMonitorReport {
  double t = 0.0;
  double atld0_l2 = 0.0, atldi_l2 = 0.0;
  double lorenz_l2 = 0.0, lorenz_linf = 0.0;
  double gauss_l2 = 0.0, gauss_linf = 0.0;
  /// Aggregate field-equation residual; set only when time levels were
  /// retained (final report of evolve with store_levels).
  std::optional<double> fieldeq_l2;
};

struct GordonEvolveOptions {
  double t_end = 1.0;
  double dt = 0.0;
  int sample_every = 1;
  bool store_levels = false;
  std::function<double(const GordonState&)> probe;
  std::function<void(const GordonState&, int step)> on_step;
};

struct GordonEvolveResult {
  GordonState state;
  std::vector<GordonMonitorReport> monitors;
  std::optional<std::array<GordonState, 3>> levels;
  std::vector<double> probe_series;
  double dt = 0.0;
};

/// Engine for the optical-metric wave equation on a flat background with a
/// static, spatially varying refractive index: constrained initialization
/// via the Gauss constraint, RK4 method-of-lines evolution of At_mu with
/// all covariant derivatives expanded through the precomputed Christoffel
/// and Ricci fields, and divergence/Gauss monitoring.
class GordonEngine {
 public:
  GordonEngine(const MediumSpec& medium, const GridSpec& grid);
  GordonEngine(const MediumSpec& medium, const GridSpec& grid,
               GeometryBundle geometry);

  const GridSpec& grid() const { return grid_; }
  const MediumSpec& medium() const { return medium_; }
  const GeometryBundle& geometry() const { return geom_; }
  const GaussOperator& gauss_operator() const { return gauss_op_; }

  /// Fastest characteristic speed 1/min(n).
  double max_speed() const;
  double max_stable_dt() const;
  double dt_from_cfl(double cfl) const;

  /// Completes free data (At_i, Pi_i): At_0 from the Gauss-constraint
  /// solve, Pi_0 from the divergence constraint on the initial slice.
  /// Requires mu_p > 0.
  GordonState init_from_free_data(const Vec3Field& atld_i,
                                  const Vec3Field& pi_i, double tol = 1e-10,
                                  int max_iter = 500) const;

  void rhs(const GordonState& state, GordonState& out) const;
  GordonState step(const GordonState& state, double dt) const;
  GordonMonitorReport monitors(const GordonState& state) const;
  GordonEvolveResult evolve(GordonState state,
                            const GordonEvolveOptions& opts) const;

  /// L2 residual of the first-order field equations per spacetime
  /// component from three stored levels. The time component is the Gauss
  /// residual (no second time differences enter it).
  std::array<double, 4> fieldeq_residual(
      const std::array<GordonState, 3>& levels) const;

 private:
  struct Workspace;
  void rhs_ws(const GordonState& state, GordonState& out, Workspace& ws) const;
  void check_state(const GordonState& s) const;
  /// div-constraint combination  gamma^{00} (Pi_0 - Gamma^s_{00} At_s)
  /// + sum_i (d_i At_i - Gamma^s_{ii} At_s); zero on constrained data.
  ScalarField lorenz_field(const GordonState& s) const;

  MediumSpec medium_;
  GridSpec grid_;
  GeometryBundle geom_;
  GaussOperator gauss_op_;
  double mu2_ = 0.0;
};

}  // namespace proca
