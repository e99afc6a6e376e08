#pragma once

#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

/// Constant-coefficient problem (Lap_h - mass2) u = rhs on the periodic
/// grid, with Lap_h the same compact stencil the evolution uses. For
/// mass2 = 0 the rhs must have zero mean.
struct ScreenedPoissonProblem {
  ScalarField rhs;
  double mass2 = 0.0;
};

/// Direct solve in the discrete Fourier basis, dividing by the stencil
/// symbol minus mass2. Relative residual of the returned solution is
/// verified to be <= 1e-12.
ScalarField solve_screened_poisson(const ScreenedPoissonProblem& problem);

/// Variable-coefficient constraint operator of the time component of the
/// optical-metric field equations, in product-rule form:
///   L[u]   = n^2 Lap_h u + grad(n^2) . grad u - mu^2 n^2 u,
///   rhs(v) = n^2 div v + grad(n^2) . v,
/// so that constant n reduces exactly to n^2 (Lap_h - mu^2) at every
/// stencil order. Coefficients are cached at construction; apply/rhs are
/// reused verbatim by the evolution monitors.
class GaussOperator {
 public:
  GaussOperator(const MediumSpec& medium, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double mu_p() const { return mu_p_; }
  /// Mean of n^2; coefficient of the constant-n preconditioner.
  double mean_n2() const { return mean_n2_; }

  void apply(const ScalarField& u, ScalarField& out) const;
  ScalarField apply(const ScalarField& u) const;
  /// Right-hand side produced by the free data v_i = d_t A_i.
  ScalarField rhs(const Vec3Field& adot) const;

 private:
  GridSpec grid_;
  double mu_p_ = 0.0;
  double mean_n2_ = 1.0;
  ScalarField n2_;
  ScalarField mu2_n2_;
  Vec3Field grad_n2_;
};

/// Elliptic problem for the initial time component: operator and free data
/// plus iteration controls.
struct GaussOperatorProblem {
  MediumSpec medium;
  GridSpec grid;
  Vec3Field adot;
  double tol = 1e-10;
  int max_iter = 500;
};

/// BiCGStab solve of the Gauss constraint, preconditioned by the
/// constant-coefficient screened-Poisson inverse. Requires mu_p > 0.
/// Throws SolverError with the final residual on non-convergence.
ScalarField solve_gauss_constraint(const GaussOperatorProblem& problem);

/// Same solve against a prebuilt operator (shared with engine monitors).
ScalarField solve_gauss_constraint(const GaussOperator& op,
                                   const Vec3Field& adot, double tol,
                                   int max_iter);

/// Low-level Krylov solve L u = rhs for a prebuilt operator; the
/// free-data entry points build their rhs and defer here.
ScalarField solve_gauss_system(const GaussOperator& op, const ScalarField& rhs,
                               double tol, int max_iter);

}  // namespace proca
