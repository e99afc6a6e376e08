#pragma once

#include <array>
#include <optional>
#include <string>

#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

enum class SymbolKind { hyperbolic, elliptic3d, elliptic4d };

std::string to_string(SymbolKind kind);

/// Classification of the principal part (lambda - 1) d_t^2 + Laplacian of
/// the mass-metric wave operator. The characteristic speed is present only
/// in the hyperbolic case and equals 1/sqrt(1 - lambda).
struct SymbolClass {
  SymbolKind kind;
  std::optional<double> speed;
};

/// Total classification: hyperbolic for lambda < 1 (speed 1/sqrt(1-lambda)),
/// 3d-elliptic at lambda = 1, 4d-elliptic for lambda > 1.
SymbolClass classify_symbol(double lambda);

/// Symmetric spacetime rank-2 tensor sampled on a grid: ten independent
/// component fields, indices 0..3.
class SymTensorField {
 public:
  SymTensorField() = default;
  explicit SymTensorField(const GridSpec& grid);

  static int index(int a, int b);
  ScalarField& at(int a, int b) { return comp_[index(a, b)]; }
  const ScalarField& at(int a, int b) const { return comp_[index(a, b)]; }

 private:
  std::array<ScalarField, 10> comp_;
};

/// Inverse and forward components of a metric, with the determinant of the
/// forward components. `has_fwd` is false when the inverse components are
/// singular (mass metric at lambda = 1) and the forward data is absent.
struct MetricComponents {
  SymTensorField inv;
  SymTensorField fwd;
  ScalarField det;
  bool has_fwd = false;
};

/// Christoffel symbols Gamma^a_{bc} of the optical metric, symmetric in the
/// lower pair. Time-independent by construction (static medium).
class ChristoffelField {
 public:
  ChristoffelField() = default;
  explicit ChristoffelField(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  ScalarField& at(int a, int b, int c) {
    return comp_[4 * SymTensorField::index(b, c) + a];
  }
  const ScalarField& at(int a, int b, int c) const {
    return comp_[4 * SymTensorField::index(b, c) + a];
  }

 private:
  GridSpec grid_;
  std::array<ScalarField, 40> comp_;
};

struct RicciField {
  SymTensorField comp;
};

/// Gordon optical metric gamma^{ab} = g^{ab} + (1 - n^2) u^a u^b on the
/// Minkowski background with u = (1,0,0,0): gamma^{00} = -n^2, spatial part
/// the identity.
MetricComponents gordon_metric(const MediumSpec& medium, const GridSpec& grid);

/// Mass metric m^{ab} = g^{ab} + lambda u^a u^b: m^{00} = lambda - 1,
/// spatial part the identity. Forward components absent at lambda = 1.
MetricComponents mass_metric(const MediumSpec& medium, const GridSpec& grid);

/// Christoffel symbols of the static diagonal optical metric
/// diag(-1/n^2, 1, 1, 1) from closed forms in n and its grid gradients:
/// Gamma^0_{0i} = -(d_i n)/n and Gamma^i_{00} = -(d_i n)/n^3.
ChristoffelField christoffels_static(const MediumSpec& medium,
                                     const GridSpec& grid);

/// Ricci tensor from grid derivatives of the Christoffel fields with all
/// time derivatives dropped (static medium); the result is symmetrized.
RicciField ricci_static(const ChristoffelField& chris, const GridSpec& grid);

/// Max-norm of the antisymmetric part of the raw (unsymmetrized) Ricci
/// evaluation; a truncation-level diagnostic.
double ricci_antisymmetry_linf(const ChristoffelField& chris,
                               const GridSpec& grid);

/// Everything the optical-metric evolution needs, built once per medium and
/// grid. Immutable after construction; safe to share across runs.
struct GeometryBundle {
  MetricComponents gamma;
  MetricComponents mass;
  ChristoffelField chris;
  RicciField ricci;
  ScalarField n;
  ScalarField n2;
  Vec3Field dlog_n;  // l_i = (d_i n)/n, zero fields beyond the grid dimension
  /// Covariant derivative of the log-index gradient covector l (with
  /// l_0 = 0): cov_dlog_n[a][b] = D_a l_b. Static, so the a = 0 row is the
  /// pure Christoffel part.
  std::array<std::array<ScalarField, 4>, 4> cov_dlog_n;
};

GeometryBundle build_geometry(const MediumSpec& medium, const GridSpec& grid);

}  // namespace proca
