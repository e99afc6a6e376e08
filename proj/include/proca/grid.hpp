#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "proca/errors.hpp"

namespace proca {

/// Uniform periodic Cartesian grid in 1 to 3 dimensions.
///
/// Points along axis d sit at x_d(j) = j * spacing(d), j = 0..points[d)-1,
/// and every field is periodic with period lengths[d]. Storage of grid
/// fields is row-major with axis 0 fastest.
struct GridSpec {
  int dim = 1;
  std::array<int, 3> points{1, 1, 1};
  std::array<double, 3> lengths{1.0, 1.0, 1.0};
  int order = 2;  // centered-stencil accuracy order, 2 or 4

  GridSpec() = default;
  GridSpec(int dim_, std::array<int, 3> points_, std::array<double, 3> lengths_,
           int order_ = 2);

  /// Convenience: cubic box, equal points per axis.
  static GridSpec isotropic(int dim, int points_per_axis, double length,
                            int order = 2);

  double spacing(int axis) const { return lengths[axis] / points[axis]; }
  double min_spacing() const;
  std::int64_t size() const {
    return std::int64_t(points[0]) * points[1] * points[2];
  }
  std::int64_t stride(int axis) const;
  /// Cell volume h_0 * ... * h_{dim-1}, used by the grid-weighted L2 norm.
  double cell_volume() const;
  /// Coordinate of grid point `flat` along `axis`.
  double coordinate(std::int64_t flat, int axis) const;

  bool operator==(const GridSpec&) const = default;
};

/// A real scalar field sampled on a GridSpec. Value semantics; the grid is
/// carried by value so fields are self-describing.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(static_cast<std::size_t>(grid.size()), fill) {}

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double c);
  /// this += a * x
  ScalarField& axpy(double a, const ScalarField& x);
  void fill(double v);

  /// Throws DivergenceError if any entry is NaN or Inf.
  void require_finite(const char* label, double t = 0.0) const;

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double c, ScalarField a);

/// Triple of scalar fields holding the spatial components of a covector.
using Vec3Field = std::array<ScalarField, 3>;

/// Four scalar fields holding a spacetime covector (components 0..3).
struct CovectorField {
  std::array<ScalarField, 4> comp;

  CovectorField() = default;
  explicit CovectorField(const GridSpec& grid)
      : comp{ScalarField(grid), ScalarField(grid), ScalarField(grid),
             ScalarField(grid)} {}
  ScalarField& operator[](int i) { return comp[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const {
    return comp[static_cast<std::size_t>(i)];
  }
};

/// Centered periodic finite-difference derivative along `axis` at the grid's
/// stencil order. Exact for constants. Throws ConfigError when axis >= dim.
ScalarField derivative(const ScalarField& f, int axis);
void apply_derivative(const ScalarField& f, int axis, ScalarField& out);

/// Compact centered Laplacian (summed second-derivative stencils over all
/// axes < dim) at the grid's stencil order.
ScalarField laplacian(const ScalarField& f);
void apply_laplacian(const ScalarField& f, ScalarField& out);

/// Fourier symbol s(theta) >= 0 of minus the one-axis second-derivative
/// stencil, evaluated at phase theta = k*h; multiply by 1/h^2 for the
/// physical symbol. Used by the spectral elliptic solver.
double laplacian_symbol_phase(double theta, int order);

/// Divergence of the first `dim` components of a spatial triple.
ScalarField divergence(const Vec3Field& v, const GridSpec& grid);

/// Grid-weighted L2 norm sqrt(sum f^2 * h^dim) and max-abs norm.
double norm_l2(const ScalarField& f);
double norm_linf(const ScalarField& f);

/// Deterministic band-limited random field: a sum of Fourier modes with
/// integer wavevectors 0 < |m| <= kmax, uniform amplitudes in [-1, 1] and
/// uniform phases, drawn from a fixed-seed generator. Zero mean by
/// construction; identical seeds give identical continuum fields at every
/// resolution. Throws ConfigError if kmax reaches the grid Nyquist mode.
ScalarField random_bandlimited(std::uint64_t seed, int kmax,
                               const GridSpec& grid);

}  // namespace proca
