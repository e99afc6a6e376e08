#pragma once

#include <array>
#include <optional>

#include "proca/grid.hpp"

namespace proca {

/// Dielectric medium data: refractive index (constant or a static positive
/// scalar field), mass-metric parameter lambda, and the Proca mass mu_p.
/// The medium four-velocity is fixed to u = (1, 0, 0, 0), normalized
/// against the Minkowski background diag(-1, 1, 1, 1).
class MediumSpec {
 public:
  static constexpr std::array<double, 4> four_velocity{1.0, 0.0, 0.0, 0.0};

  static MediumSpec constant_index(double n, double lambda, double mu_p);
  static MediumSpec varying_index(ScalarField n, double lambda, double mu_p);

  bool constant() const { return !n_field_.has_value(); }
  /// Constant-index value; throws if the index varies.
  double n_const() const;
  const ScalarField& n_field() const;
  /// Index sampled on `grid` (uniform fill for a constant medium; grid
  /// match required for a varying one).
  ScalarField n_on(const GridSpec& grid) const;

  double min_n() const { return min_n_; }
  double max_n() const { return max_n_; }
  double lambda() const { return lambda_; }
  double mu_p() const { return mu_p_; }

 private:
  MediumSpec(std::optional<ScalarField> n_field, double n_value, double lambda,
             double mu_p);

  std::optional<ScalarField> n_field_;
  double n_value_ = 1.0;
  double min_n_ = 1.0;
  double max_n_ = 1.0;
  double lambda_ = 0.0;
  double mu_p_ = 0.0;
};

}  // namespace proca
