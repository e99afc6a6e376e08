#include "proca/medium.hpp"

#include <algorithm>
#include <cmath>

namespace proca {

MediumSpec::MediumSpec(std::optional<ScalarField> n_field, double n_value,
                       double lambda, double mu_p)
    : n_field_(std::move(n_field)),
      n_value_(n_value),
      lambda_(lambda),
      mu_p_(mu_p) {
  if (mu_p_ < 0.0 || !std::isfinite(mu_p_)) {
    throw ConfigError("Proca mass mu_p must be finite and >= 0");
  }
  if (!std::isfinite(lambda_)) {
    throw ConfigError("mass-metric parameter lambda must be finite");
  }
  if (n_field_) {
    double lo = n_field_->empty() ? 0.0 : (*n_field_)[0];
    double hi = lo;
    for (std::size_t i = 0; i < n_field_->size(); ++i) {
      const double v = (*n_field_)[i];
      if (!std::isfinite(v) || v <= 0.0) {
        throw ConfigError("refractive index must be positive everywhere");
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    min_n_ = lo;
    max_n_ = hi;
  } else {
    if (!std::isfinite(n_value_) || n_value_ <= 0.0) {
      throw ConfigError("refractive index must be positive");
    }
    min_n_ = max_n_ = n_value_;
  }
}

MediumSpec MediumSpec::constant_index(double n, double lambda, double mu_p) {
  return MediumSpec(std::nullopt, n, lambda, mu_p);
}

MediumSpec MediumSpec::varying_index(ScalarField n, double lambda,
                                     double mu_p) {
  return MediumSpec(std::move(n), 1.0, lambda, mu_p);
}

double MediumSpec::n_const() const {
  if (n_field_) {
    throw ConfigError("medium has a spatially varying index");
  }
  return n_value_;
}

const ScalarField& MediumSpec::n_field() const {
  if (!n_field_) {
    throw ConfigError("medium has a constant index, no field stored");
  }
  return *n_field_;
}

ScalarField MediumSpec::n_on(const GridSpec& grid) const {
  if (!n_field_) {
    return ScalarField(grid, n_value_);
  }
  if (!(n_field_->grid() == grid)) {
    throw ConfigError("medium index field lives on a different grid");
  }
  return *n_field_;
}

}  // namespace proca
