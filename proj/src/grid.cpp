#include "proca/grid.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>

namespace proca {

namespace {

void check_same_grid(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) {
    throw ConfigError("scalar field operation on mismatched grids");
  }
}

}  // namespace

GridSpec::GridSpec(int dim_, std::array<int, 3> points_,
                   std::array<double, 3> lengths_, int order_)
    : dim(dim_), points(points_), lengths(lengths_), order(order_) {
  if (dim < 1 || dim > 3) {
    throw ConfigError("grid dimension must be 1, 2 or 3");
  }
  if (order != 2 && order != 4) {
    throw ConfigError("stencil order must be 2 or 4");
  }
  for (int d = 0; d < 3; ++d) {
    if (d < dim) {
      if (points[d] < 8) {
        throw ConfigError("grid needs at least 8 points per axis");
      }
      if (!(lengths[d] > 0.0)) {
        throw ConfigError("grid box lengths must be positive");
      }
    } else {
      points[d] = 1;
      lengths[d] = 1.0;
    }
  }
}

GridSpec GridSpec::isotropic(int dim, int points_per_axis, double length,
                             int order) {
  std::array<int, 3> p{1, 1, 1};
  std::array<double, 3> l{1.0, 1.0, 1.0};
  for (int d = 0; d < dim; ++d) {
    p[d] = points_per_axis;
    l[d] = length;
  }
  return GridSpec(dim, p, l, order);
}

double GridSpec::min_spacing() const {
  double h = spacing(0);
  for (int d = 1; d < dim; ++d) h = std::min(h, spacing(d));
  return h;
}

std::int64_t GridSpec::stride(int axis) const {
  std::int64_t s = 1;
  for (int d = 0; d < axis; ++d) s *= points[d];
  return s;
}

double GridSpec::cell_volume() const {
  double v = 1.0;
  for (int d = 0; d < dim; ++d) v *= spacing(d);
  return v;
}

double GridSpec::coordinate(std::int64_t flat, int axis) const {
  std::int64_t idx = flat;
  for (int d = 0; d < axis; ++d) idx /= points[d];
  idx %= points[axis];
  return double(idx) * spacing(axis);
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  check_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  check_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& x) {
  check_same_grid(*this, x);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x[i];
  return *this;
}

void ScalarField::fill(double v) {
  for (double& x : values_) x = v;
}

void ScalarField::require_finite(const char* label, double t) const {
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw DivergenceError(std::string("non-finite values in ") + label, t);
    }
  }
}

ScalarField operator+(ScalarField a, const ScalarField& b) {
  a += b;
  return a;
}

ScalarField operator-(ScalarField a, const ScalarField& b) {
  a -= b;
  return a;
}

ScalarField operator*(double c, ScalarField a) {
  a *= c;
  return a;
}

namespace {

// Applies a centered stencil along one axis of a flattened periodic array.
// `anti` selects the antisymmetric (first-derivative) form
//   out[j] = sum_m c[m] (f[j+m] - f[j-m]),
// otherwise the symmetric (second-derivative) form
//   out[j] = c0 f[j] + sum_m c[m] (f[j+m] + f[j-m]).
// `accumulate` adds into `out` instead of overwriting.
template <int Width, bool Anti, bool Accumulate>
void apply_axis_stencil(const GridSpec& g, int axis, const double* f,
                        double c0, const std::array<double, 2>& c,
                        double* out) {
  const std::int64_t n = g.points[axis];
  const std::int64_t stride = g.stride(axis);
  // Iterate over all 1D lines along `axis`: the flat index decomposes as
  // base + j*stride with j the coordinate along the axis.
  const std::int64_t total = g.size();
  const std::int64_t line_count = total / n;
  for (std::int64_t line = 0; line < line_count; ++line) {
    // Recover the base index of this line (index with j = 0).
    const std::int64_t low = line % stride;
    const std::int64_t high = line / stride;
    const std::int64_t base = high * stride * n + low;
    auto at = [&](std::int64_t j) { return f[base + j * stride]; };
    auto put = [&](std::int64_t j, double v) {
      if constexpr (Accumulate) {
        out[base + j * stride] += v;
      } else {
        out[base + j * stride] = v;
      }
    };
    auto wrap = [&](std::int64_t j) {
      if (j < 0) j += n;
      if (j >= n) j -= n;
      return j;
    };
    for (std::int64_t j = 0; j < n; ++j) {
      const bool edge = (j < Width) || (j >= n - Width);
      double acc = Anti ? 0.0 : c0 * at(j);
      if (edge) {
        for (int m = 1; m <= Width; ++m) {
          const double fp = at(wrap(j + m));
          const double fm = at(wrap(j - m));
          acc += c[m - 1] * (Anti ? (fp - fm) : (fp + fm));
        }
      } else {
        for (int m = 1; m <= Width; ++m) {
          const double fp = at(j + m);
          const double fm = at(j - m);
          acc += c[m - 1] * (Anti ? (fp - fm) : (fp + fm));
        }
      }
      put(j, acc);
    }
  }
}

template <bool Accumulate>
void derivative_axis(const ScalarField& f, int axis, ScalarField& out) {
  const GridSpec& g = f.grid();
  const double h = g.spacing(axis);
  if (g.order == 2) {
    apply_axis_stencil<1, true, Accumulate>(g, axis, f.data(), 0.0,
                                            {1.0 / (2.0 * h), 0.0}, out.data());
  } else {
    apply_axis_stencil<2, true, Accumulate>(
        g, axis, f.data(), 0.0, {8.0 / (12.0 * h), -1.0 / (12.0 * h)},
        out.data());
  }
}

template <bool Accumulate>
void second_derivative_axis(const ScalarField& f, int axis, ScalarField& out) {
  const GridSpec& g = f.grid();
  const double h2 = g.spacing(axis) * g.spacing(axis);
  if (g.order == 2) {
    apply_axis_stencil<1, false, Accumulate>(g, axis, f.data(), -2.0 / h2,
                                             {1.0 / h2, 0.0}, out.data());
  } else {
    apply_axis_stencil<2, false, Accumulate>(
        g, axis, f.data(), -30.0 / (12.0 * h2),
        {16.0 / (12.0 * h2), -1.0 / (12.0 * h2)}, out.data());
  }
}

}  // namespace

void apply_derivative(const ScalarField& f, int axis, ScalarField& out) {
  if (axis < 0 || axis >= f.grid().dim) {
    throw ConfigError("derivative axis out of range for grid dimension");
  }
  if (!(out.grid() == f.grid())) out = ScalarField(f.grid());
  derivative_axis<false>(f, axis, out);
}

ScalarField derivative(const ScalarField& f, int axis) {
  ScalarField out(f.grid());
  apply_derivative(f, axis, out);
  return out;
}

void apply_laplacian(const ScalarField& f, ScalarField& out) {
  if (!(out.grid() == f.grid())) out = ScalarField(f.grid());
  second_derivative_axis<false>(f, 0, out);
  for (int d = 1; d < f.grid().dim; ++d) {
    second_derivative_axis<true>(f, d, out);
  }
}

ScalarField laplacian(const ScalarField& f) {
  ScalarField out(f.grid());
  apply_laplacian(f, out);
  return out;
}

double laplacian_symbol_phase(double theta, int order) {
  if (order == 2) {
    return 2.0 - 2.0 * std::cos(theta);
  }
  return (30.0 - 32.0 * std::cos(theta) + 2.0 * std::cos(2.0 * theta)) / 12.0;
}

ScalarField divergence(const Vec3Field& v, const GridSpec& grid) {
  ScalarField out(grid);
  for (int d = 0; d < grid.dim; ++d) {
    derivative_axis<true>(v[static_cast<std::size_t>(d)], d, out);
  }
  return out;
}

double norm_l2(const ScalarField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i];
  return std::sqrt(s * f.grid().cell_volume());
}

double norm_linf(const ScalarField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

namespace {

// Maps raw 64-bit draws to doubles in [0, 1); fixed procedure so that fields
// are bit-identical across platforms for a given seed.
double unit_double(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

ScalarField random_bandlimited(std::uint64_t seed, int kmax,
                               const GridSpec& grid) {
  if (kmax < 1) {
    throw ConfigError("random_bandlimited needs kmax >= 1");
  }
  for (int d = 0; d < grid.dim; ++d) {
    if (2 * kmax >= grid.points[d]) {
      throw ConfigError("random_bandlimited kmax at or above grid Nyquist");
    }
  }

  std::mt19937_64 rng(seed);
  ScalarField f(grid);
  const double two_pi = 2.0 * std::numbers::pi;

  // One representative per +/- mode pair, chosen by the first nonzero
  // component being positive; each contributes a * cos(2 pi m.x/L + phase).
  std::array<int, 3> m{0, 0, 0};
  const int mx = kmax;
  for (m[0] = (grid.dim >= 1 ? -mx : 0); m[0] <= mx; ++m[0]) {
    for (m[1] = (grid.dim >= 2 ? -mx : 0); m[1] <= (grid.dim >= 2 ? mx : 0);
         ++m[1]) {
      for (m[2] = (grid.dim >= 3 ? -mx : 0); m[2] <= (grid.dim >= 3 ? mx : 0);
           ++m[2]) {
        const int norm2 = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
        if (norm2 == 0 || norm2 > kmax * kmax) continue;
        const bool canonical =
            (m[0] > 0) || (m[0] == 0 && m[1] > 0) ||
            (m[0] == 0 && m[1] == 0 && m[2] > 0);
        if (!canonical) continue;
        const double amp = 2.0 * unit_double(rng) - 1.0;
        const double phase = two_pi * unit_double(rng);
        std::array<double, 3> freq{0.0, 0.0, 0.0};
        for (int d = 0; d < grid.dim; ++d) {
          freq[d] = two_pi * m[d] / grid.lengths[d];
        }
        const std::int64_t n0 = grid.points[0];
        const std::int64_t n1 = grid.points[1];
        const std::int64_t n2 = grid.points[2];
        std::int64_t flat = 0;
        for (std::int64_t i2 = 0; i2 < n2; ++i2) {
          const double a2 = freq[2] * double(i2) * grid.spacing(2);
          for (std::int64_t i1 = 0; i1 < n1; ++i1) {
            const double a1 = a2 + freq[1] * double(i1) * grid.spacing(1);
            for (std::int64_t i0 = 0; i0 < n0; ++i0, ++flat) {
              const double a0 = a1 + freq[0] * double(i0) * grid.spacing(0);
              f[static_cast<std::size_t>(flat)] += amp * std::cos(a0 + phase);
            }
          }
        }
      }
    }
  }
  return f;
}

}  // namespace proca
