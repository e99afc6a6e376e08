#include "proca/modes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "proca/geometry.hpp"

namespace proca {

namespace {

double norm3(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

double dispersion_transverse(const std::array<double, 3>& k,
                             const MediumSpec& medium) {
  const double n = medium.n_const();
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const double mu = medium.mu_p();
  return std::sqrt(k2 + mu * mu) / n;
}

double dispersion_longitudinal(const std::array<double, 3>& k,
                               const MediumSpec& medium) {
  const SymbolClass cls = classify_symbol(medium.lambda());
  if (cls.kind != SymbolKind::hyperbolic) {
    throw ConfigError("longitudinal dispersion needs lambda < 1; symbol is " +
                      to_string(cls.kind));
  }
  const double n = medium.n_const();
  const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  const double mu = medium.mu_p();
  return std::sqrt(k2 / (1.0 - medium.lambda()) + mu * mu / (n * n));
}

DispersionMode make_mode(ModeKind kind, const std::array<double, 3>& k,
                         const MediumSpec& medium) {
  DispersionMode mode;
  mode.kind = kind;
  mode.k = k;
  const double klen = norm3(k);
  if (klen == 0.0) {
    throw ConfigError("plane-wave mode needs a nonzero wavevector");
  }
  if (kind == ModeKind::longitudinal) {
    mode.omega = dispersion_longitudinal(k, medium);
    for (int d = 0; d < 3; ++d) mode.polarization[d] = k[d] / klen;
  } else {
    mode.omega = dispersion_transverse(k, medium);
    // Deterministic unit vector orthogonal to k: z cross k, which maps a
    // wave along x to a y-polarization; fall back to x for k parallel z.
    std::array<double, 3> pol{-k[1], k[0], 0.0};
    const double plen = norm3(pol);
    if (plen > 1e-300) {
      for (int d = 0; d < 3; ++d) mode.polarization[d] = pol[d] / plen;
    } else {
      mode.polarization = {1.0, 0.0, 0.0};
    }
  }
  return mode;
}

std::pair<Vec3Field, Vec3Field> plane_wave_free_data(const DispersionMode& mode,
                                                     double amplitude,
                                                     const GridSpec& grid) {
  for (int d = 0; d < 3; ++d) {
    if (d >= grid.dim && mode.k[d] != 0.0) {
      throw ConfigError("wavevector component beyond grid dimension");
    }
    if (d < grid.dim) {
      const double cycles = mode.k[d] * grid.lengths[d] / (2.0 * std::numbers::pi);
      if (std::abs(cycles - std::round(cycles)) > 1e-9) {
        throw ConfigError("wavevector incommensurate with the periodic box");
      }
    }
  }

  Vec3Field a, da;
  for (int c = 0; c < 3; ++c) {
    a[static_cast<std::size_t>(c)] = ScalarField(grid);
    da[static_cast<std::size_t>(c)] = ScalarField(grid);
  }
  const std::int64_t total = grid.size();
  for (std::int64_t p = 0; p < total; ++p) {
    double phase = 0.0;
    for (int d = 0; d < grid.dim; ++d) {
      phase += mode.k[d] * grid.coordinate(p, d);
    }
    const double s = amplitude * std::sin(phase);
    const double c = -amplitude * mode.omega * std::cos(phase);
    for (int comp = 0; comp < 3; ++comp) {
      a[static_cast<std::size_t>(comp)][static_cast<std::size_t>(p)] =
          mode.polarization[comp] * s;
      da[static_cast<std::size_t>(comp)][static_cast<std::size_t>(p)] =
          mode.polarization[comp] * c;
    }
  }
  return {std::move(a), std::move(da)};
}

namespace {

// Magnitude of the Hann-windowed discrete-time Fourier transform at
// angular frequency omega.
double windowed_magnitude(const std::vector<double>& x, double dt,
                          double omega) {
  const std::size_t m = x.size();
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * double(j) / double(m - 1)));
    const double t = double(j) * dt;
    acc += w * x[j] * std::exp(std::complex<double>(0.0, -omega * t));
  }
  return std::abs(acc);
}

}  // namespace

double measure_frequency(const std::vector<double>& series, double dt) {
  if (series.size() < 16 || !(dt > 0.0)) {
    throw MeasurementError("frequency measurement needs a longer series");
  }
  const std::size_t m = series.size();
  std::vector<double> x = series;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= double(m);
  for (double& v : x) v -= mean;

  // Coarse scan over the DFT bins.
  const double t_total = double(m) * dt;
  const double dw = 2.0 * std::numbers::pi / t_total;
  const std::size_t nbins = m / 2;
  std::vector<double> mag(nbins);
  for (std::size_t b = 1; b < nbins; ++b) {
    mag[b] = windowed_magnitude(x, dt, double(b) * dw);
  }
  std::size_t peak = 1;
  for (std::size_t b = 2; b < nbins; ++b) {
    if (mag[b] > mag[peak]) peak = b;
  }
  std::vector<double> sorted(mag.begin() + 1, mag.end());
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double floor_level = sorted[sorted.size() / 2];
  if (!(mag[peak] > 20.0 * floor_level) || mag[peak] <= 0.0) {
    throw MeasurementError("no spectral peak above the noise floor");
  }

  // Refine to the continuous-spectrum maximum by golden-section search in
  // the bracket around the peak bin.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = double(peak == 1 ? 1 : peak - 1) * dw;
  double hi = double(std::min(peak + 1, nbins - 1)) * dw;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = windowed_magnitude(x, dt, c);
  double fd = windowed_magnitude(x, dt, d);
  for (int it = 0; it < 90 && hi - lo > 1e-12 * hi; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = windowed_magnitude(x, dt, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = windowed_magnitude(x, dt, d);
    }
  }
  const double omega = 0.5 * (lo + hi);

  if (omega * t_total < 4.0 * 2.0 * std::numbers::pi) {
    throw MeasurementError(
        "series shorter than four oscillation periods of the detected peak");
  }
  return omega;
}

}  // namespace proca
