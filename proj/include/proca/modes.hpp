#pragma once

#include <array>
#include <vector>

#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

enum class ModeKind { transverse, longitudinal };

/// Analytic plane-wave mode: wavevector, angular frequency from the
/// continuum dispersion relation, and a unit spatial polarization
/// (orthogonal to k for transverse modes, parallel for longitudinal ones).
struct DispersionMode {
  ModeKind kind;
  std::array<double, 3> k{0.0, 0.0, 0.0};
  double omega = 0.0;
  std::array<double, 3> polarization{0.0, 0.0, 0.0};
};

/// Transverse branch omega = sqrt(|k|^2 + mu_p^2) / n (constant index).
double dispersion_transverse(const std::array<double, 3>& k,
                             const MediumSpec& medium);

/// Longitudinal branch omega = sqrt(|k|^2/(1-lambda) + mu_p^2/n^2);
/// throws for lambda >= 1 (non-hyperbolic).
double dispersion_longitudinal(const std::array<double, 3>& k,
                               const MediumSpec& medium);

/// Builds a mode with a deterministic default polarization.
DispersionMode make_mode(ModeKind kind, const std::array<double, 3>& k,
                         const MediumSpec& medium);

/// Real traveling-wave free data (A_i, d_t A_i) at t = 0:
///   A_i = amp * pol_i * sin(k.x),  d_t A_i = -amp * omega * pol_i * cos(k.x).
/// k must be commensurate with the periodic box.
std::pair<Vec3Field, Vec3Field> plane_wave_free_data(const DispersionMode& mode,
                                                     double amplitude,
                                                     const GridSpec& grid);

/// Dominant angular frequency of a uniformly sampled series: Hann-windowed
/// spectrum peak refined to the continuous maximum. Requires at least four
/// oscillation periods in the record and a peak clearly above the noise
/// floor; relative accuracy ~1e-3 or better for clean signals.
double measure_frequency(const std::vector<double>& series, double dt);

}  // namespace proca
