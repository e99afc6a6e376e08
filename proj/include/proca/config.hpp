#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "proca/grid.hpp"
#include "proca/medium.hpp"

namespace proca {

enum class EngineKind { flat, gordon };
enum class InitKind { random, plane_wave, file };

/// One reproducible run: plain-text key=value configuration.
///
/// Keys (see README for the full reference):
///   grid.dim, grid.points, grid.lengths, grid.order
///   medium.n | medium.profile (sinusoidal) + medium.n_base,
///     medium.n_amplitude, medium.n_axis, medium.n_periods
///   medium.lambda (flat engine only), medium.mu_p
///   engine = flat | gordon
///   init = random | plane_wave | file
///   init.seed, init.kmax            (random)
///   init.kind, init.k, init.amplitude (plane_wave)
///   init.file                       (file)
///   evolve.cfl, evolve.t_end, evolve.sample_every
///   output.dir, output.snapshot_every
///   elliptic.tol, elliptic.max_iter
struct RunConfig {
  int dim = 1;
  std::vector<int> points{128};
  std::vector<double> lengths{6.283185307179586};
  int order = 2;

  bool n_constant = true;
  double n_value = 1.0;
  double n_base = 1.0;
  double n_amplitude = 0.0;
  int n_axis = 0;
  int n_periods = 1;
  std::optional<double> lambda;
  double mu_p = 1.0;

  EngineKind engine = EngineKind::flat;

  InitKind init = InitKind::random;
  std::uint64_t seed = 1;
  int kmax = 4;
  std::string wave_kind = "transverse";
  std::vector<double> wave_k{1.0};
  double amplitude = 1.0;
  std::string init_file;

  double cfl = 0.25;
  double t_end = 1.0;
  int sample_every = 1;

  std::string out_dir = "out";
  int snapshot_every = 0;

  double elliptic_tol = 1e-10;
  int elliptic_max_iter = 500;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a config from text. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Cross-field validation (engine/medium/init consistency). Called by
/// parse_config; public for configs built programmatically.
void validate_config(const RunConfig& config);

GridSpec grid_from_config(const RunConfig& config);
MediumSpec medium_from_config(const RunConfig& config, const GridSpec& grid);

}  // namespace proca
