#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "proca/config.hpp"

namespace proca {

/// Exit codes of the run orchestration:
///   0 success, 2 config/validation error, 3 CFL violation,
///   4 elliptic non-convergence, 5 divergence (NaN) during evolution.
enum ExitCode {
  kExitOk = 0,
  kExitConfig = 2,
  kExitCfl = 3,
  kExitSolver = 4,
  kExitDivergence = 5,
};

int exit_code_for(const std::exception& e);

/// Executes one configured run: evolves the requested engine, writes
/// monitors.csv, manifest.json and optional field snapshots into
/// config.out_dir. Returns an exit code; diagnostics go to `log`.
int run(const RunConfig& config, std::ostream& log);
int run_file(const std::filesystem::path& config_path, std::ostream& log);

struct ConvergenceRow {
  std::string quantity;
  std::vector<double> sup;         // sup_t |quantity| per ladder level
  std::optional<double> order;     // least-squares order; empty if below floor
  double fit_residual = 0.0;       // max |log2 deviation| of the fit
  bool below_floor = false;
};

struct ConvergenceResult {
  std::vector<int> level_points;
  std::vector<ConvergenceRow> rows;
};

/// Runs a resolution ladder (each level doubles every axis; dt follows the
/// CFL factor automatically), collects sup_t of every monitor column, and
/// fits per-quantity convergence orders. Ladder levels run as independent
/// parallel jobs; worker count from PROCALAB_WORKERS (default: hardware).
/// Any failing level propagates its exit status via SolverError-style
/// exceptions mapped through exit_code_for.
ConvergenceResult convergence(const RunConfig& base, int levels,
                              std::ostream& log);

std::string convergence_csv(const ConvergenceResult& result);

}  // namespace proca
