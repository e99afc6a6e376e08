#include "proca/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

#include <nlohmann/json.hpp>

#include "proca/flat_engine.hpp"
#include "proca/gordon_engine.hpp"
#include "proca/io.hpp"
#include "proca/modes.hpp"
#include "proca/version.hpp"

namespace proca {

namespace fs = std::filesystem;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const CflError*>(&e)) return kExitCfl;
  if (dynamic_cast<const SolverError*>(&e)) return kExitSolver;
  if (dynamic_cast<const DivergenceError*>(&e)) return kExitDivergence;
  return kExitConfig;
}

namespace {

struct RunData {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  double dt = 0.0;
  int steps = 0;
};

std::pair<Vec3Field, Vec3Field> build_free_data(const RunConfig& cfg,
                                                const GridSpec& grid,
                                                const MediumSpec& medium) {
  switch (cfg.init) {
    case InitKind::random: {
      Vec3Field a, da;
      for (int c = 0; c < 3; ++c) {
        a[std::size_t(c)] =
            random_bandlimited(cfg.seed + std::uint64_t(c), cfg.kmax, grid);
        da[std::size_t(c)] =
            random_bandlimited(cfg.seed + std::uint64_t(3 + c), cfg.kmax, grid);
      }
      if (cfg.amplitude != 1.0) {
        for (int c = 0; c < 3; ++c) {
          a[std::size_t(c)] *= cfg.amplitude;
          da[std::size_t(c)] *= cfg.amplitude;
        }
      }
      return {std::move(a), std::move(da)};
    }
    case InitKind::plane_wave: {
      std::array<double, 3> k{0.0, 0.0, 0.0};
      for (std::size_t d = 0; d < cfg.wave_k.size(); ++d) k[d] = cfg.wave_k[d];
      const ModeKind kind = cfg.wave_kind == "transverse"
                                ? ModeKind::transverse
                                : ModeKind::longitudinal;
      const DispersionMode mode = make_mode(kind, k, medium);
      return plane_wave_free_data(mode, cfg.amplitude, grid);
    }
    case InitKind::file: {
      Snapshot snap = read_snapshot(cfg.init_file, cfg.order);
      if (!(snap.grid == grid)) {
        throw ConfigError("init.file grid does not match the configured grid");
      }
      if (snap.comps.size() != 6) {
        throw ConfigError(
            "init.file must hold 6 components (A_1 A_2 A_3 dA_1 dA_2 dA_3)");
      }
      Vec3Field a, da;
      for (int c = 0; c < 3; ++c) {
        snap.comps[std::size_t(c)].require_finite("init.file data");
        snap.comps[std::size_t(c + 3)].require_finite("init.file data");
        a[std::size_t(c)] = std::move(snap.comps[std::size_t(c)]);
        da[std::size_t(c)] = std::move(snap.comps[std::size_t(c + 3)]);
      }
      return {std::move(a), std::move(da)};
    }
  }
  throw ConfigError("unhandled init kind");
}

void write_manifest(const RunConfig& cfg, const RunData& data,
                    double elapsed_s) {
  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["engine"] = cfg.engine == EngineKind::flat ? "flat" : "gordon";
  manifest["config"] = serialize_config(cfg);
  manifest["dt"] = data.dt;
  manifest["steps"] = data.steps;
  manifest["samples"] = data.rows.size();
  manifest["elapsed_seconds"] = elapsed_s;
  write_text_file(fs::path(cfg.out_dir) / "manifest.json",
                  manifest.dump(2) + "\n");
}

RunData run_impl(const RunConfig& cfg, std::ostream& log) {
  validate_config(cfg);
  const auto t_start = std::chrono::steady_clock::now();
  const GridSpec grid = grid_from_config(cfg);
  const MediumSpec medium = medium_from_config(cfg, grid);
  fs::create_directories(cfg.out_dir);

  auto [ai, dai] = build_free_data(cfg, grid, medium);
  RunData data;

  if (cfg.engine == EngineKind::flat) {
    FlatEngine engine(medium, grid);
    FlatState state = engine.init_from_free_data(ai, dai);
    EvolveOptions opts;
    opts.t_end = cfg.t_end;
    opts.dt = engine.dt_from_cfl(cfg.cfl);
    opts.sample_every = cfg.sample_every;
    auto snap_path = [&](int step) {
      char name[32];
      std::snprintf(name, sizeof(name), "snapshot_%08d.fld", step);
      return fs::path(cfg.out_dir) / name;
    };
    auto write_flat_snapshot = [&](const FlatState& s, int step) {
      write_snapshot(snap_path(step), grid, s.t,
                     {&s.a0, &s.da0, &s.ai[0], &s.ai[1], &s.ai[2], &s.dai[0],
                      &s.dai[1], &s.dai[2], &s.phi, &s.dphi});
    };
    if (cfg.snapshot_every > 0) {
      write_flat_snapshot(state, 0);
      opts.on_step = [&](const FlatState& s, int step) {
        if (step % cfg.snapshot_every == 0) write_flat_snapshot(s, step);
      };
    }
    FlatEvolveResult result = engine.evolve(std::move(state), opts);
    write_text_file(fs::path(cfg.out_dir) / "monitors.csv",
                    monitor_csv(result.monitors));
    data.columns = {"t",       "a0_l2",   "ai_l2",  "phi_l2",
                    "c1_l2",   "c1_linf", "c2_l2",  "c2_linf",
                    "gauss_l2", "gauss_linf"};
    for (const MonitorReport& m : result.monitors) {
      data.rows.push_back({m.t, m.a0_l2, m.ai_l2, m.phi_l2, m.c1_l2, m.c1_linf,
                           m.c2_l2, m.c2_linf, m.gauss_l2, m.gauss_linf});
    }
    data.dt = result.dt;
    data.steps =
        result.dt > 0.0 ? int(std::lround(cfg.t_end / result.dt)) : 0;
  } else {
    GordonEngine engine(medium, grid);
    Vec3Field atld_i, pi_i;
    if (cfg.init == InitKind::plane_wave) {
      if (!medium.constant()) {
        throw ConfigError("plane-wave init needs a constant index");
      }
      const double n = medium.n_const();
      for (int c = 0; c < 3; ++c) {
        atld_i[std::size_t(c)] = ai[std::size_t(c)];
        atld_i[std::size_t(c)] *= n;
        pi_i[std::size_t(c)] = dai[std::size_t(c)];
        pi_i[std::size_t(c)] *= n;
      }
    } else {
      // Random/file free data are engine-native (At_i, Pi_i).
      atld_i = std::move(ai);
      pi_i = std::move(dai);
    }
    GordonState state = engine.init_from_free_data(
        atld_i, pi_i, cfg.elliptic_tol, cfg.elliptic_max_iter);
    GordonEvolveOptions opts;
    opts.t_end = cfg.t_end;
    opts.dt = engine.dt_from_cfl(cfg.cfl);
    opts.sample_every = cfg.sample_every;
    auto snap_path = [&](int step) {
      char name[32];
      std::snprintf(name, sizeof(name), "snapshot_%08d.fld", step);
      return fs::path(cfg.out_dir) / name;
    };
    auto write_gordon_snapshot = [&](const GordonState& s, int step) {
      // Exported in A-form: A_mu = At_mu / n and its time derivative.
      const ScalarField& n = engine.geometry().n;
      CovectorField a(grid), da(grid);
      for (int nu = 0; nu < 4; ++nu) {
        for (std::size_t p = 0; p < n.size(); ++p) {
          a[nu][p] = s.atld[nu][p] / n[p];
          da[nu][p] = s.pi[nu][p] / n[p];
        }
      }
      write_snapshot(snap_path(step), grid, s.t,
                     {&a[0], &a[1], &a[2], &a[3], &da[0], &da[1], &da[2],
                      &da[3]});
    };
    if (cfg.snapshot_every > 0) {
      write_gordon_snapshot(state, 0);
      opts.on_step = [&](const GordonState& s, int step) {
        if (step % cfg.snapshot_every == 0) write_gordon_snapshot(s, step);
      };
    }
    GordonEvolveResult result = engine.evolve(std::move(state), opts);
    write_text_file(fs::path(cfg.out_dir) / "monitors.csv",
                    monitor_csv(result.monitors));
    data.columns = {"t",          "atld0_l2", "atldi_l2", "lorenz_l2",
                    "lorenz_linf", "gauss_l2", "gauss_linf"};
    for (const GordonMonitorReport& m : result.monitors) {
      data.rows.push_back({m.t, m.atld0_l2, m.atldi_l2, m.lorenz_l2,
                           m.lorenz_linf, m.gauss_l2, m.gauss_linf});
    }
    data.dt = result.dt;
    data.steps =
        result.dt > 0.0 ? int(std::lround(cfg.t_end / result.dt)) : 0;
  }

  const auto t_stop = std::chrono::steady_clock::now();
  const double elapsed =
      std::chrono::duration<double>(t_stop - t_start).count();
  write_manifest(cfg, data, elapsed);
  log << "run: " << data.steps << " steps, dt = " << data.dt << ", "
      << data.rows.size() << " samples, " << elapsed << " s -> " << cfg.out_dir
      << "\n";
  return data;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
  try {
    run_impl(config, log);
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_file(const std::filesystem::path& config_path, std::ostream& log) {
  try {
    const RunConfig cfg = load_config(config_path);
    run_impl(cfg, log);
    return kExitOk;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("PROCALAB_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

bool is_constraint_column(const std::string& name) {
  return name.rfind("c1_", 0) == 0 || name.rfind("c2_", 0) == 0 ||
         name.rfind("gauss_", 0) == 0 || name.rfind("lorenz_", 0) == 0;
}

}  // namespace

ConvergenceResult convergence(const RunConfig& base, int levels,
                              std::ostream& log) {
  if (levels < 3) {
    throw ConfigError("convergence ladder needs at least 3 levels");
  }

  std::vector<RunConfig> cfgs;
  for (int l = 0; l < levels; ++l) {
    RunConfig c = base;
    for (int& p : c.points) p <<= l;
    c.out_dir =
        (fs::path(base.out_dir) / ("level_" + std::to_string(c.points[0])))
            .string();
    validate_config(c);
    cfgs.push_back(std::move(c));
  }

  std::vector<RunData> data{std::size_t(levels)};
  const int workers = std::min(worker_count(), levels);
  std::ostringstream scratch;  // per-level logs folded below
  for (int begin = 0; begin < levels; begin += workers) {
    const int end = std::min(begin + workers, levels);
    std::vector<std::future<RunData>> futs;
    for (int l = begin; l < end; ++l) {
      futs.push_back(std::async(std::launch::async, [&cfgs, l]() {
        std::ostringstream local;
        return run_impl(cfgs[std::size_t(l)], local);
      }));
    }
    for (int l = begin; l < end; ++l) {
      data[std::size_t(l)] = futs[std::size_t(l - begin)].get();
    }
  }

  ConvergenceResult result;
  for (const RunConfig& c : cfgs) result.level_points.push_back(c.points[0]);

  // Amplitude scale across all levels sets the "exactly zero" floor.
  double scale = 0.0;
  for (const RunData& d : data) {
    for (std::size_t col = 1; col < d.columns.size(); ++col) {
      if (is_constraint_column(d.columns[col])) continue;
      for (const auto& row : d.rows) scale = std::max(scale, std::abs(row[col]));
    }
  }
  const double floor_level = 1e-9 * std::max(1.0, scale);

  const GridSpec grid0 = grid_from_config(cfgs[0]);
  for (std::size_t col = 1; col < data[0].columns.size(); ++col) {
    if (!is_constraint_column(data[0].columns[col])) continue;
    ConvergenceRow row;
    row.quantity = data[0].columns[col];
    for (const RunData& d : data) {
      double sup = 0.0;
      for (const auto& r : d.rows) sup = std::max(sup, std::abs(r[col]));
      row.sup.push_back(sup);
    }
    row.below_floor = true;
    for (double s : row.sup) {
      if (s > floor_level) row.below_floor = false;
    }
    if (!row.below_floor) {
      // Least-squares slope of log2(sup) against log2(h); h halves per level.
      std::vector<double> x(std::size_t(levels), 0.0), y(std::size_t(levels), 0.0);
      double xm = 0.0, ym = 0.0;
      for (int l = 0; l < levels; ++l) {
        x[std::size_t(l)] = -double(l);
        y[std::size_t(l)] =
            std::log2(std::max(row.sup[std::size_t(l)], 1e-300));
        xm += x[std::size_t(l)];
        ym += y[std::size_t(l)];
      }
      xm /= levels;
      ym /= levels;
      double num = 0.0, den = 0.0;
      for (int l = 0; l < levels; ++l) {
        num += (x[std::size_t(l)] - xm) * (y[std::size_t(l)] - ym);
        den += (x[std::size_t(l)] - xm) * (x[std::size_t(l)] - xm);
      }
      const double slope = num / den;
      row.order = slope;
      double resid = 0.0;
      for (int l = 0; l < levels; ++l) {
        const double fit = ym + slope * (x[std::size_t(l)] - xm);
        resid = std::max(resid, std::abs(y[std::size_t(l)] - fit));
      }
      row.fit_residual = resid;
    }
    result.rows.push_back(std::move(row));
  }

  (void)grid0;
  log << "convergence: " << levels << " levels, base N = " << base.points[0]
      << ", " << result.rows.size() << " quantities\n";
  return result;
}

std::string convergence_csv(const ConvergenceResult& result) {
  std::string out = "quantity";
  for (int n : result.level_points) out += ",sup_N" + std::to_string(n);
  out += ",order,fit_residual\n";
  char buf[32];
  for (const ConvergenceRow& row : result.rows) {
    out += row.quantity;
    for (double s : row.sup) {
      std::snprintf(buf, sizeof(buf), ",%.17g", s);
      out += buf;
    }
    if (row.below_floor) {
      out += ",below_floor,0";
    } else {
      std::snprintf(buf, sizeof(buf), ",%.6g,%.6g", row.order.value_or(0.0),
                    row.fit_residual);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace proca
