#include "proca/gordon_engine.hpp"

#include <cmath>
#include <numbers>

namespace proca {

void GordonState::axpy(double c, const GordonState& other) {
  for (int nu = 0; nu < 4; ++nu) {
    atld[nu].axpy(c, other.atld[nu]);
    pi[nu].axpy(c, other.pi[nu]);
  }
}

GordonEngine::GordonEngine(const MediumSpec& medium, const GridSpec& grid)
    : GordonEngine(medium, grid, build_geometry(medium, grid)) {}

GordonEngine::GordonEngine(const MediumSpec& medium, const GridSpec& grid,
                           GeometryBundle geometry)
    : medium_(medium),
      grid_(grid),
      geom_(std::move(geometry)),
      gauss_op_(medium, grid),
      mu2_(medium.mu_p() * medium.mu_p()) {
  if (!(geom_.n.grid() == grid)) {
    throw ConfigError("geometry bundle grid does not match engine grid");
  }
}

double GordonEngine::max_speed() const { return 1.0 / medium_.min_n(); }

double GordonEngine::max_stable_dt() const {
  double smax = 0.0;
  for (int d = 0; d < grid_.dim; ++d) {
    const double h = grid_.spacing(d);
    smax += laplacian_symbol_phase(std::numbers::pi, grid_.order) / (h * h);
  }
  const double inv_n2 = max_speed() * max_speed();
  const double omega_max = std::sqrt((smax + mu2_) * inv_n2);
  return 2.0 * std::sqrt(2.0) / omega_max;
}

double GordonEngine::dt_from_cfl(double cfl) const {
  return cfl * grid_.min_spacing() / max_speed();
}

void GordonEngine::check_state(const GordonState& s) const {
  if (!(s.atld[0].grid() == grid_)) {
    throw ConfigError("state grid does not match engine grid");
  }
}

GordonState GordonEngine::init_from_free_data(const Vec3Field& atld_i,
                                              const Vec3Field& pi_i,
                                              double tol, int max_iter) const {
  if (!(medium_.mu_p() > 0.0)) {
    throw ConfigError(
        "constrained initialization requires mu_p > 0 (unsupported limit)");
  }
  for (int k = 0; k < 3; ++k) {
    if (!(atld_i[k].grid() == grid_) || !(pi_i[k].grid() == grid_)) {
      throw ConfigError("free data grid does not match engine grid");
    }
    atld_i[k].require_finite("free data At_i");
    pi_i[k].require_finite("free data Pi_i");
  }

  GordonState s(grid_);
  for (int k = 0; k < 3; ++k) {
    s.atld[k + 1] = atld_i[k];
    s.pi[k + 1] = pi_i[k];
  }

  // Gauss constraint for the time component, solved in A-form.
  Vec3Field adot;
  for (int k = 0; k < 3; ++k) {
    adot[k] = pi_i[k];
    for (std::size_t p = 0; p < adot[k].size(); ++p) adot[k][p] /= geom_.n[p];
  }
  ScalarField a0 = solve_gauss_constraint(gauss_op_, adot, tol, max_iter);
  s.atld[0] = a0;
  for (std::size_t p = 0; p < a0.size(); ++p) s.atld[0][p] *= geom_.n[p];

  // Pi_0 from the divergence constraint on the slice:
  //   Pi_0 = Gamma^s_{00} At_s + n^-2 sum_i (d_i At_i - Gamma^s_{ii} At_s).
  ScalarField div_part(grid_);
  ScalarField tmp(grid_);
  for (int i = 1; i <= 3; ++i) {
    if (i - 1 < grid_.dim) {
      apply_derivative(s.atld[i], i - 1, tmp);
      div_part += tmp;
    }
    for (int sg = 0; sg < 4; ++sg) {
      const ScalarField& gam = geom_.chris.at(sg, i, i);
      const ScalarField& at = s.atld[sg];
      for (std::size_t p = 0; p < div_part.size(); ++p) {
        div_part[p] -= gam[p] * at[p];
      }
    }
  }
  for (std::size_t p = 0; p < div_part.size(); ++p) {
    double pi0 = div_part[p] / geom_.n2[p];
    for (int sg = 0; sg < 4; ++sg) {
      pi0 += geom_.chris.at(sg, 0, 0)[p] * s.atld[sg][p];
    }
    s.pi[0][p] = pi0;
  }
  s.t = 0.0;
  return s;
}

struct GordonEngine::Workspace {
  std::array<std::array<ScalarField, 4>, 3> dA;   // dA[d][nu] = d_d At_nu
  std::array<std::array<ScalarField, 4>, 4> B;    // B[b][nu] = cov deriv, b=0 time
  std::array<ScalarField, 4> DB;                  // sum_i d_i B[i][nu]
  ScalarField tmp;

  explicit Workspace(const GridSpec& g) : tmp(g) {
    for (auto& row : dA)
      for (auto& f : row) f = ScalarField(g);
    for (auto& row : B)
      for (auto& f : row) f = ScalarField(g);
    for (auto& f : DB) f = ScalarField(g);
  }
};

void GordonEngine::rhs_ws(const GordonState& s, GordonState& out,
                          Workspace& ws) const {
  check_state(s);
  if (!(out.atld[0].grid() == grid_)) out = GordonState(grid_);

  const std::size_t npts = static_cast<std::size_t>(grid_.size());
  const int dim = grid_.dim;

  // Spatial derivatives of At.
  for (int d = 0; d < 3; ++d) {
    for (int nu = 0; nu < 4; ++nu) {
      if (d < dim) {
        apply_derivative(s.atld[nu], d, ws.dA[d][nu]);
      } else {
        ws.dA[d][nu].fill(0.0);
      }
    }
  }

  // Covariant first derivatives B_{b nu} = d_b At_nu - Gamma^s_{b nu} At_s.
  for (int nu = 0; nu < 4; ++nu) {
    ScalarField& b0 = ws.B[0][nu];
    b0 = s.pi[nu];
    for (int sg = 0; sg < 4; ++sg) {
      const ScalarField& gam = geom_.chris.at(sg, 0, nu);
      const ScalarField& at = s.atld[sg];
      for (std::size_t p = 0; p < npts; ++p) b0[p] -= gam[p] * at[p];
    }
    for (int i = 1; i <= 3; ++i) {
      ScalarField& bi = ws.B[i][nu];
      bi = ws.dA[i - 1][nu];
      for (int sg = 0; sg < 4; ++sg) {
        const ScalarField& gam = geom_.chris.at(sg, i, nu);
        const ScalarField& at = s.atld[sg];
        for (std::size_t p = 0; p < npts; ++p) bi[p] -= gam[p] * at[p];
      }
    }
  }

  for (int nu = 0; nu < 4; ++nu) {
    ws.DB[nu].fill(0.0);
    for (int i = 1; i <= 3; ++i) {
      if (i - 1 >= dim) continue;
      apply_derivative(ws.B[i][nu], i - 1, ws.tmp);
      ws.DB[nu] += ws.tmp;
    }
  }

  // Pointwise assembly. Gather raw pointers once.
  const double* gam[4][4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) gam[a][b][c] = geom_.chris.at(a, b, c).data();
  const double* ric[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) ric[a][b] = geom_.ricci.comp.at(a, b).data();
  const double* at[4];
  const double* piv[4];
  const double* bf[4][4];
  const double* dl[4][4];
  const double* db[4];
  for (int nu = 0; nu < 4; ++nu) {
    at[nu] = s.atld[nu].data();
    piv[nu] = s.pi[nu].data();
    db[nu] = ws.DB[nu].data();
    for (int b = 0; b < 4; ++b) {
      bf[b][nu] = ws.B[b][nu].data();
      dl[b][nu] = geom_.cov_dlog_n[std::size_t(b)][std::size_t(nu)].data();
    }
  }
  const double* lf[4] = {nullptr, geom_.dlog_n[0].data(),
                         geom_.dlog_n[1].data(), geom_.dlog_n[2].data()};
  const double* n2 = geom_.n2.data();

  for (int nu = 0; nu < 4; ++nu) {
    double* d_pi = out.pi[nu].data();
    double* d_at = out.atld[nu].data();
    for (std::size_t p = 0; p < npts; ++p) {
      const double g00 = -n2[p];

      // Wave-operator block without the d_t Pi term.
      double t_pi = 0.0, t_b1 = 0.0, t_b2 = 0.0;
      for (int sg = 0; sg < 4; ++sg) {
        t_pi += gam[sg][0][nu][p] * piv[sg][p];
        t_b1 += gam[sg][0][0][p] * bf[sg][nu][p];
        t_b2 += gam[sg][0][nu][p] * bf[0][sg][p];
      }
      double total = g00 * (-t_pi - t_b1 - t_b2) + db[nu][p];
      for (int i = 1; i <= 3; ++i) {
        for (int sg = 0; sg < 4; ++sg) {
          total -= gam[sg][i][i][p] * bf[sg][nu][p];
          total -= gam[sg][i][nu][p] * bf[i][sg][p];
        }
      }

      // Ricci coupling.
      total -= g00 * ric[0][nu][p] * at[0][p];
      for (int i = 1; i <= 3; ++i) total -= ric[i][nu][p] * at[i][p];

      // Index-gradient advection.
      for (int i = 1; i <= 3; ++i) total -= bf[i][nu][p] * lf[i][p];

      // Antisymmetrized index-gradient source
      //   gamma^{ab} (D_a l_nu) At_b - gamma^{ab} (D_a l_b) At_nu,
      // with the derivative acting on l alone; constraint propagation
      // fails at O(1) with the derivative over the product.
      double wblock = g00 * (dl[0][nu][p] * at[0][p] - dl[0][0][p] * at[nu][p]);
      for (int i = 1; i <= 3; ++i) {
        wblock += dl[i][nu][p] * at[i][p] - dl[i][i][p] * at[nu][p];
      }
      total += wblock;

      // Mass term.
      total -= mu2_ * at[nu][p];

      // 0 = gamma^{00} d_t Pi_nu + total.
      d_pi[p] = total / n2[p];
      d_at[p] = piv[nu][p];
    }
  }
}

void GordonEngine::rhs(const GordonState& state, GordonState& out) const {
  Workspace ws(grid_);
  rhs_ws(state, out, ws);
}

namespace {

struct GordonRk4 {
  GordonState k1, k2, k3, k4, stage;
  explicit GordonRk4(const GridSpec& g)
      : k1(g), k2(g), k3(g), k4(g), stage(g) {}
};

}  // namespace

GordonState GordonEngine::step(const GordonState& state, double dt) const {
  check_state(state);
  if (!(dt > 0.0) || dt > max_stable_dt() * (1.0 + 1e-12)) {
    throw CflError("time step " + std::to_string(dt) +
                   " violates the stability bound " +
                   std::to_string(max_stable_dt()));
  }
  Workspace ws(grid_);
  GordonRk4 b(grid_);
  GordonState out(grid_);
  rhs_ws(state, b.k1, ws);
  b.stage = state;
  b.stage.axpy(0.5 * dt, b.k1);
  rhs_ws(b.stage, b.k2, ws);
  b.stage = state;
  b.stage.axpy(0.5 * dt, b.k2);
  rhs_ws(b.stage, b.k3, ws);
  b.stage = state;
  b.stage.axpy(dt, b.k3);
  rhs_ws(b.stage, b.k4, ws);
  out = state;
  out.axpy(dt / 6.0, b.k1);
  out.axpy(dt / 3.0, b.k2);
  out.axpy(dt / 3.0, b.k3);
  out.axpy(dt / 6.0, b.k4);
  out.t = state.t + dt;
  return out;
}

ScalarField GordonEngine::lorenz_field(const GordonState& s) const {
  ScalarField space(grid_);
  ScalarField tmp(grid_);
  for (int i = 1; i <= 3; ++i) {
    if (i - 1 < grid_.dim) {
      apply_derivative(s.atld[i], i - 1, tmp);
      space += tmp;
    }
    for (int sg = 0; sg < 4; ++sg) {
      const ScalarField& gam = geom_.chris.at(sg, i, i);
      const ScalarField& at = s.atld[sg];
      for (std::size_t p = 0; p < space.size(); ++p) {
        space[p] -= gam[p] * at[p];
      }
    }
  }
  ScalarField out(grid_);
  for (std::size_t p = 0; p < out.size(); ++p) {
    double cov0 = s.pi[0][p];
    for (int sg = 0; sg < 4; ++sg) {
      cov0 -= geom_.chris.at(sg, 0, 0)[p] * s.atld[sg][p];
    }
    out[p] = -geom_.n2[p] * cov0 + space[p];
  }
  return out;
}

GordonMonitorReport GordonEngine::monitors(const GordonState& s) const {
  check_state(s);
  GordonMonitorReport r;
  r.t = s.t;
  r.atld0_l2 = norm_l2(s.atld[0]);
  double ai2 = 0.0;
  for (int i = 1; i <= 3; ++i) {
    const double v = norm_l2(s.atld[i]);
    ai2 += v * v;
  }
  r.atldi_l2 = std::sqrt(ai2);

  ScalarField lorenz = lorenz_field(s);
  r.lorenz_l2 = norm_l2(lorenz);
  r.lorenz_linf = norm_linf(lorenz);

  ScalarField a0 = s.atld[0];
  Vec3Field adot;
  for (int k = 0; k < 3; ++k) adot[k] = s.pi[k + 1];
  for (std::size_t p = 0; p < a0.size(); ++p) {
    a0[p] /= geom_.n[p];
    for (int k = 0; k < 3; ++k) adot[k][p] /= geom_.n[p];
  }
  ScalarField gauss = gauss_op_.apply(a0);
  gauss -= gauss_op_.rhs(adot);
  r.gauss_l2 = norm_l2(gauss);
  r.gauss_linf = norm_linf(gauss);
  return r;
}

GordonEvolveResult GordonEngine::evolve(GordonState state,
                                        const GordonEvolveOptions& opts) const {
  check_state(state);
  if (!(opts.t_end >= 0.0)) {
    throw ConfigError("evolve needs t_end >= 0");
  }
  GordonEvolveResult result;
  if (opts.t_end == 0.0) {
    result.monitors.push_back(monitors(state));
    if (opts.probe) result.probe_series.push_back(opts.probe(state));
    result.state = std::move(state);
    return result;
  }
  if (!(opts.dt > 0.0)) {
    throw ConfigError("evolve needs dt > 0");
  }
  const int steps = std::max<int>(1, int(std::ceil(opts.t_end / opts.dt - 1e-9)));
  const double dt = opts.t_end / steps;
  if (dt > max_stable_dt() * (1.0 + 1e-12)) {
    throw CflError("time step " + std::to_string(dt) +
                   " violates the stability bound " +
                   std::to_string(max_stable_dt()));
  }
  result.dt = dt;
  const int sample_every = std::max(1, opts.sample_every);

  Workspace ws(grid_);
  GordonRk4 b(grid_);
  GordonState next(grid_);

  auto sample = [&](const GordonState& s) {
    GordonMonitorReport m = monitors(s);
    const double total =
        m.atld0_l2 + m.atldi_l2 + m.lorenz_l2 + m.gauss_l2;
    if (!std::isfinite(total)) {
      throw DivergenceError("non-finite fields during evolution", s.t);
    }
    result.monitors.push_back(m);
  };

  sample(state);
  if (opts.probe) result.probe_series.push_back(opts.probe(state));

  std::optional<std::array<GordonState, 3>> ring;
  if (opts.store_levels && steps >= 2) {
    ring.emplace(std::array<GordonState, 3>{state, state, state});
  }

  for (int step_idx = 1; step_idx <= steps; ++step_idx) {
    rhs_ws(state, b.k1, ws);
    b.stage = state;
    b.stage.axpy(0.5 * dt, b.k1);
    rhs_ws(b.stage, b.k2, ws);
    b.stage = state;
    b.stage.axpy(0.5 * dt, b.k2);
    rhs_ws(b.stage, b.k3, ws);
    b.stage = state;
    b.stage.axpy(dt, b.k3);
    rhs_ws(b.stage, b.k4, ws);
    next = state;
    next.axpy(dt / 6.0, b.k1);
    next.axpy(dt / 3.0, b.k2);
    next.axpy(dt / 3.0, b.k3);
    next.axpy(dt / 6.0, b.k4);
    next.t = state.t + dt;
    std::swap(state, next);
    if (ring) {
      (*ring)[0] = std::move((*ring)[1]);
      (*ring)[1] = std::move((*ring)[2]);
      (*ring)[2] = state;
    }
    if (opts.probe) result.probe_series.push_back(opts.probe(state));
    if (step_idx % sample_every == 0 || step_idx == steps) {
      sample(state);
    }
    if (opts.on_step) opts.on_step(state, step_idx);
  }

  if (ring && !result.monitors.empty()) {
    const auto res = fieldeq_residual(*ring);
    double agg = 0.0;
    for (double v : res) agg += v * v;
    result.monitors.back().fieldeq_l2 = std::sqrt(agg);
  }
  result.levels = std::move(ring);
  result.state = std::move(state);
  return result;
}

std::array<double, 4> GordonEngine::fieldeq_residual(
    const std::array<GordonState, 3>& levels) const {
  const GordonState& prev = levels[0];
  const GordonState& mid = levels[1];
  const GordonState& next = levels[2];
  const double dt1 = mid.t - prev.t;
  const double dt2 = next.t - mid.t;
  if (!(dt1 > 0.0) || std::abs(dt1 - dt2) > 1e-9 * dt1) {
    throw ConfigError("fieldeq_residual needs uniformly spaced time levels");
  }
  const double dt = dt1;

  // Work with A = At / n per level.
  auto a_of = [&](const GordonState& s, int nu) {
    ScalarField a = s.atld[nu];
    for (std::size_t p = 0; p < a.size(); ++p) a[p] /= geom_.n[p];
    return a;
  };

  std::array<double, 4> out{};

  // Time component: minus the Gauss residual with the centered time
  // derivative of A_i as the free data. Needs no second time differences.
  {
    ScalarField a0_mid = a_of(mid, 0);
    Vec3Field adot;
    const double inv2dt = 1.0 / (2.0 * dt);
    for (int k = 0; k < 3; ++k) {
      ScalarField an = a_of(next, k + 1);
      ScalarField ap = a_of(prev, k + 1);
      adot[k] = ScalarField(grid_);
      for (std::size_t p = 0; p < adot[k].size(); ++p) {
        adot[k][p] = (an[p] - ap[p]) * inv2dt;
      }
    }
    ScalarField res = gauss_op_.apply(a0_mid);
    res -= gauss_op_.rhs(adot);
    out[0] = norm_l2(res);
  }

  // Spatial components:
  //   n^2 (d_j dtA_0 - dtt A_j) + sum_i d_i (d_i A_j - d_j A_i) - mu^2 A_j.
  ScalarField dt_a0(grid_);
  {
    ScalarField a0n = a_of(next, 0);
    ScalarField a0p = a_of(prev, 0);
    const double inv2dt = 1.0 / (2.0 * dt);
    for (std::size_t p = 0; p < dt_a0.size(); ++p) {
      dt_a0[p] = (a0n[p] - a0p[p]) * inv2dt;
    }
  }
  std::array<ScalarField, 3> a_mid;
  std::array<ScalarField, 3> a_prev;
  std::array<ScalarField, 3> a_next;
  for (int k = 0; k < 3; ++k) {
    a_mid[k] = a_of(mid, k + 1);
    a_prev[k] = a_of(prev, k + 1);
    a_next[k] = a_of(next, k + 1);
  }
  ScalarField tmp(grid_), tmp2(grid_);
  for (int j = 0; j < 3; ++j) {
    ScalarField res(grid_);
    const double invdt2 = 1.0 / (dt * dt);
    for (std::size_t p = 0; p < res.size(); ++p) {
      const double dtt =
          (a_next[j][p] - 2.0 * a_mid[j][p] + a_prev[j][p]) * invdt2;
      res[p] = -geom_.n2[p] * dtt - mu2_ * a_mid[j][p];
    }
    if (j < grid_.dim) {
      apply_derivative(dt_a0, j, tmp);
      for (std::size_t p = 0; p < res.size(); ++p) {
        res[p] += geom_.n2[p] * tmp[p];
      }
    }
    for (int i = 0; i < grid_.dim; ++i) {
      // d_i (d_i A_j - d_j A_i)
      apply_derivative(a_mid[j], i, tmp);
      if (j < grid_.dim) {
        apply_derivative(a_mid[i], j, tmp2);
        tmp -= tmp2;
      }
      apply_derivative(tmp, i, tmp2);
      res += tmp2;
    }
    out[static_cast<std::size_t>(j) + 1] = norm_l2(res);
  }
  return out;
}

}  // namespace proca
