#include "proca/flat_engine.hpp"

#include <cmath>
#include <numbers>

#include "proca/geometry.hpp"

namespace proca {

FlatState::FlatState(const GridSpec& grid)
    : a0(grid),
      da0(grid),
      ai{ScalarField(grid), ScalarField(grid), ScalarField(grid)},
      dai{ScalarField(grid), ScalarField(grid), ScalarField(grid)},
      phi(grid),
      dphi(grid) {}

void FlatState::axpy(double c, const FlatState& other) {
  a0.axpy(c, other.a0);
  da0.axpy(c, other.da0);
  phi.axpy(c, other.phi);
  dphi.axpy(c, other.dphi);
  for (int k = 0; k < 3; ++k) {
    ai[k].axpy(c, other.ai[k]);
    dai[k].axpy(c, other.dai[k]);
  }
}

FlatEngine::FlatEngine(const MediumSpec& medium, const GridSpec& grid)
    : medium_(medium), grid_(grid) {
  if (!medium.constant()) {
    throw ConfigError("flat engine requires a constant refractive index");
  }
  const SymbolClass cls = classify_symbol(medium.lambda());
  if (cls.kind != SymbolKind::hyperbolic) {
    throw ConfigError(
        "flat engine rejects lambda >= 1: the time-component operator is " +
        to_string(cls.kind) + " (hyperbolic only for lambda < 1)");
  }
  n_ = medium.n_const();
  lambda_ = medium.lambda();
  mu2_ = medium.mu_p() * medium.mu_p();
}

double FlatEngine::max_speed() const {
  return std::max(1.0 / n_, 1.0 / std::sqrt(1.0 - lambda_));
}

double FlatEngine::max_stable_dt() const {
  // Peak semi-discrete frequency: stencil symbol at the Nyquist mode times
  // the fastest speed, plus the mass frequency. RK4 is stable on the
  // imaginary axis up to 2*sqrt(2).
  double smax = 0.0;
  for (int d = 0; d < grid_.dim; ++d) {
    const double h = grid_.spacing(d);
    smax += laplacian_symbol_phase(std::numbers::pi, grid_.order) / (h * h);
  }
  const double c2 = max_speed() * max_speed();
  const double omega_max = std::sqrt(smax * c2 + mu2_ / (n_ * n_));
  return 2.0 * std::sqrt(2.0) / omega_max;
}

double FlatEngine::dt_from_cfl(double cfl) const {
  return cfl * grid_.min_spacing() / max_speed();
}

void FlatEngine::check_state(const FlatState& s) const {
  if (!(s.a0.grid() == grid_)) {
    throw ConfigError("state grid does not match engine grid");
  }
}

FlatState FlatEngine::init_from_free_data(const Vec3Field& ai,
                                          const Vec3Field& dai) const {
  if (!(medium_.mu_p() > 0.0)) {
    throw ConfigError(
        "constrained initialization requires mu_p > 0 (unsupported limit)");
  }
  for (int k = 0; k < 3; ++k) {
    if (!(ai[k].grid() == grid_) || !(dai[k].grid() == grid_)) {
      throw ConfigError("free data grid does not match engine grid");
    }
    ai[k].require_finite("free data A_i");
    dai[k].require_finite("free data d_t A_i");
  }

  FlatState s(grid_);
  const double inv1ml = 1.0 / (1.0 - lambda_);
  ScalarField div_dai = divergence(dai, grid_);
  const double mass2 = (1.0 - lambda_) * mu2_ / (n_ * n_);
  s.a0 = solve_screened_poisson({div_dai, mass2});
  s.da0 = divergence(ai, grid_);
  s.da0 *= inv1ml;
  s.phi = s.da0;
  s.dphi = div_dai;
  s.dphi *= inv1ml;
  for (int k = 0; k < 3; ++k) {
    s.ai[k] = ai[k];
    s.dai[k] = dai[k];
  }
  s.t = 0.0;
  return s;
}

void FlatEngine::rhs(const FlatState& s, FlatState& out) const {
  check_state(s);
  if (!(out.a0.grid() == grid_)) out = FlatState(grid_);

  const double inv1ml = 1.0 / (1.0 - lambda_);
  const double inv_n2 = 1.0 / (n_ * n_);
  const double mu2_n2 = mu2_ * inv_n2;
  const double cphi = 1.0 - lambda_ - n_ * n_;

  out.a0 = s.da0;
  out.phi = s.dphi;

  // d_t(da0) = (Lap a0)/(1-lambda) - mu^2 n^-2 a0, same operator for phi.
  apply_laplacian(s.a0, out.da0);
  for (std::size_t p = 0; p < out.da0.size(); ++p) {
    out.da0[p] = inv1ml * out.da0[p] - mu2_n2 * s.a0[p];
  }
  apply_laplacian(s.phi, out.dphi);
  for (std::size_t p = 0; p < out.dphi.size(); ++p) {
    out.dphi[p] = inv1ml * out.dphi[p] - mu2_n2 * s.phi[p];
  }

  // d_t(dai) = n^-2 (Lap ai - mu^2 ai - (1 - lambda - n^2) grad phi).
  ScalarField grad_phi(grid_);
  for (int k = 0; k < 3; ++k) {
    out.ai[k] = s.dai[k];
    apply_laplacian(s.ai[k], out.dai[k]);
    const bool has_grad = k < grid_.dim;
    if (has_grad) apply_derivative(s.phi, k, grad_phi);
    for (std::size_t p = 0; p < out.dai[k].size(); ++p) {
      double v = out.dai[k][p] - mu2_ * s.ai[k][p];
      if (has_grad) v -= cphi * grad_phi[p];
      out.dai[k][p] = inv_n2 * v;
    }
  }
}

namespace {

struct Rk4Buffers {
  FlatState k1, k2, k3, k4, stage;
  explicit Rk4Buffers(const GridSpec& g)
      : k1(g), k2(g), k3(g), k4(g), stage(g) {}
};

void rk4_step(const FlatEngine& eng, const FlatState& in, double dt,
              FlatState& out, Rk4Buffers& b) {
  eng.rhs(in, b.k1);
  b.stage = in;
  b.stage.axpy(0.5 * dt, b.k1);
  eng.rhs(b.stage, b.k2);
  b.stage = in;
  b.stage.axpy(0.5 * dt, b.k2);
  eng.rhs(b.stage, b.k3);
  b.stage = in;
  b.stage.axpy(dt, b.k3);
  eng.rhs(b.stage, b.k4);
  out = in;
  out.axpy(dt / 6.0, b.k1);
  out.axpy(dt / 3.0, b.k2);
  out.axpy(dt / 3.0, b.k3);
  out.axpy(dt / 6.0, b.k4);
  out.t = in.t + dt;
}

}  // namespace

FlatState FlatEngine::step(const FlatState& state, double dt) const {
  check_state(state);
  if (!(dt > 0.0) || dt > max_stable_dt() * (1.0 + 1e-12)) {
    throw CflError("time step " + std::to_string(dt) +
                   " violates the stability bound " +
                   std::to_string(max_stable_dt()));
  }
  Rk4Buffers buf(grid_);
  FlatState out(grid_);
  rk4_step(*this, state, dt, out, buf);
  return out;
}

MonitorReport FlatEngine::monitors(const FlatState& s) const {
  check_state(s);
  MonitorReport r;
  r.t = s.t;
  r.a0_l2 = norm_l2(s.a0);
  r.phi_l2 = norm_l2(s.phi);
  double ai2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double v = norm_l2(s.ai[k]);
    ai2 += v * v;
  }
  r.ai_l2 = std::sqrt(ai2);

  ScalarField work = s.phi;
  work -= s.da0;
  r.c1_l2 = norm_l2(work);
  r.c1_linf = norm_linf(work);

  work = divergence(s.ai, grid_);
  for (std::size_t p = 0; p < work.size(); ++p) {
    work[p] = (1.0 - lambda_) * s.da0[p] - work[p];
  }
  r.c2_l2 = norm_l2(work);
  r.c2_linf = norm_linf(work);

  // Gauss residual with the same discrete operators as the elliptic solve.
  ScalarField gauss = laplacian(s.a0);
  const double mass2 = (1.0 - lambda_) * mu2_ / (n_ * n_);
  gauss.axpy(-mass2, s.a0);
  gauss -= divergence(s.dai, grid_);
  r.gauss_l2 = norm_l2(gauss);
  r.gauss_linf = norm_linf(gauss);
  return r;
}

FlatEvolveResult FlatEngine::evolve(FlatState state,
                                    const EvolveOptions& opts) const {
  check_state(state);
  if (!(opts.t_end >= 0.0)) {
    throw ConfigError("evolve needs t_end >= 0");
  }
  FlatEvolveResult result;
  if (opts.t_end == 0.0) {
    result.monitors.push_back(monitors(state));
    if (opts.probe) result.probe_series.push_back(opts.probe(state));
    result.state = std::move(state);
    result.dt = 0.0;
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
  Rk4Buffers buf(grid_);
  FlatState next(grid_);

  auto sample = [&](const FlatState& s) {
    MonitorReport m = monitors(s);
    const double total = m.a0_l2 + m.ai_l2 + m.phi_l2 + m.c1_l2 + m.c2_l2 +
                         m.gauss_l2;
    if (!std::isfinite(total)) {
      throw DivergenceError("non-finite fields during evolution", s.t);
    }
    result.monitors.push_back(m);
  };

  sample(state);
  if (opts.probe) result.probe_series.push_back(opts.probe(state));

  // Rolling window of the last three levels (oldest first) when requested.
  std::optional<std::array<FlatState, 3>> ring;
  if (opts.store_levels && steps >= 2) {
    ring.emplace(std::array<FlatState, 3>{state, state, state});
  }

  for (int step_idx = 1; step_idx <= steps; ++step_idx) {
    rk4_step(*this, state, dt, next, buf);
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

  result.levels = std::move(ring);
  result.state = std::move(state);
  return result;
}

std::array<double, 4> FlatEngine::fieldeq_residual(
    const std::array<FlatState, 3>& levels) const {
  const FlatState& prev = levels[0];
  const FlatState& mid = levels[1];
  const FlatState& next = levels[2];
  const double dt1 = mid.t - prev.t;
  const double dt2 = next.t - mid.t;
  if (!(dt1 > 0.0) || std::abs(dt1 - dt2) > 1e-9 * dt1) {
    throw ConfigError("fieldeq_residual needs uniformly spaced time levels");
  }
  const double dt = dt1;
  const double inv_n2 = 1.0 / (n_ * n_);
  const double n2 = n_ * n_;
  const double mass0 = mu2_ * (1.0 - lambda_) * inv_n2;

  std::array<double, 4> out{};

  // Time component: Lap a0 - d_t(div ai) - mu^2 (1-lambda) n^-2 a0.
  // No second time differences of a0 enter; only the outer-level ai fields
  // and the center a0.
  {
    ScalarField res = laplacian(mid.a0);
    res.axpy(-mass0, mid.a0);
    ScalarField div_next = divergence(next.ai, grid_);
    ScalarField div_prev = divergence(prev.ai, grid_);
    const double inv2dt = 1.0 / (2.0 * dt);
    for (std::size_t p = 0; p < res.size(); ++p) {
      res[p] -= (div_next[p] - div_prev[p]) * inv2dt;
    }
    out[0] = norm_l2(res);
  }

  // Spatial components:
  //   -n^2 dtt A_k + Lap A_k + n^2 d_k(d_t A_0) - d_k(div A) - mu^2 A_k.
  ScalarField dt_a0(grid_);
  {
    const double inv2dt = 1.0 / (2.0 * dt);
    for (std::size_t p = 0; p < dt_a0.size(); ++p) {
      dt_a0[p] = (next.a0[p] - prev.a0[p]) * inv2dt;
    }
  }
  ScalarField div_mid = divergence(mid.ai, grid_);
  ScalarField grad(grid_);
  for (int k = 0; k < 3; ++k) {
    ScalarField res = laplacian(mid.ai[k]);
    const double invdt2 = 1.0 / (dt * dt);
    for (std::size_t p = 0; p < res.size(); ++p) {
      const double dtt =
          (next.ai[k][p] - 2.0 * mid.ai[k][p] + prev.ai[k][p]) * invdt2;
      res[p] += -n2 * dtt - mu2_ * mid.ai[k][p];
    }
    if (k < grid_.dim) {
      apply_derivative(dt_a0, k, grad);
      for (std::size_t p = 0; p < res.size(); ++p) res[p] += n2 * grad[p];
      apply_derivative(div_mid, k, grad);
      for (std::size_t p = 0; p < res.size(); ++p) res[p] -= grad[p];
    }
    out[static_cast<std::size_t>(k) + 1] = norm_l2(res);
  }
  return out;
}

}  // namespace proca
