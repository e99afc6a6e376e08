#include "proca/elliptic.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

namespace proca {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct plans is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  double* real = nullptr;
  fftw_complex* cplx = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  FftwBuffer(const GridSpec& g) {
    // FFTW wants row-major sizes with the fastest axis last; our layout has
    // axis 0 fastest.
    const int n0 = g.points[0];
    const int n1 = g.points[1];
    const int n2 = g.points[2];
    const int dims[3] = {n2, n1, n0};
    const std::size_t nreal = static_cast<std::size_t>(g.size());
    const std::size_t ncplx =
        static_cast<std::size_t>(n2) * n1 * (n0 / 2 + 1);
    real = fftw_alloc_real(nreal);
    cplx = fftw_alloc_complex(ncplx);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fwd = fftw_plan_dft_r2c(3, dims, real, cplx, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r(3, dims, cplx, real, FFTW_ESTIMATE);
  }

  ~FftwBuffer() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(real);
    fftw_free(cplx);
  }

  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
};

double stencil_symbol(const GridSpec& g, int k0, int k1, int k2) {
  const std::array<int, 3> k{k0, k1, k2};
  double s = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    const double theta =
        2.0 * std::numbers::pi * double(k[d]) / double(g.points[d]);
    const double h = g.spacing(d);
    s += laplacian_symbol_phase(theta, g.order) / (h * h);
  }
  return s;
}

}  // namespace

ScalarField solve_screened_poisson(const ScreenedPoissonProblem& problem) {
  const ScalarField& rhs = problem.rhs;
  const GridSpec& g = rhs.grid();
  const double mass2 = problem.mass2;
  if (!(mass2 >= 0.0) || !std::isfinite(mass2)) {
    throw ConfigError("screened Poisson mass2 must be finite and >= 0");
  }

  const double rhs_linf = norm_linf(rhs);
  if (rhs_linf == 0.0) {
    return ScalarField(g);
  }
  if (mass2 == 0.0) {
    double mean = 0.0;
    for (std::size_t p = 0; p < rhs.size(); ++p) mean += rhs[p];
    mean /= double(rhs.size());
    if (std::abs(mean) > 1e-12 * rhs_linf) {
      throw SolverError(
          "screened Poisson with mass2 = 0 requires a zero-mean rhs", mean, 0);
    }
  }

  FftwBuffer buf(g);
  for (std::size_t p = 0; p < rhs.size(); ++p) buf.real[p] = rhs[p];
  fftw_execute(buf.fwd);

  const int n0 = g.points[0];
  const int n1 = g.points[1];
  const int n2 = g.points[2];
  const int c0 = n0 / 2 + 1;
  const double scale = 1.0 / double(g.size());
  std::size_t idx = 0;
  for (int i2 = 0; i2 < n2; ++i2) {
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i0 = 0; i0 < c0; ++i0, ++idx) {
        const double denom = -stencil_symbol(g, i0, i1, i2) - mass2;
        double re = buf.cplx[idx][0];
        double im = buf.cplx[idx][1];
        if (denom == 0.0) {
          // Only the zero mode can hit this (mass2 = 0, solvability already
          // checked); project it out.
          re = im = 0.0;
        } else {
          re /= denom;
          im /= denom;
        }
        buf.cplx[idx][0] = re * scale;
        buf.cplx[idx][1] = im * scale;
      }
    }
  }
  fftw_execute(buf.bwd);

  ScalarField u(g);
  for (std::size_t p = 0; p < u.size(); ++p) u[p] = buf.real[p];

  // Verify the discrete residual directly.
  ScalarField check = laplacian(u);
  check.axpy(-mass2, u);
  check -= rhs;
  const double rel = norm_l2(check) / norm_l2(rhs);
  if (!(rel <= 1e-12)) {
    throw SolverError("screened Poisson residual above tolerance", rel, 0);
  }
  return u;
}

GaussOperator::GaussOperator(const MediumSpec& medium, const GridSpec& grid)
    : grid_(grid), mu_p_(medium.mu_p()) {
  ScalarField n = medium.n_on(grid);
  n2_ = ScalarField(grid);
  mu2_n2_ = ScalarField(grid);
  const double mu2 = mu_p_ * mu_p_;
  double sum = 0.0;
  for (std::size_t p = 0; p < n.size(); ++p) {
    n2_[p] = n[p] * n[p];
    mu2_n2_[p] = mu2 * n2_[p];
    sum += n2_[p];
  }
  mean_n2_ = sum / double(n.size());
  for (int d = 0; d < 3; ++d) {
    grad_n2_[static_cast<std::size_t>(d)] =
        d < grid.dim ? derivative(n2_, d) : ScalarField(grid);
  }
}

void GaussOperator::apply(const ScalarField& u, ScalarField& out) const {
  apply_laplacian(u, out);
  for (std::size_t p = 0; p < out.size(); ++p) {
    out[p] = n2_[p] * out[p] - mu2_n2_[p] * u[p];
  }
  ScalarField du(grid_);
  for (int d = 0; d < grid_.dim; ++d) {
    apply_derivative(u, d, du);
    const ScalarField& g2 = grad_n2_[static_cast<std::size_t>(d)];
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += g2[p] * du[p];
  }
}

ScalarField GaussOperator::apply(const ScalarField& u) const {
  ScalarField out(grid_);
  apply(u, out);
  return out;
}

ScalarField GaussOperator::rhs(const Vec3Field& adot) const {
  ScalarField out = divergence(adot, grid_);
  for (std::size_t p = 0; p < out.size(); ++p) out[p] *= n2_[p];
  for (int d = 0; d < grid_.dim; ++d) {
    const ScalarField& g2 = grad_n2_[static_cast<std::size_t>(d)];
    const ScalarField& v = adot[static_cast<std::size_t>(d)];
    for (std::size_t p = 0; p < out.size(); ++p) out[p] += g2[p] * v[p];
  }
  return out;
}

namespace {

double dot(const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t p = 0; p < a.size(); ++p) s += a[p] * b[p];
  return s;
}

}  // namespace

ScalarField solve_gauss_system(const GaussOperator& op, const ScalarField& rhs,
                               double tol, int max_iter) {
  if (!(op.mu_p() > 0.0)) {
    throw ConfigError(
        "constrained initialization requires mu_p > 0 (unsupported limit)");
  }
  const GridSpec& g = op.grid();
  const double mu2 = op.mu_p() * op.mu_p();

  const ScalarField& b = rhs;
  const double bnorm = std::sqrt(dot(b, b));
  ScalarField x(g);
  if (bnorm == 0.0) {
    return x;
  }

  // Preconditioner: exact inverse of the constant-coefficient reduction
  // mean(n^2) (Lap_h - mu^2).
  auto precond = [&](const ScalarField& v) {
    ScalarField out = solve_screened_poisson({v, mu2});
    out *= 1.0 / op.mean_n2();
    return out;
  };

  // BiCGStab with true-residual verification at convergence.
  ScalarField r = b;  // x0 = 0
  ScalarField rhat = r;
  ScalarField p(g), v(g), t(g);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double resid = 1.0;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const double rho_new = dot(rhat, r);
    if (rho_new == 0.0) break;
    if (iter == 0) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = r[i] + beta * (p[i] - omega * v[i]);
      }
    }
    rho = rho_new;
    ScalarField phat = precond(p);
    op.apply(phat, v);
    const double rv = dot(rhat, v);
    if (rv == 0.0) break;
    alpha = rho / rv;
    ScalarField s = r;
    s.axpy(-alpha, v);
    if (std::sqrt(dot(s, s)) / bnorm <= 0.1 * tol) {
      x.axpy(alpha, phat);
      resid = std::sqrt(dot(s, s)) / bnorm;
      break;
    }
    ScalarField shat = precond(s);
    op.apply(shat, t);
    const double tt = dot(t, t);
    if (tt == 0.0) break;
    omega = dot(t, s) / tt;
    x.axpy(alpha, phat);
    x.axpy(omega, shat);
    r = s;
    r.axpy(-omega, t);
    resid = std::sqrt(dot(r, r)) / bnorm;
    if (resid <= 0.5 * tol || omega == 0.0) break;
  }

  // Always report against the true residual of the returned field.
  ScalarField check = op.apply(x);
  check -= b;
  const double true_resid = std::sqrt(dot(check, check)) / bnorm;
  if (!(true_resid <= tol)) {
    throw SolverError("Gauss-constraint solve did not converge", true_resid,
                      iter);
  }
  return x;
}

ScalarField solve_gauss_constraint(const GaussOperator& op,
                                   const Vec3Field& adot, double tol,
                                   int max_iter) {
  return solve_gauss_system(op, op.rhs(adot), tol, max_iter);
}

ScalarField solve_gauss_constraint(const GaussOperatorProblem& problem) {
  GaussOperator op(problem.medium, problem.grid);
  return solve_gauss_constraint(op, problem.adot, problem.tol,
                                problem.max_iter);
}

}  // namespace proca
