#include "proca/geometry.hpp"

#include <cmath>

namespace proca {

std::string to_string(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::hyperbolic:
      return "hyperbolic";
    case SymbolKind::elliptic3d:
      return "elliptic-3d";
    case SymbolKind::elliptic4d:
      return "elliptic-4d";
  }
  return "unknown";
}

SymbolClass classify_symbol(double lambda) {
  if (lambda < 1.0) {
    return SymbolClass{SymbolKind::hyperbolic, 1.0 / std::sqrt(1.0 - lambda)};
  }
  if (lambda == 1.0) {
    return SymbolClass{SymbolKind::elliptic3d, std::nullopt};
  }
  return SymbolClass{SymbolKind::elliptic4d, std::nullopt};
}

SymTensorField::SymTensorField(const GridSpec& grid) {
  for (auto& f : comp_) f = ScalarField(grid);
}

int SymTensorField::index(int a, int b) {
  if (a > b) std::swap(a, b);
  // (0,0) (0,1) (0,2) (0,3) (1,1) (1,2) (1,3) (2,2) (2,3) (3,3)
  static constexpr int base[4] = {0, 4, 7, 9};
  return base[a] + (b - a);
}

ChristoffelField::ChristoffelField(const GridSpec& grid) : grid_(grid) {
  for (auto& f : comp_) f = ScalarField(grid);
}

namespace {

// Diagonal metric family: fills inv with diag(t00, 1, 1, 1) and. when t00 is
// nonzero everywhere, the forward components diag(1/t00, 1, 1, 1) and the
// determinant 1/t00.
MetricComponents diagonal_metric(const ScalarField& inv00,
                                 const GridSpec& grid) {
  MetricComponents m;
  m.inv = SymTensorField(grid);
  m.inv.at(0, 0) = inv00;
  for (int i = 1; i < 4; ++i) m.inv.at(i, i).fill(1.0);

  bool invertible = true;
  for (std::size_t p = 0; p < inv00.size(); ++p) {
    if (inv00[p] == 0.0) {
      invertible = false;
      break;
    }
  }
  m.has_fwd = invertible;
  if (invertible) {
    m.fwd = SymTensorField(grid);
    m.det = ScalarField(grid);
    for (std::size_t p = 0; p < inv00.size(); ++p) {
      m.fwd.at(0, 0)[p] = 1.0 / inv00[p];
      m.det[p] = 1.0 / inv00[p];
    }
    for (int i = 1; i < 4; ++i) m.fwd.at(i, i).fill(1.0);
  }
  return m;
}

}  // namespace

MetricComponents gordon_metric(const MediumSpec& medium, const GridSpec& grid) {
  ScalarField n = medium.n_on(grid);
  ScalarField inv00(grid);
  for (std::size_t p = 0; p < n.size(); ++p) inv00[p] = -n[p] * n[p];
  return diagonal_metric(inv00, grid);
}

MetricComponents mass_metric(const MediumSpec& medium, const GridSpec& grid) {
  ScalarField inv00(grid, medium.lambda() - 1.0);
  return diagonal_metric(inv00, grid);
}

ChristoffelField christoffels_static(const MediumSpec& medium,
                                     const GridSpec& grid) {
  ScalarField n = medium.n_on(grid);
  ChristoffelField chris(grid);
  for (int d = 0; d < grid.dim; ++d) {
    ScalarField dn = derivative(n, d);
    ScalarField& g_t = chris.at(0, 0, d + 1);  // Gamma^0_{0i}
    ScalarField& g_x = chris.at(d + 1, 0, 0);  // Gamma^i_{00}
    for (std::size_t p = 0; p < n.size(); ++p) {
      const double inv_n = 1.0 / n[p];
      g_t[p] = -dn[p] * inv_n;
      g_x[p] = -dn[p] * inv_n * inv_n * inv_n;
    }
  }
  return chris;
}

namespace {

// Raw Ricci components from the static formula
//   R_{bc} = d_a Gamma^a_{bc} - d_c Gamma^a_{ba}
//            + Gamma^a_{ad} Gamma^d_{bc} - Gamma^a_{cd} Gamma^d_{ba}
// with every time derivative dropped. Returns the full (possibly slightly
// asymmetric) 4x4 field array.
std::array<std::array<ScalarField, 4>, 4> ricci_raw(
    const ChristoffelField& chris, const GridSpec& grid) {
  // Traces t_b = Gamma^a_{ba}.
  std::array<ScalarField, 4> trace;
  for (int b = 0; b < 4; ++b) {
    trace[b] = ScalarField(grid);
    for (int a = 0; a < 4; ++a) trace[b] += chris.at(a, b, a);
  }

  std::array<std::array<ScalarField, 4>, 4> r;
  ScalarField tmp(grid);
  for (int b = 0; b < 4; ++b) {
    for (int c = 0; c < 4; ++c) {
      ScalarField acc(grid);
      // d_a Gamma^a_{bc}, spatial a only (static fields).
      for (int a = 1; a <= grid.dim; ++a) {
        apply_derivative(chris.at(a, b, c), a - 1, tmp);
        acc += tmp;
      }
      // -d_c t_b.
      if (c >= 1 && c <= grid.dim) {
        apply_derivative(trace[b], c - 1, tmp);
        acc -= tmp;
      }
      // Gamma^a_{ad} Gamma^d_{bc} - Gamma^a_{cd} Gamma^d_{ba}.
      for (int d = 0; d < 4; ++d) {
        const ScalarField& g_dbc = chris.at(d, b, c);
        const ScalarField& t_d = trace[d];
        for (std::size_t p = 0; p < acc.size(); ++p) {
          acc[p] += t_d[p] * g_dbc[p];
        }
        for (int a = 0; a < 4; ++a) {
          const ScalarField& g_acd = chris.at(a, c, d);
          const ScalarField& g_dba = chris.at(d, b, a);
          for (std::size_t p = 0; p < acc.size(); ++p) {
            acc[p] -= g_acd[p] * g_dba[p];
          }
        }
      }
      r[b][c] = std::move(acc);
    }
  }
  return r;
}

}  // namespace

RicciField ricci_static(const ChristoffelField& chris, const GridSpec& grid) {
  auto raw = ricci_raw(chris, grid);
  RicciField out;
  out.comp = SymTensorField(grid);
  for (int b = 0; b < 4; ++b) {
    for (int c = b; c < 4; ++c) {
      ScalarField& dst = out.comp.at(b, c);
      const ScalarField& r1 = raw[b][c];
      const ScalarField& r2 = raw[c][b];
      for (std::size_t p = 0; p < dst.size(); ++p) {
        dst[p] = 0.5 * (r1[p] + r2[p]);
      }
    }
  }
  return out;
}

double ricci_antisymmetry_linf(const ChristoffelField& chris,
                               const GridSpec& grid) {
  auto raw = ricci_raw(chris, grid);
  double m = 0.0;
  for (int b = 0; b < 4; ++b) {
    for (int c = b + 1; c < 4; ++c) {
      for (std::size_t p = 0; p < raw[b][c].size(); ++p) {
        m = std::max(m, std::abs(raw[b][c][p] - raw[c][b][p]));
      }
    }
  }
  return m;
}

GeometryBundle build_geometry(const MediumSpec& medium, const GridSpec& grid) {
  GeometryBundle g;
  g.gamma = gordon_metric(medium, grid);
  g.mass = mass_metric(medium, grid);
  g.chris = christoffels_static(medium, grid);
  g.ricci = ricci_static(g.chris, grid);
  g.n = medium.n_on(grid);
  g.n2 = ScalarField(grid);
  for (std::size_t p = 0; p < g.n.size(); ++p) g.n2[p] = g.n[p] * g.n[p];
  for (int d = 0; d < 3; ++d) {
    if (d < grid.dim) {
      ScalarField dn = derivative(g.n, d);
      for (std::size_t p = 0; p < dn.size(); ++p) dn[p] /= g.n[p];
      g.dlog_n[static_cast<std::size_t>(d)] = std::move(dn);
    } else {
      g.dlog_n[static_cast<std::size_t>(d)] = ScalarField(grid);
    }
  }

  // D_a l_b = d_a l_b - Gamma^s_{ab} l_s with l = (0, dlog_n) static.
  auto ell = [&](int b) -> const ScalarField* {
    return b == 0 ? nullptr : &g.dlog_n[static_cast<std::size_t>(b - 1)];
  };
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ScalarField out(grid);
      if (a >= 1 && a - 1 < grid.dim && ell(b) != nullptr) {
        apply_derivative(*ell(b), a - 1, out);
      }
      for (int s = 1; s < 4; ++s) {
        const ScalarField& gam = g.chris.at(s, a, b);
        const ScalarField& ls = *ell(s);
        for (std::size_t p = 0; p < out.size(); ++p) {
          out[p] -= gam[p] * ls[p];
        }
      }
      g.cov_dlog_n[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          std::move(out);
    }
  }
  return g;
}

}  // namespace proca
