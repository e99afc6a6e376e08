#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <sstream>

#include "proca/elliptic.hpp"
#include "proca/flat_engine.hpp"
#include "proca/geometry.hpp"
#include "proca/gordon_engine.hpp"
#include "proca/grid.hpp"
#include "proca/harness.hpp"
#include "proca/medium.hpp"
#include "proca/modes.hpp"
#include "proca/version.hpp"

namespace py = pybind11;
using namespace proca;

namespace {

using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Grid fields cross the boundary as numpy arrays shaped like the grid
// (axis 0 fastest in memory, i.e. the last numpy axis).
py::array field_to_numpy(const ScalarField& f) {
  const GridSpec& g = f.grid();
  std::vector<py::ssize_t> shape;
  for (int d = g.dim - 1; d >= 0; --d) shape.push_back(g.points[d]);
  py::array_t<double> out(shape);
  std::memcpy(out.mutable_data(), f.data(), f.size() * sizeof(double));
  return out;
}

ScalarField numpy_to_field(const DArray& a, const GridSpec& g) {
  if (a.size() != g.size()) {
    throw ConfigError("array size does not match the grid");
  }
  ScalarField f(g);
  std::memcpy(f.data(), a.data(), f.size() * sizeof(double));
  return f;
}

Vec3Field numpy_to_vec3(const DArray& a, const GridSpec& g) {
  if (a.size() != 3 * g.size()) {
    throw ConfigError("expected 3 components of grid-sized data");
  }
  Vec3Field v{ScalarField(g), ScalarField(g), ScalarField(g)};
  const double* src = a.data();
  for (int c = 0; c < 3; ++c) {
    std::memcpy(v[std::size_t(c)].data(), src + c * g.size(),
                std::size_t(g.size()) * sizeof(double));
  }
  return v;
}

py::dict flat_monitors_dict(const std::vector<MonitorReport>& rows) {
  const std::size_t n = rows.size();
  auto col = [&](auto getter) {
    py::array_t<double> a{py::ssize_t(n)};
    double* d = a.mutable_data();
    for (std::size_t i = 0; i < n; ++i) d[i] = getter(rows[i]);
    return a;
  };
  py::dict out;
  out["t"] = col([](const MonitorReport& m) { return m.t; });
  out["a0_l2"] = col([](const MonitorReport& m) { return m.a0_l2; });
  out["ai_l2"] = col([](const MonitorReport& m) { return m.ai_l2; });
  out["phi_l2"] = col([](const MonitorReport& m) { return m.phi_l2; });
  out["c1_l2"] = col([](const MonitorReport& m) { return m.c1_l2; });
  out["c1_linf"] = col([](const MonitorReport& m) { return m.c1_linf; });
  out["c2_l2"] = col([](const MonitorReport& m) { return m.c2_l2; });
  out["c2_linf"] = col([](const MonitorReport& m) { return m.c2_linf; });
  out["gauss_l2"] = col([](const MonitorReport& m) { return m.gauss_l2; });
  out["gauss_linf"] = col([](const MonitorReport& m) { return m.gauss_linf; });
  return out;
}

py::dict gordon_monitors_dict(const std::vector<GordonMonitorReport>& rows) {
  const std::size_t n = rows.size();
  auto col = [&](auto getter) {
    py::array_t<double> a{py::ssize_t(n)};
    double* d = a.mutable_data();
    for (std::size_t i = 0; i < n; ++i) d[i] = getter(rows[i]);
    return a;
  };
  py::dict out;
  out["t"] = col([](const GordonMonitorReport& m) { return m.t; });
  out["atld0_l2"] = col([](const GordonMonitorReport& m) { return m.atld0_l2; });
  out["atldi_l2"] = col([](const GordonMonitorReport& m) { return m.atldi_l2; });
  out["lorenz_l2"] = col([](const GordonMonitorReport& m) { return m.lorenz_l2; });
  out["lorenz_linf"] =
      col([](const GordonMonitorReport& m) { return m.lorenz_linf; });
  out["gauss_l2"] = col([](const GordonMonitorReport& m) { return m.gauss_l2; });
  out["gauss_linf"] =
      col([](const GordonMonitorReport& m) { return m.gauss_linf; });
  return out;
}

std::array<double, 3> as_kvec(const std::vector<double>& k) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  if (k.empty() || k.size() > 3) {
    throw ConfigError("wavevector needs 1..3 components");
  }
  for (std::size_t d = 0; d < k.size(); ++d) out[d] = k[d];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constrained Proca evolution in dielectric media";
  m.attr("__version__") = kVersion;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<CflError>(m, "CflError", PyExc_RuntimeError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<DivergenceError>(m, "DivergenceError",
                                          PyExc_FloatingPointError);
  py::register_exception<MeasurementError>(m, "MeasurementError",
                                           PyExc_RuntimeError);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int dim, std::vector<int> points,
                       std::vector<double> lengths, int order) {
             std::array<int, 3> p{1, 1, 1};
             std::array<double, 3> l{1.0, 1.0, 1.0};
             for (int d = 0; d < dim; ++d) {
               p[d] = points.size() == 1 ? points[0]
                                         : points.at(std::size_t(d));
               l[d] = lengths.size() == 1 ? lengths[0]
                                          : lengths.at(std::size_t(d));
             }
             return GridSpec(dim, p, l, order);
           }),
           py::arg("dim"), py::arg("points"), py::arg("lengths"),
           py::arg("order") = 2)
      .def_readonly("dim", &GridSpec::dim)
      .def_readonly("order", &GridSpec::order)
      .def_property_readonly("points",
                             [](const GridSpec& g) {
                               std::vector<int> p;
                               for (int d = 0; d < g.dim; ++d)
                                 p.push_back(g.points[d]);
                               return p;
                             })
      .def_property_readonly("lengths",
                             [](const GridSpec& g) {
                               std::vector<double> l;
                               for (int d = 0; d < g.dim; ++d)
                                 l.push_back(g.lengths[d]);
                               return l;
                             })
      .def("spacing", &GridSpec::spacing, py::arg("axis"))
      .def("__repr__", [](const GridSpec& g) {
        std::string s = "GridSpec(dim=" + std::to_string(g.dim) + ", points=[";
        for (int d = 0; d < g.dim; ++d) {
          if (d) s += ", ";
          s += std::to_string(g.points[d]);
        }
        return s + "], order=" + std::to_string(g.order) + ")";
      });

  py::class_<MediumSpec>(m, "MediumSpec")
      .def_static("constant", &MediumSpec::constant_index, py::arg("n"),
                  py::arg("lam") = 0.0, py::arg("mu_p") = 0.0)
      .def_static(
          "varying",
          [](const DArray& n, const GridSpec& g, double lam, double mu_p) {
            return MediumSpec::varying_index(numpy_to_field(n, g), lam, mu_p);
          },
          py::arg("n"), py::arg("grid"), py::arg("lam") = 0.0,
          py::arg("mu_p") = 0.0)
      .def_property_readonly("is_constant", &MediumSpec::constant)
      .def_property_readonly("lam", &MediumSpec::lambda)
      .def_property_readonly("mu_p", &MediumSpec::mu_p)
      .def_property_readonly("min_n", &MediumSpec::min_n)
      .def_property_readonly("max_n", &MediumSpec::max_n);

  // grid operations
  m.def(
      "derivative",
      [](const DArray& f, const GridSpec& g, int axis) {
        return field_to_numpy(derivative(numpy_to_field(f, g), axis));
      },
      py::arg("f"), py::arg("grid"), py::arg("axis"));
  m.def(
      "laplacian",
      [](const DArray& f, const GridSpec& g) {
        return field_to_numpy(laplacian(numpy_to_field(f, g)));
      },
      py::arg("f"), py::arg("grid"));
  m.def(
      "norm_l2",
      [](const DArray& f, const GridSpec& g) {
        return norm_l2(numpy_to_field(f, g));
      },
      py::arg("f"), py::arg("grid"));
  m.def(
      "norm_linf",
      [](const DArray& f, const GridSpec& g) {
        return norm_linf(numpy_to_field(f, g));
      },
      py::arg("f"), py::arg("grid"));
  m.def(
      "random_bandlimited",
      [](std::uint64_t seed, int kmax, const GridSpec& g) {
        return field_to_numpy(random_bandlimited(seed, kmax, g));
      },
      py::arg("seed"), py::arg("kmax"), py::arg("grid"));

  // geometry
  m.def("classify_symbol", [](double lam) {
    const SymbolClass c = classify_symbol(lam);
    return py::make_tuple(to_string(c.kind),
                          c.speed ? py::cast(*c.speed) : py::none());
  });

  // elliptic
  m.def(
      "solve_screened_poisson",
      [](const DArray& rhs, double mass2, const GridSpec& g) {
        return field_to_numpy(
            solve_screened_poisson({numpy_to_field(rhs, g), mass2}));
      },
      py::arg("rhs"), py::arg("mass2"), py::arg("grid"));
  m.def(
      "solve_gauss_constraint",
      [](const MediumSpec& medium, const GridSpec& g, const DArray& adot,
         double tol, int max_iter) {
        return field_to_numpy(solve_gauss_constraint(
            {medium, g, numpy_to_vec3(adot, g), tol, max_iter}));
      },
      py::arg("medium"), py::arg("grid"), py::arg("adot"),
      py::arg("tol") = 1e-10, py::arg("max_iter") = 500);

  // modes
  m.def(
      "dispersion_transverse",
      [](const std::vector<double>& k, const MediumSpec& medium) {
        return dispersion_transverse(as_kvec(k), medium);
      },
      py::arg("k"), py::arg("medium"));
  m.def(
      "dispersion_longitudinal",
      [](const std::vector<double>& k, const MediumSpec& medium) {
        return dispersion_longitudinal(as_kvec(k), medium);
      },
      py::arg("k"), py::arg("medium"));
  m.def(
      "plane_wave_free_data",
      [](const std::string& kind, const std::vector<double>& k,
         double amplitude, const MediumSpec& medium, const GridSpec& g) {
        const ModeKind mk = kind == "transverse" ? ModeKind::transverse
                                                 : ModeKind::longitudinal;
        const DispersionMode mode = make_mode(mk, as_kvec(k), medium);
        const auto [ai, dai] = plane_wave_free_data(mode, amplitude, g);
        py::list a_out, da_out;
        for (int c = 0; c < 3; ++c) {
          a_out.append(field_to_numpy(ai[std::size_t(c)]));
          da_out.append(field_to_numpy(dai[std::size_t(c)]));
        }
        return py::make_tuple(a_out, da_out, mode.omega);
      },
      py::arg("kind"), py::arg("k"), py::arg("amplitude"), py::arg("medium"),
      py::arg("grid"));
  m.def(
      "measure_frequency",
      [](const std::vector<double>& series, double dt) {
        return measure_frequency(series, dt);
      },
      py::arg("series"), py::arg("dt"));

  // flat engine
  py::class_<FlatState>(m, "FlatState")
      .def_readonly("t", &FlatState::t)
      .def_property_readonly(
          "a0", [](const FlatState& s) { return field_to_numpy(s.a0); })
      .def_property_readonly(
          "da0", [](const FlatState& s) { return field_to_numpy(s.da0); })
      .def_property_readonly(
          "phi", [](const FlatState& s) { return field_to_numpy(s.phi); })
      .def_property_readonly(
          "dphi", [](const FlatState& s) { return field_to_numpy(s.dphi); })
      .def_property_readonly("ai",
                             [](const FlatState& s) {
                               py::list out;
                               for (int c = 0; c < 3; ++c)
                                 out.append(field_to_numpy(s.ai[std::size_t(c)]));
                               return out;
                             })
      .def_property_readonly("dai", [](const FlatState& s) {
        py::list out;
        for (int c = 0; c < 3; ++c)
          out.append(field_to_numpy(s.dai[std::size_t(c)]));
        return out;
      });

  py::class_<FlatEngine>(m, "FlatEngine")
      .def(py::init<const MediumSpec&, const GridSpec&>(), py::arg("medium"),
           py::arg("grid"))
      .def("max_speed", &FlatEngine::max_speed)
      .def("max_stable_dt", &FlatEngine::max_stable_dt)
      .def("dt_from_cfl", &FlatEngine::dt_from_cfl, py::arg("cfl") = 0.25)
      .def(
          "init_from_free_data",
          [](const FlatEngine& e, const DArray& ai, const DArray& dai) {
            return e.init_from_free_data(numpy_to_vec3(ai, e.grid()),
                                         numpy_to_vec3(dai, e.grid()));
          },
          py::arg("ai"), py::arg("dai"))
      .def("step", &FlatEngine::step, py::arg("state"), py::arg("dt"))
      .def("monitors",
           [](const FlatEngine& e, const FlatState& s) {
             return flat_monitors_dict({e.monitors(s)});
           })
      .def(
          "evolve",
          [](const FlatEngine& e, const FlatState& s, double t_end, double cfl,
             std::optional<double> dt, int sample_every,
             const std::function<double(const FlatState&)>& probe) {
            EvolveOptions opts;
            opts.t_end = t_end;
            opts.dt = dt.value_or(e.dt_from_cfl(cfl));
            opts.sample_every = sample_every;
            opts.probe = probe;
            FlatEvolveResult r = e.evolve(s, opts);
            py::dict out;
            out["state"] = py::cast(std::move(r.state));
            out["monitors"] = flat_monitors_dict(r.monitors);
            out["dt"] = r.dt;
            out["probe"] = py::cast(r.probe_series);
            return out;
          },
          py::arg("state"), py::arg("t_end"), py::arg("cfl") = 0.25,
          py::arg("dt") = py::none(), py::arg("sample_every") = 1,
          py::arg("probe") = nullptr);

  // optical-metric engine
  py::class_<GordonState>(m, "GordonState")
      .def_readonly("t", &GordonState::t)
      .def_property_readonly("atld",
                             [](const GordonState& s) {
                               py::list out;
                               for (int nu = 0; nu < 4; ++nu)
                                 out.append(field_to_numpy(s.atld[nu]));
                               return out;
                             })
      .def_property_readonly("pi", [](const GordonState& s) {
        py::list out;
        for (int nu = 0; nu < 4; ++nu) out.append(field_to_numpy(s.pi[nu]));
        return out;
      });

  py::class_<GordonEngine>(m, "GordonEngine")
      .def(py::init<const MediumSpec&, const GridSpec&>(), py::arg("medium"),
           py::arg("grid"))
      .def("max_speed", &GordonEngine::max_speed)
      .def("max_stable_dt", &GordonEngine::max_stable_dt)
      .def("dt_from_cfl", &GordonEngine::dt_from_cfl, py::arg("cfl") = 0.25)
      .def(
          "init_from_free_data",
          [](const GordonEngine& e, const DArray& atld_i, const DArray& pi_i,
             double tol, int max_iter) {
            return e.init_from_free_data(numpy_to_vec3(atld_i, e.grid()),
                                         numpy_to_vec3(pi_i, e.grid()), tol,
                                         max_iter);
          },
          py::arg("atld_i"), py::arg("pi_i"), py::arg("tol") = 1e-10,
          py::arg("max_iter") = 500)
      .def("step", &GordonEngine::step, py::arg("state"), py::arg("dt"))
      .def("monitors",
           [](const GordonEngine& e, const GordonState& s) {
             return gordon_monitors_dict({e.monitors(s)});
           })
      .def(
          "evolve",
          [](const GordonEngine& e, const GordonState& s, double t_end,
             double cfl, std::optional<double> dt, int sample_every,
             const std::function<double(const GordonState&)>& probe) {
            GordonEvolveOptions opts;
            opts.t_end = t_end;
            opts.dt = dt.value_or(e.dt_from_cfl(cfl));
            opts.sample_every = sample_every;
            opts.probe = probe;
            GordonEvolveResult r = e.evolve(s, opts);
            py::dict out;
            out["state"] = py::cast(std::move(r.state));
            out["monitors"] = gordon_monitors_dict(r.monitors);
            out["dt"] = r.dt;
            out["probe"] = py::cast(r.probe_series);
            return out;
          },
          py::arg("state"), py::arg("t_end"), py::arg("cfl") = 0.25,
          py::arg("dt") = py::none(), py::arg("sample_every") = 1,
          py::arg("probe") = nullptr);

  // harness
  m.def(
      "run_config_text",
      [](const std::string& text) {
        const RunConfig cfg = parse_config(text);
        std::ostringstream log;
        const int code = run(cfg, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("text"),
      "Parse and execute a run config; returns (exit_code, log).");
  m.def(
      "run_config_file",
      [](const std::string& path) {
        std::ostringstream log;
        const int code = run_file(path, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("path"));
}
