#include "proca/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "proca/io.hpp"

namespace proca {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  }
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  bool lambda_seen = false;
  bool profile_seen = false;

  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line without '=': " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("config key '" + key + "' has no value");

    if (key == "grid.dim") {
      c.dim = int(parse_int(key, value));
    } else if (key == "grid.points") {
      c.points.clear();
      for (const auto& t : split_ws(value)) c.points.push_back(int(parse_int(key, t)));
    } else if (key == "grid.lengths") {
      c.lengths.clear();
      for (const auto& t : split_ws(value)) c.lengths.push_back(parse_double(key, t));
    } else if (key == "grid.order") {
      c.order = int(parse_int(key, value));
    } else if (key == "medium.n") {
      c.n_constant = true;
      c.n_value = parse_double(key, value);
    } else if (key == "medium.profile") {
      if (value != "sinusoidal") {
        throw ConfigError("unknown medium.profile '" + value + "'");
      }
      c.n_constant = false;
      profile_seen = true;
    } else if (key == "medium.n_base") {
      c.n_base = parse_double(key, value);
    } else if (key == "medium.n_amplitude") {
      c.n_amplitude = parse_double(key, value);
    } else if (key == "medium.n_axis") {
      c.n_axis = int(parse_int(key, value));
    } else if (key == "medium.n_periods") {
      c.n_periods = int(parse_int(key, value));
    } else if (key == "medium.lambda") {
      c.lambda = parse_double(key, value);
      lambda_seen = true;
    } else if (key == "medium.mu_p") {
      c.mu_p = parse_double(key, value);
    } else if (key == "engine") {
      if (value == "flat") {
        c.engine = EngineKind::flat;
      } else if (value == "gordon") {
        c.engine = EngineKind::gordon;
      } else {
        throw ConfigError("unknown engine '" + value + "'");
      }
    } else if (key == "init") {
      if (value == "random") {
        c.init = InitKind::random;
      } else if (value == "plane_wave") {
        c.init = InitKind::plane_wave;
      } else if (value == "file") {
        c.init = InitKind::file;
      } else {
        throw ConfigError("unknown init '" + value + "'");
      }
    } else if (key == "init.seed") {
      c.seed = std::uint64_t(parse_int(key, value));
    } else if (key == "init.kmax") {
      c.kmax = int(parse_int(key, value));
    } else if (key == "init.kind") {
      if (value != "transverse" && value != "longitudinal") {
        throw ConfigError("init.kind must be transverse or longitudinal");
      }
      c.wave_kind = value;
    } else if (key == "init.k") {
      c.wave_k.clear();
      for (const auto& t : split_ws(value)) c.wave_k.push_back(parse_double(key, t));
    } else if (key == "init.amplitude") {
      c.amplitude = parse_double(key, value);
    } else if (key == "init.file") {
      c.init_file = value;
    } else if (key == "evolve.cfl") {
      c.cfl = parse_double(key, value);
    } else if (key == "evolve.t_end") {
      c.t_end = parse_double(key, value);
    } else if (key == "evolve.sample_every") {
      c.sample_every = int(parse_int(key, value));
    } else if (key == "output.dir") {
      c.out_dir = value;
    } else if (key == "output.snapshot_every") {
      c.snapshot_every = int(parse_int(key, value));
    } else if (key == "elliptic.tol") {
      c.elliptic_tol = parse_double(key, value);
    } else if (key == "elliptic.max_iter") {
      c.elliptic_max_iter = int(parse_int(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (c.engine == EngineKind::gordon && lambda_seen) {
    throw ConfigError(
        "medium.lambda is not a gordon-engine key (the mass metric is the "
        "optical metric there)");
  }
  if (c.engine == EngineKind::flat && profile_seen) {
    throw ConfigError("flat engine requires a constant medium.n");
  }
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path));
}

void validate_config(const RunConfig& c) {
  if (c.dim < 1 || c.dim > 3) throw ConfigError("grid.dim must be 1..3");
  if (c.points.size() != 1 && int(c.points.size()) != c.dim) {
    throw ConfigError("grid.points needs 1 or dim values");
  }
  if (c.lengths.size() != 1 && int(c.lengths.size()) != c.dim) {
    throw ConfigError("grid.lengths needs 1 or dim values");
  }
  if (c.order != 2 && c.order != 4) throw ConfigError("grid.order must be 2 or 4");
  if (c.engine == EngineKind::flat && !c.lambda.has_value()) {
    throw ConfigError("flat engine requires medium.lambda");
  }
  if (c.engine == EngineKind::flat && !c.n_constant) {
    throw ConfigError("flat engine requires a constant medium.n");
  }
  if (!c.n_constant) {
    if (!(c.n_base > 0.0) || c.n_base - std::abs(c.n_amplitude) <= 0.0) {
      throw ConfigError("sinusoidal index profile must stay positive");
    }
    if (c.n_axis < 0 || c.n_axis >= c.dim) {
      throw ConfigError("medium.n_axis out of range");
    }
  }
  if (c.mu_p < 0.0) throw ConfigError("medium.mu_p must be >= 0");
  if (!(c.cfl > 0.0)) throw ConfigError("evolve.cfl must be positive");
  if (!(c.t_end >= 0.0)) throw ConfigError("evolve.t_end must be >= 0");
  if (c.sample_every < 1) throw ConfigError("evolve.sample_every must be >= 1");
  if (c.snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");
  if (c.init == InitKind::random && c.kmax < 1) {
    throw ConfigError("init.kmax must be >= 1");
  }
  if (c.init == InitKind::plane_wave &&
      (c.wave_k.empty() || int(c.wave_k.size()) > c.dim)) {
    throw ConfigError("init.k needs 1..dim components");
  }
  if (c.init == InitKind::file && c.init_file.empty()) {
    throw ConfigError("init.file path missing");
  }
  if (!(c.elliptic_tol > 0.0) || c.elliptic_max_iter < 1) {
    throw ConfigError("elliptic.tol/elliptic.max_iter invalid");
  }
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  kv("grid.dim", std::to_string(c.dim));
  {
    std::string v;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i) v += ' ';
      v += std::to_string(c.points[i]);
    }
    kv("grid.points", v);
  }
  {
    std::string v;
    for (std::size_t i = 0; i < c.lengths.size(); ++i) {
      if (i) v += ' ';
      v += g17(c.lengths[i]);
    }
    kv("grid.lengths", v);
  }
  kv("grid.order", std::to_string(c.order));
  if (c.n_constant) {
    kv("medium.n", g17(c.n_value));
  } else {
    kv("medium.profile", "sinusoidal");
    kv("medium.n_base", g17(c.n_base));
    kv("medium.n_amplitude", g17(c.n_amplitude));
    kv("medium.n_axis", std::to_string(c.n_axis));
    kv("medium.n_periods", std::to_string(c.n_periods));
  }
  if (c.lambda.has_value()) kv("medium.lambda", g17(*c.lambda));
  kv("medium.mu_p", g17(c.mu_p));
  kv("engine", c.engine == EngineKind::flat ? "flat" : "gordon");
  switch (c.init) {
    case InitKind::random:
      kv("init", "random");
      kv("init.seed", std::to_string(c.seed));
      kv("init.kmax", std::to_string(c.kmax));
      break;
    case InitKind::plane_wave: {
      kv("init", "plane_wave");
      kv("init.kind", c.wave_kind);
      std::string v;
      for (std::size_t i = 0; i < c.wave_k.size(); ++i) {
        if (i) v += ' ';
        v += g17(c.wave_k[i]);
      }
      kv("init.k", v);
      kv("init.amplitude", g17(c.amplitude));
      break;
    }
    case InitKind::file:
      kv("init", "file");
      kv("init.file", c.init_file);
      break;
  }
  kv("evolve.cfl", g17(c.cfl));
  kv("evolve.t_end", g17(c.t_end));
  kv("evolve.sample_every", std::to_string(c.sample_every));
  kv("output.dir", c.out_dir);
  kv("output.snapshot_every", std::to_string(c.snapshot_every));
  kv("elliptic.tol", g17(c.elliptic_tol));
  kv("elliptic.max_iter", std::to_string(c.elliptic_max_iter));
  return out;
}

GridSpec grid_from_config(const RunConfig& c) {
  std::array<int, 3> pts{1, 1, 1};
  std::array<double, 3> len{1.0, 1.0, 1.0};
  for (int d = 0; d < c.dim; ++d) {
    pts[d] = c.points.size() == 1 ? c.points[0] : c.points[std::size_t(d)];
    len[d] = c.lengths.size() == 1 ? c.lengths[0] : c.lengths[std::size_t(d)];
  }
  return GridSpec(c.dim, pts, len, c.order);
}

MediumSpec medium_from_config(const RunConfig& c, const GridSpec& grid) {
  const double lambda = c.lambda.value_or(0.0);
  if (c.n_constant) {
    return MediumSpec::constant_index(c.n_value, lambda, c.mu_p);
  }
  ScalarField n(grid);
  const double w =
      2.0 * std::numbers::pi * c.n_periods / grid.lengths[c.n_axis];
  for (std::int64_t p = 0; p < grid.size(); ++p) {
    const double x = grid.coordinate(p, c.n_axis);
    n[std::size_t(p)] = c.n_base + c.n_amplitude * std::sin(w * x);
  }
  return MediumSpec::varying_index(std::move(n), lambda, c.mu_p);
}

}  // namespace proca
