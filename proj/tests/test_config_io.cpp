#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "proca/config.hpp"
#include "proca/io.hpp"

using namespace proca;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const char* kSampleConfig = R"(
# transverse probe run
grid.dim = 1
grid.points = 64
grid.lengths = 6.283185307179586
grid.order = 2
medium.n = 2
medium.lambda = 0
medium.mu_p = 1
engine = flat
init = plane_wave
init.kind = transverse
init.k = 2
init.amplitude = 1
evolve.cfl = 0.25
evolve.t_end = 0.5
evolve.sample_every = 4
output.dir = out_test
)";

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("proca_test_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("sample parses and validates") {
    const RunConfig c = parse_config(kSampleConfig);
    CHECK(c.dim == 1);
    CHECK(c.points == std::vector<int>{64});
    CHECK(c.engine == EngineKind::flat);
    CHECK(c.init == InitKind::plane_wave);
    CHECK(c.lambda.has_value());
    CHECK(*c.lambda == 0.0);
    CHECK(c.wave_kind == "transverse");
  }
  SUBCASE("unknown keys rejected") {
    CHECK_THROWS_AS(parse_config("grid.dims = 1\n"), ConfigError);
  }
  SUBCASE("flat requires lambda and constant n") {
    CHECK_THROWS_AS(parse_config("engine = flat\nmedium.n = 1\n"), ConfigError);
    CHECK_THROWS_AS(
        parse_config("engine = flat\nmedium.lambda = 0\n"
                     "medium.profile = sinusoidal\nmedium.n_base = 1\n"
                     "medium.n_amplitude = 0.1\n"),
        ConfigError);
  }
  SUBCASE("gordon forbids lambda") {
    CHECK_THROWS_AS(
        parse_config("engine = gordon\nmedium.lambda = 0.5\nmedium.n = 1\n"),
        ConfigError);
    CHECK_NOTHROW(parse_config("engine = gordon\nmedium.n = 1.5\n"));
  }
  SUBCASE("profile must stay positive") {
    CHECK_THROWS_AS(
        parse_config("engine = gordon\nmedium.profile = sinusoidal\n"
                     "medium.n_base = 1\nmedium.n_amplitude = 1.5\n"),
        ConfigError);
  }
  SUBCASE("round trip through the canonical form") {
    const RunConfig c = parse_config(kSampleConfig);
    const RunConfig c2 = parse_config(serialize_config(c));
    CHECK(c == c2);

    RunConfig gordon;
    gordon.engine = EngineKind::gordon;
    gordon.lambda.reset();
    gordon.n_constant = false;
    gordon.n_base = 1.0;
    gordon.n_amplitude = 0.1;
    gordon.init = InitKind::random;
    gordon.seed = 42;
    gordon.kmax = 8;
    validate_config(gordon);
    CHECK(parse_config(serialize_config(gordon)) == gordon);
  }
  SUBCASE("medium sampling from config") {
    RunConfig c = parse_config(kSampleConfig);
    c.n_constant = false;
    c.n_base = 1.0;
    c.n_amplitude = 0.1;
    c.engine = EngineKind::gordon;
    c.lambda.reset();
    const GridSpec g = grid_from_config(c);
    const MediumSpec m = medium_from_config(c, g);
    CHECK_FALSE(m.constant());
    const ScalarField n = m.n_on(g);
    CHECK(n[16] == doctest::Approx(1.0 + 0.1 * std::sin(g.coordinate(16, 0))));
  }
}

TEST_CASE("monitor csv schemas") {
  SUBCASE("flat header and row order") {
    MonitorReport m;
    m.t = 0.5;
    m.a0_l2 = 1;
    m.ai_l2 = 2;
    m.phi_l2 = 3;
    m.c1_l2 = 4;
    m.c1_linf = 5;
    m.c2_l2 = 6;
    m.c2_linf = 7;
    m.gauss_l2 = 8;
    m.gauss_linf = 9;
    const std::string csv = monitor_csv(std::vector<MonitorReport>{m});
    CHECK(csv ==
          "t,a0_l2,ai_l2,phi_l2,c1_l2,c1_linf,c2_l2,c2_linf,gauss_l2,"
          "gauss_linf\n0.5,1,2,3,4,5,6,7,8,9\n");
  }
  SUBCASE("gordon header and row order") {
    GordonMonitorReport m;
    m.t = 0.25;
    m.atld0_l2 = 1;
    m.atldi_l2 = 2;
    m.lorenz_l2 = 3;
    m.lorenz_linf = 4;
    m.gauss_l2 = 5;
    m.gauss_linf = 6;
    const std::string csv = monitor_csv(std::vector<GordonMonitorReport>{m});
    CHECK(csv ==
          "t,atld0_l2,atldi_l2,lorenz_l2,lorenz_linf,gauss_l2,gauss_linf\n"
          "0.25,1,2,3,4,5,6\n");
  }
}

TEST_CASE("snapshot round trip") {
  TempDir tmp;
  const GridSpec g = GridSpec::isotropic(2, 16, kTwoPi);
  ScalarField a = random_bandlimited(3, 5, g);
  ScalarField b = random_bandlimited(4, 5, g);
  const auto path = tmp.path / "state.fld";
  write_snapshot(path, g, 1.25, {&a, &b});

  const Snapshot snap = read_snapshot(path, g.order);
  CHECK(snap.grid == g);
  CHECK(snap.time == 1.25);
  REQUIRE(snap.comps.size() == 2);
  for (std::size_t p = 0; p < a.size(); ++p) {
    CHECK(snap.comps[0][p] == a[p]);
    CHECK(snap.comps[1][p] == b[p]);
  }

  SUBCASE("garbage rejected") {
    const auto bad = tmp.path / "bad.fld";
    write_text_file(bad, "not a snapshot");
    CHECK_THROWS_AS(read_snapshot(bad, 2), ConfigError);
  }
}
