#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "proca/harness.hpp"
#include "proca/io.hpp"

using namespace proca;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() / (std::string("proca_harness_") + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig base_flat_config(const fs::path& out) {
  RunConfig c;
  c.dim = 1;
  c.points = {64};
  c.lengths = {6.283185307179586};
  c.n_constant = true;
  c.n_value = 1.5;
  c.lambda = 0.5;
  c.mu_p = 1.0;
  c.engine = EngineKind::flat;
  c.init = InitKind::random;
  c.seed = 7;
  c.kmax = 6;
  c.cfl = 0.25;
  c.t_end = 0.25;
  c.sample_every = 4;
  c.out_dir = out.string();
  return c;
}

}  // namespace

TEST_CASE("run writes monitors and a reparsable manifest") {
  TempDir tmp("run");
  const RunConfig cfg = base_flat_config(tmp.path / "out");
  std::ostringstream log;
  const int code = run(cfg, log);
  CHECK(code == kExitOk);
  CHECK(fs::exists(tmp.path / "out" / "monitors.csv"));
  CHECK(fs::exists(tmp.path / "out" / "manifest.json"));

  const std::string csv = read_text_file(tmp.path / "out" / "monitors.csv");
  CHECK(csv.rfind("t,a0_l2,ai_l2,phi_l2,", 0) == 0);

  const auto manifest =
      nlohmann::json::parse(read_text_file(tmp.path / "out" / "manifest.json"));
  CHECK(manifest["engine"] == "flat");
  const RunConfig echoed = parse_config(manifest["config"].get<std::string>());
  CHECK(echoed == cfg);

  SUBCASE("byte-identical monitors on rerun") {
    TempDir tmp2("rerun");
    RunConfig cfg2 = cfg;
    cfg2.out_dir = (tmp2.path / "out").string();
    std::ostringstream log2;
    CHECK(run(cfg2, log2) == kExitOk);
    CHECK(read_text_file(tmp2.path / "out" / "monitors.csv") == csv);
  }
}

TEST_CASE("zero amplitude run reports exact zeros") {
  TempDir tmp("zero");
  RunConfig cfg = base_flat_config(tmp.path / "out");
  cfg.amplitude = 0.0;
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);
  const std::string csv = read_text_file(tmp.path / "out" / "monitors.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const auto first_comma = line.find(',');
    CHECK(line.substr(first_comma + 1) == "0,0,0,0,0,0,0,0,0");
  }
}

TEST_CASE("exit codes") {
  SUBCASE("lambda >= 1 exits 2 and names the symbol class") {
    TempDir tmp("gate");
    RunConfig cfg = base_flat_config(tmp.path / "out");
    cfg.lambda = 1.5;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitConfig);
    CHECK(log.str().find("elliptic-4d") != std::string::npos);
  }
  SUBCASE("over-limit cfl exits 3") {
    TempDir tmp("cfl");
    RunConfig cfg = base_flat_config(tmp.path / "out");
    cfg.cfl = 2.0;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitCfl);
  }
  SUBCASE("elliptic non-convergence exits 4") {
    TempDir tmp("solver");
    RunConfig cfg = base_flat_config(tmp.path / "out");
    cfg.engine = EngineKind::gordon;
    cfg.lambda.reset();
    cfg.n_constant = false;
    cfg.n_base = 1.0;
    cfg.n_amplitude = 0.1;
    cfg.elliptic_max_iter = 1;
    cfg.elliptic_tol = 1e-14;
    std::ostringstream log;
    CHECK(run(cfg, log) == kExitSolver);
  }
  SUBCASE("malformed config file exits 2") {
    TempDir tmp("file");
    const auto path = tmp.path / "bad.cfg";
    write_text_file(path, "nonsense = 1\n");
    std::ostringstream log;
    CHECK(run_file(path, log) == kExitConfig);
  }
}

TEST_CASE("file-based initial data round trip") {
  TempDir tmp("fileinit");
  // produce free data by writing a snapshot with 6 components
  const GridSpec g = GridSpec::isotropic(1, 64, 6.283185307179586);
  Vec3Field a{random_bandlimited(1, 4, g), random_bandlimited(2, 4, g),
              random_bandlimited(3, 4, g)};
  Vec3Field da{random_bandlimited(4, 4, g), random_bandlimited(5, 4, g),
               random_bandlimited(6, 4, g)};
  const auto data_path = tmp.path / "free_data.fld";
  write_snapshot(data_path, g, 0.0,
                 {&a[0], &a[1], &a[2], &da[0], &da[1], &da[2]});

  RunConfig cfg = base_flat_config(tmp.path / "out");
  cfg.init = InitKind::file;
  cfg.init_file = data_path.string();
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);

  // equivalent in-memory run via random free data with the same seeds
  RunConfig cfg2 = base_flat_config(tmp.path / "out2");
  cfg2.init = InitKind::random;
  cfg2.seed = 1;
  cfg2.kmax = 4;
  std::ostringstream log2;
  CHECK(run(cfg2, log2) == kExitOk);
  CHECK(read_text_file(tmp.path / "out" / "monitors.csv") ==
        read_text_file(tmp.path / "out2" / "monitors.csv"));
}

TEST_CASE("snapshot cadence writes files") {
  TempDir tmp("snaps");
  RunConfig cfg = base_flat_config(tmp.path / "out");
  cfg.snapshot_every = 8;
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);
  CHECK(fs::exists(tmp.path / "out" / "snapshot_00000000.fld"));
  CHECK(fs::exists(tmp.path / "out" / "snapshot_00000008.fld"));
  const Snapshot snap =
      read_snapshot(tmp.path / "out" / "snapshot_00000008.fld", cfg.order);
  CHECK(snap.comps.size() == 10);
}

TEST_CASE("convergence ladder") {
  TempDir tmp("ladder");
  RunConfig cfg = base_flat_config(tmp.path / "out");
  cfg.points = {32};
  cfg.t_end = 0.25;
  std::ostringstream log;

  SUBCASE("needs three levels") {
    CHECK_THROWS_AS(convergence(cfg, 2, log), ConfigError);
  }

  SUBCASE("orders near two for the propagating constraints") {
    const ConvergenceResult result = convergence(cfg, 3, log);
    CHECK(result.level_points == std::vector<int>{32, 64, 128});
    bool saw_c2 = false, saw_gauss = false, saw_c1 = false;
    for (const ConvergenceRow& row : result.rows) {
      if (row.quantity == "c2_l2") {
        saw_c2 = true;
        REQUIRE(row.order.has_value());
        CHECK(*row.order == doctest::Approx(2.0).epsilon(0.25));
      }
      if (row.quantity == "gauss_l2") {
        saw_gauss = true;
        REQUIRE(row.order.has_value());
        CHECK(*row.order == doctest::Approx(2.0).epsilon(0.25));
      }
      if (row.quantity == "c1_l2") {
        saw_c1 = true;
        // exactly propagated by the shared discrete operator: below floor
        CHECK(row.below_floor);
      }
    }
    CHECK(saw_c2);
    CHECK(saw_gauss);
    CHECK(saw_c1);

    const std::string csv = convergence_csv(result);
    CHECK(csv.rfind("quantity,sup_N32,sup_N64,sup_N128,order,fit_residual",
                    0) == 0);
    CHECK(csv.find("below_floor") != std::string::npos);
  }

  SUBCASE("zero amplitude reports below floor everywhere") {
    RunConfig zero = cfg;
    zero.amplitude = 0.0;
    const ConvergenceResult result = convergence(zero, 3, log);
    for (const ConvergenceRow& row : result.rows) {
      CHECK(row.below_floor);
    }
  }
}

TEST_CASE("order-4 stencils run end to end") {
  TempDir tmp("order4");
  RunConfig cfg = base_flat_config(tmp.path / "out");
  cfg.order = 4;
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);

  RunConfig gordon = cfg;
  gordon.engine = EngineKind::gordon;
  gordon.lambda.reset();
  gordon.n_constant = false;
  gordon.n_base = 1.0;
  gordon.n_amplitude = 0.1;
  gordon.out_dir = (tmp.path / "out_gordon").string();
  std::ostringstream log2;
  CHECK(run(gordon, log2) == kExitOk);
  const std::string csv = read_text_file(tmp.path / "out_gordon" / "monitors.csv");
  CHECK(csv.rfind("t,atld0_l2", 0) == 0);
}
