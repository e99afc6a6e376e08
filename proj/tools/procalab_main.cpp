#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "proca/harness.hpp"
#include "proca/io.hpp"
#include "proca/modes.hpp"
#include "proca/version.hpp"

namespace {

int cmd_modes(double n, double lambda, double mu, double k) {
  using namespace proca;
  const MediumSpec medium = MediumSpec::constant_index(n, lambda, mu);
  const std::array<double, 3> kvec{k, 0.0, 0.0};
  std::printf("kind,k,omega\n");
  std::printf("transverse,%.17g,%.17g\n", k, dispersion_transverse(kvec, medium));
  const SymbolClass cls = classify_symbol(lambda);
  if (cls.kind == SymbolKind::hyperbolic) {
    std::printf("longitudinal,%.17g,%.17g\n", k,
                dispersion_longitudinal(kvec, medium));
  } else {
    std::printf("longitudinal,%.17g,n/a (%s)\n", k, to_string(cls.kind).c_str());
  }
  return 0;
}

int cmd_classify(double lambda) {
  const proca::SymbolClass cls = proca::classify_symbol(lambda);
  if (cls.speed.has_value()) {
    std::printf("%s speed=%.17g\n", proca::to_string(cls.kind).c_str(),
                *cls.speed);
  } else {
    std::printf("%s\n", proca::to_string(cls.kind).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained Proca evolution in dielectric media"};
  app.set_version_flag("--version", proca::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  int levels = 3;

  CLI::App* run_cmd = app.add_subcommand("run", "Execute one configured run");
  run_cmd->add_option("config", config_path, "Path to a run config")
      ->required();

  CLI::App* conv_cmd = app.add_subcommand(
      "converge", "Run a resolution ladder and fit convergence orders");
  conv_cmd->add_option("config", config_path, "Path to the base run config")
      ->required();
  conv_cmd->add_option("--levels", levels, "Number of ladder levels (>= 3)")
      ->capture_default_str();

  double n = 1.0, lambda = 0.0, mu = 0.0, k = 1.0;
  CLI::App* modes_cmd =
      app.add_subcommand("modes", "Print the plane-wave dispersion table");
  modes_cmd->add_option("--n", n, "Refractive index")->capture_default_str();
  modes_cmd->add_option("--lambda", lambda, "Mass-metric parameter")
      ->capture_default_str();
  modes_cmd->add_option("--mu", mu, "Proca mass")->capture_default_str();
  modes_cmd->add_option("--k", k, "Wavenumber")->capture_default_str();

  double classify_lambda = 0.0;
  CLI::App* classify_cmd = app.add_subcommand(
      "classify", "Classify the mass-metric wave operator symbol");
  classify_cmd->add_option("--lambda", classify_lambda, "Mass-metric parameter")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return proca::run_file(config_path, std::cerr);
    }
    if (conv_cmd->parsed()) {
      const proca::RunConfig base = proca::load_config(config_path);
      const proca::ConvergenceResult result =
          proca::convergence(base, levels, std::cerr);
      const std::string csv = proca::convergence_csv(result);
      std::filesystem::create_directories(base.out_dir);
      proca::write_text_file(
          std::filesystem::path(base.out_dir) / "convergence.csv", csv);
      std::fputs(csv.c_str(), stdout);
      return 0;
    }
    if (modes_cmd->parsed()) {
      return cmd_modes(n, lambda, mu, k);
    }
    if (classify_cmd->parsed()) {
      return cmd_classify(classify_lambda);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return proca::exit_code_for(e);
  }
  return 0;
}
