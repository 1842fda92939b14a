#include "rlap/commands.hpp"

#include "CLI11.hpp"

#include <cstring>
#include <fstream>
#include <iostream>

namespace {

// A --config file seeds the configuration; explicit flags override it.
rlap::RunConfig initial_config(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0) {
      std::ifstream in(argv[i + 1]);
      if (!in) throw rlap::ConfigError("config", std::string("cannot open ") + argv[i + 1]);
      try {
        return rlap::RunConfig::from_json(rlap::json::parse(in));
      } catch (const rlap::json::parse_error& e) {
        throw rlap::ConfigError("config", e.what());
      }
    }
  }
  return {};
}

void add_sphere(CLI::App* app, rlap::RunConfig& cfg) {
  app->add_option("--n", cfg.n, "sphere / manifold dimension");
  app->add_option("--k", cfg.k, "curvature scale (radius 1/k)");
}

void add_quadrature(CLI::App* app, rlap::RunConfig& cfg) {
  app->add_option("--quad", cfg.quad, "auto | product | mc");
  app->add_option("--res", cfg.res, "product rule resolution");
  app->add_option("--count", cfg.count, "Monte Carlo node count");
}

}  // namespace

int main(int argc, char** argv) {
  rlap::RunConfig cfg;
  try {
    cfg = initial_config(argc, argv);
  } catch (const rlap::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Rough-Laplacian numerical lab"};
  app.require_subcommand(1);
  std::string config_path;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");
  app.add_option("--output", cfg.output, "also write the JSON report to this path");

  auto* spectrum = app.add_subcommand("spectrum", "Rayleigh-Ritz spectrum on S^n(1/k)");
  add_sphere(spectrum, cfg);
  add_quadrature(spectrum, cfg);
  spectrum->add_option("--degree", cfg.degree, "dictionary degree (1..6)");
  spectrum->add_option("--restrict", cfg.restrict_to, "hopf | zero-mean:v1,...");
  spectrum->add_option("--seed", cfg.seed, "Monte Carlo seed");

  auto* radial = app.add_subcommand("radial", "radial eigenproblem on a warped product");
  add_sphere(radial, cfg);
  radial->add_option("--profile", cfg.profile, "round:k=K | perturbed:k=K,eps=E | file:PATH");
  radial->add_option("--grid", cfg.grid, "interior grid points");
  radial->add_option("--eigs", cfg.eigs, "number of eigenpairs (1..10)");
  radial->add_option("--csv", cfg.csv, "write the grid table to this path");

  auto* sym = app.add_subcommand("symmetrize", "group averaging checks");
  add_sphere(sym, cfg);
  add_quadrature(sym, cfg);
  sym->add_option("--field", cfg.field, "proj:w | killing:xy | hopf:i | poly:PATH");
  sym->add_option("--group", cfg.group,
                  "finite:reflect:C | rot:I,J:M | isotropy:v:COUNT[:seed=S] | haar:COUNT[:seed=S]");
  sym->add_option("--samples", cfg.samples, "random points and group draws");
  sym->add_option("--seed", cfg.seed, "seed for pointwise checks");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--criteria", cfg.criteria, "criterion ids (default: all)");

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  rlap::json report;
  try {
    cfg.validate();
    if (print_config) {
      std::cout << cfg.to_json().dump(2) << "\n";
      return 0;
    }
    report = rlap::run_command(cfg);
  } catch (const rlap::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = report.dump(2);
  std::cout << text << "\n";
  if (!cfg.output.empty()) {
    std::ofstream os(cfg.output);
    if (!os) {
      std::cerr << "cannot write " << cfg.output << "\n";
      return 2;
    }
    os << text << "\n";
  }
  if (report.contains("error")) return 3;
  if (cfg.command == "verify" && !report.value("passed", false)) return 1;
  return 0;
}
