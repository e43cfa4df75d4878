// fvnsf: batch front end (run / study / check / consistency)
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fvnsf/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite volume solver for the compressible Navier-Stokes-Fourier system"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "configuration file (INI-like)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [output] dir)");
  };
  CLI::App* run = app.add_subcommand("run", "single run, writes timeseries.csv");
  CLI::App* study = app.add_subcommand("study", "convergence study, writes eoc.csv");
  CLI::App* check = app.add_subcommand("check", "randomized invariant suite");
  CLI::App* cons = app.add_subcommand("consistency", "consistency defects, writes consistency.csv");
  add_common(run, true);
  add_common(study, true);
  add_common(check, false);
  add_common(cons, true);

  CLI11_PARSE(app, argc, argv);

  try {
    fvnsf::RunConfig cfg = config_path.empty() ? fvnsf::RunConfig{} : fvnsf::load_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (*run) return fvnsf::run_command(cfg, cfg.out_dir, std::cout);
    if (*study) return fvnsf::study_command(cfg, cfg.out_dir, std::cout);
    if (*check) return fvnsf::check_command(cfg, cfg.out_dir, std::cout);
    if (*cons) return fvnsf::consistency_command(cfg, cfg.out_dir, std::cout);
  } catch (const std::exception& e) {
    std::cerr << fvnsf::error_line(e) << '\n';
    return 2;
  }
  return 1;
}
