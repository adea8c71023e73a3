#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "suropt/config.hpp"
#include "suropt/pipeline.hpp"
#include "suropt/types.hpp"

namespace {

std::optional<std::string> opt_of(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "suropt: Bayesian bivariate regression, factor-relevance ANOVA, and "
      "operating-condition optimization for machining experiments"};
  app.require_subcommand(1);

  std::string config_path = "config.ini";
  std::vector<std::string> overrides;
  std::string out_dir;
  bool svg = false;
  app.add_option("-c,--config", config_path, "Configuration file")
      ->capture_default_str();
  app.add_option("--set", overrides,
                 "Override a config entry, e.g. --set mcmc.iterations=2000");
  app.add_option("--out-dir", out_dir,
                 "Output directory (overrides config and SUROPT_OUTPUT_DIR)");

  auto* sim = app.add_subcommand("simulate",
                                 "Generate a synthetic dataset from a truth file");
  std::string sim_truth, sim_out, sim_design;
  sim->add_option("--truth", sim_truth, "Truth INI file (overrides [paths] truth)");
  sim->add_option("--out", sim_out, "Destination dataset CSV");
  sim->add_option("--design", sim_design,
                  "Design CSV (machine,x1,x2,x3); default is the full factorial");

  auto* fit = app.add_subcommand("fit", "Fit the bivariate model by Gibbs sampling");
  std::string fit_export;
  fit->add_option("--export-design", fit_export, "Also write the model matrix CSV");

  auto* anova =
      app.add_subcommand("anova", "Bayesian ANOVA factor-relevance intervals");

  auto* optimize =
      app.add_subcommand("optimize", "Locate optimal operating conditions");

  auto* surface = app.add_subcommand("surface", "Response-surface grid files");
  std::string surf_fixed_from;
  surface->add_option("--fixed-from", surf_fixed_from,
                      "Optimization result JSON; holds the left-out factor at E*");
  surface->add_flag("--svg", svg, "Also write SVG quick-look plots");

  auto* boxplot = app.add_subcommand("boxplot", "Per-machine response boxplot stats");
  boxplot->add_flag("--svg", svg, "Also write SVG quick-look plots");

  auto* predictive =
      app.add_subcommand("predictive", "Posterior predictive densities at a point");
  predictive->add_flag("--svg", svg, "Also write SVG quick-look plots");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!sim_truth.empty()) overrides.push_back("paths.truth=" + sim_truth);
    const suropt::RunConfig cfg =
        suropt::load_run_config(config_path, overrides, opt_of(out_dir));

    suropt::CommandOptions opt;
    opt.svg = svg;
    opt.out_override = opt_of(sim_out);
    opt.design_path = opt_of(sim_design);
    opt.export_design = opt_of(fit_export);
    opt.fixed_from = opt_of(surf_fixed_from);

    if (sim->parsed()) suropt::cmd_simulate(cfg, opt);
    if (fit->parsed()) suropt::cmd_fit(cfg, opt);
    if (anova->parsed()) suropt::cmd_anova(cfg, opt);
    if (optimize->parsed()) suropt::cmd_optimize(cfg, opt);
    if (surface->parsed()) suropt::cmd_surface(cfg, opt);
    if (boxplot->parsed()) suropt::cmd_boxplot(cfg, opt);
    if (predictive->parsed()) suropt::cmd_predictive(cfg, opt);
    return 0;
  } catch (const suropt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const suropt::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const suropt::MissingArtifactError& e) {
    std::cerr << "missing artifact: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
