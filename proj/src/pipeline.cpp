#include "suropt/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "json.hpp"
#include "suropt/analysis.hpp"
#include "suropt/banova.hpp"
#include "suropt/csv.hpp"
#include "suropt/draws_io.hpp"
#include "suropt/io.hpp"
#include "suropt/kernels.hpp"
#include "suropt/svg.hpp"

namespace suropt {

namespace {

using nlohmann::json;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return cfg.output_dir + "/" + name;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["seed"] = cfg.seed;
  j["kernel_backend"] = kernels::backend_name(kernels::active_backend());
  j["config"] = cfg.canonical_text();
  j["config_hash"] = content_hash(cfg.canonical_text());
  j["outputs"] = outputs;
  for (const auto& [key, value] : extra.items()) j[key] = value;
  write_file_atomic(out_path(cfg, "manifest-" + command + ".json"), j.dump(2) + "\n");
}

Dataset require_dataset(const RunConfig& cfg) {
  if (cfg.dataset_path.empty()) {
    throw ValidationError("config: [paths] dataset is required for this command");
  }
  return load_dataset(cfg.dataset_path, cfg.factors);
}

PosteriorDraws require_draws(const RunConfig& cfg) {
  return load_draws(cfg.draws_path);
}

std::string machine_file_tag(MachineId m) { return std::string(1, machine_tag(m)); }

Point3 e_star_from_json(const std::string& path) {
  json j = json::parse(read_file(path));
  return {j.at("e_star").at("x1").get<double>(), j.at("e_star").at("x2").get<double>(),
          j.at("e_star").at("x3").get<double>()};
}

const std::array<std::pair<int, int>, 3> kSurfacePairs{{{0, 1}, {0, 2}, {1, 2}}};

}  // namespace

SurTruth load_truth(const std::string& path) {
  const IniFile ini = IniFile::parse_file(path);
  SurTruth truth;
  const auto beta_r = ini.get_double_list("truth", "beta_roughness", {});
  const auto beta_p = ini.get_double_list("truth", "beta_power", {});
  if (beta_r.size() != kNumTerms || beta_p.size() != kNumTerms) {
    throw ValidationError(path + ": beta_roughness and beta_power need " +
                          std::to_string(kNumTerms) + " values each");
  }
  truth.beta.resize(kNumCoeffs);
  for (int j = 0; j < kNumTerms; ++j) {
    truth.beta(j) = beta_r[static_cast<std::size_t>(j)];
    truth.beta(kNumTerms + j) = beta_p[static_cast<std::size_t>(j)];
  }
  const auto sigma = ini.get_double_list("truth", "sigma", {});
  if (sigma.size() != 3) throw ValidationError(path + ": sigma needs s11, s12, s22");
  truth.s11 = sigma[0];
  truth.s12 = sigma[1];
  truth.s22 = sigma[2];
  truth.validate();
  return truth;
}

std::vector<DesignPoint> load_design_points(const std::string& path) {
  const std::string text = read_file(path);
  std::vector<DesignPoint> points;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string::npos)
                                ? std::string_view(text).substr(pos)
                                : std::string_view(text).substr(pos, eol - pos);
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string ctx = path + " row " + std::to_string(line_no);
    if (fields.size() != 4) throw ValidationError(ctx + ": expected machine,x1,x2,x3");
    DesignPoint pt;
    pt.machine = machine_from_tag(fields[0]);
    pt.x1 = parse_double(fields[1], ctx);
    pt.x2 = parse_double(fields[2], ctx);
    pt.x3 = parse_double(fields[3], ctx);
    points.push_back(pt);
  }
  if (points.empty()) throw ValidationError(path + ": empty design");
  return points;
}

void cmd_simulate(const RunConfig& cfg, const CommandOptions& opt) {
  if (cfg.truth_path.empty()) {
    throw ValidationError("config: [paths] truth is required for simulate");
  }
  const SurTruth truth = load_truth(cfg.truth_path);
  const std::vector<DesignPoint> design = opt.design_path
                                              ? load_design_points(*opt.design_path)
                                              : full_factorial(cfg.factors);
  const Dataset dataset = simulate_dataset(truth, design, cfg.factors, cfg.seed);

  std::string dest = opt.out_override.value_or(
      cfg.dataset_path.empty() ? out_path(cfg, "dataset.csv") : cfg.dataset_path);
  write_file_atomic(dest, serialize_dataset(dataset));

  json extra;
  extra["truth_hash"] = content_hash(read_file(cfg.truth_path));
  extra["rows"] = dataset.runs.size();
  write_manifest(cfg, "simulate", {std::filesystem::path(dest).filename().string()},
                 extra);
  std::cout << "simulate: wrote " << dataset.runs.size() << " runs to " << dest << "\n";
}

void cmd_fit(const RunConfig& cfg, const CommandOptions& opt) {
  const Dataset dataset = require_dataset(cfg);
  const SurDesign design = build_design(dataset, cfg.covariates);
  const FitResult fit = run_chain(design, cfg.prior, cfg.mcmc);

  save_draws(cfg.draws_path, fit.draws);

  std::string conv = "parameter,rhat,ess,warning\n";
  for (const auto& p : fit.convergence.params) {
    conv += p.name + "," + format_double(p.rhat) + "," + format_double(p.ess) + "," +
            (p.rhat > 1.1 ? "yes" : "no") + "\n";
  }
  write_file_atomic(out_path(cfg, "convergence.csv"), conv);

  const auto table = significance_table(fit.draws, 0.95);
  write_file_atomic(out_path(cfg, "significance.csv"), serialize_significance(table));

  std::vector<std::string> outputs = {
      std::filesystem::path(cfg.draws_path).filename().string(), "convergence.csv",
      "significance.csv"};
  if (opt.export_design) {
    write_file_atomic(*opt.export_design, serialize_design(design));
  }

  json extra;
  extra["max_rhat"] = fit.convergence.max_rhat();
  extra["retained_draws"] = fit.draws.draws();
  write_manifest(cfg, "fit", outputs, extra);

  for (const auto& w : fit.convergence.warnings()) {
    std::cerr << "warning: " << w << "\n";
  }
  std::cout << "fit: " << fit.draws.draws() << " retained draws, max split R-hat "
            << format_double(fit.convergence.max_rhat()) << "\n";
}

void cmd_anova(const RunConfig& cfg, const CommandOptions&) {
  const Dataset dataset = require_dataset(cfg);
  std::vector<std::string> outputs;

  const auto run_one = [&](ResponseSelector response, std::optional<MachineId> machine) {
    AnovaConfig ac;
    ac.response = response;
    ac.scope = cfg.anova_scope;
    ac.include_machine_effect = cfg.anova_machine_effect;
    ac.machine = machine;
    ac.mcmc = cfg.anova_mcmc;
    ac.mcmc.seed ^= response == ResponseSelector::roughness ? 0x52ull : 0x50ull;
    if (machine) ac.mcmc.seed ^= *machine == MachineId::A ? 0x4100ull : 0x4200ull;
    const AnovaDraws draws = fit_anova(dataset, ac);
    const auto intervals = anova_intervals(draws);
    std::string name = std::string("anova_") + response_name(response);
    if (machine) name += "_" + machine_file_tag(*machine);
    name += ".csv";
    write_file_atomic(out_path(cfg, name), serialize_anova_intervals(intervals));
    outputs.push_back(name);
  };

  for (ResponseSelector response : {ResponseSelector::power, ResponseSelector::roughness}) {
    if (cfg.anova_scope == AnovaScope::per_machine) {
      for (MachineId m : kMachines) run_one(response, m);
    } else {
      run_one(response, std::nullopt);
    }
  }
  write_manifest(cfg, "anova", outputs);
  std::cout << "anova: wrote " << outputs.size() << " forest-plot files\n";
}

void cmd_optimize(const RunConfig& cfg, const CommandOptions&) {
  const PosteriorDraws draws = require_draws(cfg);
  const PosteriorPredictor predictor(draws, cfg.prediction);
  const SearchSpace space = SearchSpace::from_factors(cfg.factors);

  std::vector<std::string> outputs;
  std::map<MachineId, OptimizationResult> results;
  for (MachineId m : cfg.optimize_machines) {
    const auto it = cfg.ymin.find(m);
    if (it == cfg.ymin.end()) {
      throw ValidationError(std::string("optimize: thresholds required: set ") +
                            "[optimizer] ymin_" +
                            static_cast<char>(std::tolower(machine_tag(m))));
    }
    GaConfig ga = cfg.ga;
    ga.seed ^= m == MachineId::A ? 0x41ull : 0x42ull;
    const OptimizationResult res = optimize(predictor, m, it->second, space, ga, cfg.metric);
    results[m] = res;

    json j;
    j["machine"] = machine_file_tag(m);
    j["e_star"] = {{"x1", res.e_star[0]}, {"x2", res.e_star[1]}, {"x3", res.e_star[2]}};
    j["predicted"] = {{"roughness", res.predicted.roughness},
                      {"power", res.predicted.power}};
    j["distance"] = res.distance;
    j["metric"] = metric_name(cfg.metric);
    j["generations"] = cfg.ga.generations;
    j["generation_found"] = res.generation_found;
    j["evaluations"] = res.evaluations;
    j["seed"] = ga.seed;
    j["prediction_mode"] =
        cfg.prediction == PredictionMode::lognormal_mean ? "lognormal_mean" : "plugin_median";
    const std::string name = "optimize_" + machine_file_tag(m) + ".json";
    write_file_atomic(out_path(cfg, name), j.dump(2) + "\n");
    outputs.push_back(name);
    std::cout << "optimize " << machine_file_tag(m) << ": E* = (" << res.e_star[0]
              << ", " << res.e_star[1] << ", " << res.e_star[2] << "), distance "
              << res.distance << "\n";
  }

  if (!cfg.observed.empty()) {
    // Observed vs predicted at the optimum, one machine per column.
    std::string report = "response,quantity";
    for (MachineId m : cfg.optimize_machines) report += ",machine_" + machine_file_tag(m);
    report += "\n";
    const auto row = [&](const std::string& response, const std::string& quantity,
                         auto getter) {
      report += response + "," + quantity;
      for (MachineId m : cfg.optimize_machines) {
        report += ",";
        const auto obs = cfg.observed.find(m);
        const auto res = results.find(m);
        const auto value = getter(obs != cfg.observed.end() ? &obs->second : nullptr,
                                  res != results.end() ? &res->second : nullptr);
        if (value) report += format_double(*value);
      }
      report += "\n";
    };
    using Obs = const Response*;
    using Res = const OptimizationResult*;
    row("power", "observed", [](Obs o, Res) -> std::optional<double> {
      if (!o) return std::nullopt;
      return o->power;
    });
    row("power", "predicted", [](Obs, Res r) -> std::optional<double> {
      if (!r) return std::nullopt;
      return r->predicted.power;
    });
    row("power", "relative_error", [](Obs o, Res r) -> std::optional<double> {
      if (!o || !r) return std::nullopt;
      return relative_error(o->power, r->predicted.power);
    });
    row("roughness", "observed", [](Obs o, Res) -> std::optional<double> {
      if (!o) return std::nullopt;
      return o->roughness;
    });
    row("roughness", "predicted", [](Obs, Res r) -> std::optional<double> {
      if (!r) return std::nullopt;
      return r->predicted.roughness;
    });
    row("roughness", "relative_error", [](Obs o, Res r) -> std::optional<double> {
      if (!o || !r) return std::nullopt;
      return relative_error(o->roughness, r->predicted.roughness);
    });
    write_file_atomic(out_path(cfg, "report.csv"), report);
    outputs.push_back("report.csv");
  }
  write_manifest(cfg, "optimize", outputs);
}

void cmd_surface(const RunConfig& cfg, const CommandOptions& opt) {
  const PosteriorDraws draws = require_draws(cfg);
  std::vector<std::string> outputs;

  for (MachineId m : cfg.optimize_machines) {
    Point3 fixed = cfg.surface_fixed;
    if (opt.fixed_from) {
      // Hold the left-out factor at an optimization result, matching the
      // fixed-at-optimum surface convention.
      fixed = e_star_from_json(*opt.fixed_from);
    }
    for (const auto& [fa, fb] : kSurfacePairs) {
      const int fc = 3 - fa - fb;
      const auto grid =
          surface_grid(fa, fb, fixed[static_cast<std::size_t>(fc)], m, draws,
                       cfg.factors, cfg.surface_resolution, cfg.prediction);
      const std::string& name_a = cfg.factors[static_cast<std::size_t>(fa)].name;
      const std::string& name_b = cfg.factors[static_cast<std::size_t>(fb)].name;
      std::string csv = "# machine=" + machine_file_tag(m) + " fixed_x" +
                        std::to_string(fc + 1) + "=" +
                        format_double(fixed[static_cast<std::size_t>(fc)]) + "\n";
      csv += name_a + "," + name_b + ",roughness,power\n";
      for (const auto& pt : grid) {
        csv += format_double(pt.a) + "," + format_double(pt.b) + "," +
               format_double(pt.response.roughness) + "," +
               format_double(pt.response.power) + "\n";
      }
      const std::string stem = "surface_" + machine_file_tag(m) + "_x" +
                               std::to_string(fa + 1) + "x" + std::to_string(fb + 1);
      write_file_atomic(out_path(cfg, stem + ".csv"), csv);
      outputs.push_back(stem + ".csv");
      if (opt.svg) {
        for (ResponseSelector resp :
             {ResponseSelector::roughness, ResponseSelector::power}) {
          const std::string svg_name = stem + "_" + response_name(resp) + ".svg";
          write_file_atomic(
              out_path(cfg, svg_name),
              svg_heatmap(grid, cfg.surface_resolution, resp,
                          std::string(response_name(resp)) + ", machine " +
                              machine_file_tag(m),
                          name_a, name_b));
          outputs.push_back(svg_name);
        }
      }
    }
  }
  write_manifest(cfg, "surface", outputs);
  std::cout << "surface: wrote " << outputs.size() << " files\n";
}

void cmd_boxplot(const RunConfig& cfg, const CommandOptions& opt) {
  const Dataset dataset = require_dataset(cfg);
  std::vector<std::string> outputs;
  for (ResponseSelector resp : {ResponseSelector::power, ResponseSelector::roughness}) {
    const auto stats = boxplot_by_machine(dataset, resp);
    std::string csv = "machine,n,min,q1,median,q3,max,outliers\n";
    for (const auto& [m, s] : stats) {
      csv += machine_file_tag(m) + "," + std::to_string(s.n) + "," +
             format_double(s.min) + "," + format_double(s.q1) + "," +
             format_double(s.median) + "," + format_double(s.q3) + "," +
             format_double(s.max) + ",";
      for (std::size_t i = 0; i < s.outliers.size(); ++i) {
        if (i) csv += ';';
        csv += format_double(s.outliers[i]);
      }
      csv += "\n";
    }
    const std::string name = std::string("boxplot_") + response_name(resp) + ".csv";
    write_file_atomic(out_path(cfg, name), csv);
    outputs.push_back(name);
    if (opt.svg) {
      const std::string svg_name = std::string("boxplot_") + response_name(resp) + ".svg";
      write_file_atomic(out_path(cfg, svg_name),
                        svg_boxplot(stats, std::string("observed ") + response_name(resp)));
      outputs.push_back(svg_name);
    }
  }
  write_manifest(cfg, "boxplot", outputs);
  std::cout << "boxplot: wrote " << outputs.size() << " files\n";
}

void cmd_predictive(const RunConfig& cfg, const CommandOptions& opt) {
  const PosteriorDraws draws = require_draws(cfg);
  std::vector<std::string> outputs;

  for (MachineId m : cfg.optimize_machines) {
    Point3 point{};
    const auto it = cfg.predict_points.find(m);
    if (it != cfg.predict_points.end()) {
      point = it->second;
    } else {
      const std::string result_path = out_path(cfg, "optimize_" + machine_file_tag(m) + ".json");
      if (!std::filesystem::exists(result_path)) {
        throw MissingArtifactError(
            "predictive: no evaluation point for machine " + machine_file_tag(m) +
            "; set [predict] point_" +
            std::string(1, static_cast<char>(std::tolower(machine_tag(m)))) +
            " or run optimize first");
      }
      point = e_star_from_json(result_path);
    }

    const std::uint64_t seed = cfg.predictive_seed ^ (m == MachineId::A ? 0x41ull : 0x42ull);
    const PredictionResult pred =
        posterior_predictive(point[0], point[1], point[2], m, draws, cfg.n_pred, seed,
                             cfg.prediction);

    const auto obs = cfg.observed.find(m);
    const auto bins_csv = [&](const Histogram& h) {
      std::string csv = "bin_lower,bin_upper,count,density\n";
      const double total = static_cast<double>(pred.draws.size());
      for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double width = h.edges[i + 1] - h.edges[i];
        const double density =
            width > 0.0 ? static_cast<double>(h.counts[i]) / (total * width) : 0.0;
        csv += format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) + "," +
               std::to_string(h.counts[i]) + "," + format_double(density) + "\n";
      }
      return csv;
    };
    const std::string tag = machine_file_tag(m);
    write_file_atomic(out_path(cfg, "predictive_" + tag + "_roughness.csv"),
                      bins_csv(pred.hist_roughness));
    write_file_atomic(out_path(cfg, "predictive_" + tag + "_power.csv"),
                      bins_csv(pred.hist_power));
    outputs.push_back("predictive_" + tag + "_roughness.csv");
    outputs.push_back("predictive_" + tag + "_power.csv");

    std::string summary =
        "response,point_prediction,hdi_lower,hdi_upper,n_pred,observed,observed_in_hdi\n";
    const auto summary_row = [&](const char* resp, double point_pred,
                                 const HdiInterval& hdi, std::optional<double> observed) {
      summary += std::string(resp) + "," + format_double(point_pred) + "," +
                 format_double(hdi.lower) + "," + format_double(hdi.upper) + "," +
                 std::to_string(cfg.n_pred) + ",";
      if (observed) {
        summary += format_double(*observed);
        summary += ",";
        summary += hdi.contains(*observed) ? "yes" : "no";
      } else {
        summary += ",";
      }
      summary += "\n";
    };
    summary_row("roughness", pred.point.roughness, pred.hdi_roughness,
                obs != cfg.observed.end() ? std::optional<double>(obs->second.roughness)
                                          : std::nullopt);
    summary_row("power", pred.point.power, pred.hdi_power,
                obs != cfg.observed.end() ? std::optional<double>(obs->second.power)
                                          : std::nullopt);
    write_file_atomic(out_path(cfg, "predictive_" + tag + "_summary.csv"), summary);
    outputs.push_back("predictive_" + tag + "_summary.csv");

    if (opt.svg) {
      const auto svg_one = [&](const Histogram& h, const HdiInterval& hdi,
                               std::optional<double> observed, const char* resp) {
        const std::string name = "predictive_" + tag + "_" + resp + ".svg";
        write_file_atomic(out_path(cfg, name),
                          svg_histogram(h, hdi, observed,
                                        std::string("posterior predictive ") + resp +
                                            ", machine " + tag));
        outputs.push_back(name);
      };
      svg_one(pred.hist_roughness, pred.hdi_roughness,
              obs != cfg.observed.end() ? std::optional<double>(obs->second.roughness)
                                        : std::nullopt,
              "roughness");
      svg_one(pred.hist_power, pred.hdi_power,
              obs != cfg.observed.end() ? std::optional<double>(obs->second.power)
                                        : std::nullopt,
              "power");
    }
  }
  write_manifest(cfg, "predictive", outputs);
  std::cout << "predictive: wrote " << outputs.size() << " files\n";
}

}  // namespace suropt
