#include "suropt/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>

#include "suropt/csv.hpp"
#include "suropt/io.hpp"

namespace suropt {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return std::string(s);
}

}  // namespace

IniFile IniFile::parse_text(const std::string& text, const std::string& origin) {
  IniFile ini;
  ini.origin_ = origin;
  std::string section;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string line = trim(eol == std::string::npos
                                      ? std::string_view(text).substr(pos)
                                      : std::string_view(text).substr(pos, eol - pos));
    pos = (eol == std::string::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ValidationError(origin + ":" + std::to_string(line_no) +
                              ": malformed section header");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(origin + ":" + std::to_string(line_no) +
                            ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty() || key.empty()) {
      throw ValidationError(origin + ":" + std::to_string(line_no) +
                            ": key outside a section");
    }
    ini.sections_[section][key] = value;
  }
  return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
  return parse_text(read_file(path), path);
}

void IniFile::set(const std::string& dotted_key, const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ValidationError("override must look like section.key=value: " + dotted_key);
  }
  sections_[dotted_key.substr(0, dot)][dotted_key.substr(dot + 1)] = value;
}

const std::string* IniFile::find(const std::string& section, const std::string& key) const {
  const auto sit = sections_.find(section);
  if (sit == sections_.end()) return nullptr;
  const auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return nullptr;
  consumed_[section + "." + key] = true;
  return &kit->second;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string IniFile::require_string(const std::string& section, const std::string& key) const {
  const std::string* v = find(section, key);
  if (!v) {
    throw ValidationError(origin_ + ": missing required key [" + section + "] " + key);
  }
  return *v;
}

std::string IniFile::get_string(const std::string& section, const std::string& key,
                                const std::string& fallback) const {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
  const std::string* v = find(section, key);
  return v ? parse_double(*v, origin_ + ": [" + section + "] " + key) : fallback;
}

long IniFile::get_long(const std::string& section, const std::string& key,
                       long fallback) const {
  const std::string* v = find(section, key);
  return v ? parse_long(*v, origin_ + ": [" + section + "] " + key) : fallback;
}

bool IniFile::get_bool(const std::string& section, const std::string& key,
                       bool fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "yes" || *v == "1") return true;
  if (*v == "false" || *v == "no" || *v == "0") return false;
  throw ValidationError(origin_ + ": [" + section + "] " + key + ": expected boolean");
}

std::uint64_t IniFile::require_seed(const std::string& section, const std::string& key) const {
  const std::string v = require_string(section, key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) {
    throw ValidationError(origin_ + ": [" + section + "] " + key +
                          ": expected unsigned integer seed");
  }
  return parsed;
}

std::vector<double> IniFile::get_double_list(const std::string& section,
                                             const std::string& key,
                                             const std::vector<double>& fallback) const {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& token : split_csv_line(*v)) {
    out.push_back(parse_double(token, origin_ + ": [" + section + "] " + key));
  }
  return out;
}

std::vector<std::string> IniFile::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, value] : keys) {
      const std::string dotted = section + "." + key;
      if (!consumed_.count(dotted)) out.push_back(dotted);
    }
  }
  return out;
}

namespace {

FactorSpec read_factor(const IniFile& ini, int index, const std::string& fallback_name,
                       const std::string& fallback_units,
                       const std::vector<double>& fallback_levels) {
  const std::string prefix = "x" + std::to_string(index + 1);
  return FactorSpec::from_levels(
      ini.get_string("factors", prefix + "_name", fallback_name),
      ini.get_string("factors", prefix + "_units", fallback_units),
      ini.get_double_list("factors", prefix + "_levels", fallback_levels));
}

McmcConfig read_mcmc(const IniFile& ini, const std::string& section,
                     const McmcConfig& defaults) {
  McmcConfig mc = defaults;
  mc.chains = static_cast<int>(ini.get_long(section, "chains", mc.chains));
  mc.iterations = static_cast<int>(ini.get_long(section, "iterations", mc.iterations));
  mc.burn_in = static_cast<int>(ini.get_long(section, "burn_in", mc.burn_in));
  mc.thin = static_cast<int>(ini.get_long(section, "thin", mc.thin));
  if (ini.has(section, "seed")) mc.seed = ini.require_seed(section, "seed");
  return mc;
}

}  // namespace

RunConfig run_config_from_ini(IniFile ini,
                              const std::optional<std::string>& output_dir_override) {
  RunConfig cfg;
  cfg.seed = ini.require_seed("run", "seed");
  cfg.output_dir = ini.get_string("run", "output_dir", "out");
  if (const char* env = std::getenv("SUROPT_OUTPUT_DIR")) cfg.output_dir = env;
  if (output_dir_override) cfg.output_dir = *output_dir_override;

  cfg.dataset_path = ini.get_string("paths", "dataset", "");
  cfg.draws_path = ini.get_string("paths", "draws", cfg.output_dir + "/draws.csv");
  cfg.truth_path = ini.get_string("paths", "truth", "");

  cfg.factors[0] = read_factor(ini, 0, "depth_of_cut", "mm", {1, 1.5, 2, 2.5, 3});
  cfg.factors[1] = read_factor(ini, 1, "feed_rate", "mm/min", {134, 167.5, 201, 234.5, 268});
  cfg.factors[2] =
      read_factor(ini, 2, "spindle_rate", "RPM", {950, 1187.5, 1425, 1662.5, 1900});

  const std::string scale = ini.get_string("model", "covariates", "coded");
  if (scale == "coded") {
    cfg.covariates = CovariateScale::coded;
  } else if (scale == "raw") {
    cfg.covariates = CovariateScale::raw;
  } else {
    throw ValidationError("config: [model] covariates must be coded or raw");
  }
  const std::string pred = ini.get_string("model", "prediction", "lognormal_mean");
  if (pred == "lognormal_mean") {
    cfg.prediction = PredictionMode::lognormal_mean;
  } else if (pred == "plugin_median") {
    cfg.prediction = PredictionMode::plugin_median;
  } else {
    throw ValidationError("config: [model] prediction must be lognormal_mean or plugin_median");
  }

  cfg.prior = Prior::vague();
  const double beta_mean = ini.get_double("prior", "beta_mean", 0.0);
  const double beta_var = ini.get_double("prior", "beta_var", 100.0);
  cfg.prior.b0.setConstant(beta_mean);
  cfg.prior.b0_var.setConstant(beta_var);
  cfg.prior.nu0 = ini.get_double("prior", "nu0", 4.0);
  const std::vector<double> s0 = ini.get_double_list("prior", "s0", {1.0, 0.0, 1.0});
  if (s0.size() != 3) throw ValidationError("config: [prior] s0 needs s11, s12, s22");
  cfg.prior.s0 << s0[0], s0[1], s0[1], s0[2];
  cfg.prior.validate();

  McmcConfig mcmc_defaults;
  mcmc_defaults.seed = cfg.seed;
  cfg.mcmc = read_mcmc(ini, "mcmc", mcmc_defaults);

  McmcConfig anova_defaults;
  anova_defaults.chains = 4;
  anova_defaults.iterations = 4000;
  anova_defaults.burn_in = 1000;
  anova_defaults.seed = cfg.seed ^ 0x414e4f5641ull;  // module-specific stream
  cfg.anova_mcmc = read_mcmc(ini, "anova", anova_defaults);
  const std::string scope = ini.get_string("anova", "scope", "pooled");
  if (scope == "pooled") {
    cfg.anova_scope = AnovaScope::pooled;
  } else if (scope == "per_machine") {
    cfg.anova_scope = AnovaScope::per_machine;
  } else {
    throw ValidationError("config: [anova] scope must be pooled or per_machine");
  }
  cfg.anova_machine_effect = ini.get_bool("anova", "include_machine_effect", false);

  cfg.metric = metric_from_name(ini.get_string("optimizer", "metric", "relative"));
  cfg.ga.population = static_cast<int>(ini.get_long("optimizer", "population", 50));
  cfg.ga.generations = static_cast<int>(ini.get_long("optimizer", "generations", 20));
  cfg.ga.elitism = static_cast<int>(ini.get_long("optimizer", "elitism", 2));
  cfg.ga.crossover_rate = ini.get_double("optimizer", "crossover_rate", 0.9);
  cfg.ga.mutation_uniform = ini.get_double("optimizer", "mutation_uniform", 0.10);
  cfg.ga.mutation_boundary = ini.get_double("optimizer", "mutation_boundary", 0.05);
  cfg.ga.mutation_gaussian = ini.get_double("optimizer", "mutation_gaussian", 0.15);
  cfg.ga.refine_every = static_cast<int>(ini.get_long("optimizer", "refine_every", 5));
  cfg.ga.seed = ini.has("optimizer", "seed") ? ini.require_seed("optimizer", "seed")
                                             : (cfg.seed ^ 0x47454eull);
  cfg.ga.validate();

  for (MachineId m : kMachines) {
    const std::string suffix(1, static_cast<char>(std::tolower(machine_tag(m))));
    if (ini.has("optimizer", "ymin_" + suffix)) {
      const auto v = ini.get_double_list("optimizer", "ymin_" + suffix, {});
      if (v.size() != 2) {
        throw ValidationError("config: [optimizer] ymin_" + suffix +
                              " needs power, roughness");
      }
      ThresholdVector t{v[0], v[1]};
      t.validate();
      cfg.ymin[m] = t;
    }
    if (ini.has("optimizer", "observed_" + suffix)) {
      const auto v = ini.get_double_list("optimizer", "observed_" + suffix, {});
      if (v.size() != 2) {
        throw ValidationError("config: [optimizer] observed_" + suffix +
                              " needs power, roughness");
      }
      cfg.observed[m] = Response{v[1], v[0]};
    }
    if (ini.has("predict", "point_" + suffix)) {
      const auto v = ini.get_double_list("predict", "point_" + suffix, {});
      if (v.size() != 3) {
        throw ValidationError("config: [predict] point_" + suffix + " needs x1, x2, x3");
      }
      cfg.predict_points[m] = Point3{v[0], v[1], v[2]};
    }
  }

  std::vector<MachineId> machines;
  for (const auto& token :
       split_csv_line(ini.get_string("optimizer", "machines", "A,B"))) {
    machines.push_back(machine_from_tag(token));
  }
  cfg.optimize_machines = machines;

  cfg.n_pred = static_cast<int>(ini.get_long("predict", "n_pred", 4000));
  cfg.predictive_seed = ini.has("predict", "seed")
                            ? ini.require_seed("predict", "seed")
                            : (cfg.seed ^ 0x5052454417ull);

  cfg.surface_resolution = static_cast<int>(ini.get_long("surface", "resolution", 25));
  for (int j = 0; j < 3; ++j) {
    cfg.surface_fixed[static_cast<std::size_t>(j)] = ini.get_double(
        "surface", "fixed_x" + std::to_string(j + 1),
        0.5 * (cfg.factors[static_cast<std::size_t>(j)].lower_bound +
               cfg.factors[static_cast<std::size_t>(j)].upper_bound));
  }

  const auto leftovers = ini.unconsumed();
  if (!leftovers.empty()) {
    std::string msg = "config: unknown keys:";
    for (const auto& k : leftovers) msg += " " + k;
    throw ValidationError(msg);
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides,
                          const std::optional<std::string>& output_dir_override) {
  IniFile ini = IniFile::parse_file(path);
  for (const auto& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("override must look like section.key=value: " + ov);
    }
    ini.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return run_config_from_ini(std::move(ini), output_dir_override);
}

std::string RunConfig::canonical_text() const {
  std::string out;
  const auto kv = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  };
  kv("run.seed", std::to_string(seed));
  kv("paths.dataset", dataset_path);
  for (int j = 0; j < 3; ++j) {
    const auto& f = factors[static_cast<std::size_t>(j)];
    std::string levels;
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
      if (i) levels += ',';
      levels += format_double(f.levels[i]);
    }
    const std::string prefix = "factors.x" + std::to_string(j + 1);
    kv(prefix + "_name", f.name);
    kv(prefix + "_units", f.units);
    kv(prefix + "_levels", levels);
  }
  kv("model.covariates", covariates == CovariateScale::coded ? "coded" : "raw");
  kv("model.prediction",
     prediction == PredictionMode::lognormal_mean ? "lognormal_mean" : "plugin_median");
  kv("prior.beta_mean", format_double(prior.b0(0)));
  kv("prior.beta_var", format_double(prior.b0_var(0)));
  kv("prior.nu0", format_double(prior.nu0));
  kv("prior.s0", format_double(prior.s0(0, 0)) + "," + format_double(prior.s0(0, 1)) +
                     "," + format_double(prior.s0(1, 1)));
  const auto mcmc_kv = [&](const std::string& prefix, const McmcConfig& mc) {
    kv(prefix + ".chains", std::to_string(mc.chains));
    kv(prefix + ".iterations", std::to_string(mc.iterations));
    kv(prefix + ".burn_in", std::to_string(mc.burn_in));
    kv(prefix + ".thin", std::to_string(mc.thin));
    kv(prefix + ".seed", std::to_string(mc.seed));
  };
  mcmc_kv("mcmc", mcmc);
  mcmc_kv("anova", anova_mcmc);
  kv("anova.scope", anova_scope == AnovaScope::pooled ? "pooled" : "per_machine");
  kv("anova.include_machine_effect", anova_machine_effect ? "true" : "false");
  kv("optimizer.metric", metric_name(metric));
  kv("optimizer.population", std::to_string(ga.population));
  kv("optimizer.generations", std::to_string(ga.generations));
  kv("optimizer.elitism", std::to_string(ga.elitism));
  kv("optimizer.crossover_rate", format_double(ga.crossover_rate));
  kv("optimizer.mutation_uniform", format_double(ga.mutation_uniform));
  kv("optimizer.mutation_boundary", format_double(ga.mutation_boundary));
  kv("optimizer.mutation_gaussian", format_double(ga.mutation_gaussian));
  kv("optimizer.refine_every", std::to_string(ga.refine_every));
  kv("optimizer.seed", std::to_string(ga.seed));
  for (const auto& [m, t] : ymin) {
    kv(std::string("optimizer.ymin_") + machine_tag(m),
       format_double(t.power) + "," + format_double(t.roughness));
  }
  for (const auto& [m, r] : observed) {
    kv(std::string("optimizer.observed_") + machine_tag(m),
       format_double(r.power) + "," + format_double(r.roughness));
  }
  std::string machines;
  for (std::size_t i = 0; i < optimize_machines.size(); ++i) {
    if (i) machines += ',';
    machines += machine_tag(optimize_machines[i]);
  }
  kv("optimizer.machines", machines);
  kv("predict.n_pred", std::to_string(n_pred));
  kv("predict.seed", std::to_string(predictive_seed));
  for (const auto& [m, p] : predict_points) {
    kv(std::string("predict.point_") + machine_tag(m),
       format_double(p[0]) + "," + format_double(p[1]) + "," + format_double(p[2]));
  }
  kv("surface.resolution", std::to_string(surface_resolution));
  for (int j = 0; j < 3; ++j) {
    kv("surface.fixed_x" + std::to_string(j + 1),
       format_double(surface_fixed[static_cast<std::size_t>(j)]));
  }
  return out;
}

}  // namespace suropt
