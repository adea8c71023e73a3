#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suropt/banova.hpp"
#include "suropt/gibbs.hpp"
#include "suropt/optimizer.hpp"
#include "suropt/types.hpp"

namespace suropt {

/// Minimal INI reader: [section] headers, key = value pairs, full-line
/// comments starting with '#' or ';'. Keys are tracked on access so unknown
/// entries can be reported as configuration errors.
class IniFile {
 public:
  static IniFile parse_text(const std::string& text, const std::string& origin);
  static IniFile parse_file(const std::string& path);

  /// Applies a "section.key=value" override (CLI --set).
  void set(const std::string& dotted_key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::uint64_t require_seed(const std::string& section, const std::string& key) const;
  std::vector<double> get_double_list(const std::string& section, const std::string& key,
                                      const std::vector<double>& fallback) const;

  /// Keys never touched by any getter; non-empty means a likely typo.
  std::vector<std::string> unconsumed() const;

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::map<std::string, std::string>> sections_;
  mutable std::map<std::string, bool> consumed_;

  const std::string* find(const std::string& section, const std::string& key) const;
};

/// Everything a pipeline command needs, resolved from the config file plus
/// CLI overrides. The canonical text below (not the raw file) is what gets
/// hashed into manifests.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  std::string dataset_path;
  std::string draws_path;  // defaults to <output_dir>/draws.csv
  std::string truth_path;

  Factors factors;
  CovariateScale covariates = CovariateScale::coded;
  PredictionMode prediction = PredictionMode::lognormal_mean;

  Prior prior;
  McmcConfig mcmc;

  AnovaScope anova_scope = AnovaScope::pooled;
  bool anova_machine_effect = false;
  McmcConfig anova_mcmc;

  Metric metric = Metric::relative_euclidean;
  GaConfig ga;
  std::map<MachineId, ThresholdVector> ymin;
  std::vector<MachineId> optimize_machines;
  std::map<MachineId, Response> observed;

  int n_pred = 4000;
  std::uint64_t predictive_seed = 0;
  std::map<MachineId, Point3> predict_points;

  int surface_resolution = 25;
  Point3 surface_fixed{};

  /// Deterministic key-value dump of the semantic configuration. Excludes
  /// output locations so reruns into different directories stay
  /// byte-identical.
  std::string canonical_text() const;
};

/// Output directory priority: explicit override (CLI flag), then the
/// SUROPT_OUTPUT_DIR environment variable, then the config file.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {},
                          const std::optional<std::string>& output_dir_override = {});
RunConfig run_config_from_ini(IniFile ini,
                              const std::optional<std::string>& output_dir_override = {});

}  // namespace suropt
