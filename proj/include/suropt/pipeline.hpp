#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suropt/config.hpp"
#include "suropt/simulate.hpp"

namespace suropt {

inline constexpr const char* kVersion = "0.1.0";

/// Ground truth for the simulator, read from an INI file:
///   [truth]
///   beta_roughness = 14 comma-separated values (coded-unit coefficients)
///   beta_power     = 14 values
///   sigma          = s11, s12, s22
SurTruth load_truth(const std::string& path);

/// Design points from a CSV with header machine,x1,x2,x3.
std::vector<DesignPoint> load_design_points(const std::string& path);

struct CommandOptions {
  bool svg = false;
  std::optional<std::string> out_override;    // simulate: dataset destination
  std::optional<std::string> design_path;     // simulate: explicit design points
  std::optional<std::string> export_design;   // fit: dump the model matrix
  std::optional<std::string> fixed_from;      // surface: optimize-result JSON
};

void cmd_simulate(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_fit(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_anova(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_optimize(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_surface(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_boxplot(const RunConfig& cfg, const CommandOptions& opt = {});
void cmd_predictive(const RunConfig& cfg, const CommandOptions& opt = {});

}  // namespace suropt
