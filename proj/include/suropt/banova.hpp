#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "suropt/analysis.hpp"
#include "suropt/gibbs.hpp"
#include "suropt/types.hpp"

namespace suropt {

enum class AnovaScope { pooled, per_machine };

/// Additive three-factor random-effects model on the selected log response:
///   y = mu + a_D[j] + a_A[j] + a_V[j] (+ a_M[j]) + eps
/// with hierarchical N(0, sigma_f^2) effects, half-Cauchy(1) priors on all
/// scale parameters, and a vague normal prior on mu. Factor codes follow
/// the forest-plot convention: D depth of cut, A feed rate, V spindle rate.
struct AnovaConfig {
  ResponseSelector response = ResponseSelector::power;
  AnovaScope scope = AnovaScope::pooled;
  /// Adds the machine id as a fourth (two-level) factor in pooled scope.
  bool include_machine_effect = false;
  /// Restricts the fit to one machine (per-machine scope).
  std::optional<MachineId> machine;
  McmcConfig mcmc;
};

struct AnovaDraws {
  Eigen::VectorXd mu;                         // D
  std::array<Eigen::MatrixXd, 3> alpha;       // D x k_f, order D, A, V
  Eigen::MatrixXd alpha_machine;              // D x 2, empty when not modeled
  std::array<Eigen::VectorXd, 3> sigma_factor;
  Eigen::VectorXd sigma_machine;              // empty when not modeled
  Eigen::VectorXd sigma_eps;
  std::vector<int> chain_id;

  Eigen::Index draws() const { return mu.size(); }
  bool has_machine() const { return alpha_machine.size() > 0; }
};

/// Gibbs sampler with slice-sampling steps for the half-Cauchy scales.
/// Effects are sampled unconstrained; identifiability of the reported
/// summaries comes from the centering in finite_pop_sd. Deterministic per
/// seed; chain c uses seed xor c.
AnovaDraws fit_anova(const Dataset& dataset, const AnovaConfig& config);

/// Per-draw finite-population SD of the k treatment effects:
///   S = sqrt( a' [I_k - J/k] a / (k-1) )
/// which is the sample standard deviation of the effect vector.
Eigen::VectorXd finite_pop_sd(const Eigen::MatrixXd& alpha_draws);

struct FactorInterval {
  std::string factor;  // D, A, V (and M when modeled)
  double median = 0.0;
  double l50 = 0.0, u50 = 0.0;
  double l95 = 0.0, u95 = 0.0;
};

/// Central (equal-tail) intervals of the finite-population SDs, ordered
/// D, A, V (then M when modeled). Requires at least 100 draws.
std::vector<FactorInterval> anova_intervals(const AnovaDraws& draws);

std::string serialize_anova_intervals(const std::vector<FactorInterval>& intervals);

}  // namespace suropt
