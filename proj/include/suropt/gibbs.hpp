#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "suropt/design.hpp"
#include "suropt/rng.hpp"
#include "suropt/types.hpp"

namespace suropt {

/// Prior for the stacked coefficient vector (independent normals) and the
/// 2x2 error covariance (inverse Wishart).
struct Prior {
  Eigen::VectorXd b0;       // prior mean, size 28
  Eigen::VectorXd b0_var;   // prior variances (diagonal of B0), size 28
  double nu0 = 4.0;         // inverse-Wishart degrees of freedom, > 1
  Eigen::Matrix2d s0 = Eigen::Matrix2d::Identity();

  /// b0 = 0, B0 = 100 I, nu0 = 4, S0 = I. Vague on coded covariates and
  /// log-scale responses while keeping every full conditional proper.
  static Prior vague();
  void validate() const;
};

struct McmcConfig {
  int iterations = 6000;
  int burn_in = 1000;
  int thin = 1;
  int chains = 4;
  std::uint64_t seed = 0;

  void validate() const;
  int retained_per_chain() const { return (iterations - burn_in) / thin; }
  int retained_total() const { return chains * retained_per_chain(); }
};

/// Retained MCMC draws. beta columns 0-13 are the roughness equation,
/// 14-27 the power equation; sigma columns are (s11, s22, s12).
struct PosteriorDraws {
  Eigen::MatrixXd beta;   // D x 28
  Eigen::MatrixXd sigma;  // D x 3
  std::vector<int> chain_id;
  CovariateScale scale = CovariateScale::coded;
  Coding coding{};

  Eigen::Index draws() const { return beta.rows(); }
  void validate() const;
};

/// Names for the 31 sampled quantities (28 coefficients + 3 covariance
/// entries) in draw-column order.
std::vector<std::string> parameter_names();

struct ParamDiagnostic {
  std::string name;
  double rhat = 1.0;
  double ess = 0.0;
};

struct ConvergenceReport {
  std::vector<ParamDiagnostic> params;

  double max_rhat() const;
  /// Human-readable warnings for parameters with split R-hat above the
  /// threshold. Warnings never abort a fit.
  std::vector<std::string> warnings(double threshold = 1.1) const;
};

struct FitResult {
  PosteriorDraws draws;
  ConvergenceReport convergence;
};

/// One draw from the full conditional of the stacked coefficients given
/// Sigma: N(bhat, Bhat) with
///   Bhat = (B0^-1 + X'(Sigma^-1 (x) I_n)X)^-1
///   bhat = Bhat (B0^-1 b0 + X'(Sigma^-1 (x) I_n)y)
/// sampled through the Cholesky factor of the precision matrix.
Eigen::VectorXd sample_beta_given_sigma(const SurDesign& design,
                                        const Eigen::Matrix2d& sigma,
                                        const Prior& prior, Rng& rng);

/// bhat above without the noise: the Bayes/GLS point estimate for fixed
/// Sigma.
Eigen::VectorXd beta_conditional_mean(const SurDesign& design,
                                      const Eigen::Matrix2d& sigma,
                                      const Prior& prior);

/// One draw from the full conditional of Sigma given beta:
/// InverseWishart(nu0 + n, S0 + E'E), sampled via Bartlett decomposition.
Eigen::Matrix2d sample_sigma_given_beta(const SurDesign& design,
                                        const Eigen::VectorXd& beta,
                                        const Prior& prior, Rng& rng);

/// Runs the full Gibbs sampler: config.chains independent chains (chain c
/// seeded with seed xor c, executed in parallel), initialized at the
/// per-equation least-squares estimates with N(0, 0.01) jitter. Burn-in is
/// discarded and the remainder thinned before merging in chain order, so the
/// result is deterministic for a given seed.
FitResult run_chain(const SurDesign& design, const Prior& prior,
                    const McmcConfig& config);

}  // namespace suropt
