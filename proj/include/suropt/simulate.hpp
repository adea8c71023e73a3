#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "suropt/types.hpp"

namespace suropt {

/// Ground truth for the bivariate log-scale regression: 28 stacked
/// coefficients (0-13 roughness equation, 14-27 power equation) on coded
/// covariates, plus the 2x2 error covariance of the log responses.
struct SurTruth {
  Eigen::VectorXd beta;  // size 28
  double s11 = 0.0;      // var of log-roughness error
  double s22 = 0.0;      // var of log-power error
  double s12 = 0.0;      // covariance

  void validate() const;
};

struct DesignPoint {
  MachineId machine = MachineId::A;
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

/// All level combinations for both machines, machine A block first;
/// x1 is the outermost factor loop and x3 the innermost.
std::vector<DesignPoint> full_factorial(const Factors& factors);

/// Draws log responses from N(x'beta, Sigma) at each design point and
/// exponentiates. Deterministic for a given seed.
Dataset simulate_dataset(const SurTruth& truth, const std::vector<DesignPoint>& design,
                         const Factors& factors, std::uint64_t seed);

}  // namespace suropt
