#pragma once

#include <vector>

namespace suropt {

struct RhatEss {
  double rhat = 1.0;
  double ess = 0.0;
};

/// Split R-hat and effective sample size for one scalar parameter given the
/// per-chain draw sequences (equal lengths). Each chain is split in half;
/// R-hat compares between- to within-sequence variance, and ESS uses the
/// variogram autocorrelation estimate with Geyer's initial-positive-sequence
/// truncation.
RhatEss split_rhat_ess(const std::vector<std::vector<double>>& chains);

}  // namespace suropt
