#include "suropt/simulate.hpp"

#include <cmath>

#include "suropt/design.hpp"
#include "suropt/rng.hpp"

namespace suropt {

void SurTruth::validate() const {
  if (beta.size() != kNumCoeffs) {
    throw ValidationError("truth: expected " + std::to_string(kNumCoeffs) +
                          " coefficients, got " + std::to_string(beta.size()));
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(s11 > 0.0) || !(s22 > 0.0) || !(det > 0.0)) {
    throw ValidationError("truth: Sigma must be symmetric positive definite");
  }
}

std::vector<DesignPoint> full_factorial(const Factors& factors) {
  std::vector<DesignPoint> design;
  design.reserve(2 * factors[0].levels.size() * factors[1].levels.size() *
                 factors[2].levels.size());
  for (MachineId m : kMachines) {
    for (double x1 : factors[0].levels) {
      for (double x2 : factors[1].levels) {
        for (double x3 : factors[2].levels) {
          design.push_back({m, x1, x2, x3});
        }
      }
    }
  }
  return design;
}

Dataset simulate_dataset(const SurTruth& truth, const std::vector<DesignPoint>& design,
                         const Factors& factors, std::uint64_t seed) {
  truth.validate();
  if (design.empty()) throw ValidationError("simulate: empty design");
  Coding coding;
  for (int j = 0; j < 3; ++j) {
    coding[j] = coding_from_bounds(factors[j].lower_bound, factors[j].upper_bound);
  }
  // Cholesky factor of the 2x2 error covariance.
  const double l11 = std::sqrt(truth.s11);
  const double l21 = truth.s12 / l11;
  const double l22 = std::sqrt(truth.s22 - l21 * l21);

  Rng rng(seed);
  std::vector<ExperimentalRun> runs;
  runs.reserve(design.size());
  for (const auto& pt : design) {
    const RegressorRow x = build_row(code_factor(pt.x1, coding[0]),
                                     code_factor(pt.x2, coding[1]),
                                     code_factor(pt.x3, coding[2]), pt.machine);
    double mu1 = 0.0, mu2 = 0.0;
    for (int j = 0; j < kNumTerms; ++j) {
      mu1 += x[static_cast<std::size_t>(j)] * truth.beta(j);
      mu2 += x[static_cast<std::size_t>(j)] * truth.beta(kNumTerms + j);
    }
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    ExperimentalRun run;
    run.machine = pt.machine;
    run.x1 = pt.x1;
    run.x2 = pt.x2;
    run.x3 = pt.x3;
    run.roughness = std::exp(mu1 + l11 * z1);
    run.power = std::exp(mu2 + l21 * z1 + l22 * z2);
    runs.push_back(run);
  }
  return make_dataset(std::move(runs), factors);
}

}  // namespace suropt
