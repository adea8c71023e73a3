#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "suropt/gibbs.hpp"
#include "suropt/types.hpp"

namespace suropt {

struct HdiInterval {
  double lower = 0.0;
  double upper = 0.0;
  double mass = 0.95;

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Highest-density interval: the shortest contiguous window of the sorted
/// samples containing ceil(mass * n) points, leftmost window on ties.
HdiInterval hdi(std::span<const double> samples, double mass = 0.95);
HdiInterval hdi_sorted(std::span<const double> sorted, double mass = 0.95);

/// Quantile with linear interpolation between order statistics
/// (h = (n-1)p convention).
double quantile_sorted(std::span<const double> sorted, double p);

/// One row per regressor: 95% HDI and zero-exclusion flag for each equation.
struct SignificanceRow {
  std::string term;
  HdiInterval roughness;
  bool roughness_significant = false;
  HdiInterval power;
  bool power_significant = false;
};

std::vector<SignificanceRow> significance_table(const PosteriorDraws& draws,
                                                double mass = 0.95);
std::string serialize_significance(const std::vector<SignificanceRow>& table);

enum class PredictionMode {
  lognormal_mean,  // mean over draws of exp(x'b + s_ii/2)
  plugin_median,   // exp(x' mean(b))
};

/// Evaluates the fitted response surface on the original scale. Holds
/// per-draw work buffers, so copy the predictor (cheap) for concurrent use;
/// the referenced draws must outlive every copy.
class PosteriorPredictor {
 public:
  explicit PosteriorPredictor(const PosteriorDraws& draws,
                              PredictionMode mode = PredictionMode::lognormal_mean);

  Response operator()(double x1, double x2, double x3, MachineId machine) const;

  /// Per-draw linear predictors x'b for each equation (no noise term).
  void linear_predictors(double x1, double x2, double x3, MachineId machine,
                         std::vector<double>& log_roughness,
                         std::vector<double>& log_power) const;

  const PosteriorDraws& draws() const { return *draws_; }
  PredictionMode mode() const { return mode_; }

 private:
  const PosteriorDraws* draws_;
  PredictionMode mode_;
  mutable std::vector<double> lin1_, lin2_;
};

Response predict_point(double x1, double x2, double x3, MachineId machine,
                       const PosteriorDraws& draws,
                       PredictionMode mode = PredictionMode::lognormal_mean);

struct Histogram {
  std::vector<double> edges;         // counts.size() + 1 entries
  std::vector<std::int64_t> counts;
};

Histogram make_histogram(std::span<const double> values, int bins);

struct PredictionResult {
  Response point;
  std::vector<Response> draws;  // posterior predictive draws, original scale
  HdiInterval hdi_roughness;
  HdiInterval hdi_power;
  Histogram hist_roughness;
  Histogram hist_power;
};

/// Samples new observations: for predictive draw k it takes parameter draw
/// k mod D, draws correlated log responses from N(x'b, Sigma), and
/// exponentiates. Deterministic per seed.
PredictionResult posterior_predictive(double x1, double x2, double x3,
                                      MachineId machine, const PosteriorDraws& draws,
                                      int n_pred, std::uint64_t seed,
                                      PredictionMode mode = PredictionMode::lognormal_mean);

/// |observed - predicted| / observed, reported as a fraction (0.01 == 1%).
double relative_error(double observed, double predicted);

struct SurfacePoint {
  double a = 0.0;
  double b = 0.0;
  Response response;
};

/// resolution x resolution predictions over the bounds of factors
/// factor_a and factor_b (0-based indices), with the remaining factor held
/// at fixed_value (raw units). Row-major in factor_a.
std::vector<SurfacePoint> surface_grid(int factor_a, int factor_b, double fixed_value,
                                       MachineId machine, const PosteriorDraws& draws,
                                       const Factors& factors, int resolution,
                                       PredictionMode mode = PredictionMode::lognormal_mean);

enum class ResponseSelector { roughness, power };

const char* response_name(ResponseSelector r);

/// Tukey box: quartiles by linear interpolation, whiskers at the most
/// extreme points within 1.5 IQR of the box, the rest flagged as outliers.
struct BoxplotStats {
  double min = 0.0;  // lower whisker end
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;  // upper whisker end
  std::vector<double> outliers;
  std::size_t n = 0;
};

BoxplotStats boxplot_stats(std::vector<double> values);
std::map<MachineId, BoxplotStats> boxplot_by_machine(const Dataset& dataset,
                                                     ResponseSelector response);

}  // namespace suropt
