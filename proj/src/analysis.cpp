#include "suropt/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "suropt/csv.hpp"
#include "suropt/kernels.hpp"
#include "suropt/rng.hpp"

namespace suropt {

HdiInterval hdi(std::span<const double> samples, double mass) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return hdi_sorted(sorted, mass);
}

HdiInterval hdi_sorted(std::span<const double> sorted, double mass) {
  const std::size_t n = sorted.size();
  if (n < 20) throw ValidationError("hdi: need at least 20 samples");
  if (!(mass > 0.0 && mass < 1.0)) throw ValidationError("hdi: mass must be in (0,1)");
  // ceil(mass * n), guarding against ties like 0.95 * 100 landing a hair
  // above the integer.
  const double target = mass * static_cast<double>(n);
  std::size_t k = static_cast<std::size_t>(std::ceil(target - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n);

  std::size_t best = 0;
  double best_width = sorted[k - 1] - sorted[0];
  for (std::size_t i = 1; i + k <= n; ++i) {
    const double width = sorted[i + k - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  return {sorted[best], sorted[best + k - 1], mass};
}

double quantile_sorted(std::span<const double> sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 0) throw ValidationError("quantile: empty sample");
  if (n == 1) return sorted[0];
  const double h = std::clamp(p, 0.0, 1.0) * static_cast<double>(n - 1);
  const std::size_t lo = std::min(static_cast<std::size_t>(h), n - 2);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

std::vector<SignificanceRow> significance_table(const PosteriorDraws& draws,
                                                double mass) {
  if (draws.draws() == 0) throw ValidationError("significance_table: empty draws");
  std::vector<SignificanceRow> table;
  table.reserve(kNumTerms);
  std::vector<double> column(static_cast<std::size_t>(draws.draws()));
  const auto interval_for = [&](int col) {
    for (Eigen::Index i = 0; i < draws.draws(); ++i) {
      column[static_cast<std::size_t>(i)] = draws.beta(i, col);
    }
    std::sort(column.begin(), column.end());
    return hdi_sorted(column, mass);
  };
  for (int j = 0; j < kNumTerms; ++j) {
    SignificanceRow row;
    row.term = term_names()[static_cast<std::size_t>(j)];
    row.roughness = interval_for(j);
    row.power = interval_for(kNumTerms + j);
    row.roughness_significant = !row.roughness.contains(0.0);
    row.power_significant = !row.power.contains(0.0);
    table.push_back(std::move(row));
  }
  return table;
}

std::string serialize_significance(const std::vector<SignificanceRow>& table) {
  std::string out =
      "term,roughness_lower,roughness_upper,roughness_significant,"
      "power_lower,power_upper,power_significant\n";
  for (const auto& row : table) {
    out += row.term;
    out += ',';
    out += format_double(row.roughness.lower);
    out += ',';
    out += format_double(row.roughness.upper);
    out += ',';
    out += row.roughness_significant ? "yes" : "no";
    out += ',';
    out += format_double(row.power.lower);
    out += ',';
    out += format_double(row.power.upper);
    out += ',';
    out += row.power_significant ? "yes" : "no";
    out += '\n';
  }
  return out;
}

PosteriorPredictor::PosteriorPredictor(const PosteriorDraws& draws, PredictionMode mode)
    : draws_(&draws), mode_(mode) {
  draws.validate();
}

void PosteriorPredictor::linear_predictors(double x1, double x2, double x3,
                                           MachineId machine,
                                           std::vector<double>& log_roughness,
                                           std::vector<double>& log_power) const {
  double c1 = x1, c2 = x2, c3 = x3;
  if (draws_->scale == CovariateScale::coded) {
    c1 = code_factor(x1, draws_->coding[0]);
    c2 = code_factor(x2, draws_->coding[1]);
    c3 = code_factor(x3, draws_->coding[2]);
  }
  const RegressorRow row = build_row(c1, c2, c3, machine);
  const std::size_t d = static_cast<std::size_t>(draws_->draws());
  log_roughness.assign(d, 0.0);
  log_power.assign(d, 0.0);
  for (int j = 0; j < kNumTerms; ++j) {
    const double xj = row[static_cast<std::size_t>(j)];
    if (xj == 0.0) continue;  // machine-A rows zero out the dummy block
    kernels::axpy(log_roughness.data(), draws_->beta.col(j).data(), xj, d);
    kernels::axpy(log_power.data(), draws_->beta.col(kNumTerms + j).data(), xj, d);
  }
}

Response PosteriorPredictor::operator()(double x1, double x2, double x3,
                                        MachineId machine) const {
  linear_predictors(x1, x2, x3, machine, lin1_, lin2_);
  const std::size_t d = lin1_.size();
  Response out;
  if (mode_ == PredictionMode::lognormal_mean) {
    kernels::axpy(lin1_.data(), draws_->sigma.col(0).data(), 0.5, d);
    kernels::axpy(lin2_.data(), draws_->sigma.col(1).data(), 0.5, d);
    const double dd = static_cast<double>(d);
    out.roughness = kernels::exp_sum(lin1_.data(), d) / dd;
    out.power = kernels::exp_sum(lin2_.data(), d) / dd;
  } else {
    const double dd = static_cast<double>(d);
    out.roughness = std::exp(kernels::sum(lin1_.data(), d) / dd);
    out.power = std::exp(kernels::sum(lin2_.data(), d) / dd);
  }
  return out;
}

Response predict_point(double x1, double x2, double x3, MachineId machine,
                       const PosteriorDraws& draws, PredictionMode mode) {
  return PosteriorPredictor(draws, mode)(x1, x2, x3, machine);
}

Histogram make_histogram(std::span<const double> values, int bins) {
  if (values.empty() || bins < 1) throw ValidationError("histogram: empty input");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it, hi = *hi_it;
  Histogram h;
  if (lo == hi) {
    h.edges = {lo, hi};
    h.counts = {static_cast<std::int64_t>(values.size())};
    return h;
  }
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) {
    h.edges[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= static_cast<std::size_t>(bins)) idx = static_cast<std::size_t>(bins) - 1;
    ++h.counts[idx];
  }
  return h;
}

PredictionResult posterior_predictive(double x1, double x2, double x3,
                                      MachineId machine, const PosteriorDraws& draws,
                                      int n_pred, std::uint64_t seed,
                                      PredictionMode mode) {
  if (n_pred < 1000) throw ValidationError("posterior_predictive: n_pred must be >= 1000");
  const PosteriorPredictor predictor(draws, mode);

  std::vector<double> lin1, lin2;
  predictor.linear_predictors(x1, x2, x3, machine, lin1, lin2);
  const Eigen::Index d = draws.draws();

  PredictionResult result;
  result.point = predictor(x1, x2, x3, machine);
  result.draws.reserve(static_cast<std::size_t>(n_pred));

  Rng rng(seed);
  for (int k = 0; k < n_pred; ++k) {
    const Eigen::Index i = static_cast<Eigen::Index>(k) % d;
    const double s11 = draws.sigma(i, 0);
    const double s22 = draws.sigma(i, 1);
    const double s12 = draws.sigma(i, 2);
    const double l11 = std::sqrt(s11);
    const double l21 = s12 / l11;
    const double l22 = std::sqrt(s22 - l21 * l21);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    Response r;
    r.roughness = std::exp(lin1[static_cast<std::size_t>(i)] + l11 * z1);
    r.power = std::exp(lin2[static_cast<std::size_t>(i)] + l21 * z1 + l22 * z2);
    result.draws.push_back(r);
  }

  std::vector<double> values(result.draws.size());
  for (std::size_t k = 0; k < result.draws.size(); ++k) values[k] = result.draws[k].roughness;
  result.hdi_roughness = hdi(values, 0.95);
  result.hist_roughness = make_histogram(values, 60);
  for (std::size_t k = 0; k < result.draws.size(); ++k) values[k] = result.draws[k].power;
  result.hdi_power = hdi(values, 0.95);
  result.hist_power = make_histogram(values, 60);
  return result;
}

double relative_error(double observed, double predicted) {
  if (!(observed > 0.0)) throw ValidationError("relative_error: observed must be positive");
  return std::abs(observed - predicted) / observed;
}

std::vector<SurfacePoint> surface_grid(int factor_a, int factor_b, double fixed_value,
                                       MachineId machine, const PosteriorDraws& draws,
                                       const Factors& factors, int resolution,
                                       PredictionMode mode) {
  if (resolution < 2) throw ValidationError("surface_grid: resolution must be >= 2");
  if (factor_a < 0 || factor_a > 2 || factor_b < 0 || factor_b > 2 || factor_a == factor_b) {
    throw ValidationError("surface_grid: factor indices must be distinct and in 0..2");
  }
  const PosteriorPredictor predictor(draws, mode);
  const auto axis = [&](int f, int i) {
    const auto& spec = factors[static_cast<std::size_t>(f)];
    return spec.lower_bound + (spec.upper_bound - spec.lower_bound) *
                                  static_cast<double>(i) /
                                  static_cast<double>(resolution - 1);
  };
  std::vector<SurfacePoint> grid;
  grid.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution));
  for (int ia = 0; ia < resolution; ++ia) {
    for (int ib = 0; ib < resolution; ++ib) {
      double x[3] = {fixed_value, fixed_value, fixed_value};
      x[factor_a] = axis(factor_a, ia);
      x[factor_b] = axis(factor_b, ib);
      SurfacePoint pt;
      pt.a = x[factor_a];
      pt.b = x[factor_b];
      pt.response = predictor(x[0], x[1], x[2], machine);
      grid.push_back(pt);
    }
  }
  return grid;
}

const char* response_name(ResponseSelector r) {
  return r == ResponseSelector::roughness ? "roughness" : "power";
}

BoxplotStats boxplot_stats(std::vector<double> values) {
  if (values.size() < 5) {
    throw ValidationError("boxplot: need at least 5 values, got " +
                          std::to_string(values.size()));
  }
  std::sort(values.begin(), values.end());
  BoxplotStats stats;
  stats.n = values.size();
  stats.q1 = quantile_sorted(values, 0.25);
  stats.median = quantile_sorted(values, 0.50);
  stats.q3 = quantile_sorted(values, 0.75);
  const double iqr = stats.q3 - stats.q1;
  const double lo_fence = stats.q1 - 1.5 * iqr;
  const double hi_fence = stats.q3 + 1.5 * iqr;
  stats.min = stats.q1;
  stats.max = stats.q3;
  bool any_inside = false;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      stats.outliers.push_back(v);
    } else {
      if (!any_inside) {
        stats.min = v;
        any_inside = true;
      }
      stats.max = v;
    }
  }
  return stats;
}

std::map<MachineId, BoxplotStats> boxplot_by_machine(const Dataset& dataset,
                                                     ResponseSelector response) {
  std::map<MachineId, BoxplotStats> out;
  for (MachineId m : kMachines) {
    std::vector<double> values;
    for (const auto& run : dataset.runs) {
      if (run.machine != m) continue;
      values.push_back(response == ResponseSelector::roughness ? run.roughness
                                                               : run.power);
    }
    if (values.size() < 5) {
      throw ValidationError(std::string("boxplot: machine ") + machine_tag(m) +
                            " has fewer than 5 runs");
    }
    out.emplace(m, boxplot_stats(std::move(values)));
  }
  return out;
}

}  // namespace suropt
