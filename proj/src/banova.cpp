#include "suropt/banova.hpp"

#include <algorithm>
#include <cmath>

#include "suropt/csv.hpp"
#include "suropt/rng.hpp"

namespace suropt {

namespace {

constexpr double kMuPriorVar = 1e4;

// Stepping-out + shrinkage slice sampler (univariate). log_post must be
// finite at x0.
template <typename F>
double slice_sample(double x0, const F& log_post, Rng& rng) {
  const double f0 = log_post(x0);
  const double log_y = f0 + std::log(rng.uniform());
  const double w = 1.0;
  double left = x0 - w * rng.uniform();
  double right = left + w;
  for (int s = 0; s < 50 && log_post(left) > log_y; ++s) left -= w;
  for (int s = 0; s < 50 && log_post(right) > log_y; ++s) right += w;
  for (int s = 0; s < 200; ++s) {
    const double x = rng.uniform(left, right);
    if (log_post(x) > log_y) return x;
    if (x < x0) {
      left = x;
    } else {
      right = x;
    }
  }
  return x0;  // shrinkage exhausted; keep the current point
}

// Half-Cauchy(1) scale parameter, sampled on theta = log(sigma).
// k effects with sum of squares ss.
double draw_scale(double sigma, double ss, double k, Rng& rng) {
  const auto log_post = [&](double theta) {
    const double inv_var = std::exp(-2.0 * theta);
    return (1.0 - k) * theta - 0.5 * ss * inv_var - std::log1p(std::exp(2.0 * theta));
  };
  const double theta = slice_sample(std::log(sigma), log_post, rng);
  return std::exp(theta);
}

struct FactorIndex {
  std::vector<int> level_of_run;            // per run
  std::vector<std::vector<int>> runs_of_level;
  int k = 0;
};

FactorIndex index_factor(const std::vector<double>& values,
                         const std::vector<double>& levels, const std::string& name) {
  FactorIndex idx;
  idx.k = static_cast<int>(levels.size());
  idx.runs_of_level.resize(levels.size());
  idx.level_of_run.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int found = -1;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      if (std::abs(values[i] - levels[j]) <= 1e-6 * std::max(1.0, std::abs(levels[j]))) {
        found = static_cast<int>(j);
        break;
      }
    }
    if (found < 0) {
      throw ValidationError("anova: factor " + name + " value " +
                            format_double(values[i]) + " is not a design level");
    }
    idx.level_of_run.push_back(found);
    idx.runs_of_level[static_cast<std::size_t>(found)].push_back(static_cast<int>(i));
  }
  for (std::size_t j = 0; j < idx.runs_of_level.size(); ++j) {
    if (idx.runs_of_level[j].empty()) {
      throw ValidationError("anova: factor " + name + " level " +
                            format_double(levels[j]) + " is unobserved");
    }
  }
  return idx;
}

}  // namespace

AnovaDraws fit_anova(const Dataset& dataset, const AnovaConfig& config) {
  dataset.validate();
  config.mcmc.validate();

  std::vector<const ExperimentalRun*> runs;
  for (const auto& run : dataset.runs) {
    if (config.machine && run.machine != *config.machine) continue;
    runs.push_back(&run);
  }
  if (runs.empty()) throw ValidationError("anova: no runs in scope");

  const std::size_t n = runs.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto* run = runs[i];
    y[i] = std::log(config.response == ResponseSelector::roughness ? run->roughness
                                                                   : run->power);
  }

  // Factor level assignments: D (depth), A (feed), V (spindle), optional M.
  std::vector<FactorIndex> factors;
  std::vector<double> column(n);
  for (int f = 0; f < 3; ++f) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto* run = runs[i];
      column[i] = f == 0 ? run->x1 : (f == 1 ? run->x2 : run->x3);
    }
    factors.push_back(index_factor(column, dataset.factors[static_cast<std::size_t>(f)].levels,
                                   dataset.factors[static_cast<std::size_t>(f)].name));
  }
  const bool with_machine = config.include_machine_effect && !config.machine;
  if (with_machine) {
    FactorIndex idx;
    idx.k = 2;
    idx.runs_of_level.resize(2);
    for (std::size_t i = 0; i < n; ++i) {
      const int level = runs[i]->machine == MachineId::B ? 1 : 0;
      idx.level_of_run.push_back(level);
      idx.runs_of_level[static_cast<std::size_t>(level)].push_back(static_cast<int>(i));
    }
    if (idx.runs_of_level[0].empty() || idx.runs_of_level[1].empty()) {
      throw ValidationError("anova: machine effect requested but a machine is unobserved");
    }
    factors.push_back(std::move(idx));
  }
  const std::size_t nf = factors.size();

  double y_mean = 0.0, y_var = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  for (double v : y) y_var += (v - y_mean) * (v - y_mean);
  y_var = n > 1 ? y_var / static_cast<double>(n - 1) : 1.0;
  const double y_sd = std::sqrt(std::max(y_var, 1e-12));

  const McmcConfig& mc = config.mcmc;
  const int per_chain = mc.retained_per_chain();
  const int total = mc.retained_total();

  AnovaDraws out;
  out.mu.resize(total);
  for (int f = 0; f < 3; ++f) {
    out.alpha[static_cast<std::size_t>(f)].resize(total, factors[static_cast<std::size_t>(f)].k);
    out.sigma_factor[static_cast<std::size_t>(f)].resize(total);
  }
  if (with_machine) {
    out.alpha_machine.resize(total, 2);
    out.sigma_machine.resize(total);
  }
  out.sigma_eps.resize(total);
  out.chain_id.resize(static_cast<std::size_t>(total));

  for (int c = 0; c < mc.chains; ++c) {
    Rng rng(mc.seed ^ static_cast<std::uint64_t>(c));
    double mu = y_mean + rng.normal(0.0, 0.1 * y_sd);
    std::vector<std::vector<double>> alpha(nf);
    std::vector<double> sigma_f(nf, 1.0);
    for (std::size_t f = 0; f < nf; ++f) {
      alpha[f].assign(static_cast<std::size_t>(factors[f].k), 0.0);
    }
    double sigma_eps = y_sd;

    // Residual y - mu - sum of effects, maintained incrementally.
    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - mu;

    int kept = 0;
    for (int it = 0; it < mc.iterations; ++it) {
      const double eps_prec = 1.0 / (sigma_eps * sigma_eps);

      // mu update
      {
        double rsum = 0.0;
        for (double r : resid) rsum += r;
        rsum += static_cast<double>(n) * mu;  // partial residual total
        const double prec = static_cast<double>(n) * eps_prec + 1.0 / kMuPriorVar;
        const double mean = rsum * eps_prec / prec;
        const double mu_new = mean + rng.normal() / std::sqrt(prec);
        const double delta = mu_new - mu;
        for (double& r : resid) r -= delta;
        mu = mu_new;
      }

      // effect updates
      for (std::size_t f = 0; f < nf; ++f) {
        const double f_prec = 1.0 / (sigma_f[f] * sigma_f[f]);
        for (std::size_t j = 0; j < alpha[f].size(); ++j) {
          const auto& members = factors[f].runs_of_level[j];
          const double nj = static_cast<double>(members.size());
          double rsum = 0.0;
          for (int i : members) rsum += resid[static_cast<std::size_t>(i)];
          rsum += nj * alpha[f][j];
          const double prec = nj * eps_prec + f_prec;
          const double mean = rsum * eps_prec / prec;
          const double a_new = mean + rng.normal() / std::sqrt(prec);
          const double delta = a_new - alpha[f][j];
          for (int i : members) resid[static_cast<std::size_t>(i)] -= delta;
          alpha[f][j] = a_new;
        }
      }

      // scale updates
      for (std::size_t f = 0; f < nf; ++f) {
        double ss = 0.0;
        for (double a : alpha[f]) ss += a * a;
        sigma_f[f] = draw_scale(sigma_f[f], ss, static_cast<double>(alpha[f].size()), rng);
        if (!std::isfinite(sigma_f[f]) || sigma_f[f] > 1e6) {
          throw NumericalError("anova: divergent scale draw at chain " +
                               std::to_string(c) + ", iteration " + std::to_string(it));
        }
      }
      {
        double sse = 0.0;
        for (double r : resid) sse += r * r;
        sigma_eps = draw_scale(sigma_eps, sse, static_cast<double>(n), rng);
        if (!std::isfinite(sigma_eps) || sigma_eps > 1e6) {
          throw NumericalError("anova: divergent residual scale at chain " +
                               std::to_string(c) + ", iteration " + std::to_string(it));
        }
      }

      if (it >= mc.burn_in && (it - mc.burn_in + 1) % mc.thin == 0 && kept < per_chain) {
        const Eigen::Index row = static_cast<Eigen::Index>(c) * per_chain + kept;
        out.mu(row) = mu;
        for (std::size_t f = 0; f < 3; ++f) {
          for (std::size_t j = 0; j < alpha[f].size(); ++j) {
            out.alpha[f](row, static_cast<Eigen::Index>(j)) = alpha[f][j];
          }
          out.sigma_factor[f](row) = sigma_f[f];
        }
        if (with_machine) {
          out.alpha_machine(row, 0) = alpha[3][0];
          out.alpha_machine(row, 1) = alpha[3][1];
          out.sigma_machine(row) = sigma_f[3];
        }
        out.sigma_eps(row) = sigma_eps;
        out.chain_id[static_cast<std::size_t>(row)] = c;
        ++kept;
      }
    }
  }
  return out;
}

Eigen::VectorXd finite_pop_sd(const Eigen::MatrixXd& alpha_draws) {
  const Eigen::Index k = alpha_draws.cols();
  if (k < 2) throw ValidationError("finite_pop_sd: need at least 2 effects");
  Eigen::VectorXd out(alpha_draws.rows());
  for (Eigen::Index d = 0; d < alpha_draws.rows(); ++d) {
    // [I - J/k] a is the centered effect vector, so the quadratic form is
    // the centered sum of squares.
    double mean = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) mean += alpha_draws(d, j);
    mean /= static_cast<double>(k);
    double ss = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const double c = alpha_draws(d, j) - mean;
      ss += c * c;
    }
    out(d) = std::sqrt(ss / static_cast<double>(k - 1));
  }
  return out;
}

std::vector<FactorInterval> anova_intervals(const AnovaDraws& draws) {
  if (draws.draws() < 100) throw ValidationError("anova_intervals: need at least 100 draws");
  std::vector<FactorInterval> out;
  const auto summarize = [&](const std::string& code, const Eigen::MatrixXd& alpha) {
    const Eigen::VectorXd s = finite_pop_sd(alpha);
    std::vector<double> sorted(s.data(), s.data() + s.size());
    std::sort(sorted.begin(), sorted.end());
    FactorInterval fi;
    fi.factor = code;
    fi.median = quantile_sorted(sorted, 0.50);
    fi.l50 = quantile_sorted(sorted, 0.25);
    fi.u50 = quantile_sorted(sorted, 0.75);
    fi.l95 = quantile_sorted(sorted, 0.025);
    fi.u95 = quantile_sorted(sorted, 0.975);
    out.push_back(fi);
  };
  summarize("D", draws.alpha[0]);
  summarize("A", draws.alpha[1]);
  summarize("V", draws.alpha[2]);
  if (draws.has_machine()) summarize("M", draws.alpha_machine);
  return out;
}

std::string serialize_anova_intervals(const std::vector<FactorInterval>& intervals) {
  std::string out = "factor,median,l50,u50,l95,u95\n";
  for (const auto& fi : intervals) {
    out += fi.factor;
    out += ',';
    out += format_double(fi.median);
    out += ',';
    out += format_double(fi.l50);
    out += ',';
    out += format_double(fi.u50);
    out += ',';
    out += format_double(fi.l95);
    out += ',';
    out += format_double(fi.u95);
    out += '\n';
  }
  return out;
}

}  // namespace suropt
