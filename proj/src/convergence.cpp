#include "suropt/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace suropt {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

RhatEss split_rhat_ess(const std::vector<std::vector<double>>& chains) {
  // Split each chain in half (dropping one trailing draw when odd).
  std::vector<std::vector<double>> seqs;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    if (half < 2) continue;
    seqs.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    seqs.emplace_back(c.begin() + static_cast<std::ptrdiff_t>(half),
                      c.begin() + static_cast<std::ptrdiff_t>(2 * half));
  }
  RhatEss out;
  if (seqs.size() < 2) {
    out.rhat = 1.0;
    out.ess = 0.0;
    for (const auto& c : chains) out.ess += static_cast<double>(c.size());
    return out;
  }

  const std::size_t m = seqs.size();
  const std::size_t n = seqs.front().size();

  std::vector<double> seq_mean(m), seq_var(m);
  double grand = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    seq_mean[j] = mean_of(seqs[j]);
    grand += seq_mean[j];
    double ss = 0.0;
    for (double x : seqs[j]) ss += (x - seq_mean[j]) * (x - seq_mean[j]);
    seq_var[j] = ss / static_cast<double>(n - 1);
  }
  grand /= static_cast<double>(m);

  double b = 0.0;  // between-sequence variance * n
  for (std::size_t j = 0; j < m; ++j) b += (seq_mean[j] - grand) * (seq_mean[j] - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);
  double w = 0.0;
  for (std::size_t j = 0; j < m; ++j) w += seq_var[j];
  w /= static_cast<double>(m);

  const double nd = static_cast<double>(n);
  const double var_plus = (nd - 1.0) / nd * w + b / nd;

  if (!(w > 0.0)) {
    // Degenerate draws: call it converged with nominal sample size.
    out.rhat = 1.0;
    out.ess = static_cast<double>(m * n);
    return out;
  }
  out.rhat = std::sqrt(var_plus / w);

  // Variogram autocorrelations, truncated at the first negative pair sum.
  const std::size_t max_lag = std::min<std::size_t>(n - 1, 1000);
  auto rho_at = [&](std::size_t t) {
    double vt = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& s = seqs[j];
      for (std::size_t i = t; i < n; ++i) {
        const double d = s[i] - s[i - t];
        vt += d * d;
      }
    }
    vt /= static_cast<double>(m * (n - t));
    return 1.0 - vt / (2.0 * var_plus);
  };

  double rho_sum = 0.0;
  for (std::size_t t = 1; t + 1 <= max_lag; t += 2) {
    const double pair = rho_at(t) + rho_at(t + 1);
    if (pair <= 0.0) break;
    rho_sum += pair;
  }
  const double tau = 1.0 + 2.0 * rho_sum;
  out.ess = static_cast<double>(m * n) / tau;
  return out;
}

}  // namespace suropt
