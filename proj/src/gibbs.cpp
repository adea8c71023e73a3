#include "suropt/gibbs.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <exception>
#include <thread>

#include "suropt/convergence.hpp"
#include "suropt/csv.hpp"

namespace suropt {

Prior Prior::vague() {
  Prior p;
  p.b0 = Eigen::VectorXd::Zero(kNumCoeffs);
  p.b0_var = Eigen::VectorXd::Constant(kNumCoeffs, 100.0);
  p.nu0 = 4.0;
  p.s0 = Eigen::Matrix2d::Identity();
  return p;
}

void Prior::validate() const {
  if (b0.size() != kNumCoeffs || b0_var.size() != kNumCoeffs) {
    throw ValidationError("prior: b0 and B0 diagonal must have 28 entries");
  }
  if (!(b0_var.minCoeff() > 0.0)) {
    throw ValidationError("prior: B0 variances must be positive");
  }
  if (!(nu0 > 1.0)) {
    throw ValidationError("prior: nu0 must exceed m - 1 = 1");
  }
  const double det = s0(0, 0) * s0(1, 1) - s0(0, 1) * s0(1, 0);
  if (!(s0(0, 0) > 0.0) || !(det > 0.0) ||
      std::abs(s0(0, 1) - s0(1, 0)) > 1e-12 * (1.0 + std::abs(s0(0, 1)))) {
    throw ValidationError("prior: S0 must be symmetric positive definite");
  }
}

void McmcConfig::validate() const {
  if (iterations < 1) throw ValidationError("mcmc: iterations must be positive");
  if (thin < 1) throw ValidationError("mcmc: thin must be >= 1");
  if (chains < 1) throw ValidationError("mcmc: chains must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw ValidationError("mcmc: burn_in must be smaller than iterations (no retained draws)");
  }
  if (retained_total() < 100) {
    throw ValidationError("mcmc: configuration retains fewer than 100 draws");
  }
}

void PosteriorDraws::validate() const {
  const Eigen::Index d = beta.rows();
  if (d == 0) throw ValidationError("draws: empty");
  if (beta.cols() != kNumCoeffs || sigma.rows() != d || sigma.cols() != 3 ||
      static_cast<Eigen::Index>(chain_id.size()) != d) {
    throw ValidationError("draws: inconsistent shapes");
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double s11 = sigma(i, 0), s22 = sigma(i, 1), s12 = sigma(i, 2);
    if (!(s11 > 0.0) || !(s22 > 0.0) || !(s11 * s22 - s12 * s12 > 0.0)) {
      throw ValidationError("draws: Sigma draw " + std::to_string(i) + " is not SPD");
    }
  }
}

std::vector<std::string> parameter_names() {
  std::vector<std::string> names;
  names.reserve(kNumCoeffs + 3);
  for (const char* eq : {"roughness", "power"}) {
    for (const auto& term : term_names()) names.push_back(std::string(eq) + "." + term);
  }
  names.emplace_back("Sigma11");
  names.emplace_back("Sigma22");
  names.emplace_back("Sigma12");
  return names;
}

double ConvergenceReport::max_rhat() const {
  double r = 1.0;
  for (const auto& p : params) r = std::max(r, p.rhat);
  return r;
}

std::vector<std::string> ConvergenceReport::warnings(double threshold) const {
  std::vector<std::string> out;
  for (const auto& p : params) {
    if (p.rhat > threshold) {
      out.push_back("parameter " + p.name + ": split R-hat " + format_double(p.rhat) +
                    " exceeds " + format_double(threshold));
    }
  }
  return out;
}

namespace {

struct SurStats {
  Eigen::Matrix<double, kNumTerms, kNumTerms> xtx;
  Eigen::Matrix<double, kNumTerms, 2> xty;
  Eigen::Index n = 0;
};

SurStats compute_stats(const SurDesign& design) {
  SurStats s;
  s.xtx = design.X.transpose() * design.X;
  s.xty = design.X.transpose() * design.Y;
  s.n = design.rows();
  return s;
}

Eigen::Matrix2d invert_spd2(const Eigen::Matrix2d& m, const char* what) {
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (!(m(0, 0) > 0.0) || !(det > 0.0)) {
    throw NumericalError(std::string(what) + ": 2x2 matrix not SPD (det " +
                         format_double(det) + ")");
  }
  Eigen::Matrix2d inv;
  inv << m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det;
  return inv;
}

struct Chol2 {
  double l11, l21, l22;
};

Chol2 chol2(const Eigen::Matrix2d& m, const char* what) {
  if (!(m(0, 0) > 0.0)) throw NumericalError(std::string(what) + ": not SPD");
  Chol2 c;
  c.l11 = std::sqrt(m(0, 0));
  c.l21 = m(1, 0) / c.l11;
  const double rest = m(1, 1) - c.l21 * c.l21;
  if (!(rest > 0.0)) throw NumericalError(std::string(what) + ": not SPD");
  c.l22 = std::sqrt(rest);
  return c;
}

Eigen::LLT<Eigen::MatrixXd> beta_conditional(const SurStats& stats,
                                             const Eigen::Matrix2d& sigma,
                                             const Prior& prior, Eigen::VectorXd& mean) {
  const Eigen::Matrix2d sinv = invert_spd2(sigma, "sample_beta_given_sigma");

  // Both equations share X, so the stacked precision is four scaled copies
  // of X'X plus the prior diagonal.
  Eigen::MatrixXd prec(kNumCoeffs, kNumCoeffs);
  for (int bi = 0; bi < 2; ++bi) {
    for (int bj = 0; bj < 2; ++bj) {
      prec.block<kNumTerms, kNumTerms>(bi * kNumTerms, bj * kNumTerms) =
          sinv(bi, bj) * stats.xtx;
    }
  }
  Eigen::VectorXd rhs(kNumCoeffs);
  for (int bi = 0; bi < 2; ++bi) {
    rhs.segment<kNumTerms>(bi * kNumTerms) =
        sinv(bi, 0) * stats.xty.col(0) + sinv(bi, 1) * stats.xty.col(1);
  }
  for (int k = 0; k < kNumCoeffs; ++k) {
    prec(k, k) += 1.0 / prior.b0_var(k);
    rhs(k) += prior.b0(k) / prior.b0_var(k);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(prec, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    throw NumericalError(
        "sample_beta_given_sigma: singular precision matrix (condition estimate " +
        format_double(hi / std::max(lo, 1e-300)) + ")");
  }
  mean = llt.solve(rhs);
  return llt;
}

Eigen::VectorXd draw_beta(const SurStats& stats, const Eigen::Matrix2d& sigma,
                          const Prior& prior, Rng& rng) {
  Eigen::VectorXd mean;
  const Eigen::LLT<Eigen::MatrixXd> llt = beta_conditional(stats, sigma, prior, mean);
  Eigen::VectorXd z(kNumCoeffs);
  for (int k = 0; k < kNumCoeffs; ++k) z(k) = rng.normal();
  return mean + llt.matrixU().solve(z);
}

Eigen::Matrix2d draw_sigma(const SurDesign& design, const Eigen::VectorXd& beta,
                           const Prior& prior, Rng& rng) {
  Eigen::Matrix<double, kNumTerms, 2> b;
  b.col(0) = beta.head(kNumTerms);
  b.col(1) = beta.tail(kNumTerms);
  const Eigen::MatrixXd resid = design.Y - design.X * b;
  const Eigen::Matrix2d scale = prior.s0 + (resid.transpose() * resid);
  const double nu = prior.nu0 + static_cast<double>(design.rows());

  // Bartlett draw of W ~ Wishart(nu, scale^-1); Sigma = W^-1 ~ IW(nu, scale).
  const Chol2 c = chol2(invert_spd2(scale, "sample_sigma_given_beta"),
                        "sample_sigma_given_beta");
  const double a11 = std::sqrt(rng.chi_squared(nu));
  const double a21 = rng.normal();
  const double a22 = std::sqrt(rng.chi_squared(nu - 1.0));

  const double t11 = c.l11 * a11;
  const double t21 = c.l21 * a11 + c.l22 * a21;
  const double t22 = c.l22 * a22;
  const double i11 = 1.0 / t11;
  const double i21 = -t21 / (t11 * t22);
  const double i22 = 1.0 / t22;

  Eigen::Matrix2d sigma;
  sigma(0, 0) = i11 * i11 + i21 * i21;
  sigma(0, 1) = i21 * i22;
  sigma(1, 0) = sigma(0, 1);
  sigma(1, 1) = i22 * i22;
  return sigma;
}

}  // namespace

Eigen::VectorXd sample_beta_given_sigma(const SurDesign& design,
                                        const Eigen::Matrix2d& sigma,
                                        const Prior& prior, Rng& rng) {
  prior.validate();
  return draw_beta(compute_stats(design), sigma, prior, rng);
}

Eigen::VectorXd beta_conditional_mean(const SurDesign& design,
                                      const Eigen::Matrix2d& sigma,
                                      const Prior& prior) {
  prior.validate();
  Eigen::VectorXd mean;
  beta_conditional(compute_stats(design), sigma, prior, mean);
  return mean;
}

Eigen::Matrix2d sample_sigma_given_beta(const SurDesign& design,
                                        const Eigen::VectorXd& beta,
                                        const Prior& prior, Rng& rng) {
  prior.validate();
  if (beta.size() != kNumCoeffs) {
    throw ValidationError("sample_sigma_given_beta: beta must have 28 entries");
  }
  return draw_sigma(design, beta, prior, rng);
}

FitResult run_chain(const SurDesign& design, const Prior& prior,
                    const McmcConfig& config) {
  prior.validate();
  config.validate();
  if (design.rows() < 1) throw ValidationError("run_chain: empty design");

  const SurStats stats = compute_stats(design);

  // Per-equation least squares for chain initialization.
  Eigen::Matrix<double, kNumTerms, 2> b_ls;
  {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Eigen::MatrixXd(stats.xtx));
    b_ls.col(0) = ldlt.solve(stats.xty.col(0));
    b_ls.col(1) = ldlt.solve(stats.xty.col(1));
    if (!b_ls.allFinite()) b_ls.setZero();
  }

  const int per_chain = config.retained_per_chain();
  const int total = config.retained_total();

  FitResult result;
  PosteriorDraws& all = result.draws;
  all.beta.resize(total, kNumCoeffs);
  all.sigma.resize(total, 3);
  all.chain_id.resize(static_cast<std::size_t>(total));
  all.scale = design.scale;
  all.coding = design.coding;

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.chains));

  auto run_one = [&](int c) noexcept {
    try {
      Rng rng(config.seed ^ static_cast<std::uint64_t>(c));
      Eigen::VectorXd beta(kNumCoeffs);
      for (int eq = 0; eq < 2; ++eq) {
        for (int j = 0; j < kNumTerms; ++j) {
          beta(eq * kNumTerms + j) = b_ls(j, eq) + rng.normal(0.0, 0.1);
        }
      }
      Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
      int kept = 0;
      for (int it = 0; it < config.iterations; ++it) {
        try {
          sigma = draw_sigma(design, beta, prior, rng);
          beta = draw_beta(stats, sigma, prior, rng);
        } catch (const NumericalError& e) {
          throw NumericalError("chain " + std::to_string(c) + ", iteration " +
                               std::to_string(it) + ": " + e.what());
        }
        if (it >= config.burn_in && (it - config.burn_in + 1) % config.thin == 0 &&
            kept < per_chain) {
          const Eigen::Index row = static_cast<Eigen::Index>(c) * per_chain + kept;
          all.beta.row(row) = beta.transpose();
          all.sigma(row, 0) = sigma(0, 0);
          all.sigma(row, 1) = sigma(1, 1);
          all.sigma(row, 2) = sigma(0, 1);
          all.chain_id[static_cast<std::size_t>(row)] = c;
          ++kept;
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };

  if (config.chains == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(config.chains));
    for (int c = 0; c < config.chains; ++c) workers.emplace_back(run_one, c);
    for (auto& t : workers) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }

  // Split R-hat / ESS over the 31 tracked quantities.
  const auto names = parameter_names();
  result.convergence.params.reserve(names.size());
  for (std::size_t p = 0; p < names.size(); ++p) {
    std::vector<std::vector<double>> per_chain_draws(
        static_cast<std::size_t>(config.chains));
    for (int c = 0; c < config.chains; ++c) {
      auto& v = per_chain_draws[static_cast<std::size_t>(c)];
      v.resize(static_cast<std::size_t>(per_chain));
      for (int i = 0; i < per_chain; ++i) {
        const Eigen::Index row = static_cast<Eigen::Index>(c) * per_chain + i;
        v[static_cast<std::size_t>(i)] =
            p < kNumCoeffs ? all.beta(row, static_cast<Eigen::Index>(p))
                           : all.sigma(row, static_cast<Eigen::Index>(p - kNumCoeffs));
      }
    }
    const RhatEss diag = split_rhat_ess(per_chain_draws);
    result.convergence.params.push_back({names[p], diag.rhat, diag.ess});
  }
  return result;
}

}  // namespace suropt
