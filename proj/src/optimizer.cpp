#include "suropt/optimizer.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

namespace suropt {

SearchSpace SearchSpace::from_factors(const Factors& factors) {
  SearchSpace space;
  for (std::size_t d = 0; d < 3; ++d) {
    space.lower[d] = factors[d].lower_bound;
    space.upper[d] = factors[d].upper_bound;
  }
  space.validate();
  return space;
}

void SearchSpace::validate() const {
  for (std::size_t d = 0; d < 3; ++d) {
    if (!(lower[d] < upper[d]) || !std::isfinite(lower[d]) || !std::isfinite(upper[d])) {
      throw ValidationError("search space: lower < upper required per dimension");
    }
  }
}

bool SearchSpace::contains(const Point3& x) const {
  for (std::size_t d = 0; d < 3; ++d) {
    if (x[d] < lower[d] || x[d] > upper[d]) return false;
  }
  return true;
}

Point3 SearchSpace::clip(Point3 x) const {
  for (std::size_t d = 0; d < 3; ++d) x[d] = std::clamp(x[d], lower[d], upper[d]);
  return x;
}

void ThresholdVector::validate() const {
  if (!(power > 0.0) || !(roughness > 0.0)) {
    throw ValidationError("thresholds: power and roughness targets must be positive");
  }
}

Metric metric_from_name(const std::string& name) {
  if (name == "relative") return Metric::relative_euclidean;
  if (name == "euclidean") return Metric::euclidean;
  if (name == "log") return Metric::log_euclidean;
  throw ValidationError("unknown metric '" + name + "' (relative, euclidean, log)");
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::relative_euclidean: return "relative";
    case Metric::euclidean: return "euclidean";
    case Metric::log_euclidean: return "log";
  }
  return "relative";
}

double distance(const Response& pred, const ThresholdVector& ymin, Metric metric) {
  ymin.validate();
  if (!(pred.roughness > 0.0) || !(pred.power > 0.0)) {
    throw ValidationError("distance: predictions must be positive");
  }
  double dr = 0.0, dp = 0.0;
  switch (metric) {
    case Metric::relative_euclidean:
      dr = (pred.roughness - ymin.roughness) / ymin.roughness;
      dp = (pred.power - ymin.power) / ymin.power;
      break;
    case Metric::euclidean:
      dr = pred.roughness - ymin.roughness;
      dp = pred.power - ymin.power;
      break;
    case Metric::log_euclidean:
      dr = std::log(pred.roughness) - std::log(ymin.roughness);
      dp = std::log(pred.power) - std::log(ymin.power);
      break;
  }
  return std::sqrt(dr * dr + dp * dp);
}

void GaConfig::validate() const {
  if (population < 10) throw ValidationError("ga: population must be >= 10");
  if (generations < 1) throw ValidationError("ga: generations must be >= 1");
  if (elitism < 1 || elitism > population) {
    throw ValidationError("ga: elitism must be in [1, population]");
  }
  if (refine_every < 1) throw ValidationError("ga: refine_every must be >= 1");
  for (double rate : {crossover_rate, mutation_uniform, mutation_boundary, mutation_gaussian}) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw ValidationError("ga: rates must be in [0,1]");
  }
}

void mutate_uniform(Point3& x, const SearchSpace& space, Rng& rng) {
  const auto d = static_cast<std::size_t>(rng.uniform_int(0, 2));
  x[d] = rng.uniform(space.lower[d], space.upper[d]);
}

void mutate_boundary(Point3& x, const SearchSpace& space, Rng& rng) {
  const auto d = static_cast<std::size_t>(rng.uniform_int(0, 2));
  x[d] = rng.uniform() < 0.5 ? space.lower[d] : space.upper[d];
}

void mutate_gaussian(Point3& x, const SearchSpace& space, Rng& rng) {
  const auto d = static_cast<std::size_t>(rng.uniform_int(0, 2));
  x[d] += rng.normal(0.0, 0.1 * (space.upper[d] - space.lower[d]));
}

namespace {

std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
  std::size_t best = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<std::int64_t>(pop.size()) - 1));
  for (int round = 1; round < 3; ++round) {
    const auto challenger = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(pop.size()) - 1));
    if (pop[challenger].fitness < pop[best].fitness) best = challenger;
  }
  return best;
}

void sort_by_fitness(std::vector<Individual>& pop) {
  std::stable_sort(pop.begin(), pop.end(),
                   [](const Individual& a, const Individual& b) {
                     return a.fitness < b.fitness;
                   });
}

}  // namespace

std::vector<Individual> ga_step(const std::vector<Individual>& population,
                                const Objective& objective, const GaConfig& config,
                                const SearchSpace& space, Rng& rng) {
  config.validate();
  if (population.empty()) throw ValidationError("ga_step: empty population");

  std::vector<Individual> parents = population;
  sort_by_fitness(parents);

  std::vector<Individual> next;
  next.reserve(parents.size());
  const std::size_t n_elite =
      std::min(static_cast<std::size_t>(config.elitism), parents.size());
  for (std::size_t i = 0; i < n_elite; ++i) next.push_back(parents[i]);

  while (next.size() < parents.size()) {
    const Individual& p1 = parents[tournament(parents, rng)];
    const Individual& p2 = parents[tournament(parents, rng)];
    Point3 child = p1.x;
    if (rng.uniform() < config.crossover_rate) {
      // BLX-0.5 blend: sample beyond the parent interval by half its width.
      for (std::size_t d = 0; d < 3; ++d) {
        const double lo = std::min(p1.x[d], p2.x[d]);
        const double hi = std::max(p1.x[d], p2.x[d]);
        const double pad = 0.5 * (hi - lo);
        child[d] = rng.uniform(lo - pad, hi + pad);
      }
    }
    if (rng.uniform() < config.mutation_uniform) mutate_uniform(child, space, rng);
    if (rng.uniform() < config.mutation_boundary) mutate_boundary(child, space, rng);
    if (rng.uniform() < config.mutation_gaussian) mutate_gaussian(child, space, rng);
    child = space.clip(child);
    next.push_back({child, objective(child)});
  }
  sort_by_fitness(next);
  return next;
}

namespace {

Eigen::Vector3d fd_gradient(const Point3& x, const Objective& f,
                            const SearchSpace& space, bool& non_finite) {
  Eigen::Vector3d g;
  for (int d = 0; d < 3; ++d) {
    const auto dd = static_cast<std::size_t>(d);
    const double h = 1e-6 * space.range(d);
    Point3 xp = x, xm = x;
    xp[dd] = std::min(x[dd] + h, space.upper[dd]);
    xm[dd] = std::max(x[dd] - h, space.lower[dd]);
    const double fp = f(xp);
    const double fm = f(xm);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      non_finite = true;
      g(d) = 0.0;
      continue;
    }
    g(d) = (fp - fm) / (xp[dd] - xm[dd]);
  }
  return g;
}

}  // namespace

RefineResult quasi_newton_refine(const Point3& x0, const Objective& objective,
                                 const SearchSpace& space, const RefineOptions& options) {
  space.validate();
  RefineResult result;
  Point3 x = space.clip(x0);
  double fx = objective(x);
  result.x = x;
  result.value = fx;
  if (!std::isfinite(fx)) {
    result.non_finite = true;
    return result;
  }

  Eigen::Vector3d g = fd_gradient(x, objective, space, result.non_finite);
  Eigen::Matrix3d h_inv = Eigen::Matrix3d::Identity();

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it;

    // Projected gradient: components pushing against an active bound do not
    // count toward convergence.
    double pg_norm = 0.0;
    for (int d = 0; d < 3; ++d) {
      const auto dd = static_cast<std::size_t>(d);
      double gd = g(d);
      if (x[dd] <= space.lower[dd] && gd > 0.0) gd = 0.0;
      if (x[dd] >= space.upper[dd] && gd < 0.0) gd = 0.0;
      pg_norm = std::max(pg_norm, std::abs(gd));
    }
    if (pg_norm < options.grad_tol) break;

    Eigen::Vector3d p = -(h_inv * g);
    if (g.dot(p) >= 0.0) {  // lost positive definiteness; restart
      p = -g;
      h_inv.setIdentity();
    }

    // Backtracking Armijo line search along the projected path.
    Point3 xn = x;
    double fn = fx;
    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 50; ++ls) {
      Point3 cand = x;
      for (std::size_t d = 0; d < 3; ++d) cand[d] = x[d] + t * p(static_cast<int>(d));
      cand = space.clip(cand);
      Eigen::Vector3d step;
      for (int d = 0; d < 3; ++d) step(d) = cand[static_cast<std::size_t>(d)] - x[static_cast<std::size_t>(d)];
      if (step.squaredNorm() == 0.0) break;
      const double fc = objective(cand);
      if (!std::isfinite(fc)) {
        result.non_finite = true;
        t *= 0.5;
        continue;
      }
      const double directional = g.dot(step);
      if (directional < 0.0 && fc <= fx + 1e-4 * directional) {
        xn = cand;
        fn = fc;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;

    Eigen::Vector3d gn = fd_gradient(xn, objective, space, result.non_finite);
    Eigen::Vector3d s, y;
    for (int d = 0; d < 3; ++d) s(d) = xn[static_cast<std::size_t>(d)] - x[static_cast<std::size_t>(d)];
    y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::Matrix3d id = Eigen::Matrix3d::Identity();
      const double rho = 1.0 / sy;
      h_inv = (id - rho * s * y.transpose()) * h_inv * (id - rho * y * s.transpose()) +
              rho * s * s.transpose();
    }
    x = xn;
    fx = fn;
    g = gn;
    if (fx < result.value) {
      result.x = x;
      result.value = fx;
    }
  }
  return result;
}

OptimizationResult optimize(const PosteriorPredictor& predictor, MachineId machine,
                            const ThresholdVector& ymin, const SearchSpace& space,
                            const GaConfig& config, Metric metric) {
  config.validate();
  space.validate();
  ymin.validate();

  std::int64_t evals = 0;
  const Objective objective = [&](const Point3& x) {
    ++evals;
    return distance(predictor(x[0], x[1], x[2], machine), ymin, metric);
  };

  Rng rng(config.seed);
  std::vector<Individual> pop(static_cast<std::size_t>(config.population));
  for (auto& ind : pop) {
    for (std::size_t d = 0; d < 3; ++d) {
      ind.x[d] = rng.uniform(space.lower[d], space.upper[d]);
    }
    ind.fitness = objective(ind.x);
  }
  std::stable_sort(pop.begin(), pop.end(), [](const Individual& a, const Individual& b) {
    return a.fitness < b.fitness;
  });

  Individual incumbent = pop.front();
  int generation_found = 0;

  const auto refine_incumbent = [&](int gen) {
    const RefineResult r = quasi_newton_refine(incumbent.x, objective, space);
    if (r.value < incumbent.fitness) {
      incumbent = {r.x, r.value};
      generation_found = gen;
      pop.back() = incumbent;  // feed the polished point back into the pool
    }
  };

  for (int gen = 1; gen <= config.generations; ++gen) {
    pop = ga_step(pop, objective, config, space, rng);
    if (pop.front().fitness < incumbent.fitness) {
      incumbent = pop.front();
      generation_found = gen;
    }
    if (gen % config.refine_every == 0) refine_incumbent(gen);
  }
  refine_incumbent(config.generations);

  OptimizationResult result;
  result.e_star = incumbent.x;
  result.predicted = predictor(incumbent.x[0], incumbent.x[1], incumbent.x[2], machine);
  result.distance = distance(result.predicted, ymin, metric);
  result.generation_found = generation_found;
  result.evaluations = evals;
  return result;
}

}  // namespace suropt
