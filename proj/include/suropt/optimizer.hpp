#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "suropt/analysis.hpp"
#include "suropt/rng.hpp"
#include "suropt/types.hpp"

namespace suropt {

using Point3 = std::array<double, 3>;

/// Box of admissible factor settings in raw units.
struct SearchSpace {
  Point3 lower{};
  Point3 upper{};

  static SearchSpace from_factors(const Factors& factors);
  void validate() const;
  bool contains(const Point3& x) const;
  Point3 clip(Point3 x) const;
  double range(int d) const { return upper[static_cast<std::size_t>(d)] - lower[static_cast<std::size_t>(d)]; }
};

/// Target (power, roughness) thresholds the optimizer steers toward.
struct ThresholdVector {
  double power = 0.0;
  double roughness = 0.0;

  void validate() const;
};

enum class Metric { relative_euclidean, euclidean, log_euclidean };

Metric metric_from_name(const std::string& name);
const char* metric_name(Metric m);

/// Distance between a predicted response pair and the thresholds. The
/// default scales each component by its threshold so the ~40x magnitude gap
/// between power and roughness does not drown the roughness term.
double distance(const Response& pred, const ThresholdVector& ymin,
                Metric metric = Metric::relative_euclidean);

struct GaConfig {
  int population = 50;
  int generations = 20;
  int elitism = 2;
  double crossover_rate = 0.9;
  double mutation_uniform = 0.10;
  double mutation_boundary = 0.05;
  double mutation_gaussian = 0.15;
  int refine_every = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

using Objective = std::function<double(const Point3&)>;

struct Individual {
  Point3 x{};
  double fitness = 0.0;
};

// Mutation operators (also used directly by property tests).
void mutate_uniform(Point3& x, const SearchSpace& space, Rng& rng);
void mutate_boundary(Point3& x, const SearchSpace& space, Rng& rng);
void mutate_gaussian(Point3& x, const SearchSpace& space, Rng& rng);

/// One generation: tournament selection, blend crossover, the three
/// mutation operators, elites carried unchanged. Offspring are clipped to
/// the box and evaluated. Returns the next population sorted by fitness.
std::vector<Individual> ga_step(const std::vector<Individual>& population,
                                const Objective& objective, const GaConfig& config,
                                const SearchSpace& space, Rng& rng);

struct RefineOptions {
  int max_iterations = 200;
  double grad_tol = 1e-8;  // infinity norm of the projected gradient
};

struct RefineResult {
  Point3 x{};
  double value = 0.0;
  int iterations = 0;
  bool non_finite = false;  // objective returned a non-finite value somewhere
};

/// BFGS with central-difference gradients (step 1e-6 of each factor range,
/// one-sided at the box faces), iterates projected onto the box. Returns the
/// best point seen.
RefineResult quasi_newton_refine(const Point3& x0, const Objective& objective,
                                 const SearchSpace& space,
                                 const RefineOptions& options = {});

struct OptimizationResult {
  Point3 e_star{};
  double distance = 0.0;
  Response predicted;
  int generation_found = 0;
  std::int64_t evaluations = 0;
};

/// Full hybrid search: GA over the box with quasi-Newton refinement of the
/// incumbent every refine_every generations and at termination.
/// Deterministic per seed.
OptimizationResult optimize(const PosteriorPredictor& predictor, MachineId machine,
                            const ThresholdVector& ymin, const SearchSpace& space,
                            const GaConfig& config,
                            Metric metric = Metric::relative_euclidean);

}  // namespace suropt
