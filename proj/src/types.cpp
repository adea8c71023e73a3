#include "suropt/types.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace suropt {

MachineId machine_from_tag(const std::string& tag) {
  if (tag == "A" || tag == "a") return MachineId::A;
  if (tag == "B" || tag == "b") return MachineId::B;
  throw ValidationError("unknown machine tag '" + tag + "' (expected A or B)");
}

FactorSpec FactorSpec::from_levels(std::string name, std::string units,
                                   std::vector<double> levels) {
  FactorSpec spec;
  spec.name = std::move(name);
  spec.units = std::move(units);
  spec.levels = std::move(levels);
  if (!spec.levels.empty()) {
    spec.lower_bound = spec.levels.front();
    spec.upper_bound = spec.levels.back();
  }
  spec.validate();
  return spec;
}

void FactorSpec::validate() const {
  if (levels.size() < 2) {
    throw ValidationError("factor '" + name + "': needs at least 2 levels");
  }
  for (double v : levels) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ValidationError("factor '" + name + "': levels must be finite and positive");
    }
  }
  if (!std::is_sorted(levels.begin(), levels.end(),
                      [](double a, double b) { return a <= b; })) {
    throw ValidationError("factor '" + name + "': levels must be strictly ascending");
  }
  if (lower_bound != levels.front() || upper_bound != levels.back()) {
    throw ValidationError("factor '" + name + "': bounds must match the extreme levels");
  }
}

CodingParams coding_from_bounds(double lower, double upper) {
  if (!(upper > lower)) {
    throw ValidationError("coding requires upper > lower bound");
  }
  CodingParams p;
  p.center = 0.5 * (lower + upper);
  p.half_range = 0.5 * (upper - lower);
  return p;
}

void Dataset::validate() const {
  if (runs.empty()) throw ValidationError("dataset is empty");
  for (const auto& f : factors) f.validate();
  std::size_t index = 0;
  for (const auto& run : runs) {
    ++index;
    if (!(run.roughness > 0.0) || !std::isfinite(run.roughness) ||
        !(run.power > 0.0) || !std::isfinite(run.power)) {
      throw ValidationError("run " + std::to_string(index) +
                            ": responses must be strictly positive");
    }
    const std::array<double, 3> x{run.x1, run.x2, run.x3};
    for (int j = 0; j < 3; ++j) {
      if (!std::isfinite(x[j]) || x[j] < factors[j].lower_bound ||
          x[j] > factors[j].upper_bound) {
        throw ValidationError("run " + std::to_string(index) + ": factor " +
                              factors[j].name + " out of bounds");
      }
    }
  }
}

std::size_t Dataset::count(MachineId m) const {
  std::size_t n = 0;
  for (const auto& run : runs) {
    if (run.machine == m) ++n;
  }
  return n;
}

Dataset make_dataset(std::vector<ExperimentalRun> runs, Factors factors) {
  Dataset ds;
  ds.runs = std::move(runs);
  ds.factors = std::move(factors);
  for (int j = 0; j < 3; ++j) {
    ds.coding[j] = coding_from_bounds(ds.factors[j].lower_bound, ds.factors[j].upper_bound);
  }
  ds.validate();
  return ds;
}

}  // namespace suropt
