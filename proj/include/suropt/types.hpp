#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace suropt {

/// Validation failures: malformed input, broken invariants, bad configuration.
/// The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures during sampling or optimization (exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required input artifact (dataset, draws file, ...) is absent (exit code 4).
class MissingArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MachineId { A, B };

/// Dummy coding: A -> 0, B -> 1.
inline double machine_dummy(MachineId m) { return m == MachineId::B ? 1.0 : 0.0; }

inline char machine_tag(MachineId m) { return m == MachineId::B ? 'B' : 'A'; }

MachineId machine_from_tag(const std::string& tag);

inline constexpr std::array<MachineId, 2> kMachines{MachineId::A, MachineId::B};

/// One controllable factor: its design levels and the box they span.
struct FactorSpec {
  std::string name;
  std::string units;
  std::vector<double> levels;  // strictly ascending, all finite and positive
  double lower_bound = 0.0;    // == levels.front()
  double upper_bound = 0.0;    // == levels.back()

  static FactorSpec from_levels(std::string name, std::string units,
                                std::vector<double> levels);
  void validate() const;
};

/// Linear map between raw factor units and coded [-1, 1] design units.
struct CodingParams {
  double center = 0.0;
  double half_range = 1.0;
};

CodingParams coding_from_bounds(double lower, double upper);

/// (value - center) / half_range; bounds map to -1 and +1.
inline double code_factor(double value, const CodingParams& p) {
  return (value - p.center) / p.half_range;
}

inline double decode_factor(double coded, const CodingParams& p) {
  return p.center + coded * p.half_range;
}

/// One machining run: settings plus the two measured responses.
struct ExperimentalRun {
  MachineId machine = MachineId::A;
  double x1 = 0.0;  // depth of cut
  double x2 = 0.0;  // feed rate
  double x3 = 0.0;  // spindle rate
  double roughness = 0.0;  // > 0
  double power = 0.0;      // > 0
};

using Factors = std::array<FactorSpec, 3>;
using Coding = std::array<CodingParams, 3>;

struct Dataset {
  std::vector<ExperimentalRun> runs;
  Factors factors;
  Coding coding;  // derived from factor bounds

  void validate() const;
  std::size_t count(MachineId m) const;
};

Dataset make_dataset(std::vector<ExperimentalRun> runs, Factors factors);

/// Predicted or observed response pair on the original (not log) scale.
struct Response {
  double roughness = 0.0;
  double power = 0.0;
};

}  // namespace suropt
