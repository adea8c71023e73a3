#include "suropt/design.hpp"

#include <cmath>

#include "suropt/csv.hpp"

namespace suropt {

const std::array<std::string, kNumTerms>& term_names() {
  static const std::array<std::string, kNumTerms> names = {
      "Intercept", "X1",      "X2",      "X3",      "X1^2",  "X2^2",  "X3^2",
      "I(m)",      "X1:I(m)", "X2:I(m)", "X3:I(m)", "X1:X2", "X1:X3", "X2:X3"};
  return names;
}

RegressorRow build_row(double x1c, double x2c, double x3c, MachineId machine) {
  const double m = machine_dummy(machine);
  return {1.0,
          x1c,
          x2c,
          x3c,
          x1c * x1c,
          x2c * x2c,
          x3c * x3c,
          m,
          x1c * m,
          x2c * m,
          x3c * m,
          x1c * x2c,
          x1c * x3c,
          x2c * x3c};
}

SurDesign build_design(const Dataset& dataset, CovariateScale scale) {
  dataset.validate();
  const Eigen::Index n = static_cast<Eigen::Index>(dataset.runs.size());
  SurDesign design;
  design.scale = scale;
  design.coding = dataset.coding;
  design.X.resize(n, kNumTerms);
  design.Y.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& run = dataset.runs[static_cast<std::size_t>(i)];
    double x1 = run.x1, x2 = run.x2, x3 = run.x3;
    if (scale == CovariateScale::coded) {
      x1 = code_factor(x1, dataset.coding[0]);
      x2 = code_factor(x2, dataset.coding[1]);
      x3 = code_factor(x3, dataset.coding[2]);
    }
    const RegressorRow row = build_row(x1, x2, x3, run.machine);
    for (int j = 0; j < kNumTerms; ++j) design.X(i, j) = row[static_cast<std::size_t>(j)];
    design.Y(i, 0) = std::log(run.roughness);
    design.Y(i, 1) = std::log(run.power);
  }
  return design;
}

std::string serialize_design(const SurDesign& design) {
  std::string out;
  for (int j = 0; j < kNumTerms; ++j) {
    out += term_names()[static_cast<std::size_t>(j)];
    out += ',';
  }
  out += "log_roughness,log_power\n";
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    for (int j = 0; j < kNumTerms; ++j) {
      out += format_double(design.X(i, j));
      out += ',';
    }
    out += format_double(design.Y(i, 0));
    out += ',';
    out += format_double(design.Y(i, 1));
    out += '\n';
  }
  return out;
}

}  // namespace suropt
