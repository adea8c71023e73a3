#pragma once

#include <Eigen/Core>
#include <array>
#include <string>

#include "suropt/types.hpp"

namespace suropt {

inline constexpr int kNumTerms = 14;    // regressors per equation
inline constexpr int kNumCoeffs = 28;   // stacked across the two equations

/// Fixed regressor order shared by both equations:
///   [1, x1, x2, x3, x1^2, x2^2, x3^2, m, x1*m, x2*m, x3*m, x1*x2, x1*x3, x2*x3]
/// where m is the machine-B dummy.
using RegressorRow = std::array<double, kNumTerms>;

const std::array<std::string, kNumTerms>& term_names();

RegressorRow build_row(double x1c, double x2c, double x3c, MachineId machine);

enum class CovariateScale { coded, raw };

/// Stacked design for the two-equation model. Both equations share X;
/// Y column 0 is log roughness, column 1 is log power.
struct SurDesign {
  Eigen::MatrixXd X;  // n x 14
  Eigen::MatrixXd Y;  // n x 2
  CovariateScale scale = CovariateScale::coded;
  Coding coding;

  Eigen::Index rows() const { return X.rows(); }
};

SurDesign build_design(const Dataset& dataset,
                       CovariateScale scale = CovariateScale::coded);

/// Design matrix plus log responses as CSV (debugging aid).
std::string serialize_design(const SurDesign& design);

}  // namespace suropt
