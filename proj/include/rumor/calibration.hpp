#pragma once

#include <vector>

#include "rumor/model.hpp"

namespace rumor {

/// One calibrated row of the law-coefficient table: the fitted values at a
/// given USG fraction together with their one-sigma error bars. Values are
/// in percent convention.
struct CalibrationRow {
  double p_usg = 0.0;
  LawCoefficients laws;        // units = kPercent
  LawCoefficients error_bars;  // absolute +- bars on each coefficient
};

/// Shipped law-coefficient calibration at p_usg in {0, 3%, 5%, 7%, 10%}.
const std::vector<CalibrationRow>& reference_law_rows();

/// Shipped USG-polynomial calibration (fraction convention).
const UsgPolynomials& reference_usg_polynomials();

/// Error bars on the shipped USG polynomials.
const UsgPolynomials& reference_usg_polynomial_errors();

inline constexpr int kCalibrationSchemaVersion = 1;

}  // namespace rumor
