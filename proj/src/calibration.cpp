#include "rumor/calibration.hpp"

namespace rumor {

namespace {
constexpr ProbabilityUnits kPct = ProbabilityUnits::kPercent;
}

const std::vector<CalibrationRow>& reference_law_rows() {
  static const std::vector<CalibrationRow> rows = {
      {0.00,
       {-0.0208, 7.32, 0.03204, 0.9381, 0.00354, kPct},
       {0.0003, 0.16, 0.00011, 0.0015, 0.00019, kPct}},
      {0.03,
       {-0.0663, 7.69, 0.03579, 0.9228, 0.0036, kPct},
       {0.0006, 0.09, 0.00015, 0.0019, 0.0002, kPct}},
      {0.05,
       {-0.1148, 8.28, 0.0391, 0.907, 0.0039, kPct},
       {0.0010, 0.09, 0.0002, 0.002, 0.0003, kPct}},
      {0.07,
       {-0.180, 8.77, 0.0431, 0.888, 0.0045, kPct},
       {0.002, 0.11, 0.0002, 0.003, 0.0003, kPct}},
      {0.10,
       {-0.328, 9.47, 0.0521, 0.843, 0.0054, kPct},
       {0.006, 0.19, 0.0004, 0.004, 0.0005, kPct}},
  };
  return rows;
}

const UsgPolynomials& reference_usg_polynomials() {
  static const UsgPolynomials poly = {
      -2.2,   -63.0,  -2410.0,  // aa
      7.319,  1.09e6, 49000.0,  // bb
      2.405,  4.7,    -35.0,    // cc
      0.9375, -0.25,  -7.0,     // ee
      0.3541, 10800.0, 4700.0,  // gg
  };
  return poly;
}

const UsgPolynomials& reference_usg_polynomial_errors() {
  static const UsgPolynomials bars = {
      0.4,    18.0,   170.0,   // aa
      0.010,  0.09e6, 4000.0,  // bb
      0.010,  0.5,    4.0,     // cc
      0.0017, 0.08,   0.7,     // ee
      0.0010, 600.0,  300.0,   // gg
  };
  return bars;
}

}  // namespace rumor
