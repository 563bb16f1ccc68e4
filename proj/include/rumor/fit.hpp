#pragma once

#include <string>
#include <vector>

#include "rumor/model.hpp"
#include "rumor/spread.hpp"

namespace rumor {

template <typename Coefficients>
struct FitResult {
  Coefficients coefficients{};
  double residual_norm = 0.0;  // sum of squared residuals
  double r_squared = 0.0;
  int iterations_used = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Least-squares fit of the growth law to a burn series with b = 0 and the
/// amplitude bound to F(0) = p_ii; unknowns are {a, epsilon}. Rejects flat
/// series and series whose f(0) disagrees with p_ii beyond 1e-3.
FitResult<CurveCoefficients> fit_curve(const BurnSeries& series, double p_ii);

struct TimedObservation {
  double t = 0.0;
  double f = 0.0;
};

/// Same constrained objective on >= 4 early observations, all with burned
/// fraction below 0.2. The result forecasts the full curve.
FitResult<CurveCoefficients> fit_four_points(const std::vector<TimedObservation>& points,
                                             double p_ii);

struct EpsilonLawSample {
  double inv_a = 0.0;
  double epsilon = 0.0;
  double p_ii = 0.0;
};

struct EpsilonLawCoefficients {
  double aa = 0.0;
  double bb = 0.0;
};

/// Fit eps = 1 + aa p_ii / (1 + e^{bb inv_a}) with aa constrained negative.
FitResult<EpsilonLawCoefficients> fit_epsilon_law(const std::vector<EpsilonLawSample>& samples);

struct PowerLawSample {
  double p_ip = 0.0;
  double p_ii = 0.0;
  double inv_a = 0.0;
};

struct PowerLawCoefficients {
  double cc = 0.0;
  double ee = 0.0;
  double gg = 0.0;
};

/// Two-stage fit of 1/a = cc p_ip^ee (1 + gg p_ii): log-log regression for
/// (cc, ee), then the residual factor for gg, alternated to a fixed point.
/// r_squared reports the collapse quality after the gg correction.
FitResult<PowerLawCoefficients> fit_power_law(const std::vector<PowerLawSample>& samples);

/// Collapse quality: r^2 of inv_a/(1 + gg p_ii) against cc p_ip^ee.
double power_law_collapse_r2(const std::vector<PowerLawSample>& samples, double cc,
                             double ee, double gg);

struct UsgLawRow {
  double p_usg = 0.0;
  LawCoefficients laws;  // any convention; converted to fractions internally
};

/// Per-coefficient least squares: quadratics for aa/cc/ee, rational
/// quartics for bb/gg. Needs >= 4 rows.
FitResult<UsgPolynomials> fit_usg_polynomials(const std::vector<UsgLawRow>& rows);

struct GroupSizeLaw {
  double lambda = 0.0;
  double a_shift = 0.0;
};

/// Fit the exponential size law to the empirical CDF of group sizes. The
/// rate is fitted on the [3,30]-restricted CDF (where the location cancels);
/// the location is a secondary estimate conditional on that window.
FitResult<GroupSizeLaw> fit_group_size_cdf(const std::vector<int>& sizes);

struct InferredNetwork {
  double p_ii = 0.0;  // supplied, not inferred
  double p_ip = 0.0;
  double p_usg = 0.0;
  FitResult<CurveCoefficients> curve_stage;
  double usg_residual = 0.0;       // epsilon-law mismatch at the returned p_usg
  bool usg_at_boundary = false;    // no root inside [0, 0.1]
  bool usg_indeterminate = false;  // epsilon at the logistic limit
  std::vector<std::string> warnings;
};

/// Invert an observed burn series: fit (a, epsilon), solve the epsilon law
/// for p_usg by bisection on [0, 0.1], then invert the power law for p_ip.
InferredNetwork infer_network_params(const BurnSeries& series, double p_ii,
                                     const UsgPolynomials& poly);

}  // namespace rumor
