#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rumor/params.hpp"

namespace rumor {

enum class ProbabilityUnits { kFraction, kPercent };

/// Coefficients of the saturating growth law
///   F(t) = (C e^{(1+eps)(t-b)/a} - 1) / (2 eps/(1-eps) + C e^{(1+eps)(t-b)/a}),
/// which interpolates between exponential (eps -> 0) and logistic
/// (eps -> 1) growth.
struct CurveCoefficients {
  double a = 1.0;        // characteristic time, iterations
  double b = 0.0;        // time origin
  double epsilon = 0.5;  // interpolation parameter in (0, 1]
  double c = 1.0;        // amplitude coefficient, > 0
  // Set when the coefficients were constructed so that F(b) equals a known
  // initial fraction; required for evaluation at the logistic limit.
  std::optional<double> initial_fraction;
};

/// Coefficients of the fitted laws
///   eps = 1 + aa p_ii / (1 + e^{bb/a}),   1/a = cc p_ip^ee (1 + gg p_ii).
/// `units` records whether p_ii / p_ip enter as fractions or percentages.
struct LawCoefficients {
  double aa = 0.0;  // < 0 in the fitted regime
  double bb = 0.0;
  double cc = 0.0;  // > 0
  double ee = 0.0;  // in (0, 1]
  double gg = 0.0;  // >= 0
  ProbabilityUnits units = ProbabilityUnits::kFraction;

  LawCoefficients as_fraction() const;
  LawCoefficients as_percent() const;
};

/// Coefficients that turn the law coefficients into functions of p_usg
/// (fraction convention):
///   aa = aa1 + aa2 P + aa3 P^2           (same quadratic form for cc, ee)
///   bb = bb1 + bb2 P^4 / (1 + bb3 P^3)   (same rational form for gg)
struct UsgPolynomials {
  double aa1 = 0, aa2 = 0, aa3 = 0;
  double bb1 = 0, bb2 = 0, bb3 = 0;
  double cc1 = 0, cc2 = 0, cc3 = 0;
  double ee1 = 0, ee2 = 0, ee3 = 0;
  double gg1 = 0, gg2 = 0, gg3 = 0;
};

struct GrowthPrediction {
  SpreadParams params;
  CurveCoefficients coeffs;
  double invisible_population = 0.0;  // (1-eps)/(2 eps)
  std::vector<std::string> warnings;
};

// Above this epsilon the curve is evaluated in its logistic limit.
inline constexpr double kLogisticEpsilon = 1.0 - 1e-9;

/// F(t). Overflow-guarded; returns exactly 1 for very large t.
double eval_curve(const CurveCoefficients& coeffs, double t);

/// Amplitude that pins F(b) to p_ii. Rejects epsilon outside (0, 1).
double c_from_initial(double a, double b, double epsilon, double p_ii);

/// Coefficients with b = 0, c bound to the initial condition F(0) = p_ii.
CurveCoefficients curve_from_initial(double a, double epsilon, double p_ii);

/// eps(a, p_ii). Result clamped to (0, 1]; a warning is appended when the
/// raw value falls outside. p_ii must be in laws.units.
double epsilon_law(double a, double p_ii, const LawCoefficients& laws,
                   std::vector<std::string>* warnings = nullptr);

/// 1/a as a function of p_ip and p_ii (both in laws.units). p_ip = 0 gives
/// 0 (infinite characteristic time) with a warning.
double inv_a_law(double p_ip, double p_ii, const LawCoefficients& laws,
                 std::vector<std::string>* warnings = nullptr);

/// Law coefficients at a given USG fraction, fraction convention.
/// p_usg outside [0, 0.1] appends an extrapolation warning.
LawCoefficients law_coeffs_at_usg(double p_usg, const UsgPolynomials& poly,
                                  std::vector<std::string>* warnings = nullptr);

/// Full chain (p_ii, p_ip, p_usg) -> curve coefficients, b = 0.
GrowthPrediction predict_curve(const SpreadParams& params, const UsgPolynomials& poly);

/// Same chain with law coefficients fixed (any convention); params are
/// fractions and are scaled to the laws' convention internally.
GrowthPrediction predict_with_laws(const SpreadParams& params, const LawCoefficients& laws);

/// Mass-action form of the growth rate: (2 eps/a) [(1-eps)/(2 eps) + f] (1-f).
double growth_rate(double f, double a, double epsilon);

double invisible_population(double epsilon);

/// Closed-form inverse of eval_curve: the time at which F reaches x.
/// Rejects x below F(0) or >= 1.
double time_to_fraction(double x, const CurveCoefficients& coeffs);

}  // namespace rumor
