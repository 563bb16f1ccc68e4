#include "rumor/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rumor {

namespace {

void append(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

void check_curve(const CurveCoefficients& k) {
  if (!(k.a > 0.0)) throw std::invalid_argument("curve: a must be positive");
  if (!(k.epsilon > 0.0) || k.epsilon > 1.0)
    throw std::invalid_argument("curve: epsilon must be in (0,1]");
  if (!(k.c > 0.0)) throw std::invalid_argument("curve: c must be positive");
}

}  // namespace

LawCoefficients LawCoefficients::as_fraction() const {
  if (units == ProbabilityUnits::kFraction) return *this;
  // p -> 100 p leaves eps and 1/a unchanged when aa and gg pick up a factor
  // of 100 and cc a factor of 100^ee.
  return {aa * 100.0, bb, cc * std::pow(100.0, ee), ee, gg * 100.0,
          ProbabilityUnits::kFraction};
}

LawCoefficients LawCoefficients::as_percent() const {
  if (units == ProbabilityUnits::kPercent) return *this;
  return {aa / 100.0, bb, cc / std::pow(100.0, ee), ee, gg / 100.0,
          ProbabilityUnits::kPercent};
}

double eval_curve(const CurveCoefficients& k, double t) {
  check_curve(k);
  if (k.epsilon >= kLogisticEpsilon) {
    if (!k.initial_fraction)
      throw std::invalid_argument("eval_curve: logistic limit requires initial_fraction");
    const double p0 = *k.initial_fraction;
    const double ratio = (1.0 - p0) / p0;
    const double x = 2.0 * (t - k.b) / k.a;
    if (x >= 0.0) return 1.0 / (1.0 + ratio * std::exp(-x));
    const double ex = std::exp(x);
    return ex / (ex + ratio);
  }

  // G-form of the growth law, rearranged so neither factor can overflow.
  const double d = 2.0 * k.epsilon / (1.0 - k.epsilon);
  const double x = (1.0 + k.epsilon) * (t - k.b) / k.a;
  if (x >= 0.0) {
    const double em = std::exp(-x);  // in (0,1]; underflows to 0 for large t
    return (k.c - em) / (d * em + k.c);
  }
  const double ep = std::exp(x);
  return (k.c * ep - 1.0) / (d + k.c * ep);
}

double c_from_initial(double a, double b, double epsilon, double p_ii) {
  if (!(a > 0.0)) throw std::invalid_argument("c_from_initial: a must be positive");
  if (!(epsilon > 0.0) || epsilon >= 1.0)
    throw std::invalid_argument("c_from_initial: epsilon must be in (0,1)");
  if (!(p_ii > 0.0) || p_ii >= 1.0)
    throw std::invalid_argument("c_from_initial: p_ii must be in (0,1)");
  const double d = 2.0 * epsilon / (1.0 - epsilon);
  return (1.0 + d * p_ii) / ((1.0 - p_ii) * std::exp((1.0 + epsilon) * b / a));
}

CurveCoefficients curve_from_initial(double a, double epsilon, double p_ii) {
  CurveCoefficients k;
  k.a = a;
  k.b = 0.0;
  k.epsilon = epsilon;
  k.c = c_from_initial(a, 0.0, epsilon, p_ii);
  k.initial_fraction = p_ii;
  return k;
}

double epsilon_law(double a, double p_ii, const LawCoefficients& laws,
                   std::vector<std::string>* warnings) {
  const double raw = 1.0 + laws.aa * p_ii / (1.0 + std::exp(laws.bb / a));
  if (raw <= 0.0) {
    append(warnings, "epsilon_law: nonpositive result, outside the fitted regime; clamped");
    return 1e-9;
  }
  if (raw > 1.0) {
    append(warnings, "epsilon_law: result above 1; clamped");
    return 1.0;
  }
  return raw;
}

double inv_a_law(double p_ip, double p_ii, const LawCoefficients& laws,
                 std::vector<std::string>* warnings) {
  if (p_ip < 0.0) throw std::invalid_argument("inv_a_law: p_ip must be >= 0");
  if (p_ip == 0.0) {
    append(warnings, "inv_a_law: p_ip = 0, characteristic time is infinite");
    return 0.0;
  }
  return laws.cc * std::pow(p_ip, laws.ee) * (1.0 + laws.gg * p_ii);
}

LawCoefficients law_coeffs_at_usg(double p_usg, const UsgPolynomials& poly,
                                  std::vector<std::string>* warnings) {
  if (p_usg < 0.0 || p_usg > 0.1)
    append(warnings, "law_coeffs_at_usg: p_usg outside the fitted range [0, 0.1]");
  const double p = p_usg;
  const double p2 = p * p;
  const double p3 = p2 * p;
  const double p4 = p2 * p2;
  LawCoefficients laws;
  laws.aa = poly.aa1 + poly.aa2 * p + poly.aa3 * p2;
  laws.bb = poly.bb1 + poly.bb2 * p4 / (1.0 + poly.bb3 * p3);
  laws.cc = poly.cc1 + poly.cc2 * p + poly.cc3 * p2;
  laws.ee = poly.ee1 + poly.ee2 * p + poly.ee3 * p2;
  laws.gg = poly.gg1 + poly.gg2 * p4 / (1.0 + poly.gg3 * p3);
  laws.units = ProbabilityUnits::kFraction;
  return laws;
}

GrowthPrediction predict_with_laws(const SpreadParams& params, const LawCoefficients& laws) {
  GrowthPrediction out;
  out.params = params;
  if (params.p_ii > 0.1 || params.p_ip > 0.1)
    out.warnings.push_back("predict: probabilities above 0.1, outside the fitted range");
  const double scale = laws.units == ProbabilityUnits::kPercent ? 100.0 : 1.0;

  const double inv_a = inv_a_law(params.p_ip * scale, params.p_ii * scale, laws, &out.warnings);
  const double a = inv_a > 0.0 ? 1.0 / inv_a : std::numeric_limits<double>::infinity();
  double eps = epsilon_law(a, params.p_ii * scale, laws, &out.warnings);
  if (eps > kLogisticEpsilon) eps = kLogisticEpsilon;  // keep the amplitude finite

  out.coeffs = curve_from_initial(a, eps, params.p_ii);
  out.invisible_population = invisible_population(eps);
  return out;
}

GrowthPrediction predict_curve(const SpreadParams& params, const UsgPolynomials& poly) {
  std::vector<std::string> warnings;
  const LawCoefficients laws = law_coeffs_at_usg(params.p_usg, poly, &warnings);
  GrowthPrediction out = predict_with_laws(params, laws);
  out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
  return out;
}

double growth_rate(double f, double a, double epsilon) {
  return (2.0 * epsilon / a) * ((1.0 - epsilon) / (2.0 * epsilon) + f) * (1.0 - f);
}

double invisible_population(double epsilon) {
  return (1.0 - epsilon) / (2.0 * epsilon);
}

double time_to_fraction(double x, const CurveCoefficients& k) {
  check_curve(k);
  if (x >= 1.0) throw std::invalid_argument("time_to_fraction: x must be below 1");
  const double f0 = eval_curve(k, 0.0);
  if (x < f0) throw std::invalid_argument("time_to_fraction: x below the initial fraction");

  if (k.epsilon >= kLogisticEpsilon) {
    const double p0 = *k.initial_fraction;
    const double ratio = (1.0 - p0) / p0;
    return k.b + 0.5 * k.a * std::log(ratio * x / (1.0 - x));
  }
  const double d = 2.0 * k.epsilon / (1.0 - k.epsilon);
  return k.b + k.a / (1.0 + k.epsilon) * std::log((1.0 + d * x) / ((1.0 - x) * k.c));
}

}  // namespace rumor
