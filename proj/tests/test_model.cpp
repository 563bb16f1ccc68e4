#include <doctest.h>

#include <cmath>

#include "rumor/calibration.hpp"
#include "rumor/model.hpp"
#include "rumor/rng.hpp"

using namespace rumor;

namespace {

// Reference chain at (p_ii=2%, p_ip=1%, p_usg=0), evaluated independently
// with scipy; frozen here.
constexpr double kChainA = 30.961364;
constexpr double kChainEps = 0.98058826;
constexpr double kChainC = 3.0822542;
constexpr double kChainT50 = 54.85980;

CurveCoefficients chain_coeffs() {
  return predict_curve({0.02, 0.01, 0.0}, reference_usg_polynomials()).coeffs;
}

}  // namespace

TEST_CASE("coefficient chain reproduces the worked values (fraction laws)") {
  const GrowthPrediction p = predict_curve({0.02, 0.01, 0.0}, reference_usg_polynomials());
  CHECK(p.coeffs.a == doctest::Approx(kChainA).epsilon(1e-5));
  CHECK(p.coeffs.epsilon == doctest::Approx(kChainEps).epsilon(1e-6));
  CHECK(p.coeffs.c == doctest::Approx(kChainC).epsilon(1e-5));
  CHECK(time_to_fraction(0.5, p.coeffs) == doctest::Approx(kChainT50).epsilon(1e-5));
  CHECK(p.invisible_population == doctest::Approx((1 - kChainEps) / (2 * kChainEps)).epsilon(1e-5));
  CHECK(p.warnings.empty());
}

TEST_CASE("percent-convention law rows give the same chain within the bands") {
  const LawCoefficients pct = reference_law_rows()[0].laws;
  REQUIRE(pct.units == ProbabilityUnits::kPercent);
  const GrowthPrediction p = predict_with_laws({0.02, 0.01, 0.0}, pct);
  // Independently computed: a=30.991566, eps=0.98164505, t50=55.15699.
  CHECK(p.coeffs.a == doctest::Approx(30.991566).epsilon(1e-5));
  CHECK(p.coeffs.epsilon == doctest::Approx(0.98164505).epsilon(1e-6));
  CHECK(p.coeffs.c == doctest::Approx(3.2033154).epsilon(1e-5));
  CHECK(time_to_fraction(0.5, p.coeffs) == doctest::Approx(55.15699).epsilon(1e-5));
}

TEST_CASE("initial condition holds to 1e-12 across p_ii") {
  for (int k = 1; k <= 10; ++k) {
    const double p_ii = k / 100.0;
    const GrowthPrediction p = predict_curve({p_ii, 0.01, 0.0}, reference_usg_polynomials());
    CHECK(std::abs(eval_curve(p.coeffs, 0.0) - p_ii) < 1e-12);
  }
}

TEST_CASE("initial-condition pin holds across the (p_ii, epsilon) plane") {
  for (double p_ii : {0.01, 0.05, 0.2, 0.35, 0.5}) {
    for (double eps : {0.01, 0.3, 0.7, 0.9, 0.999}) {
      for (double a : {5.0, 31.0, 80.0}) {
        const CurveCoefficients k = curve_from_initial(a, eps, p_ii);
        CHECK(std::abs(eval_curve(k, 0.0) - p_ii) < 1e-12);
      }
    }
  }
}

TEST_CASE("eval_curve is monotone and saturates at exactly 1") {
  const CurveCoefficients k = chain_coeffs();
  double prev = eval_curve(k, 0.0);
  for (double t = 1.0; t <= 200.0; t += 1.0) {
    const double f = eval_curve(k, t);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK(eval_curve(k, 1e7) == 1.0);
}

TEST_CASE("small-epsilon limit matches the exponential form") {
  const double a = 20.0, p_ii = 0.05, eps = 1e-9;
  const CurveCoefficients k = curve_from_initial(a, eps, p_ii);
  for (double t : {0.0, 5.0, 20.0, 60.0}) {
    const double exponential = 1.0 - std::exp(-(t - k.b) / a) / k.c;
    CHECK(eval_curve(k, t) == doctest::Approx(exponential).epsilon(1e-6));
  }
}

TEST_CASE("near-logistic epsilon matches the logistic form within 1e-4") {
  const double a = 31.0, p_ii = 0.02, eps = 1.0 - 1e-8;
  const CurveCoefficients k = curve_from_initial(a, eps, p_ii);
  const double ratio = (1.0 - p_ii) / p_ii;
  for (double t : {0.0, 10.0, 30.0, 55.0, 80.0}) {
    const double logistic = 1.0 / (1.0 + ratio * std::exp(-2.0 * t / a));
    CHECK(eval_curve(k, t) == doctest::Approx(logistic).epsilon(1e-4));
  }
}

TEST_CASE("logistic-limit branch evaluates and inverts") {
  CurveCoefficients k;
  k.a = 31.0;
  k.epsilon = 1.0;
  k.c = 1.0;  // unused on the logistic path
  k.initial_fraction = 0.02;
  const double ratio = 0.98 / 0.02;
  CHECK(eval_curve(k, 10.0) ==
        doctest::Approx(1.0 / (1.0 + ratio * std::exp(-20.0 / 31.0))).epsilon(1e-12));
  const double t = time_to_fraction(0.5, k);
  CHECK(eval_curve(k, t) == doctest::Approx(0.5).epsilon(1e-12));

  CurveCoefficients bad = k;
  bad.initial_fraction.reset();
  CHECK_THROWS_AS(eval_curve(bad, 1.0), std::invalid_argument);
}

TEST_CASE("c_from_initial worked value and limits") {
  CHECK(c_from_initial(30.96, 0.0, 0.98059, 0.02) == doctest::Approx(3.082).epsilon(1e-3));
  CHECK(c_from_initial(10.0, 0.0, 1e-12, 0.3) == doctest::Approx(1.0 / 0.7).epsilon(1e-9));
  // Round trip by construction.
  const CurveCoefficients k = curve_from_initial(30.96, 0.98059, 0.02);
  CHECK(std::abs(eval_curve(k, 0.0) - 0.02) < 1e-12);
  CHECK_THROWS_AS(c_from_initial(30.0, 0.0, 1.0, 0.02), std::invalid_argument);
  CHECK_THROWS_AS(c_from_initial(30.0, 0.0, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(c_from_initial(-1.0, 0.0, 0.5, 0.02), std::invalid_argument);
}

TEST_CASE("epsilon law: worked value, monotonicity, limits, clamping") {
  LawCoefficients laws{-2.2, 7.319, 2.405, 0.9375, 0.3541, ProbabilityUnits::kFraction};
  CHECK(epsilon_law(30.96, 0.02, laws) == doctest::Approx(0.9806).epsilon(2e-4));
  CHECK(epsilon_law(31.0, 1e-12, laws) == doctest::Approx(1.0).epsilon(1e-9));

  double prev = 1.0;
  for (double p_ii : {0.01, 0.03, 0.06, 0.10}) {
    const double eps = epsilon_law(31.0, p_ii, laws);
    CHECK(eps < prev);
    prev = eps;
  }

  std::vector<std::string> warnings;
  laws.aa = -400.0;  // push the raw value negative
  const double clamped = epsilon_law(5.0, 0.1, laws, &warnings);
  CHECK(clamped > 0.0);
  CHECK(!warnings.empty());
}

TEST_CASE("inverse characteristic-time law in both conventions") {
  const LawCoefficients frac{-2.2, 7.319, 2.405, 0.9375, 0.3541, ProbabilityUnits::kFraction};
  const double inv_a = inv_a_law(0.01, 0.02, frac);
  CHECK(1.0 / inv_a == doctest::Approx(30.961364).epsilon(1e-6));

  const LawCoefficients pct{-0.0208, 7.32, 0.03204, 0.9381, 0.00354,
                            ProbabilityUnits::kPercent};
  const double inv_a_pct = inv_a_law(1.0, 2.0, pct);
  CHECK(1.0 / inv_a_pct == doctest::Approx(30.99).epsilon(1e-3));
  CHECK(inv_a == doctest::Approx(inv_a_pct).epsilon(0.005));  // conventions agree within 0.5%

  std::vector<std::string> warnings;
  CHECK(inv_a_law(0.0, 0.02, frac, &warnings) == 0.0);
  CHECK(!warnings.empty());
  CHECK_THROWS_AS(inv_a_law(-0.01, 0.02, frac), std::invalid_argument);
}

TEST_CASE("percent->fraction conversion is an exact reparametrization") {
  for (const auto& row : reference_law_rows()) {
    const LawCoefficients pct = row.laws;
    const LawCoefficients frac = pct.as_fraction();
    for (double p_ip : {0.01, 0.05, 0.10}) {
      for (double p_ii : {0.01, 0.05, 0.10}) {
        const double via_pct = inv_a_law(100.0 * p_ip, 100.0 * p_ii, pct);
        const double via_frac = inv_a_law(p_ip, p_ii, frac);
        CHECK(via_frac == doctest::Approx(via_pct).epsilon(1e-12));
      }
    }
    const LawCoefficients back = frac.as_percent();
    CHECK(back.aa == doctest::Approx(pct.aa).epsilon(1e-12));
    CHECK(back.cc == doctest::Approx(pct.cc).epsilon(1e-12));
  }
}

TEST_CASE("law-table rows vs USG polynomials agree within 1% on a") {
  for (const auto& row : reference_law_rows()) {
    const LawCoefficients from_table = row.laws.as_fraction();
    const LawCoefficients from_poly = law_coeffs_at_usg(row.p_usg, reference_usg_polynomials());
    for (double p_ip : {0.01, 0.02, 0.05, 0.10}) {
      for (double p_ii : {0.01, 0.05, 0.10}) {
        const double a_table = 1.0 / inv_a_law(p_ip, p_ii, from_table);
        const double a_poly = 1.0 / inv_a_law(p_ip, p_ii, from_poly);
        CHECK(a_poly == doctest::Approx(a_table).epsilon(0.01));
      }
    }
  }
}

TEST_CASE("USG polynomial evaluation matches the law table rows") {
  const UsgPolynomials& poly = reference_usg_polynomials();
  const LawCoefficients at0 = law_coeffs_at_usg(0.0, poly);
  CHECK(at0.aa == doctest::Approx(-2.2));
  CHECK(at0.bb == doctest::Approx(7.319));
  CHECK(at0.cc == doctest::Approx(2.405));
  CHECK(at0.ee == doctest::Approx(0.9375));
  CHECK(at0.gg == doctest::Approx(0.3541));

  CHECK(law_coeffs_at_usg(0.03, poly).bb == doctest::Approx(7.69).epsilon(0.002));
  CHECK(law_coeffs_at_usg(0.10, poly).gg == doctest::Approx(0.54).epsilon(0.01));

  std::vector<std::string> warnings;
  law_coeffs_at_usg(0.2, poly, &warnings);
  CHECK(!warnings.empty());
}

TEST_CASE("predict_curve trends: faster spreading with larger USG") {
  const UsgPolynomials& poly = reference_usg_polynomials();
  double prev_a = 1e30;
  double prev_t50 = 1e30;
  for (double p_usg : {0.0, 0.03, 0.05, 0.07, 0.10}) {
    const GrowthPrediction p = predict_curve({0.02, 0.01, p_usg}, poly);
    CHECK(p.coeffs.a < prev_a);
    const double t50 = time_to_fraction(0.5, p.coeffs);
    CHECK(t50 < prev_t50);
    prev_a = p.coeffs.a;
    prev_t50 = t50;
  }
}

TEST_CASE("vanishing seed: epsilon -> 1 and invisible population -> 0") {
  const GrowthPrediction p = predict_curve({1e-9, 0.01, 0.0}, reference_usg_polynomials());
  CHECK(p.coeffs.epsilon >= 1.0 - 1e-6);
  CHECK(p.invisible_population < 1e-6);
}

TEST_CASE("growth rate: saturation, logistic special case, ODE identity") {
  CHECK(growth_rate(1.0, 31.0, 0.9) == 0.0);
  CHECK(growth_rate(0.3, 10.0, 1.0) == doctest::Approx((2.0 / 10.0) * 0.3 * 0.7));

  // Central-difference derivative of the curve equals the mass-action form.
  Rng rng(20240811);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 10.0 + 50.0 * rng.uniform01();
    const double eps = 0.05 + 0.94 * rng.uniform01();
    const double p_ii = 0.005 + 0.195 * rng.uniform01();
    const CurveCoefficients k = curve_from_initial(a, eps, p_ii);
    double sup = 0.0;
    const double h = 1e-4;
    for (double t = 0.0; t <= 100.0; t += 0.25) {
      const double derivative = (eval_curve(k, t + h) - eval_curve(k, t - h)) / (2.0 * h);
      sup = std::max(sup, std::abs(derivative - growth_rate(eval_curve(k, t), a, eps)));
    }
    CHECK(sup < 1e-6);
  }
}

TEST_CASE("time_to_fraction round trip and edge cases") {
  const CurveCoefficients k = chain_coeffs();
  for (int i = 1; i <= 9; ++i) {
    const double x = i / 10.0;
    CHECK(std::abs(eval_curve(k, time_to_fraction(x, k)) - x) < 1e-9);
  }
  CHECK(time_to_fraction(eval_curve(k, 0.0), k) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(time_to_fraction(0.001, k), std::invalid_argument);
  CHECK_THROWS_AS(time_to_fraction(1.0, k), std::invalid_argument);
}

TEST_CASE("time to fraction shrinks as the target shrinks") {
  const CurveCoefficients k = chain_coeffs();
  double prev = 1e30;
  for (double x : {0.9, 0.7, 0.5, 0.3, 0.1}) {
    const double t = time_to_fraction(x, k);
    CHECK(t < prev);
    prev = t;
  }
}
