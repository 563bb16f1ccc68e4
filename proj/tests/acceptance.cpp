#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rumor/calibration.hpp"
#include "rumor/fit.hpp"
#include "rumor/model.hpp"
#include "rumor/netgen.hpp"
#include "rumor/rng.hpp"
#include "rumor/spread.hpp"
#include "rumor/survey.hpp"

using namespace rumor;

namespace {

// Collects checks for one acceptance criterion and prints a single
// pass/fail line when reported.
class Criterion {
 public:
  Criterion(int number, std::string name)
      : number_(number), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok_ = false;
      details_.push_back(what);
    }
  }

  bool report() const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::printf("[%s] criterion %2d: %s (%.2f s)\n", ok_ ? "PASS" : "FAIL", number_,
                name_.c_str(), seconds);
    for (const auto& detail : details_) std::printf("        %s\n", detail.c_str());
    std::fflush(stdout);
    return ok_;
  }

  std::string details() const {
    std::ostringstream out;
    for (const auto& d : details_) out << d << "; ";
    return out.str();
  }

 private:
  int number_;
  std::string name_;
  bool ok_ = true;
  std::vector<std::string> details_;
  std::chrono::steady_clock::time_point start_;
};

std::string describe(const std::string& what, double got, double bound) {
  std::ostringstream out;
  out << what << ": got " << got << ", bound " << bound;
  return out.str();
}

BurnSeries synthesize(const CurveCoefficients& k, int horizon) {
  BurnSeries series;
  series.f.resize(horizon + 1);
  for (int n = 0; n <= horizon; ++n) series.f(n) = eval_curve(k, static_cast<double>(n));
  series.normalizer = 7000;
  return series;
}

double gaussian(Rng& rng) {
  const double u1 = std::max(rng.uniform01(), 1e-12);
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

PopulationConfig desk_population() {
  PopulationConfig config;
  config.n_total = 2000;
  return config;
}

EnsembleSpec desk_ensemble(std::uint64_t master_seed) {
  EnsembleSpec spec;
  spec.n_populations = 5;
  spec.runs_per_population = 10;
  spec.iterations = 100;
  spec.master_seed = master_seed;
  return spec;
}

}  // namespace

TEST_CASE("criterion 1: cross-table consistency of the shipped calibration") {
  Criterion c(1, "cross-table consistency");
  const UsgPolynomials& poly = reference_usg_polynomials();
  for (const auto& row : reference_law_rows()) {
    const LawCoefficients table = row.laws.as_fraction();
    const LawCoefficients evaluated = law_coeffs_at_usg(row.p_usg, poly);
    const auto rel = [](double got, double want) {
      return std::abs(got - want) / std::abs(want);
    };
    c.expect(rel(evaluated.aa, table.aa) < 0.07,
             describe("aa at p_usg=" + std::to_string(row.p_usg), rel(evaluated.aa, table.aa), 0.07));
    c.expect(rel(evaluated.bb, table.bb) < 0.01,
             describe("bb at p_usg=" + std::to_string(row.p_usg), rel(evaluated.bb, table.bb), 0.01));
    c.expect(rel(evaluated.cc, table.cc) < 0.07,
             describe("cc at p_usg=" + std::to_string(row.p_usg), rel(evaluated.cc, table.cc), 0.07));
    c.expect(rel(evaluated.ee, table.ee) < 0.01,
             describe("ee at p_usg=" + std::to_string(row.p_usg), rel(evaluated.ee, table.ee), 0.01));
    c.expect(rel(evaluated.gg, table.gg) < 0.07,
             describe("gg at p_usg=" + std::to_string(row.p_usg), rel(evaluated.gg, table.gg), 0.07));
  }
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 2: initial condition and closed-form inverse") {
  Criterion c(2, "initial condition and inverse");
  for (int k = 1; k <= 10; ++k) {
    const double p_ii = k / 100.0;
    const GrowthPrediction p = predict_curve({p_ii, 0.01, 0.0}, reference_usg_polynomials());
    const double f0_error = std::abs(eval_curve(p.coeffs, 0.0) - p_ii);
    c.expect(f0_error < 1e-12, describe("F(0) error at p_ii=" + std::to_string(p_ii), f0_error, 1e-12));
    for (int i = 1; i <= 9; ++i) {
      const double x = i / 10.0;
      if (x < eval_curve(p.coeffs, 0.0)) continue;
      const double round_trip = std::abs(eval_curve(p.coeffs, time_to_fraction(x, p.coeffs)) - x);
      c.expect(round_trip < 1e-9, describe("inverse round trip at x=" + std::to_string(x), round_trip, 1e-9));
    }
  }
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 3: growth-rate identity against central differences") {
  Criterion c(3, "mass-action rate identity");
  Rng rng(424242);
  const double h = 1e-4;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 10.0 + 50.0 * rng.uniform01();
    const double eps = 0.05 + 0.94 * rng.uniform01();
    const double p_ii = 0.005 + 0.195 * rng.uniform01();
    const CurveCoefficients k = curve_from_initial(a, eps, p_ii);
    double sup = 0.0;
    for (double t = 0.0; t <= 100.0; t += 0.2) {
      const double derivative = (eval_curve(k, t + h) - eval_curve(k, t - h)) / (2.0 * h);
      sup = std::max(sup, std::abs(derivative - growth_rate(eval_curve(k, t), a, eps)));
    }
    c.expect(sup < 1e-6, describe("sup error, trial " + std::to_string(trial), sup, 1e-6));
  }
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 4: desk-scale ensemble follows the growth law") {
  Criterion c(4, "desk-scale curve law");
  const EnsembleResult ensemble =
      run_ensemble(desk_population(), desk_ensemble(20240401), {0.02, 0.02, 0.0});
  const auto fit = fit_curve(ensemble.mean, ensemble.mean.f(0));
  c.expect(fit.r_squared >= 0.98, describe("fit r^2", fit.r_squared, 0.98));
  c.expect(ensemble.mean.f(100) > 0.95, describe("f(100)", ensemble.mean.f(100), 0.95));
  bool monotone = true;
  for (int n = 1; n <= 100; ++n)
    if (ensemble.mean.f(n) < ensemble.mean.f(n - 1)) monotone = false;
  c.expect(monotone, "averaged series must be monotone");
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 5: larger USG reaches half the population sooner") {
  Criterion c(5, "USG acceleration ordering");
  const std::vector<double> usg_levels{0.0, 0.05, 0.10};
  int ordered = 0;
  for (int e = 0; e < 20; ++e) {
    std::vector<int> fp;
    for (double p_usg : usg_levels) {
      const EnsembleResult ensemble = run_ensemble(
          desk_population(), desk_ensemble(derive_stream(555000, 91, e)), {0.02, 0.01, p_usg});
      const auto passage = first_passage(ensemble.mean, 0.5);
      fp.push_back(passage ? *passage : 1000);
    }
    if (fp[0] > fp[1] && fp[1] > fp[2]) ++ordered;
  }
  c.expect(ordered >= 19, describe("ordered ensembles out of 20", ordered, 19));
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 6: four early observations forecast the curve") {
  Criterion c(6, "four-point forecasting");
  const GrowthPrediction truth = predict_curve({0.02, 0.01, 0.0}, reference_usg_polynomials());
  const double t50_truth = time_to_fraction(0.5, truth.coeffs);
  const std::vector<double> ts{5.0, 13.0, 21.0, 29.0};

  std::vector<TimedObservation> exact;
  for (double t : ts) exact.push_back({t, eval_curve(truth.coeffs, t)});
  const auto noiseless = fit_four_points(exact, 0.02);
  const double a_err = std::abs(noiseless.coefficients.a - truth.coeffs.a) / truth.coeffs.a;
  const double eps_err =
      std::abs(noiseless.coefficients.epsilon - truth.coeffs.epsilon) / truth.coeffs.epsilon;
  c.expect(a_err < 0.01, describe("noiseless a error", a_err, 0.01));
  c.expect(eps_err < 0.01, describe("noiseless epsilon error", eps_err, 0.01));

  Rng rng(20240606);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TimedObservation> noisy;
    for (double t : ts)
      noisy.push_back({t, eval_curve(truth.coeffs, t) * (1.0 + 0.01 * gaussian(rng))});
    const auto fit = fit_four_points(noisy, 0.02);
    const double t50 = time_to_fraction(0.5, fit.coefficients);
    if (std::abs(t50 - t50_truth) / t50_truth <= 0.10) ++within;
  }
  c.expect(within >= 90, describe("noisy forecasts within 10%", within, 90));
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 7: inference round trip over the parameter grid") {
  Criterion c(7, "inference round trip");
  const UsgPolynomials& poly = reference_usg_polynomials();
  for (double p_ii : {0.02, 0.05, 0.08}) {
    for (double p_ip : {0.02, 0.05, 0.08}) {
      for (double p_usg : {0.02, 0.05, 0.08}) {
        const GrowthPrediction truth = predict_curve({p_ii, p_ip, p_usg}, poly);
        const BurnSeries series = synthesize(truth.coeffs, 100);
        const InferredNetwork inferred = infer_network_params(series, p_ii, poly);
        std::ostringstream at;
        at << "(" << p_ii << "," << p_ip << "," << p_usg << ")";
        c.expect(std::abs(inferred.p_usg - p_usg) <= 0.01,
                 describe("p_usg error at " + at.str(), std::abs(inferred.p_usg - p_usg), 0.01));
        c.expect(std::abs(inferred.p_ip - p_ip) / p_ip <= 0.10,
                 describe("p_ip relative error at " + at.str(),
                          std::abs(inferred.p_ip - p_ip) / p_ip, 0.10));
      }
    }
  }
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 8: generated group sizes follow the size law") {
  Criterion c(8, "group-size distribution fidelity");
  PopulationConfig config;
  config.n_total = 30000;
  config.groups_per_capita = 5.0;  // enough memberships for >= 1e4 groups
  config.rng_seed = 777001;
  const Network net = build_network(config);
  c.expect(net.groups.size() >= 10000,
           describe("generated groups", static_cast<double>(net.groups.size()), 10000));

  const ValidationReport report = validate_network(net, config.distributions);
  c.expect(report.max_cdf_deviation.has_value(), "CDF deviation missing");
  if (report.max_cdf_deviation)
    c.expect(*report.max_cdf_deviation < 0.02,
             describe("sup CDF deviation", *report.max_cdf_deviation, 0.02));

  std::vector<int> sizes;
  for (const auto& group : net.groups) sizes.push_back(static_cast<int>(group.size()));
  const auto fit = fit_group_size_cdf(sizes);
  const double lambda_err = std::abs(fit.coefficients.lambda - 0.1113) / 0.1113;
  c.expect(lambda_err < 0.05, describe("lambda relative error", lambda_err, 0.05));
  c.expect(fit.r_squared >= 0.99, describe("refit r^2", fit.r_squared, 0.99));
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 9: degenerate propagation oracles") {
  Criterion c(9, "degenerate oracles");
  PopulationConfig config;
  config.n_total = 50;
  config.penetration = 1.0;
  config.groups_per_capita = 1.0;
  config.rng_seed = 50205;
  config.distributions.mu = 3.0;
  config.distributions.sigma = 2.0;
  config.distributions.max_p2p = 8;
  config.distributions.max_group_size = 6;
  const Network net = build_network(config);

  const std::vector<int> seed{net.connected[4], net.connected[27]};

  // Channel-hop BFS oracle.
  std::set<int> reached(seed.begin(), seed.end());
  std::vector<double> layer_fractions{static_cast<double>(reached.size()) / 50.0};
  for (int n = 0; n < 12; ++n) {
    std::set<int> next = reached;
    for (int s : reached) {
      for (int dst : net.p2p_out[s]) next.insert(dst);
      for (const auto& group : net.groups)
        if (std::count(group.begin(), group.end(), s))
          next.insert(group.begin(), group.end());
    }
    reached = std::move(next);
    layer_fractions.push_back(static_cast<double>(reached.size()) / 50.0);
  }

  const BurnSeries certain = run(net, {0.0, 1.0, 0.0}, seed, {}, 11, 12);
  for (int n = 0; n <= 12; ++n)
    c.expect(certain.f(n) == layer_fractions[n],
             describe("BFS mismatch at n=" + std::to_string(n), certain.f(n), layer_fractions[n]));

  const BurnSeries silent = run(net, {0.0, 0.0, 0.0}, seed, {}, 12, 12);
  for (int n = 0; n <= 12; ++n)
    c.expect(silent.f(n) == 2.0 / 50.0,
             describe("flat series violated at n=" + std::to_string(n), silent.f(n), 0.04));
  CHECK_MESSAGE(c.report(), c.details());
}

TEST_CASE("criterion 10: worked chain values in both unit conventions") {
  Criterion c(10, "worked-chain values");
  const GrowthPrediction frac = predict_curve({0.02, 0.01, 0.0}, reference_usg_polynomials());
  const GrowthPrediction pct = predict_with_laws({0.02, 0.01, 0.0}, reference_law_rows()[0].laws);
  for (const auto* p : {&frac, &pct}) {
    const char* tag = (p == &frac) ? "fraction" : "percent";
    c.expect(std::abs(p->coeffs.a - 31.0) <= 0.5,
             describe(std::string("a, ") + tag, p->coeffs.a, 31.0));
    c.expect(std::abs(p->coeffs.epsilon - 0.981) <= 0.002,
             describe(std::string("epsilon, ") + tag, p->coeffs.epsilon, 0.981));
    const double t50 = time_to_fraction(0.5, p->coeffs);
    c.expect(std::abs(t50 - 54.9) <= 1.0, describe(std::string("t50, ") + tag, t50, 54.9));
  }
  CHECK_MESSAGE(c.report(), c.details());
}
