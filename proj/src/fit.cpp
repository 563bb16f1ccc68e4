#include "rumor/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>

#include "rumor/levmar.hpp"
#include "rumor/survey.hpp"

namespace rumor {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

double r_squared_of(const Eigen::VectorXd& observed, const Eigen::VectorXd& predicted) {
  const double mean = observed.mean();
  const double ss_tot = (observed.array() - mean).matrix().squaredNorm();
  const double ss_res = (observed - predicted).squaredNorm();
  if (ss_tot <= 0.0) return ss_res <= 1e-30 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

// Shared objective of fit_curve and fit_four_points: unknowns are
// theta = (ln a, logit eps); the amplitude is bound to F(0) = p_ii.
struct ConstrainedCurve {
  static CurveCoefficients decode(const Eigen::VectorXd& theta, double p_ii) {
    const double a = std::exp(theta(0));
    const double eps = std::clamp(sigmoid(theta(1)), 1e-12, 1.0 - 1e-12);
    return curve_from_initial(a, eps, p_ii);
  }

  static ResidualFn residuals(std::vector<double> ts, std::vector<double> fs, double p_ii) {
    return [ts = std::move(ts), fs = std::move(fs), p_ii](const Eigen::VectorXd& theta) {
      const CurveCoefficients k = decode(theta, p_ii);
      Eigen::VectorXd r(static_cast<Eigen::Index>(ts.size()));
      for (std::size_t i = 0; i < ts.size(); ++i)
        r(static_cast<Eigen::Index>(i)) = eval_curve(k, ts[i]) - fs[i];
      return r;
    };
  }
};

FitResult<CurveCoefficients> solve_constrained_curve(const std::vector<double>& ts,
                                                     const std::vector<double>& fs,
                                                     double p_ii, double a0) {
  Eigen::VectorXd theta(2);
  theta << std::log(a0), logit(0.9);
  const auto outcome =
      minimize_least_squares(ConstrainedCurve::residuals(ts, fs, p_ii), theta);

  FitResult<CurveCoefficients> result;
  result.coefficients = ConstrainedCurve::decode(outcome.params, p_ii);
  result.residual_norm = outcome.residual_norm2;
  result.iterations_used = outcome.iterations;
  result.converged = outcome.converged;

  Eigen::VectorXd observed(static_cast<Eigen::Index>(fs.size()));
  Eigen::VectorXd predicted(static_cast<Eigen::Index>(fs.size()));
  for (std::size_t i = 0; i < fs.size(); ++i) {
    observed(static_cast<Eigen::Index>(i)) = fs[i];
    predicted(static_cast<Eigen::Index>(i)) = eval_curve(result.coefficients, ts[i]);
  }
  result.r_squared = r_squared_of(observed, predicted);
  if (result.coefficients.epsilon >= 1.0 - 1e-6)
    result.warnings.push_back("epsilon at logistic boundary");
  return result;
}

double slope_intercept_regression(const std::vector<double>& xs, const std::vector<double>& ys,
                                  double& intercept) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw std::invalid_argument("regression: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / denom;
  intercept = (sy - slope * sx) / n;
  return slope;
}

}  // namespace

FitResult<CurveCoefficients> fit_curve(const BurnSeries& series, double p_ii) {
  const auto& f = series.f;
  if (f.size() < 4) throw std::invalid_argument("fit_curve: need at least 4 points");
  if (!(p_ii > 0.0) || p_ii >= 1.0)
    throw std::invalid_argument("fit_curve: p_ii must be in (0,1)");
  if (std::abs(f(0) - p_ii) > 1e-3)
    throw std::invalid_argument("fit_curve: f(0) disagrees with p_ii");
  if (f.maxCoeff() - f(0) <= 1e-12) throw std::invalid_argument("fit_curve: no growth");

  // Initial a: the iteration at which f first crosses midway to saturation.
  double a0 = static_cast<double>(f.size() - 1);
  const double midway = 0.5 * (1.0 + p_ii);
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    if (f(n) >= midway) {
      a0 = std::max<double>(1.0, static_cast<double>(n));
      break;
    }
  }

  std::vector<double> ts(f.size()), fs(f.size());
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    ts[n] = static_cast<double>(n);
    fs[n] = f(n);
  }
  return solve_constrained_curve(ts, fs, p_ii, a0);
}

FitResult<CurveCoefficients> fit_four_points(const std::vector<TimedObservation>& points,
                                             double p_ii) {
  if (points.size() < 4) throw std::invalid_argument("fit_four_points: need at least 4 points");
  if (!(p_ii > 0.0) || p_ii >= 1.0)
    throw std::invalid_argument("fit_four_points: p_ii must be in (0,1)");

  std::vector<TimedObservation> sorted = points;
  std::sort(sorted.begin(), sorted.end(),
            [](const TimedObservation& a, const TimedObservation& b) { return a.t < b.t; });
  double f_min = sorted.front().f, f_max = sorted.front().f;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!(sorted[i].f > 0.0) || sorted[i].f >= 0.2)
      throw std::invalid_argument("fit_four_points: fractions must be in (0, 0.2)");
    if (i > 0 && sorted[i].t == sorted[i - 1].t)
      throw std::invalid_argument("fit_four_points: duplicate observation times");
    f_min = std::min(f_min, sorted[i].f);
    f_max = std::max(f_max, sorted[i].f);
  }
  if (f_max - f_min <= 1e-12) throw std::invalid_argument("fit_four_points: no growth");

  // Early growth is near-exponential with rate ~2/a.
  double a0 = 30.0;
  const double ratio = sorted.back().f / sorted.front().f;
  if (ratio > 1.0)
    a0 = std::clamp(2.0 * (sorted.back().t - sorted.front().t) / std::log(ratio), 1e-3, 1e6);

  std::vector<double> ts, fs;
  for (const auto& p : sorted) {
    ts.push_back(p.t);
    fs.push_back(p.f);
  }
  return solve_constrained_curve(ts, fs, p_ii, a0);
}

FitResult<EpsilonLawCoefficients> fit_epsilon_law(const std::vector<EpsilonLawSample>& samples) {
  if (samples.size() < 4) throw std::invalid_argument("fit_epsilon_law: need at least 4 samples");
  std::set<double> inv_as, p_iis;
  for (const auto& s : samples) {
    if (!(s.p_ii > 0.0)) throw std::invalid_argument("fit_epsilon_law: p_ii must be positive");
    inv_as.insert(s.inv_a);
    p_iis.insert(s.p_ii);
  }
  if (inv_as.size() < 2)
    throw std::invalid_argument("fit_epsilon_law: samples must span distinct inv_a");

  FitResult<EpsilonLawCoefficients> result;
  if (p_iis.size() < 2) result.warnings.push_back("underdetermined: single p_ii value");

  std::vector<double> sorted_inv(inv_as.begin(), inv_as.end());
  const double median_inv = sorted_inv[sorted_inv.size() / 2];
  const double bb0 = median_inv > 0.0 ? 1.0 / median_inv : 7.0;
  double aa0 = 0.0;
  for (const auto& s : samples)
    aa0 += (s.epsilon - 1.0) * (1.0 + std::exp(bb0 * s.inv_a)) / s.p_ii;
  aa0 /= static_cast<double>(samples.size());
  if (aa0 >= -1e-12) aa0 = -1e-3;

  const auto residuals = [&samples](const Eigen::VectorXd& theta) {
    const double aa = -std::exp(theta(0));
    const double bb = theta(1);
    Eigen::VectorXd r(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      r(static_cast<Eigen::Index>(i)) =
          1.0 + aa * s.p_ii / (1.0 + std::exp(bb * s.inv_a)) - s.epsilon;
    }
    return r;
  };
  Eigen::VectorXd theta(2);
  theta << std::log(-aa0), bb0;
  const auto outcome = minimize_least_squares(residuals, theta);

  result.coefficients.aa = -std::exp(outcome.params(0));
  result.coefficients.bb = outcome.params(1);
  result.residual_norm = outcome.residual_norm2;
  result.iterations_used = outcome.iterations;
  result.converged = outcome.converged;
  if (result.coefficients.aa > -1e-10)
    result.warnings.push_back("aa pinned at the sign boundary");

  Eigen::VectorXd observed(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    observed(static_cast<Eigen::Index>(i)) = samples[i].epsilon;
  result.r_squared = r_squared_of(observed, observed - residuals(outcome.params));
  return result;
}

double power_law_collapse_r2(const std::vector<PowerLawSample>& samples, double cc,
                             double ee, double gg) {
  Eigen::VectorXd h(static_cast<Eigen::Index>(samples.size()));
  Eigen::VectorXd pred(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    h(static_cast<Eigen::Index>(i)) = samples[i].inv_a / (1.0 + gg * samples[i].p_ii);
    pred(static_cast<Eigen::Index>(i)) = cc * std::pow(samples[i].p_ip, ee);
  }
  return r_squared_of(h, pred);
}

FitResult<PowerLawCoefficients> fit_power_law(const std::vector<PowerLawSample>& samples) {
  if (samples.size() < 6) throw std::invalid_argument("fit_power_law: need at least 6 samples");
  std::set<double> p_ips, p_iis;
  for (const auto& s : samples) {
    if (!(s.p_ip > 0.0) || !(s.inv_a > 0.0))
      throw std::invalid_argument("fit_power_law: p_ip and inv_a must be positive");
    p_ips.insert(s.p_ip);
    p_iis.insert(s.p_ii);
  }
  if (p_ips.size() < 2)
    throw std::invalid_argument("fit_power_law: samples must span distinct p_ip");

  FitResult<PowerLawCoefficients> result;
  if (p_iis.size() < 2)
    result.warnings.push_back("underdetermined gg: samples share a single p_ii");

  double cc = 0.0, ee = 0.0, gg = 0.0;
  std::vector<double> xs(samples.size()), ys(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) xs[i] = std::log(samples[i].p_ip);

  int iter = 0;
  for (; iter < 100; ++iter) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double factor = 1.0 + gg * samples[i].p_ii;
      if (factor <= 1e-9) {
        result.warnings.push_back("gg correction drove a sample factor nonpositive");
        result.coefficients = {cc, ee, gg};
        return result;
      }
      ys[i] = std::log(samples[i].inv_a / factor);
    }
    double intercept = 0.0;
    const double ee_new = slope_intercept_regression(xs, ys, intercept);
    const double cc_new = std::exp(intercept);

    double num = 0.0, den = 0.0;
    for (const auto& s : samples) {
      const double residual_factor = s.inv_a / (cc_new * std::pow(s.p_ip, ee_new)) - 1.0;
      num += s.p_ii * residual_factor;
      den += s.p_ii * s.p_ii;
    }
    const double gg_new = den > 0.0 ? num / den : 0.0;

    const double change = std::abs(cc_new - cc) / std::max(1e-12, std::abs(cc_new)) +
                          std::abs(ee_new - ee) / std::max(1e-12, std::abs(ee_new)) +
                          std::abs(gg_new - gg);
    cc = cc_new;
    ee = ee_new;
    gg = gg_new;
    if (change < 1e-12) {
      result.converged = true;
      break;
    }
  }

  result.coefficients = {cc, ee, gg};
  result.iterations_used = std::min(iter + 1, 100);
  result.r_squared = power_law_collapse_r2(samples, cc, ee, gg);
  double sse = 0.0;
  for (const auto& s : samples) {
    const double diff = s.inv_a / (1.0 + gg * s.p_ii) - cc * std::pow(s.p_ip, ee);
    sse += diff * diff;
  }
  result.residual_norm = sse;
  return result;
}

namespace {

struct RationalFit {
  double y1 = 0, y2 = 0, y3 = 0;
  double sse = 0;
  int iterations = 0;
  bool converged = false;
};

// y(p) = y1 + y2 p^4 / (1 + y3 p^3), least squares over (ps, ys).
RationalFit fit_rational_quartic(const std::vector<double>& ps, const std::vector<double>& ys) {
  const auto n = static_cast<Eigen::Index>(ps.size());
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) target(i) = ys[i];

  double best_sse = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best(3);
  for (double y3 : {0.0, 10.0, 100.0, 1e3, 1e4, 5e4, 1e5, 1e6}) {
    Eigen::MatrixXd design(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = ps[i];
      design(i, 0) = 1.0;
      design(i, 1) = p * p * p * p / (1.0 + y3 * p * p * p);
    }
    const Eigen::VectorXd linear = design.colPivHouseholderQr().solve(target);
    const double sse = (design * linear - target).squaredNorm();
    if (sse < best_sse) {
      best_sse = sse;
      best << linear(0), linear(1), y3;
    }
  }

  const auto residuals = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = ps[i];
      const double denom = 1.0 + y(2) * p * p * p;
      if (denom <= 1e-12) {
        r.setConstant(1e6);
        return r;
      }
      r(i) = y(0) + y(1) * p * p * p * p / denom - ys[i];
    }
    return r;
  };
  const auto outcome = minimize_least_squares(residuals, best);

  RationalFit fit;
  fit.y1 = outcome.params(0);
  fit.y2 = outcome.params(1);
  fit.y3 = outcome.params(2);
  fit.sse = outcome.residual_norm2;
  fit.iterations = outcome.iterations;
  fit.converged = outcome.converged;
  return fit;
}

struct QuadraticFit {
  double y1 = 0, y2 = 0, y3 = 0;
  double sse = 0;
};

QuadraticFit fit_quadratic(const std::vector<double>& ps, const std::vector<double>& ys) {
  const auto n = static_cast<Eigen::Index>(ps.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = ps[i];
    design(i, 2) = ps[i] * ps[i];
    target(i) = ys[i];
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  return {coef(0), coef(1), coef(2), (design * coef - target).squaredNorm()};
}

double centered_sst(const std::vector<double>& ys) {
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(ys.size());
  double sst = 0.0;
  for (double y : ys) sst += (y - mean) * (y - mean);
  return sst;
}

}  // namespace

FitResult<UsgPolynomials> fit_usg_polynomials(const std::vector<UsgLawRow>& rows) {
  if (rows.size() < 4)
    throw std::invalid_argument("fit_usg_polynomials: need at least 4 rows");

  std::vector<double> ps, aa, bb, cc, ee, gg;
  for (const auto& row : rows) {
    const LawCoefficients frac = row.laws.as_fraction();
    ps.push_back(row.p_usg);
    aa.push_back(frac.aa);
    bb.push_back(frac.bb);
    cc.push_back(frac.cc);
    ee.push_back(frac.ee);
    gg.push_back(frac.gg);
  }

  FitResult<UsgPolynomials> result;
  const QuadraticFit qa = fit_quadratic(ps, aa);
  const QuadraticFit qc = fit_quadratic(ps, cc);
  const QuadraticFit qe = fit_quadratic(ps, ee);
  const RationalFit rb = fit_rational_quartic(ps, bb);
  const RationalFit rg = fit_rational_quartic(ps, gg);

  result.coefficients = {qa.y1, qa.y2, qa.y3, rb.y1, rb.y2, rb.y3,
                         qc.y1, qc.y2, qc.y3, qe.y1, qe.y2, qe.y3,
                         rg.y1, rg.y2, rg.y3};
  result.residual_norm = qa.sse + qc.sse + qe.sse + rb.sse + rg.sse;
  const double sst = centered_sst(aa) + centered_sst(bb) + centered_sst(cc) +
                     centered_sst(ee) + centered_sst(gg);
  result.r_squared = sst > 0.0 ? 1.0 - result.residual_norm / sst : 1.0;
  result.iterations_used = rb.iterations + rg.iterations;
  result.converged = rb.converged && rg.converged;
  return result;
}

FitResult<GroupSizeLaw> fit_group_size_cdf(const std::vector<int>& sizes) {
  if (sizes.size() < 30)
    throw std::invalid_argument("fit_group_size_cdf: need at least 30 samples");
  const SurveyDistributions window;  // default [3, 30] size window
  const int lo = window.min_group_size;
  const int hi = window.max_group_size;
  std::vector<long long> histogram(hi - lo + 1, 0);
  std::set<int> distinct;
  for (int s : sizes) {
    if (s < lo || s > hi)
      throw std::invalid_argument("fit_group_size_cdf: size outside [3, 30]");
    histogram[s - lo] += 1;
    distinct.insert(s);
  }

  FitResult<GroupSizeLaw> result;
  if (distinct.size() < 2) {
    result.warnings.push_back("degenerate: all group sizes equal");
    return result;
  }

  const int n_points = hi - lo + 1;
  Eigen::VectorXd empirical(n_points);
  long long cum = 0;
  double mean_size = 0.0;
  for (int i = lo; i <= hi; ++i) {
    cum += histogram[i - lo];
    empirical(i - lo) = static_cast<double>(cum) / static_cast<double>(sizes.size());
    mean_size += static_cast<double>(i) * histogram[i - lo] / static_cast<double>(sizes.size());
  }

  // The window-restricted CDF depends only on the rate; the location
  // parameter cancels out of the normalization.
  const double span = static_cast<double>(hi - (lo - 1));
  const auto residuals = [&](const Eigen::VectorXd& theta) {
    const double lambda = std::exp(theta(0));
    const double norm = 1.0 - std::exp(-lambda * span);
    Eigen::VectorXd r(n_points);
    for (int i = lo; i <= hi; ++i) {
      const double model = (1.0 - std::exp(-lambda * (i - (lo - 1)))) / norm;
      r(i - lo) = model - empirical(i - lo);
    }
    return r;
  };
  Eigen::VectorXd theta(1);
  theta << std::log(1.0 / std::max(0.5, mean_size - lo));
  const auto outcome = minimize_least_squares(residuals, theta);

  result.coefficients.lambda = std::exp(outcome.params(0));
  result.residual_norm = outcome.residual_norm2;
  result.iterations_used = outcome.iterations;
  result.converged = outcome.converged;
  result.r_squared = r_squared_of(empirical, empirical - residuals(outcome.params));

  // Location: best raw-form representation at the fitted rate, conditional
  // on the observation window.
  const double lambda = result.coefficients.lambda;
  double num = 0.0, den = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double x = std::exp(-lambda * i);
    num += x * (1.0 - empirical(i - lo));
    den += x * x;
  }
  if (num > 0.0 && den > 0.0) {
    result.coefficients.a_shift = std::log(num / den) / lambda;
  } else {
    result.warnings.push_back("a_shift estimate unavailable");
  }
  result.warnings.push_back("a_shift is conditional on the [3,30] window");
  return result;
}

InferredNetwork infer_network_params(const BurnSeries& series, double p_ii,
                                     const UsgPolynomials& poly) {
  InferredNetwork out;
  out.p_ii = p_ii;
  out.curve_stage = fit_curve(series, p_ii);
  const double a = out.curve_stage.coefficients.a;
  const double eps = out.curve_stage.coefficients.epsilon;

  if (eps >= 1.0 - 1e-6) {
    out.usg_indeterminate = true;
    out.p_usg = 0.0;
    out.warnings.push_back(
        "epsilon at the logistic limit; p_usg is not identifiable (p_ii -> 0 regime)");
  } else {
    const auto eps_at = [&](double p) {
      return epsilon_law(a, p_ii, law_coeffs_at_usg(p, poly));
    };
    // eps_at is monotone decreasing in p over the fitted range.
    const double g_lo = eps_at(0.0) - eps;
    const double g_hi = eps_at(0.1) - eps;
    if (g_lo < 0.0) {
      out.p_usg = 0.0;
      out.usg_at_boundary = true;
      out.usg_residual = g_lo;
      out.warnings.push_back("epsilon above the p_usg = 0 law; returned the lower boundary");
    } else if (g_hi > 0.0) {
      out.p_usg = 0.1;
      out.usg_at_boundary = true;
      out.usg_residual = g_hi;
      out.warnings.push_back("epsilon below the p_usg = 0.1 law; returned the upper boundary");
    } else {
      double lo = 0.0, hi = 0.1;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (eps_at(mid) - eps >= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      out.p_usg = 0.5 * (lo + hi);
      out.usg_residual = eps_at(out.p_usg) - eps;
    }
  }

  const LawCoefficients laws = law_coeffs_at_usg(out.p_usg, poly);
  out.p_ip = std::pow((1.0 / a) / (laws.cc * (1.0 + laws.gg * p_ii)), 1.0 / laws.ee);
  return out;
}

}  // namespace rumor
