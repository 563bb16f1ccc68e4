#include "rumor/jobs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "rumor/calibration.hpp"
#include "rumor/fit.hpp"
#include "rumor/model.hpp"
#include "rumor/series_io.hpp"

namespace rumor {

namespace fs = std::filesystem;
using nlohmann::json;

GridSpec default_grid() {
  GridSpec grid;
  for (int k = 1; k <= 10; ++k) {
    grid.p_ii.push_back(k / 100.0);
    grid.p_ip.push_back(k / 100.0);
  }
  grid.p_usg = {0.0, 0.03, 0.05, 0.07, 0.10};
  return grid;
}

void apply_profile(JobConfig& config, const std::string& name) {
  if (name == "desk") {
    config.population.n_total = 2000;
    config.ensemble.n_populations = 5;
    config.ensemble.runs_per_population = 10;
    config.ensemble.iterations = 100;
  } else if (name == "paper") {
    config.population.n_total = 10000;
    config.ensemble.n_populations = 30;
    config.ensemble.runs_per_population = 50;
    config.ensemble.iterations = 100;
  } else {
    throw std::invalid_argument("unknown profile: " + name);
  }
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(known.begin(), known.end(),
                     [&](const char* k) { return key == k; }) == known.end())
      throw std::invalid_argument("unknown config key '" + key + "' in " + where);
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& value) {
  if (j.contains(key)) value = j.at(key).get<T>();
}

json distributions_to_json(const SurveyDistributions& d) {
  return {{"mu", d.mu},
          {"sigma", d.sigma},
          {"lambda", d.lambda},
          {"a_shift", d.a_shift},
          {"min_group_size", d.min_group_size},
          {"max_group_size", d.max_group_size},
          {"max_p2p", d.max_p2p}};
}

json config_to_json(const JobConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"population",
           {{"n_total", c.population.n_total},
            {"penetration", c.population.penetration},
            {"groups_per_capita", c.population.groups_per_capita},
            {"rng_seed", c.population.rng_seed},
            {"distributions", distributions_to_json(c.population.distributions)}}},
          {"spread", {{"p_ii", c.spread.p_ii}, {"p_ip", c.spread.p_ip}, {"p_usg", c.spread.p_usg}}},
          {"ensemble",
           {{"n_populations", c.ensemble.n_populations},
            {"runs_per_population", c.ensemble.runs_per_population},
            {"iterations", c.ensemble.iterations}}},
          {"grid", {{"p_ii", c.grid.p_ii}, {"p_ip", c.grid.p_ip}, {"p_usg", c.grid.p_usg}}},
          {"output_dir", c.output_dir},
          {"master_seed", c.master_seed},
          {"input_series", c.input_series},
          {"jobs", c.jobs}};
}

json curve_to_json(const CurveCoefficients& k) {
  json j{{"a", k.a}, {"b", k.b}, {"epsilon", k.epsilon}, {"c", k.c}};
  if (k.initial_fraction) j["initial_fraction"] = *k.initial_fraction;
  return j;
}

json laws_to_json(const LawCoefficients& laws) {
  return {{"aa", laws.aa},
          {"bb", laws.bb},
          {"cc", laws.cc},
          {"ee", laws.ee},
          {"gg", laws.gg},
          {"units", laws.units == ProbabilityUnits::kPercent ? "percent" : "fraction"}};
}

json manifest_for(const JobConfig& c, const std::string& command) {
  return {{"schema_version", kSchemaVersion},
          {"command", command},
          {"config", config_to_json(c)}};
}

void write_json(const std::string& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

std::string joined(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void ensure_output_dir(const JobConfig& c) { fs::create_directories(c.output_dir); }

std::string format_value(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

JobConfig job_config_from_json_text(const std::string& text, const JobConfig& base) {
  JobConfig c = base;
  const json j = json::parse(text);
  reject_unknown_keys(j,
                      {"schema_version", "population", "spread", "ensemble", "grid",
                       "output_dir", "master_seed", "input_series", "jobs", "profile"},
                      "config");
  if (j.contains("profile")) apply_profile(c, j.at("profile").get<std::string>());
  if (j.contains("population")) {
    const auto& p = j.at("population");
    reject_unknown_keys(
        p, {"n_total", "penetration", "groups_per_capita", "rng_seed", "distributions"},
        "population");
    maybe(p, "n_total", c.population.n_total);
    maybe(p, "penetration", c.population.penetration);
    maybe(p, "groups_per_capita", c.population.groups_per_capita);
    maybe(p, "rng_seed", c.population.rng_seed);
    if (p.contains("distributions")) {
      const auto& d = p.at("distributions");
      reject_unknown_keys(d,
                          {"mu", "sigma", "lambda", "a_shift", "min_group_size",
                           "max_group_size", "max_p2p"},
                          "distributions");
      auto& dist = c.population.distributions;
      maybe(d, "mu", dist.mu);
      maybe(d, "sigma", dist.sigma);
      maybe(d, "lambda", dist.lambda);
      maybe(d, "a_shift", dist.a_shift);
      maybe(d, "min_group_size", dist.min_group_size);
      maybe(d, "max_group_size", dist.max_group_size);
      maybe(d, "max_p2p", dist.max_p2p);
    }
  }
  if (j.contains("spread")) {
    const auto& s = j.at("spread");
    reject_unknown_keys(s, {"p_ii", "p_ip", "p_usg"}, "spread");
    maybe(s, "p_ii", c.spread.p_ii);
    maybe(s, "p_ip", c.spread.p_ip);
    maybe(s, "p_usg", c.spread.p_usg);
  }
  if (j.contains("ensemble")) {
    const auto& e = j.at("ensemble");
    reject_unknown_keys(e, {"n_populations", "runs_per_population", "iterations"}, "ensemble");
    maybe(e, "n_populations", c.ensemble.n_populations);
    maybe(e, "runs_per_population", c.ensemble.runs_per_population);
    maybe(e, "iterations", c.ensemble.iterations);
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown_keys(g, {"p_ii", "p_ip", "p_usg"}, "grid");
    maybe(g, "p_ii", c.grid.p_ii);
    maybe(g, "p_ip", c.grid.p_ip);
    maybe(g, "p_usg", c.grid.p_usg);
  }
  maybe(j, "output_dir", c.output_dir);
  maybe(j, "master_seed", c.master_seed);
  maybe(j, "input_series", c.input_series);
  maybe(j, "jobs", c.jobs);
  return c;
}

std::string job_config_to_json_text(const JobConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

int run_gen_pop(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  PopulationConfig pop = config.population;
  // Matches the first population of a simulate/sweep job with this seed.
  pop.rng_seed = derive_stream(config.master_seed, kStreamNetwork, 0);
  const Network net = build_network(pop);
  save_network(net, joined(config.output_dir, "network.json"));

  const ValidationReport report = validate_network(net, pop.distributions);
  json rj{{"schema_version", kSchemaVersion},
          {"n_connected", report.n_connected},
          {"n_groups", report.n_groups},
          {"has_groups", report.has_groups},
          {"degree_histogram", report.degree_histogram},
          {"group_size_histogram", report.group_size_histogram},
          {"notes", report.notes}};
  if (report.max_cdf_deviation) rj["max_cdf_deviation"] = *report.max_cdf_deviation;
  if (report.refit_lambda) rj["refit_lambda"] = *report.refit_lambda;
  if (report.refit_a_shift) rj["refit_a_shift"] = *report.refit_a_shift;
  if (report.refit_r_squared) rj["refit_r_squared"] = *report.refit_r_squared;
  write_json(joined(config.output_dir, "validation.json"), rj);
  write_json(joined(config.output_dir, "manifest.json"), manifest_for(config, "gen-pop"));

  log << "gen-pop: " << net.n_total << " individuals, " << net.connected.size()
      << " connected, " << net.p2p_edge_count() << " p2p links, " << net.groups.size()
      << " groups\n";
  if (report.max_cdf_deviation)
    log << "gen-pop: group-size CDF max deviation " << *report.max_cdf_deviation << "\n";
  return 0;
}

int run_simulate(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  EnsembleSpec spec = config.ensemble;
  spec.master_seed = config.master_seed;
  const EnsembleResult ensemble = run_ensemble(config.population, spec, config.spread);
  write_series_csv(joined(config.output_dir, "series.csv"), ensemble);
  write_json(joined(config.output_dir, "manifest.json"), manifest_for(config, "simulate"));
  log << "simulate: " << ensemble.n_samples << " runs, final burned fraction "
      << ensemble.mean.f(ensemble.mean.f.size() - 1) << "\n";
  return 0;
}

namespace {

struct SweepPoint {
  std::size_t index = 0;
  SpreadParams params;
};

struct SweepOutcome {
  json entry;
  bool ok = false;
  std::string log_line;
};

SweepOutcome run_sweep_point(const JobConfig& config, const SweepPoint& point) {
  SweepOutcome outcome;
  const std::uint64_t point_seed =
      derive_stream(config.master_seed, kStreamGridPoint, point.index);
  std::ostringstream name;
  name << "sweep_" << point.index << "_pii" << format_value(point.params.p_ii) << "_pip"
       << format_value(point.params.p_ip) << "_pusg" << format_value(point.params.p_usg)
       << ".csv";

  outcome.entry = {{"index", point.index},
                   {"p_ii", point.params.p_ii},
                   {"p_ip", point.params.p_ip},
                   {"p_usg", point.params.p_usg},
                   {"seed", point_seed},
                   {"csv", name.str()}};
  try {
    EnsembleSpec spec = config.ensemble;
    spec.master_seed = point_seed;
    const EnsembleResult ensemble = run_ensemble(config.population, spec, point.params);
    write_series_csv(joined(config.output_dir, name.str()), ensemble);

    // Anchor the fit at the realized seed fraction; at small ensemble sizes
    // it can differ from the nominal p_ii by more than the fit tolerates.
    const auto fit = fit_curve(ensemble.mean, ensemble.mean.f(0));
    outcome.entry["observed_f0"] = ensemble.mean.f(0);
    outcome.entry["coefficients"] = curve_to_json(fit.coefficients);
    outcome.entry["r_squared"] = fit.r_squared;
    outcome.entry["converged"] = fit.converged;
    outcome.entry["iterations_used"] = fit.iterations_used;
    outcome.entry["status"] = "ok";
    outcome.ok = true;

    std::ostringstream line;
    line << "sweep point " << point.index << ": a=" << fit.coefficients.a
         << " epsilon=" << fit.coefficients.epsilon << " r2=" << fit.r_squared;
    outcome.log_line = line.str();
  } catch (const std::exception& error) {
    outcome.entry["status"] = "failed";
    outcome.entry["error"] = error.what();
    outcome.log_line = "sweep point " + std::to_string(point.index) + " failed: " + error.what();
  }
  return outcome;
}

}  // namespace

int run_sweep(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);

  std::vector<SweepPoint> points;
  for (double p_ii : config.grid.p_ii)
    for (double p_ip : config.grid.p_ip)
      for (double p_usg : config.grid.p_usg)
        points.push_back({points.size(), SpreadParams{p_ii, p_ip, p_usg}});

  std::vector<SweepOutcome> outcomes(points.size());
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    for (const auto& point : points) outcomes[point.index] = run_sweep_point(config, point);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1))
        outcomes[i] = run_sweep_point(config, points[i]);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json summary = manifest_for(config, "sweep");
  auto entries = json::array();
  std::size_t failures = 0;
  for (const auto& outcome : outcomes) {
    entries.push_back(outcome.entry);
    if (!outcome.ok) ++failures;
    log << outcome.log_line << "\n";
  }
  summary["points"] = std::move(entries);
  summary["n_points"] = points.size();
  summary["n_failed"] = failures;
  write_json(joined(config.output_dir, "summary.json"), summary);
  log << "sweep: " << points.size() << " points, " << failures << " failed\n";
  return failures == 0 ? 0 : 1;
}

int run_fit_job(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  if (config.input_series.empty()) {
    log << "fit: no input series given (set input_series or --series)\n";
    return 1;
  }
  try {
    const BurnSeries series = read_series_csv(config.input_series);
    double anchor = config.spread.p_ii;
    bool anchored_to_observed = false;
    if (std::abs(series.f(0) - anchor) > 1e-3) {
      anchor = series.f(0);
      anchored_to_observed = true;
      log << "fit: configured p_ii differs from the series f(0); anchoring at f(0) = "
          << anchor << "\n";
    }
    const auto fit = fit_curve(series, anchor);
    json out = manifest_for(config, "fit");
    out["anchored_to_observed_f0"] = anchored_to_observed;
    out["anchor_p_ii"] = anchor;
    out["coefficients"] = curve_to_json(fit.coefficients);
    out["residual_norm"] = fit.residual_norm;
    out["r_squared"] = fit.r_squared;
    out["iterations_used"] = fit.iterations_used;
    out["converged"] = fit.converged;
    out["warnings"] = fit.warnings;
    write_json(joined(config.output_dir, "fit.json"), out);
    log << "fit: a=" << fit.coefficients.a << " epsilon=" << fit.coefficients.epsilon
        << " c=" << fit.coefficients.c << " r2=" << fit.r_squared << "\n";
    return 0;
  } catch (const std::exception& error) {
    log << "fit failed: " << error.what() << "\n";
    return 1;
  }
}

int run_predict(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  try {
    const GrowthPrediction prediction =
        predict_curve(config.spread, reference_usg_polynomials());
    json out = manifest_for(config, "predict");
    out["calibration_version"] = kCalibrationSchemaVersion;
    out["coefficients"] = curve_to_json(prediction.coeffs);
    out["invisible_population"] = prediction.invisible_population;
    out["warnings"] = prediction.warnings;

    auto table = json::array();
    const double f0 = eval_curve(prediction.coeffs, 0.0);
    for (int k = 1; k <= 9; ++k) {
      const double x = k / 10.0;
      json row{{"x", x}};
      if (x < f0) {
        row["omitted_reason"] = "target below the initial fraction";
      } else {
        row["t"] = time_to_fraction(x, prediction.coeffs);
      }
      table.push_back(row);
      if (k == 5 && row.contains("t")) log << "predict: t_50 = " << row["t"].get<double>() << "\n";
    }
    out["time_to_fraction"] = std::move(table);
    write_json(joined(config.output_dir, "prediction.json"), out);
    log << "predict: a=" << prediction.coeffs.a << " epsilon=" << prediction.coeffs.epsilon
        << " c=" << prediction.coeffs.c << "\n";
    for (const auto& w : prediction.warnings) log << "predict warning: " << w << "\n";
    return 0;
  } catch (const std::exception& error) {
    log << "predict failed: " << error.what() << "\n";
    return 1;
  }
}

int run_infer(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  if (config.input_series.empty()) {
    log << "infer: no input series given (set input_series or --series)\n";
    return 1;
  }
  try {
    const BurnSeries series = read_series_csv(config.input_series);
    double anchor = config.spread.p_ii;
    if (std::abs(series.f(0) - anchor) > 1e-3) {
      anchor = series.f(0);
      log << "infer: configured p_ii differs from the series f(0); anchoring at f(0) = "
          << anchor << "\n";
    }
    const InferredNetwork inferred =
        infer_network_params(series, anchor, reference_usg_polynomials());
    json out = manifest_for(config, "infer");
    out["calibration_version"] = kCalibrationSchemaVersion;
    out["p_ii"] = inferred.p_ii;
    out["p_ip"] = inferred.p_ip;
    out["p_usg"] = inferred.p_usg;
    out["curve_stage"] = {{"coefficients", curve_to_json(inferred.curve_stage.coefficients)},
                          {"residual_norm", inferred.curve_stage.residual_norm},
                          {"r_squared", inferred.curve_stage.r_squared},
                          {"converged", inferred.curve_stage.converged}};
    out["usg_residual"] = inferred.usg_residual;
    out["usg_at_boundary"] = inferred.usg_at_boundary;
    out["usg_indeterminate"] = inferred.usg_indeterminate;
    out["warnings"] = inferred.warnings;
    write_json(joined(config.output_dir, "inference.json"), out);
    log << "infer: p_ip=" << inferred.p_ip << " p_usg=" << inferred.p_usg << "\n";
    for (const auto& w : inferred.warnings) log << "infer warning: " << w << "\n";
    return 0;
  } catch (const std::exception& error) {
    log << "infer failed: " << error.what() << "\n";
    return 1;
  }
}

int run_validate_tables(const JobConfig& config, std::ostream& log) {
  ensure_output_dir(config);
  const UsgPolynomials& poly = reference_usg_polynomials();
  json rows = json::array();
  double max_dev[5] = {0, 0, 0, 0, 0};
  static const char* names[5] = {"aa", "bb", "cc", "ee", "gg"};

  for (const auto& row : reference_law_rows()) {
    const LawCoefficients table = row.laws.as_fraction();
    const LawCoefficients evaluated = law_coeffs_at_usg(row.p_usg, poly);
    const double table_vals[5] = {table.aa, table.bb, table.cc, table.ee, table.gg};
    const double eval_vals[5] = {evaluated.aa, evaluated.bb, evaluated.cc, evaluated.ee,
                                 evaluated.gg};
    json deviations;
    for (int i = 0; i < 5; ++i) {
      const double dev = std::abs(eval_vals[i] - table_vals[i]) / std::abs(table_vals[i]);
      deviations[names[i]] = dev;
      max_dev[i] = std::max(max_dev[i], dev);
    }
    rows.push_back({{"p_usg", row.p_usg},
                    {"table", laws_to_json(table)},
                    {"evaluated", laws_to_json(evaluated)},
                    {"relative_deviation", deviations}});
    log << "validate-tables: p_usg=" << row.p_usg << " max rel dev "
        << *std::max_element(deviations.begin(), deviations.end(),
                             [](const json& a, const json& b) {
                               return a.get<double>() < b.get<double>();
                             })
        << "\n";
  }

  json out = manifest_for(config, "validate-tables");
  out["calibration_version"] = kCalibrationSchemaVersion;
  out["rows"] = std::move(rows);
  json per_coefficient;
  for (int i = 0; i < 5; ++i) per_coefficient[names[i]] = max_dev[i];
  out["max_relative_deviation"] = per_coefficient;
  write_json(joined(config.output_dir, "validate_tables.json"), out);
  for (int i = 0; i < 5; ++i)
    log << "validate-tables: max deviation " << names[i] << " = " << max_dev[i] << "\n";
  return 0;
}

}  // namespace rumor
