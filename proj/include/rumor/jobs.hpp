#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rumor/netgen.hpp"
#include "rumor/params.hpp"
#include "rumor/spread.hpp"

namespace rumor {

inline constexpr int kSchemaVersion = 1;

struct GridSpec {
  std::vector<double> p_ii;
  std::vector<double> p_ip;
  std::vector<double> p_usg;
};

/// p_ii, p_ip in {0.01, ..., 0.10}; p_usg in {0, 0.03, 0.05, 0.07, 0.10}:
/// 500 points.
GridSpec default_grid();

struct JobConfig {
  PopulationConfig population;
  SpreadParams spread{0.02, 0.01, 0.0};
  EnsembleSpec ensemble;
  GridSpec grid = default_grid();
  std::string output_dir = "out";
  std::uint64_t master_seed = 1;
  std::string input_series;  // for the fit / infer commands
  int jobs = 1;
};

/// desk: n_total 2000, 5 populations x 10 runs. paper: 10000, 30 x 50.
void apply_profile(JobConfig& config, const std::string& name);

/// Merge a (possibly partial) JSON document over `base`. Unknown keys are
/// rejected so typos do not pass silently.
JobConfig job_config_from_json_text(const std::string& text, const JobConfig& base);

/// Fully resolved config, embedded in every artifact as provenance.
std::string job_config_to_json_text(const JobConfig& config);

// Each runner writes its artifacts under config.output_dir and returns a
// process-style status: 0 on success, nonzero when any sub-task failed.
int run_gen_pop(const JobConfig& config, std::ostream& log);
int run_simulate(const JobConfig& config, std::ostream& log);
int run_sweep(const JobConfig& config, std::ostream& log);
int run_fit_job(const JobConfig& config, std::ostream& log);
int run_predict(const JobConfig& config, std::ostream& log);
int run_infer(const JobConfig& config, std::ostream& log);
int run_validate_tables(const JobConfig& config, std::ostream& log);

}  // namespace rumor
