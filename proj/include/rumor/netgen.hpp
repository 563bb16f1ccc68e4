#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rumor/network.hpp"
#include "rumor/rng.hpp"
#include "rumor/survey.hpp"

namespace rumor {

struct PopulationConfig {
  long long n_total = 10000;
  double penetration = 0.70;  // fraction of the population connected
  // Mean group memberships per connected individual. The default keeps the
  // spreading time scale coarse enough that first-passage comparisons
  // across USG fractions stay resolvable; higher values saturate networks
  // of this size within a handful of iterations.
  double groups_per_capita = 1.0;
  std::uint64_t rng_seed = 0;
  SurveyDistributions distributions;
};

/// Build a random population whose out-degree and group-size statistics
/// follow the configured distributions. Deterministic given (config, rng).
/// Throws std::invalid_argument when a requested degree or group size
/// cannot be satisfied by the connected subset.
Network build_network(const PopulationConfig& config, Rng& rng);

/// Convenience overload seeding the generator from config.rng_seed.
Network build_network(const PopulationConfig& config);

struct ValidationReport {
  long long n_connected = 0;
  long long n_groups = 0;
  bool has_groups = false;
  std::vector<long long> degree_histogram;      // out-degree 0..max_p2p
  std::vector<long long> group_size_histogram;  // size min..max
  // Group-size metrics, absent when the network has no groups.
  std::optional<double> max_cdf_deviation;  // sup |empirical - restricted law|
  std::optional<double> refit_lambda;
  std::optional<double> refit_a_shift;
  std::optional<double> refit_r_squared;
  std::vector<std::string> notes;
};

/// Compare a network's empirical statistics against the target
/// distributions; includes an exponential re-fit of the group-size CDF.
ValidationReport validate_network(const Network& net, const SurveyDistributions& dist);

}  // namespace rumor
