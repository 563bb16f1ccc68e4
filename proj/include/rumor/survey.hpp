#pragma once

#include <vector>

namespace rumor {

/// Calibrated contact statistics: person-to-person out-degrees follow a
/// discretized normal, group sizes an exponential law restricted to
/// [min_group_size, max_group_size].
struct SurveyDistributions {
  double mu = 7.35;        // mean person-to-person contacts
  double sigma = 4.38;     // std dev of person-to-person contacts
  double lambda = 0.1113;  // exponential rate of the group-size law
  double a_shift = 1.41;   // exponential location of the group-size law
  int min_group_size = 3;
  int max_group_size = 30;
  int max_p2p = 30;
};

double normal_cdf(double x);

/// Exponential group-size CDF, 1 - exp(-lambda * (x - a_shift)).
double group_size_cdf(const SurveyDistributions& dist, double x);

/// CDF of the size law restricted and renormalized to
/// [min_group_size, max_group_size]; the location parameter cancels out.
double restricted_group_size_cdf(const SurveyDistributions& dist, int size);

/// Round nonnegative real targets to integers summing exactly to `total`
/// (largest-remainder method; deterministic tie-break by index).
std::vector<long long> largest_remainder_round(const std::vector<double>& weights,
                                               long long total);

/// Number of individuals with out-degree m for m = 0..max_p2p.
/// Bins are normal-CDF increments on half-integer edges; the tails fold
/// into the first and last bin. Counts sum exactly to n_connected.
std::vector<long long> p2p_degree_counts(const SurveyDistributions& dist,
                                         long long n_connected);

/// Number of groups of size i for i = min..max group size, proportional to
/// the CDF increments of the restricted size law. Sums exactly to n_groups.
std::vector<long long> group_size_counts(const SurveyDistributions& dist,
                                         long long n_groups);

/// Expectation of the restricted group-size distribution.
double mean_group_size(const SurveyDistributions& dist);

}  // namespace rumor
