#include "rumor/survey.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rumor {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double group_size_cdf(const SurveyDistributions& dist, double x) {
  return 1.0 - std::exp(-dist.lambda * (x - dist.a_shift));
}

double restricted_group_size_cdf(const SurveyDistributions& dist, int size) {
  if (size < dist.min_group_size) return 0.0;
  if (size >= dist.max_group_size) return 1.0;
  const double lo = group_size_cdf(dist, dist.min_group_size - 1.0);
  const double hi = group_size_cdf(dist, dist.max_group_size);
  return (group_size_cdf(dist, size) - lo) / (hi - lo);
}

std::vector<long long> largest_remainder_round(const std::vector<double>& weights,
                                               long long total) {
  const std::size_t n = weights.size();
  std::vector<long long> counts(n, 0);
  if (total <= 0 || n == 0) return counts;

  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (wsum <= 0.0) throw std::invalid_argument("largest_remainder_round: weights sum to zero");

  std::vector<double> remainders(n);
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = static_cast<double>(total) * weights[i] / wsum;
    counts[i] = static_cast<long long>(std::floor(target));
    remainders[i] = target - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; assigned < total; ++k) {
    counts[order[k % n]] += 1;
    ++assigned;
  }
  return counts;
}

std::vector<long long> p2p_degree_counts(const SurveyDistributions& dist,
                                         long long n_connected) {
  const int m_max = dist.max_p2p;
  std::vector<double> weights(static_cast<std::size_t>(m_max) + 1, 0.0);
  auto edge = [&](double x) { return normal_cdf((x - dist.mu) / dist.sigma); };
  weights[0] = edge(0.5);
  for (int m = 1; m < m_max; ++m) weights[m] = edge(m + 0.5) - edge(m - 0.5);
  weights[m_max] = 1.0 - edge(m_max - 0.5);  // fold the upper tail
  if (n_connected <= 0) return std::vector<long long>(weights.size(), 0);
  return largest_remainder_round(weights, n_connected);
}

std::vector<long long> group_size_counts(const SurveyDistributions& dist,
                                         long long n_groups) {
  if (n_groups <= 0) return {};
  const int lo = dist.min_group_size;
  const int hi = dist.max_group_size;
  std::vector<double> weights;
  weights.reserve(hi - lo + 1);
  const double norm =
      group_size_cdf(dist, hi) - group_size_cdf(dist, lo - 1.0);
  for (int i = lo; i <= hi; ++i) {
    weights.push_back((group_size_cdf(dist, i) - group_size_cdf(dist, i - 1.0)) / norm);
  }
  return largest_remainder_round(weights, n_groups);
}

double mean_group_size(const SurveyDistributions& dist) {
  const int lo = dist.min_group_size;
  const int hi = dist.max_group_size;
  const double norm = group_size_cdf(dist, hi) - group_size_cdf(dist, lo - 1.0);
  double mean = 0.0;
  for (int i = lo; i <= hi; ++i) {
    mean += i * (group_size_cdf(dist, i) - group_size_cdf(dist, i - 1.0)) / norm;
  }
  return mean;
}

}  // namespace rumor
