#include "rumor/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "rumor/fit.hpp"

namespace rumor {

namespace {

// k distinct values from [0, n), optionally excluding one value.
std::vector<int> sample_distinct(Rng& rng, int n, int k, int exclude = -1) {
  const int domain = n - (exclude >= 0 ? 1 : 0);
  if (k > domain) throw std::invalid_argument("sample_distinct: k exceeds domain");
  auto lift = [&](int v) { return (exclude >= 0 && v >= exclude) ? v + 1 : v; };

  std::vector<int> result;
  result.reserve(k);
  if (k * 2 >= domain) {
    std::vector<int> pool(domain);
    std::iota(pool.begin(), pool.end(), 0);
    rng.shuffle(pool);
    for (int i = 0; i < k; ++i) result.push_back(lift(pool[i]));
  } else {
    std::unordered_set<int> seen;
    seen.reserve(k * 2);
    while (static_cast<int>(result.size()) < k) {
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(domain)));
      if (seen.insert(v).second) result.push_back(lift(v));
    }
  }
  return result;
}

}  // namespace

Network build_network(const PopulationConfig& config, Rng& rng) {
  if (config.n_total < 2) throw std::invalid_argument("build_network: n_total must be >= 2");
  if (config.penetration <= 0.0 || config.penetration > 1.0)
    throw std::invalid_argument("build_network: penetration must be in (0,1]");
  if (config.groups_per_capita < 0.0)
    throw std::invalid_argument("build_network: groups_per_capita must be >= 0");
  const auto& dist = config.distributions;
  if (dist.sigma <= 0.0 || dist.lambda <= 0.0 || dist.max_p2p < 0 ||
      dist.min_group_size < 2 || dist.max_group_size < dist.min_group_size)
    throw std::invalid_argument("build_network: malformed distributions");

  Network net;
  net.n_total = static_cast<int>(config.n_total);
  const long long n_connected = std::llround(config.penetration * config.n_total);

  std::vector<int> ids(net.n_total);
  std::iota(ids.begin(), ids.end(), 0);
  rng.shuffle(ids);
  net.connected.assign(ids.begin(), ids.begin() + n_connected);
  std::sort(net.connected.begin(), net.connected.end());

  net.p2p_out.assign(net.n_total, {});
  if (n_connected > 0) {
    const auto degree_counts = p2p_degree_counts(config.distributions, n_connected);
    for (std::size_t m = 0; m < degree_counts.size(); ++m) {
      if (degree_counts[m] > 0 && static_cast<long long>(m) > n_connected - 1)
        throw std::invalid_argument("build_network: degree exceeds connected population");
    }

    std::vector<int> assignees = net.connected;
    rng.shuffle(assignees);
    std::size_t cursor = 0;
    for (std::size_t m = 0; m < degree_counts.size(); ++m) {
      for (long long k = 0; k < degree_counts[m]; ++k) {
        const int src = assignees[cursor++];
        // position of src within the sorted connected list, excluded below
        const int self_pos = static_cast<int>(
            std::lower_bound(net.connected.begin(), net.connected.end(), src) -
            net.connected.begin());
        auto picks = sample_distinct(rng, static_cast<int>(n_connected),
                                     static_cast<int>(m), self_pos);
        auto& out = net.p2p_out[src];
        out.reserve(m);
        for (int p : picks) out.push_back(net.connected[p]);
        std::sort(out.begin(), out.end());
      }
    }
  }

  if (config.groups_per_capita > 0.0 && n_connected > 0) {
    const double mean_size = mean_group_size(config.distributions);
    const long long n_groups =
        std::llround(config.groups_per_capita * static_cast<double>(n_connected) / mean_size);
    const auto size_counts = group_size_counts(config.distributions, n_groups);
    for (std::size_t k = 0; k < size_counts.size(); ++k) {
      const long long size = config.distributions.min_group_size + static_cast<long long>(k);
      if (size_counts[k] > 0 && size > n_connected - 1)
        throw std::invalid_argument("build_network: group size exceeds connected population");
    }
    net.groups.reserve(n_groups);
    for (std::size_t k = 0; k < size_counts.size(); ++k) {
      const int size = config.distributions.min_group_size + static_cast<int>(k);
      for (long long g = 0; g < size_counts[k]; ++g) {
        auto picks = sample_distinct(rng, static_cast<int>(n_connected), size);
        std::vector<int> members;
        members.reserve(size);
        for (int p : picks) members.push_back(net.connected[p]);
        std::sort(members.begin(), members.end());
        net.groups.push_back(std::move(members));
      }
    }
  }
  return net;
}

Network build_network(const PopulationConfig& config) {
  Rng rng(config.rng_seed);
  return build_network(config, rng);
}

ValidationReport validate_network(const Network& net, const SurveyDistributions& dist) {
  if (net.n_total == 0) throw std::invalid_argument("validate_network: empty network");

  ValidationReport report;
  report.n_connected = static_cast<long long>(net.connected.size());
  report.n_groups = static_cast<long long>(net.groups.size());
  report.has_groups = !net.groups.empty();

  report.degree_histogram.assign(dist.max_p2p + 1, 0);
  for (int id : net.connected) {
    const auto deg = net.p2p_out[id].size();
    if (deg < report.degree_histogram.size())
      report.degree_histogram[deg] += 1;
    else
      report.notes.push_back("out-degree above max_p2p observed");
  }

  const int lo = dist.min_group_size;
  const int hi = dist.max_group_size;
  report.group_size_histogram.assign(hi - lo + 1, 0);
  if (!report.has_groups) {
    report.notes.push_back("no groups");
    return report;
  }

  std::vector<int> sizes;
  sizes.reserve(net.groups.size());
  for (const auto& g : net.groups) {
    const int s = static_cast<int>(g.size());
    sizes.push_back(s);
    if (s >= lo && s <= hi)
      report.group_size_histogram[s - lo] += 1;
    else
      report.notes.push_back("group size outside configured range");
  }

  double sup = 0.0;
  long long cum = 0;
  for (int i = lo; i <= hi; ++i) {
    cum += report.group_size_histogram[i - lo];
    const double empirical = static_cast<double>(cum) / report.n_groups;
    sup = std::max(sup, std::abs(empirical - restricted_group_size_cdf(dist, i)));
  }
  report.max_cdf_deviation = sup;

  if (report.n_groups >= 30) {
    const auto refit = fit_group_size_cdf(sizes);
    report.refit_lambda = refit.coefficients.lambda;
    report.refit_a_shift = refit.coefficients.a_shift;
    report.refit_r_squared = refit.r_squared;
  } else {
    report.notes.push_back("too few groups for exponential re-fit");
  }
  return report;
}

}  // namespace rumor
