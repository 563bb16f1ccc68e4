#include "rumor/spread.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rumor {

SpreadIndex SpreadIndex::build(const Network& net) {
  SpreadIndex idx;
  const int n = net.n_total;
  idx.p2p_begin.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    idx.p2p_begin[i + 1] = idx.p2p_begin[i] + static_cast<std::int64_t>(net.p2p_out[i].size());
  idx.p2p_dst.reserve(idx.p2p_begin[n]);
  for (int i = 0; i < n; ++i)
    idx.p2p_dst.insert(idx.p2p_dst.end(), net.p2p_out[i].begin(), net.p2p_out[i].end());
  idx.p2p_channel_count = idx.p2p_begin[n];

  std::vector<std::int64_t> member_counts(n, 0);
  for (const auto& g : net.groups)
    for (int id : g) member_counts[id] += 1;
  idx.member_begin.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) idx.member_begin[i + 1] = idx.member_begin[i] + member_counts[i];
  idx.member_group.assign(idx.member_begin[n], 0);
  std::vector<std::int64_t> cursor(idx.member_begin.begin(), idx.member_begin.end() - 1);
  for (std::size_t g = 0; g < net.groups.size(); ++g)
    for (int id : net.groups[g]) idx.member_group[cursor[id]++] = static_cast<int>(g);
  return idx;
}

namespace {

std::vector<int> select_members(const Network& net, double p, Rng& rng, const char* what) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument(std::string(what) + ": probability outside [0,1]");
  std::vector<int> chosen;
  for (int id : net.connected)
    if (rng.uniform01() < p) chosen.push_back(id);
  return chosen;
}

void check_subset_of_connected(const Network& net, const std::vector<int>& ids, const char* what) {
  for (int id : ids) {
    if (!std::binary_search(net.connected.begin(), net.connected.end(), id))
      throw std::invalid_argument(std::string(what) + ": id not in connected population");
  }
}

void burn(SpreadState& state, int id) {
  if (!state.burned[id]) {
    state.burned[id] = 1;
    state.burned_order.push_back(id);
  }
}

}  // namespace

std::vector<int> select_seed(const Network& net, double p_ii, Rng& rng) {
  return select_members(net, p_ii, rng, "select_seed");
}

std::vector<int> select_usg(const Network& net, double p_usg, Rng& rng) {
  return select_members(net, p_usg, rng, "select_usg");
}

SpreadState make_state(const Network& net, const std::vector<int>& seed,
                       const std::vector<int>& usg) {
  check_subset_of_connected(net, seed, "seed");
  check_subset_of_connected(net, usg, "usg");
  SpreadState state;
  state.burned.assign(net.n_total, 0);
  state.usg.assign(net.n_total, 0);
  state.group_burned.assign(net.groups.size(), 0);
  for (int id : usg) state.usg[id] = 1;
  for (int id : seed) burn(state, id);
  return state;
}

void step(const Network& net, const SpreadIndex& index, SpreadState& state,
          double p_ip, const TrialSource& trials) {
  const std::int64_t senders = state.burned_count();  // synchronous snapshot
  const auto iteration = static_cast<std::uint64_t>(state.iteration);
  for (std::int64_t k = 0; k < senders; ++k) {
    const int s = state.burned_order[k];
    const bool always = state.usg[s] != 0;
    for (std::int64_t e = index.p2p_begin[s]; e < index.p2p_begin[s + 1]; ++e) {
      const int dst = index.p2p_dst[e];
      // Draws are keyed by (iteration, channel), so skipping a trial whose
      // outcome could not change anything leaves every other draw intact.
      if (state.burned[dst]) continue;
      if (always || trials.at(iteration, static_cast<std::uint64_t>(e)) < p_ip)
        burn(state, dst);
    }
    for (std::int64_t m = index.member_begin[s]; m < index.member_begin[s + 1]; ++m) {
      const int g = index.member_group[m];
      if (state.group_burned[g]) continue;  // members are all burned already
      const auto channel = static_cast<std::uint64_t>(index.p2p_channel_count + m);
      if (always || trials.at(iteration, channel) < p_ip) {
        state.group_burned[g] = 1;
        for (int id : net.groups[g]) burn(state, id);
      }
    }
  }
  state.iteration += 1;
}

BurnSeries run(const Network& net, const SpreadIndex& index, const SpreadParams& params,
               const std::vector<int>& seed, const std::vector<int>& usg,
               std::uint64_t run_key, int iterations) {
  if (iterations < 0) throw std::invalid_argument("run: negative iteration count");
  BurnSeries series;
  series.normalizer = static_cast<std::int64_t>(net.connected.size());
  series.f.resize(iterations + 1);
  if (series.normalizer == 0) {
    series.f.setZero();
    return series;
  }

  SpreadState state = make_state(net, seed, usg);
  const TrialSource trials(run_key);
  const double n_connected = static_cast<double>(series.normalizer);
  series.f(0) = static_cast<double>(state.burned_count()) / n_connected;
  for (int n = 1; n <= iterations; ++n) {
    if (state.burned_count() == series.normalizer) {  // saturated, nothing can change
      for (; n <= iterations; ++n) series.f(n) = 1.0;
      break;
    }
    step(net, index, state, params.p_ip, trials);
    series.f(n) = static_cast<double>(state.burned_count()) / n_connected;
  }
  return series;
}

BurnSeries run(const Network& net, const SpreadParams& params,
               const std::vector<int>& seed, const std::vector<int>& usg,
               std::uint64_t run_key, int iterations) {
  return run(net, SpreadIndex::build(net), params, seed, usg, run_key, iterations);
}

EnsembleResult run_ensemble(const PopulationConfig& config, const EnsembleSpec& spec,
                            const SpreadParams& params) {
  if (spec.n_populations < 1 || spec.runs_per_population < 1 || spec.iterations < 1)
    throw std::invalid_argument("run_ensemble: counts must be >= 1");

  const int points = spec.iterations + 1;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(points);

  EnsembleResult result;
  result.population_means.reserve(spec.n_populations);

  for (int p = 0; p < spec.n_populations; ++p) {
    PopulationConfig pop_config = config;
    pop_config.rng_seed = derive_stream(spec.master_seed, kStreamNetwork, p);
    const Network net = build_network(pop_config);
    const SpreadIndex index = SpreadIndex::build(net);

    Rng init_rng(derive_stream(spec.master_seed, kStreamInitial, p));
    const auto seed = select_seed(net, params.p_ii, init_rng);
    const auto usg = select_usg(net, params.p_usg, init_rng);

    Eigen::VectorXd pop_sum = Eigen::VectorXd::Zero(points);
    for (int r = 0; r < spec.runs_per_population; ++r) {
      const std::uint64_t run_key = derive_stream(spec.master_seed, kStreamRun, p, r);
      const BurnSeries series = run(net, index, params, seed, usg, run_key, spec.iterations);
      pop_sum += series.f;
      sum += series.f;
      sum_sq += series.f.cwiseProduct(series.f);
    }
    BurnSeries pop_mean;
    pop_mean.f = pop_sum / spec.runs_per_population;
    pop_mean.normalizer = static_cast<std::int64_t>(net.connected.size());
    result.population_means.push_back(std::move(pop_mean));
  }

  const std::int64_t n = static_cast<std::int64_t>(spec.n_populations) * spec.runs_per_population;
  result.n_samples = n;
  result.mean.f = sum / static_cast<double>(n);
  result.mean.normalizer = result.population_means.front().normalizer;
  if (n > 1) {
    Eigen::VectorXd var =
        (sum_sq - sum.cwiseProduct(sum) / static_cast<double>(n)) / static_cast<double>(n - 1);
    result.f_std = var.cwiseMax(0.0).cwiseSqrt();
  } else {
    result.f_std = Eigen::VectorXd::Zero(points);
  }
  return result;
}

std::optional<int> first_passage(const BurnSeries& series, double x) {
  if (x <= 0.0 || x >= 1.0) throw std::invalid_argument("first_passage: x must be in (0,1)");
  for (int n = 0; n < static_cast<int>(series.f.size()); ++n)
    if (series.f(n) >= x) return n;
  return std::nullopt;
}

}  // namespace rumor
