#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "rumor/netgen.hpp"
#include "rumor/network.hpp"
#include "rumor/params.hpp"
#include "rumor/rng.hpp"

namespace rumor {

/// Flattened channel table for one network. Every directed p2p edge and
/// every (member, group) pair is a send channel with a stable global id;
/// that id keys the counter-based trial draws, so outcomes do not depend
/// on traversal order and runs on the same network can share randomness.
struct SpreadIndex {
  std::vector<std::int64_t> p2p_begin;     // n_total+1 offsets into p2p_dst
  std::vector<int> p2p_dst;
  std::vector<std::int64_t> member_begin;  // n_total+1 offsets into member_group
  std::vector<int> member_group;
  std::int64_t p2p_channel_count = 0;

  static SpreadIndex build(const Network& net);
};

/// Burned individuals are absorbing; the USG set is fixed at initialization.
struct SpreadState {
  std::vector<std::uint8_t> burned;        // by individual id
  std::vector<int> burned_order;           // ids in the order they burned
  std::vector<std::uint8_t> usg;           // by individual id
  std::vector<std::uint8_t> group_burned;  // by group index
  int iteration = 0;

  std::int64_t burned_count() const {
    return static_cast<std::int64_t>(burned_order.size());
  }
};

/// Burned fraction of the connected population after iterations 0..horizon.
struct BurnSeries {
  Eigen::VectorXd f;
  std::int64_t normalizer = 0;  // size of the connected population

  int horizon() const { return static_cast<int>(f.size()) - 1; }
};

struct EnsembleSpec {
  int n_populations = 30;
  int runs_per_population = 50;
  int iterations = 100;
  std::uint64_t master_seed = 0;
};

struct EnsembleResult {
  BurnSeries mean;                          // grand average over all runs
  Eigen::VectorXd f_std;                    // sample std over all runs
  std::int64_t n_samples = 0;               // populations x runs
  std::vector<BurnSeries> population_means;
};

/// Each connected individual joins the seed independently with probability p_ii.
std::vector<int> select_seed(const Network& net, double p_ii, Rng& rng);

/// Each connected individual joins the USG independently with probability p_usg.
std::vector<int> select_usg(const Network& net, double p_usg, Rng& rng);

SpreadState make_state(const Network& net, const std::vector<int>& seed,
                       const std::vector<int>& usg);

/// One synchronous iteration: every individual burned at entry attempts each
/// of its channels with probability p_ip (1 for USG members); a successful
/// group send burns the whole group, a p2p send burns the destination.
void step(const Network& net, const SpreadIndex& index, SpreadState& state,
          double p_ip, const TrialSource& trials);

BurnSeries run(const Network& net, const SpreadIndex& index, const SpreadParams& params,
               const std::vector<int>& seed, const std::vector<int>& usg,
               std::uint64_t run_key, int iterations);

BurnSeries run(const Network& net, const SpreadParams& params,
               const std::vector<int>& seed, const std::vector<int>& usg,
               std::uint64_t run_key, int iterations);

/// Averages runs_per_population runs over n_populations freshly generated
/// populations. Seed and USG sets are drawn once per population and reused
/// across its runs. All child streams derive from spec.master_seed.
EnsembleResult run_ensemble(const PopulationConfig& config, const EnsembleSpec& spec,
                            const SpreadParams& params);

/// Smallest n with f(n) >= x, or nullopt if the series never reaches x.
std::optional<int> first_passage(const BurnSeries& series, double x);

}  // namespace rumor
