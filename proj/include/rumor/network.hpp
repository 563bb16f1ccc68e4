#pragma once

#include <string>
#include <vector>

namespace rumor {

/// A messaging network over a partially connected population: directed
/// person-to-person links plus multi-member groups where one send reaches
/// every member at once. Ids are 0-based and dense in [0, n_total).
struct Network {
  int n_total = 0;
  std::vector<int> connected;             // sorted ids of connected individuals
  std::vector<std::vector<int>> p2p_out;  // per-id out-neighbors, sorted
  std::vector<std::vector<int>> groups;   // member ids per group, sorted

  std::size_t p2p_edge_count() const {
    std::size_t n = 0;
    for (const auto& out : p2p_out) n += out.size();
    return n;
  }
};

/// Canonical JSON form: {n_total, connected:[ids], p2p:[[src,dst],...],
/// groups:[[ids],...]}. Round-trips byte-identically for a fixed Network.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace rumor
