#include "rumor/network.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rumor {

std::string network_to_json(const Network& net) {
  nlohmann::json j;
  j["n_total"] = net.n_total;
  j["connected"] = net.connected;
  auto edges = nlohmann::json::array();
  for (int src = 0; src < net.n_total; ++src) {
    for (int dst : net.p2p_out[src]) edges.push_back({src, dst});
  }
  j["p2p"] = std::move(edges);
  j["groups"] = net.groups;
  return j.dump();
}

Network network_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Network net;
  net.n_total = j.at("n_total").get<int>();
  if (net.n_total < 0) throw std::invalid_argument("network: negative n_total");
  net.connected = j.at("connected").get<std::vector<int>>();
  net.p2p_out.assign(net.n_total, {});
  for (const auto& e : j.at("p2p")) {
    const int src = e.at(0).get<int>();
    const int dst = e.at(1).get<int>();
    if (src < 0 || src >= net.n_total || dst < 0 || dst >= net.n_total)
      throw std::invalid_argument("network: edge endpoint out of range");
    net.p2p_out[src].push_back(dst);
  }
  net.groups = j.at("groups").get<std::vector<std::vector<int>>>();
  for (const auto& g : net.groups) {
    for (int id : g) {
      if (id < 0 || id >= net.n_total)
        throw std::invalid_argument("network: group member out of range");
    }
  }
  return net;
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << network_to_json(net);
}

Network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return network_from_json(text);
}

}  // namespace rumor
