#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fbas/fbas.hpp"

namespace testing_support {

using fbas::NodeIdSet;
using fbas::NodeSetFamily;

inline std::string fixture_path(const std::string& name) { return std::string(FBAS_FIXTURES) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline fbas::Fbas load(const std::string& name) { return fbas::parse_nodes(read_fixture(name)); }

inline NodeSetFamily family(std::initializer_list<std::initializer_list<fbas::NodeId>> sets) {
  std::vector<NodeIdSet> out;
  for (auto s : sets) out.emplace_back(s);
  return NodeSetFamily(std::move(out));
}

inline fbas::QuorumSet flat(std::vector<fbas::NodeId> members, std::uint32_t t) { return {std::move(members), {}, t}; }

inline fbas::Fbas make_fbas(const std::vector<fbas::QuorumSet>& qsets) {
  std::vector<fbas::Node> nodes;
  for (std::size_t i = 0; i < qsets.size(); ++i) nodes.push_back({std::to_string(i), qsets[i]});
  return fbas::Fbas(std::move(nodes));
}

/// Random FBAS with flat or nested quorum sets, occasional zero thresholds,
/// repeated nodes across levels and nodes without any satisfiable quorum set.
class RandomFbas {
 public:
  explicit RandomFbas(std::uint64_t seed) : rng_(seed) {}

  fbas::Fbas operator()(std::size_t n) {
    std::vector<fbas::QuorumSet> qsets;
    const bool nested = coin(0.5);
    for (std::size_t v = 0; v < n; ++v) qsets.push_back(quorum_set(n, nested ? 2 : 0));
    return make_fbas(qsets);
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

  fbas::QuorumSet quorum_set(std::size_t n, int depth) {
    fbas::QuorumSet qs;
    std::vector<fbas::NodeId> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<fbas::NodeId>(i);
    std::shuffle(all.begin(), all.end(), rng_);
    all.resize(pick(depth > 0 ? 0 : 1, std::min<std::size_t>(n, 5)));
    std::sort(all.begin(), all.end());
    qs.validators = all;
    if (depth > 0) {
      std::size_t inner = pick(qs.validators.empty() ? 1 : 0, 2);
      for (std::size_t i = 0; i < inner; ++i) qs.inner_quorum_sets.push_back(quorum_set(n, depth - 1));
    }
    std::size_t elements = qs.element_count();
    if (coin(0.03)) {
      qs.threshold = 0;
    } else if (coin(0.03)) {
      qs.threshold = static_cast<std::uint32_t>(elements + 1);
    } else {
      qs.threshold = static_cast<std::uint32_t>(pick(std::min<std::size_t>(1, elements), elements));
    }
    return qs;
  }

  std::mt19937_64 rng_;
};

}  // namespace testing_support
