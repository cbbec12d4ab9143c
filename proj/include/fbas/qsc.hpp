#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbas/analysis.hpp"
#include "fbas/core.hpp"
#include "fbas/pipeline.hpp"
#include "fbas/preprocess.hpp"

namespace fbas {

/// Directed graph over prospective FBAS nodes. Self-loops and duplicate edges are dropped.
class TrustGraph {
 public:
  TrustGraph() = default;
  explicit TrustGraph(std::size_t node_count) : out_(node_count) {
    for (std::size_t i = 0; i < node_count; ++i) labels_.push_back(std::to_string(i));
  }

  /// Id of the node labelled `label`, adding it if needed.
  NodeId node(const std::string& label) {
    auto [it, inserted] = by_label_.emplace(label, static_cast<NodeId>(labels_.size()));
    if (inserted) {
      labels_.push_back(label);
      out_.emplace_back();
    }
    return it->second;
  }

  void add_edge(NodeId from, NodeId to) {
    if (from == to) return;
    auto& targets = out_.at(from);
    auto pos = std::lower_bound(targets.begin(), targets.end(), to);
    if (pos == targets.end() || *pos != to) targets.insert(pos, to);
  }

  void add_undirected_edge(NodeId a, NodeId b) {
    add_edge(a, b);
    add_edge(b, a);
  }

  std::size_t node_count() const { return out_.size(); }
  const std::vector<NodeId>& outlinks(NodeId v) const { return out_.at(v); }
  const Digraph& adjacency() const { return out_; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& t : out_) n += t.size();
    return n;
  }

  static TrustGraph complete(std::size_t n) {
    TrustGraph g(n);
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = 0; b < n; ++b) g.add_edge(a, b);
    }
    return g;
  }

 private:
  Digraph out_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> by_label_;
};

enum class QscPolicyKind { SuperSafe, IdealOpen, AllNeighbors, HigherTierNeighbors };

struct QscPolicy {
  QscPolicyKind kind = QscPolicyKind::IdealOpen;
  /// Rank factor separating tiers, used by HigherTierNeighbors.
  double tier_ratio = 2.0;
};

/// Smallest t with 3(n - t) < n + 2, i.e. n - floor((n - 1) / 3); 2f + 1 for n = 3f + 1.
inline std::uint32_t relaxed_bft_threshold(std::size_t n) {
  if (n == 0) throw std::invalid_argument("threshold needs at least one node");
  return static_cast<std::uint32_t>(n - (n - 1) / 3);
}

namespace detail {

inline QuorumSet flat_quorum_set(std::vector<NodeId> members) {
  std::sort(members.begin(), members.end());
  std::uint32_t t = relaxed_bft_threshold(members.size());
  return QuorumSet{std::move(members), {}, t};
}

inline std::vector<NodeId> iota_ids(std::size_t n) {
  std::vector<NodeId> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
  return ids;
}

}  // namespace detail

/// Higher-tier and peer neighbours of `v` under the given ranking.
struct TierNeighbors {
  std::vector<NodeId> higher;
  std::vector<NodeId> peers;
};

inline TierNeighbors tier_neighbors(const TrustGraph& graph, const std::vector<double>& rank, NodeId v,
                                    double ratio) {
  TierNeighbors out;
  for (NodeId w : graph.outlinks(v)) {
    if (rank[w] >= ratio * rank[v]) {
      out.higher.push_back(w);
    } else if (rank[w] > rank[v] / ratio) {
      out.peers.push_back(w);
    }
  }
  return out;
}

/// Builds one quorum set per graph node according to `policy`.
inline Fbas apply_policy(const TrustGraph& graph, const QscPolicy& policy) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw std::invalid_argument("trust graph is empty");
  if (!(policy.tier_ratio > 1.0)) throw std::invalid_argument("tier ratio must exceed 1");

  std::vector<Node> nodes(n);
  for (NodeId v = 0; v < n; ++v) nodes[v].public_key = graph.labels()[v];

  switch (policy.kind) {
    case QscPolicyKind::SuperSafe: {
      QuorumSet qs{detail::iota_ids(n), {}, static_cast<std::uint32_t>(n)};
      for (auto& node : nodes) node.quorum_set = qs;
      break;
    }
    case QscPolicyKind::IdealOpen: {
      QuorumSet qs = detail::flat_quorum_set(detail::iota_ids(n));
      for (auto& node : nodes) node.quorum_set = qs;
      break;
    }
    case QscPolicyKind::AllNeighbors:
      for (NodeId v = 0; v < n; ++v) {
        std::vector<NodeId> members = graph.outlinks(v);
        members.push_back(v);
        nodes[v].quorum_set = detail::flat_quorum_set(std::move(members));
      }
      break;
    case QscPolicyKind::HigherTierNeighbors: {
      std::vector<double> rank = pagerank(graph.adjacency(), 1.0);
      for (NodeId v = 0; v < n; ++v) {
        TierNeighbors tn = tier_neighbors(graph, rank, v, policy.tier_ratio);
        std::vector<NodeId> members = tn.higher.empty() ? tn.peers : tn.higher;
        members.push_back(v);
        nodes[v].quorum_set = detail::flat_quorum_set(std::move(members));
      }
      break;
    }
  }
  return Fbas(std::move(nodes));
}

/// Removes nodes that form a quorum on their own and appear in nobody else's quorum set.
inline Fbas drop_isolated_self_quorums(const Fbas& fbas) {
  std::vector<std::size_t> references(fbas.size(), 0);
  for (NodeId v = 0; v < fbas.size(); ++v) {
    for (NodeId w : fbas.quorum_set(v).mentioned_nodes()) {
      if (w != v) ++references[w];
    }
  }
  NodeIdSet drop;
  for (NodeId v = 0; v < fbas.size(); ++v) {
    if (references[v] == 0 && satisfies(NodeIdSet{v}, fbas.quorum_set(v))) drop.insert(v);
  }
  return drop.empty() ? fbas : without_nodes(fbas, drop);
}

/// Policy, then the self-quorum filter, then the full analysis.
inline AnalysisResult simulate_and_analyze(const TrustGraph& graph, const QscPolicy& policy,
                                           const AnalysisOptions& options = {}) {
  Fbas fbas = drop_isolated_self_quorums(apply_policy(graph, policy));
  AnalysisResult r = analyze(fbas, options);
  std::size_t dropped = graph.node_count() - fbas.size();
  if (dropped > 0) r.warnings.push_back(std::to_string(dropped) + " isolated one-node quorums filtered out");
  return r;
}

/// m nodes sharing (V, ∅, relaxed_bft_threshold(m)).
inline Fbas generate_flat_topology(std::size_t m) {
  if (m == 0) throw std::invalid_argument("flat topology needs at least one node");
  QuorumSet qs = detail::flat_quorum_set(detail::iota_ids(m));
  std::vector<Node> nodes;
  for (NodeId v = 0; v < m; ++v) nodes.push_back({"n" + std::to_string(v), qs});
  return Fbas(std::move(nodes));
}

/// Three nodes per organization, each organization a 2-of-3 inner set, and
/// relaxed_bft_threshold(orgs) of the organizations required.
inline Fbas generate_stellar_like_topology(std::size_t orgs) {
  if (orgs == 0) throw std::invalid_argument("stellar-like topology needs at least one organization");
  QuorumSet qs;
  qs.threshold = relaxed_bft_threshold(orgs);
  for (std::size_t o = 0; o < orgs; ++o) {
    NodeId base = static_cast<NodeId>(3 * o);
    qs.inner_quorum_sets.push_back(QuorumSet{{base, base + 1, base + 2}, {}, 2});
  }
  std::vector<Node> nodes;
  for (std::size_t o = 0; o < orgs; ++o) {
    for (int k = 0; k < 3; ++k) nodes.push_back({"org" + std::to_string(o) + "-" + std::to_string(k), qs});
  }
  return Fbas(std::move(nodes));
}

/// Random quorum sets of depth at most two, for testing and experiments.
/// Identical seeds give identical FBASs.
inline Fbas generate_random_topology(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random topology needs at least one node");
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto sample = [&](std::size_t k) {
    std::vector<NodeId> all = detail::iota_ids(n);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(k, n));
    std::sort(all.begin(), all.end());
    return all;
  };
  std::vector<Node> nodes;
  for (NodeId v = 0; v < n; ++v) {
    QuorumSet qs;
    qs.validators = sample(pick(1, n));
    std::size_t inner = pick(0, 2);
    for (std::size_t i = 0; i < inner; ++i) {
      QuorumSet sub{sample(pick(1, std::min<std::size_t>(n, 3))), {}, 0};
      sub.threshold = static_cast<std::uint32_t>(pick(1, sub.validators.size()));
      qs.inner_quorum_sets.push_back(std::move(sub));
    }
    qs.threshold = static_cast<std::uint32_t>(pick(1, qs.element_count()));
    nodes.push_back({"n" + std::to_string(v), std::move(qs)});
  }
  return Fbas(std::move(nodes));
}

}  // namespace fbas
