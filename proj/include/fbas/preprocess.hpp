#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "fbas/compiled.hpp"
#include "fbas/core.hpp"

namespace fbas {

/// Adjacency lists; `out[v]` are the targets of v's outgoing edges, sorted.
using Digraph = std::vector<std::vector<NodeId>>;

/// Edge (v, w) iff w appears anywhere in Q(v), w != v.
inline Digraph heuristic_graph(const Fbas& fbas) {
  Digraph g(fbas.size());
  for (NodeId v = 0; v < fbas.size(); ++v) {
    for (NodeId w : fbas.quorum_set(v).mentioned_nodes()) {
      if (w != v) g[v].push_back(w);
    }
  }
  return g;
}

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order: a component is emitted only after every component it reaches.
inline std::vector<std::vector<NodeId>> component_lists(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> components;
  std::size_t counter = 0;

  struct Frame {
    NodeId v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;

  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_edge < g[f.v].size()) {
        NodeId w = g[f.v][f.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      NodeId v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<NodeId> component;
        NodeId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component.push_back(w);
        } while (w != v);
        std::sort(component.begin(), component.end());
        components.push_back(std::move(component));
      }
    }
  }
  return components;
}

inline std::vector<NodeIdSet> strongly_connected_components(const Digraph& g) {
  std::vector<NodeIdSet> out;
  for (const auto& c : component_lists(g)) out.push_back(NodeIdSet::from_range(c));
  return out;
}

inline std::vector<NodeIdSet> strongly_connected_components(const Fbas& fbas) {
  return strongly_connected_components(heuristic_graph(fbas));
}

/// Power-iteration PageRank. Dangling nodes spread their score uniformly.
/// Stops once no score moves by 1e-12 or after 1000 rounds. Without
/// teleportation (damping 1) each round averages with the previous scores so
/// that periodic graphs such as stars still converge.
inline std::vector<double> pagerank(const Digraph& g, double damping) {
  const std::size_t n = g.size();
  if (n == 0) return {};
  std::vector<double> score(n, 1.0 / static_cast<double>(n)), next(n);
  for (int round = 0; round < 1000; ++round) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (g[v].empty()) dangling += score[v];
    }
    double base = (1.0 - damping) / static_cast<double>(n) + damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t v = 0; v < n; ++v) {
      if (g[v].empty()) continue;
      double share = damping * score[v] / static_cast<double>(g[v].size());
      for (NodeId w : g[v]) next[w] += share;
    }
    if (damping >= 1.0) {
      for (std::size_t v = 0; v < n; ++v) next[v] = 0.5 * (next[v] + score[v]);
    }
    double delta = 0.0;
    for (std::size_t v = 0; v < n; ++v) delta = std::max(delta, std::abs(next[v] - score[v]));
    score.swap(next);
    if (delta < 1e-12) break;
  }
  return score;
}

struct RankedNodes {
  /// Descending score, ties by ascending id.
  std::vector<NodeId> order;
  std::vector<double> score;
};

inline RankedNodes rank_nodes(const Fbas& fbas, double damping = 0.85) {
  RankedNodes r;
  r.score = pagerank(heuristic_graph(fbas), damping);
  r.order.resize(fbas.size());
  std::iota(r.order.begin(), r.order.end(), NodeId{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](NodeId a, NodeId b) { return r.score[a] > r.score[b]; });
  return r;
}

/// Members of `subset` in rank order.
inline std::vector<NodeId> ranked_subset(const RankedNodes& ranked, const NodeIdSet& subset) {
  std::vector<NodeId> out;
  for (NodeId v : ranked.order) {
    if (subset.contains(v)) out.push_back(v);
  }
  return out;
}

struct SymmetricCluster {
  NodeIdSet members;
  QuorumSet shared_quorum_set;
};

/// Groups of nodes with structurally equal quorum sets whose shared quorum
/// set mentions exactly the group.
inline std::vector<SymmetricCluster> find_symmetric_clusters(const Fbas& fbas) {
  std::map<QuorumSet, NodeIdSet> groups;
  for (NodeId v = 0; v < fbas.size(); ++v) groups[fbas.quorum_set(v).normalized()].insert(v);
  std::vector<SymmetricCluster> out;
  for (auto& [qs, members] : groups) {
    if (qs.mentioned_nodes() == members) out.push_back({members, qs});
  }
  std::sort(out.begin(), out.end(),
            [](const SymmetricCluster& a, const SymmetricCluster& b) { return a.members < b.members; });
  return out;
}

/// Union of the strongly connected components that contain a quorum. Every
/// minimal quorum lies inside a single such component.
inline NodeIdSet reduce_to_relevant(const Fbas& fbas) {
  NodeIdSet relevant(fbas.size());
  for (const auto& component : component_lists(heuristic_graph(fbas))) {
    CompiledFbas engine(fbas, component);
    if (engine.contains_quorum(engine.all())) {
      for (NodeId v : component) relevant.insert(v);
    }
  }
  return relevant;
}

}  // namespace fbas
