#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbas/compiled.hpp"
#include "fbas/core.hpp"
#include "fbas/family.hpp"
#include "fbas/preprocess.hpp"

namespace fbas {

/// Counts search-tree nodes visited by the enumerations. Deterministic, so it
/// doubles as a machine-independent measure of search effort.
struct SearchStats {
  std::uint64_t visited = 0;
};

namespace detail {

/// Compact engine over `members`, with local ids following rank order. The
/// next branching node of a search is then simply `avail.first()`.
inline CompiledFbas ranked_engine(const Fbas& fbas, const NodeIdSet& members, const RankedNodes& ranked) {
  return CompiledFbas(fbas, ranked_subset(ranked, members));
}

inline void count(SearchStats* stats) {
  if (stats != nullptr) ++stats->visited;
}

template <class Visit>
class QuorumSearch {
 public:
  QuorumSearch(const CompiledFbas& engine, Visit& visit, SearchStats* stats)
      : engine_(engine), visit_(visit), stats_(stats) {}

  /// Returns false once the visitor asked to stop.
  bool run() {
    step(NodeIdSet(), engine_.all());
    return !stopped_;
  }

 private:
  void step(const NodeIdSet& chosen, NodeIdSet avail) {
    if (stopped_) return;
    count(stats_);
    if (!chosen.empty() && engine_.all_satisfied(chosen, chosen)) {
      if (is_minimal(chosen) && !visit_(engine_.to_global(chosen))) stopped_ = true;
      return;
    }
    // Any quorum extending `chosen` lies inside the greatest quorum of chosen ∪ avail.
    NodeIdSet reachable = engine_.greatest_quorum(chosen | avail);
    if (!chosen.is_subset_of(reachable)) return;
    avail &= reachable;
    if (avail.empty()) return;
    // Every quorum here strictly contains `chosen`; dead weight rules out minimality.
    if (!chosen.empty() && engine_.has_dead_weight(chosen, chosen | avail)) return;
    NodeId next = avail.first();
    avail.erase(next);
    step(chosen.with(next), avail);
    step(chosen, std::move(avail));
  }

  bool is_minimal(const NodeIdSet& quorum) const {
    for (NodeId v : quorum) {
      if (engine_.contains_quorum(quorum.without(v))) return false;
    }
    return true;
  }

  const CompiledFbas& engine_;
  Visit& visit_;
  SearchStats* stats_;
  bool stopped_ = false;
};

class BlockingSearch {
 public:
  BlockingSearch(const CompiledFbas& engine, SearchStats* stats) : engine_(engine), stats_(stats) {}

  std::vector<NodeIdSet> run() {
    step(NodeIdSet(), engine_.all());
    return std::move(found_);
  }

 private:
  void step(const NodeIdSet& blocking, NodeIdSet avail) {
    count(stats_);
    const NodeIdSet all = engine_.all();
    NodeIdSet surviving = engine_.greatest_quorum(all - blocking);
    if (surviving.empty()) {
      if (is_minimal(blocking)) found_.push_back(engine_.to_global(blocking));
      return;
    }
    // Only members of the surviving quorum are worth adding.
    avail &= surviving;
    if (avail.empty()) return;
    if (engine_.contains_quorum(all - (blocking | avail))) return;
    NodeId next = avail.first();
    avail.erase(next);
    step(blocking.with(next), avail);
    step(blocking, std::move(avail));
  }

  bool is_minimal(const NodeIdSet& blocking) const {
    const NodeIdSet all = engine_.all();
    for (NodeId v : blocking) {
      if (!engine_.contains_quorum(all - blocking.without(v))) return false;
    }
    return true;
  }

  const CompiledFbas& engine_;
  SearchStats* stats_;
  std::vector<NodeIdSet> found_;
};

/// Candidate splitting sets over the top tier. `quorums` are the minimal
/// quorums in local ids; each search node carries the indices of the minimal
/// quorums that contain the current candidate.
class SplittingSearch {
 public:
  SplittingSearch(const CompiledFbas& engine, std::vector<NodeIdSet> quorums, SearchStats* stats)
      : engine_(engine), quorums_(std::move(quorums)), stats_(stats), greatest_(engine.greatest_quorum(engine.all())) {}

  std::vector<NodeIdSet> run() {
    std::vector<std::uint32_t> all(quorums_.size());
    NodeIdSet reach;
    for (std::uint32_t i = 0; i < all.size(); ++i) {
      all[i] = i;
      reach |= quorums_[i];
    }
    step(NodeIdSet(), reach, all);
    return std::move(found_);
  }

 private:
  /// `avail` is already restricted to the union of the quorums in `containing`.
  void step(const NodeIdSet& split, NodeIdSet avail, const std::vector<std::uint32_t>& containing) {
    count(stats_);
    if (containing.size() < 2) return;
    if (!split.empty() && engine_.all_pair_capable(split, split) && splits(split, containing)) {
      found_.push_back(engine_.to_global(split));
      return;
    }
    if (avail.empty()) return;
    if (!engine_.all_pair_capable(split, split | avail)) return;

    NodeId next = avail.first();
    avail.erase(next);
    std::vector<std::uint32_t> with;
    NodeIdSet with_reach;
    for (auto i : containing) {
      if (quorums_[i].contains(next)) {
        with.push_back(i);
        with_reach |= quorums_[i];
      }
    }
    step(split.with(next), avail & with_reach, with);

    if (split.empty()) {
      std::vector<std::uint32_t> without;
      NodeIdSet without_reach;
      for (auto i : containing) {
        if (quorums_[i].intersects(avail)) {
          without.push_back(i);
          without_reach |= quorums_[i];
        }
      }
      step(split, avail & without_reach, without);
    } else {
      step(split, std::move(avail), containing);
    }
  }

  /// Some minimal quorum U1 ⊇ split has a distinct partner quorum meeting it only inside `split`.
  bool splits(const NodeIdSet& split, const std::vector<std::uint32_t>& containing) const {
    const NodeIdSet all = engine_.all();
    for (auto i : containing) {
      const NodeIdSet& q = quorums_[i];
      if (q.is_subset_of(split)) {
        // U1 = q itself; any other quorum will do.
        if (greatest_ != q) return true;
        continue;
      }
      if (engine_.contains_quorum((all - q) | split)) return true;
    }
    return false;
  }

  const CompiledFbas& engine_;
  std::vector<NodeIdSet> quorums_;
  SearchStats* stats_;
  NodeIdSet greatest_;
  std::vector<NodeIdSet> found_;
};

inline NodeSetFamily to_local(const NodeSetFamily& family, const CompiledFbas& engine) {
  std::unordered_map<NodeId, NodeId> local;
  for (std::size_t i = 0; i < engine.size(); ++i) local.emplace(engine.global_id(static_cast<NodeId>(i)), static_cast<NodeId>(i));
  std::vector<NodeIdSet> out;
  out.reserve(family.size());
  for (const auto& s : family) {
    NodeIdSet l;
    for (NodeId v : s) l.insert(local.at(v));
    out.push_back(std::move(l));
  }
  return NodeSetFamily(std::move(out));
}

}  // namespace detail

/// Streams every minimal quorum (global ids) to `visit`, which returns false to
/// stop early. Each strongly connected component that contains a quorum is
/// searched on its own, since no minimal quorum spans two components.
/// Returns false iff the visitor stopped the enumeration.
template <class Visit>
bool for_each_minimal_quorum(const Fbas& fbas, Visit&& visit, const RankedNodes& ranked,
                             SearchStats* stats = nullptr) {
  for (const auto& component : component_lists(heuristic_graph(fbas))) {
    NodeIdSet members = NodeIdSet::from_range(component);
    CompiledFbas engine = detail::ranked_engine(fbas, members, ranked);
    if (!engine.contains_quorum(engine.all())) continue;
    detail::QuorumSearch search(engine, visit, stats);
    if (!search.run()) return false;
  }
  return true;
}

template <class Visit>
bool for_each_minimal_quorum(const Fbas& fbas, Visit&& visit, SearchStats* stats = nullptr) {
  return for_each_minimal_quorum(fbas, std::forward<Visit>(visit), rank_nodes(fbas), stats);
}

inline NodeSetFamily find_minimal_quorums(const Fbas& fbas, const RankedNodes& ranked, SearchStats* stats = nullptr) {
  std::vector<NodeIdSet> found;
  for_each_minimal_quorum(
      fbas,
      [&](const NodeIdSet& q) {
        found.push_back(q);
        return true;
      },
      ranked, stats);
  return NodeSetFamily(std::move(found));
}

inline NodeSetFamily find_minimal_quorums(const Fbas& fbas, SearchStats* stats = nullptr) {
  return find_minimal_quorums(fbas, rank_nodes(fbas), stats);
}

/// Union of all minimal quorums.
inline NodeIdSet top_tier(const NodeSetFamily& minimal_quorums) { return minimal_quorums.members(); }

/// Every pair of minimal quorums shares a node.
inline bool all_pairs_intersect(const NodeSetFamily& minimal_quorums) {
  const auto& qs = minimal_quorums.sets();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    for (std::size_t j = i + 1; j < qs.size(); ++j) {
      if (!qs[i].intersects(qs[j])) return false;
    }
  }
  return true;
}

/// No minimal quorum leaves room for a quorum in the rest of the population.
inline bool no_quorum_in_complements(const NodeSetFamily& minimal_quorums, const Fbas& fbas) {
  NodeIdSet tier = top_tier(minimal_quorums);
  CompiledFbas engine(fbas, tier.to_vector());
  std::unordered_map<NodeId, NodeId> local;
  for (std::size_t i = 0; i < engine.size(); ++i) local.emplace(engine.global_id(static_cast<NodeId>(i)), static_cast<NodeId>(i));
  const NodeIdSet all = engine.all();
  for (const auto& q : minimal_quorums) {
    NodeIdSet rest = all;
    for (NodeId v : q) rest.erase(local.at(v));
    if (engine.contains_quorum(rest)) return false;
  }
  return true;
}

/// Sufficient condition: each minimal quorum holds more than half of the top tier.
inline bool majority_shortcut_holds(const NodeSetFamily& minimal_quorums) {
  std::size_t tier = top_tier(minimal_quorums).size();
  for (const auto& q : minimal_quorums) {
    if (2 * q.size() <= tier) return false;
  }
  return true;
}

/// Quorum intersection by testing all pairs of minimal quorums.
inline bool has_quorum_intersection_pairwise(const Fbas& fbas) {
  return all_pairs_intersect(find_minimal_quorums(fbas));
}

/// Quorum intersection by checking, for each minimal quorum M as it is found,
/// that the rest of the population holds no quorum. Stops at the first witness.
inline bool has_quorum_intersection_complement(const Fbas& fbas) {
  CompiledFbas engine(fbas);
  const NodeIdSet all = fbas.all_nodes();
  return for_each_minimal_quorum(fbas, [&](const NodeIdSet& q) { return !engine.contains_quorum(all - q); });
}

inline bool has_quorum_intersection(const Fbas& fbas) { return has_quorum_intersection_complement(fbas); }

/// Minimal blocking sets restricted to `universe`, which must contain every
/// quorum of the FBAS (the top tier or the relevant nodes will do).
inline NodeSetFamily minimal_blocking_sets_within(const Fbas& fbas, const NodeIdSet& universe,
                                                  const RankedNodes& ranked, SearchStats* stats = nullptr) {
  CompiledFbas engine = detail::ranked_engine(fbas, universe, ranked);
  return NodeSetFamily(detail::BlockingSearch(engine, stats).run());
}

/// Minimal blocking sets as the minimal sets meeting every minimal quorum.
inline NodeSetFamily minimal_blocking_sets_from(const NodeSetFamily& minimal_quorums) {
  return minimal_hitting_sets(minimal_quorums);
}

/// All minimal node sets whose removal leaves no quorum. {∅} when the FBAS has no quorum.
inline NodeSetFamily find_minimal_blocking_sets(const Fbas& fbas, SearchStats* stats = nullptr) {
  RankedNodes ranked = rank_nodes(fbas);
  NodeSetFamily quorums = find_minimal_quorums(fbas, ranked);
  return minimal_blocking_sets_within(fbas, top_tier(quorums), ranked, stats);
}

/// Minimal splitting sets, given the minimal quorums and whether they intersect.
///
/// Without intersection the family is {∅}. With a single minimal quorum M it
/// is {M} if some other quorum exists and empty otherwise. In general it is
/// searched over the top tier.
inline NodeSetFamily minimal_splitting_sets_from(const Fbas& fbas, const NodeSetFamily& minimal_quorums,
                                                 bool intersecting, const RankedNodes& ranked,
                                                 SearchStats* stats = nullptr) {
  if (!intersecting) return NodeSetFamily{NodeIdSet()};
  if (minimal_quorums.empty()) return {};
  if (minimal_quorums.size() == 1) {
    const NodeIdSet& only = minimal_quorums.sets().front();
    if (greatest_quorum(fbas.all_nodes(), fbas) != only) return NodeSetFamily{only};
    return {};
  }
  CompiledFbas engine = detail::ranked_engine(fbas, top_tier(minimal_quorums), ranked);
  NodeSetFamily local = detail::to_local(minimal_quorums, engine);
  detail::SplittingSearch search(engine, local.sets(), stats);
  return reduce_to_minimal_sets(NodeSetFamily(search.run()));
}

/// All minimal node sets whose compromise could let two distinct quorums intersect only inside them.
inline NodeSetFamily find_minimal_splitting_sets(const Fbas& fbas, SearchStats* stats = nullptr) {
  RankedNodes ranked = rank_nodes(fbas);
  NodeSetFamily quorums = find_minimal_quorums(fbas, ranked);
  bool intersecting = no_quorum_in_complements(quorums, fbas);
  return minimal_splitting_sets_from(fbas, quorums, intersecting, ranked, stats);
}

/// Copy of `fbas` with `deleted` removed from the population and from every
/// quorum set, thresholds unchanged. Models nodes whose safety is not
/// guaranteed: they may say anything, so nobody counts on them.
inline Fbas without_nodes(const Fbas& fbas, const NodeIdSet& deleted) {
  std::vector<NodeId> new_id(fbas.size(), 0);
  NodeId next = 0;
  for (NodeId v = 0; v < fbas.size(); ++v) {
    if (!deleted.contains(v)) new_id[v] = next++;
  }
  std::function<QuorumSet(const QuorumSet&)> remap = [&](const QuorumSet& qs) {
    QuorumSet out;
    out.threshold = qs.threshold;
    for (NodeId v : qs.validators) {
      if (!deleted.contains(v)) out.validators.push_back(new_id[v]);
    }
    for (const auto& inner : qs.inner_quorum_sets) out.inner_quorum_sets.push_back(remap(inner));
    return out;
  };
  std::vector<Node> nodes;
  for (NodeId v = 0; v < fbas.size(); ++v) {
    if (!deleted.contains(v)) nodes.push_back({fbas.name(v), remap(fbas.quorum_set(v))});
  }
  return Fbas(std::move(nodes));
}

/// Copy of `fbas` where the `failed` nodes never take part in a quorum.
/// Models nodes that crashed: they stay in everyone's quorum sets.
inline Fbas with_failed_nodes(const Fbas& fbas, const NodeIdSet& failed) {
  std::vector<Node> nodes = fbas.nodes();
  for (NodeId v : failed) {
    if (v < nodes.size()) nodes[v].quorum_set = QuorumSet::unsatisfiable();
  }
  return Fbas(std::move(nodes));
}

}  // namespace fbas
