#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "fbas/analysis.hpp"
#include "fbas/compiled.hpp"
#include "fbas/core.hpp"
#include "fbas/family.hpp"
#include "fbas/preprocess.hpp"

namespace fbas {

/// Results for an FBAS whose only quorums lie in one symmetric cluster.
struct SymmetricAnalysis {
  NodeSetFamily minimal_quorums;
  NodeSetFamily minimal_blocking_sets;
  NodeSetFamily minimal_splitting_sets;
  bool has_quorum_intersection = true;
  NodeIdSet top_tier;
  /// False when the size limit was hit; only the top tier and intersection are then filled in.
  bool complete = true;
};

namespace detail {

using SetList = std::vector<NodeIdSet>;

inline SetList cross(const SetList& a, const SetList& b) {
  SetList out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x | y);
  }
  return NodeSetFamily(std::move(out)).sets();
}

/// Every choice of k families from `families`, each choice contributing the
/// unions of one set per chosen family.
inline void choose_products(const std::vector<SetList>& families, std::size_t k, std::size_t start,
                            const SetList& partial, SetList& out) {
  if (k == 0) {
    out.insert(out.end(), partial.begin(), partial.end());
    return;
  }
  for (std::size_t i = start; i + k <= families.size(); ++i) {
    choose_products(families, k - 1, i + 1, cross(partial, families[i]), out);
  }
}

inline SetList choose_products(const std::vector<SetList>& families, std::size_t k) {
  SetList out;
  choose_products(families, k, 0, SetList{NodeIdSet()}, out);
  return reduce_to_minimal_sets(NodeSetFamily(std::move(out))).sets();
}

/// Per-element families of a quorum set: one entry per validator, then one per inner set.
template <class Element>
std::vector<SetList> element_families(const QuorumSet& qs, Element&& of_inner) {
  std::vector<SetList> out;
  for (NodeId v : qs.validators) out.push_back({NodeIdSet{v}});
  for (const auto& inner : qs.inner_quorum_sets) out.push_back(of_inner(inner));
  return out;
}

/// Minimal node sets satisfying `qs`.
inline SetList minimal_satisfying(const QuorumSet& qs) {
  if (qs.threshold == 0) return {NodeIdSet()};
  auto families = element_families(qs, minimal_satisfying);
  std::erase_if(families, [](const SetList& f) { return f.empty(); });
  if (qs.threshold > families.size()) return {};
  return choose_products(families, qs.threshold);
}

/// Minimal node sets whose absence leaves `qs` unsatisfiable.
inline SetList minimal_blocking(const QuorumSet& qs) {
  if (qs.threshold == 0) return {};
  auto families = element_families(qs, minimal_blocking);
  std::size_t n = families.size();
  if (qs.threshold > n) return {NodeIdSet()};
  std::erase_if(families, [](const SetList& f) { return f.empty(); });
  // n - t + 1 elements must fail; elements that can never fail do not help.
  std::size_t need = n - qs.threshold + 1;
  if (need > families.size()) return {};
  return choose_products(families, need);
}

/// Minimal sets S such that `qs` has two satisfying sets overlapping only inside S.
inline SetList minimal_pair_overlaps(const QuorumSet& qs) {
  if (qs.threshold == 0) return {NodeIdSet()};
  std::vector<SetList> families;
  for (NodeId v : qs.validators) families.push_back({NodeIdSet{v}});
  for (const auto& inner : qs.inner_quorum_sets) {
    if (!minimal_satisfying(inner).empty()) families.push_back(minimal_pair_overlaps(inner));
  }
  std::size_t n = families.size();
  if (qs.threshold > n) return {};
  std::size_t shared = 2 * qs.threshold > n ? 2 * qs.threshold - n : 0;
  return choose_products(families, shared);
}

/// As minimal_pair_overlaps, but the two satisfying sets must differ.
inline SetList minimal_distinct_pair_overlaps(const QuorumSet& qs) {
  std::vector<const QuorumSet*> usable_inner;
  for (const auto& inner : qs.inner_quorum_sets) {
    if (!minimal_satisfying(inner).empty()) usable_inner.push_back(&inner);
  }
  std::size_t n = qs.validators.size() + usable_inner.size();
  if (qs.threshold == 0 || qs.threshold > n) return {};
  if (qs.threshold < n) return minimal_pair_overlaps(qs);
  // Every element is used by both sets, so they must differ inside one inner set.
  SetList shared_validators{NodeIdSet::from_range(qs.validators)};
  SetList out;
  for (std::size_t i = 0; i < usable_inner.size(); ++i) {
    SetList acc = cross(shared_validators, minimal_distinct_pair_overlaps(*usable_inner[i]));
    for (std::size_t j = 0; j < usable_inner.size() && !acc.empty(); ++j) {
      if (j != i) acc = cross(acc, minimal_pair_overlaps(*usable_inner[j]));
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }
  return reduce_to_minimal_sets(NodeSetFamily(std::move(out))).sets();
}

/// Nodes that appear in some minimal satisfying set.
inline NodeIdSet useful_nodes(const QuorumSet& qs) {
  NodeIdSet out;
  if (qs.threshold == 0) return out;
  std::size_t satisfiable = qs.validators.size();
  for (const auto& inner : qs.inner_quorum_sets) {
    if (!minimal_satisfying(inner).empty()) ++satisfiable;
  }
  if (qs.threshold > satisfiable) return out;
  for (NodeId v : qs.validators) out.insert(v);
  for (const auto& inner : qs.inner_quorum_sets) out |= useful_nodes(inner);
  return out;
}

}  // namespace detail

/// Closed-form analysis for an FBAS in which every quorum contains a node of
/// the cluster and all cluster members share one quorum set that mentions
/// exactly the cluster.
///
/// Throws std::invalid_argument if a quorum exists outside the cluster.
/// With `abort_above` set and a top tier larger than that, the families are
/// left empty and `complete` is false.
inline SymmetricAnalysis symmetric_top_tier_analysis(const Fbas& fbas, const SymmetricCluster& cluster,
                                                     std::optional<std::size_t> abort_above = std::nullopt) {
  CompiledFbas engine(fbas);
  if (engine.contains_quorum(fbas.all_nodes() - cluster.members)) {
    throw std::invalid_argument("a quorum exists outside the symmetric cluster");
  }
  const QuorumSet& qs = cluster.shared_quorum_set;
  const bool repeated = qs.has_repeated_nodes();
  // Satisfied without any node, e.g. by a zero threshold somewhere along the tree.
  const bool trivial = satisfies(NodeIdSet(), qs);
  SymmetricAnalysis out;

  if (trivial) {
    // Every single member is a quorum on its own.
    out.top_tier = cluster.members;
  } else {
    out.top_tier = detail::useful_nodes(qs);
  }

  if (abort_above && out.top_tier.size() > *abort_above) {
    out.complete = false;
    if (trivial) {
      out.has_quorum_intersection = cluster.members.size() <= 1;
    } else if (!repeated) {
      CompiledFbas local(fbas, cluster.members.to_vector());
      out.has_quorum_intersection = local.size() == 0 || !local.pair_capable(0, NodeIdSet());
    } else {
      out.has_quorum_intersection = no_quorum_in_complements(NodeSetFamily(detail::minimal_satisfying(qs)), fbas);
    }
    return out;
  }

  if (trivial) {
    std::vector<NodeIdSet> singletons;
    for (NodeId v : cluster.members) singletons.push_back(NodeIdSet{v});
    out.minimal_quorums = NodeSetFamily(std::move(singletons));
    out.minimal_blocking_sets = NodeSetFamily{cluster.members};
  } else {
    out.minimal_quorums = NodeSetFamily(detail::minimal_satisfying(qs));
    out.minimal_blocking_sets = out.minimal_quorums.empty() ? NodeSetFamily{NodeIdSet()}
                                                            : NodeSetFamily(detail::minimal_blocking(qs));
  }

  const std::size_t quorum_count = out.minimal_quorums.size();
  if (quorum_count <= 1 || trivial) {
    out.has_quorum_intersection = quorum_count <= 1;
    out.minimal_splitting_sets = minimal_splitting_sets_from(fbas, out.minimal_quorums, out.has_quorum_intersection,
                                                             rank_nodes(fbas));
    return out;
  }

  if (repeated) {
    // Minimal splitting sets are the minimal pairwise intersections of minimal quorums.
    std::vector<NodeIdSet> meets;
    const auto& mq = out.minimal_quorums.sets();
    for (std::size_t i = 0; i < mq.size(); ++i) {
      for (std::size_t j = i + 1; j < mq.size(); ++j) meets.push_back(mq[i] & mq[j]);
    }
    out.minimal_splitting_sets = reduce_to_minimal_sets(NodeSetFamily(std::move(meets)));
  } else {
    out.minimal_splitting_sets = NodeSetFamily(detail::minimal_distinct_pair_overlaps(qs));
  }
  out.has_quorum_intersection = !out.minimal_splitting_sets.contains(NodeIdSet());
  if (!out.has_quorum_intersection) out.minimal_splitting_sets = NodeSetFamily{NodeIdSet()};
  return out;
}

}  // namespace fbas
