#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbas/analysis.hpp"
#include "fbas/core.hpp"
#include "fbas/family.hpp"
#include "fbas/preprocess.hpp"
#include "fbas/symmetric.hpp"

namespace fbas {

enum class IntersectionAlgorithm { Pairwise, Complement };

struct AnalysisOptions {
  IntersectionAlgorithm intersection = IntersectionAlgorithm::Complement;
  bool symmetric_shortcuts = true;
  /// Skip blocking and splitting enumeration when the top tier is larger than this.
  std::optional<std::size_t> abort_above;
  double damping = 0.85;
  SearchStats* stats = nullptr;
};

struct AnalysisResult {
  /// Display name per id appearing in the families (public keys, or group names after a merge).
  std::vector<std::string> labels;
  NodeSetFamily minimal_quorums;
  bool has_quorum_intersection = true;
  NodeSetFamily minimal_blocking_sets;
  NodeSetFamily minimal_splitting_sets;
  NodeIdSet top_tier;
  FamilyStats quorum_stats;
  FamilyStats blocking_stats;
  FamilyStats splitting_stats;
  /// False when blocking and splitting sets were skipped because of the size limit.
  bool complete = true;
  bool used_symmetric_shortcut = false;
  std::vector<std::string> warnings;

  void update_statistics() {
    quorum_stats = family_stats(minimal_quorums);
    blocking_stats = family_stats(minimal_blocking_sets);
    splitting_stats = family_stats(minimal_splitting_sets);
  }
};

namespace detail {

/// The cluster holding every quorum, if there is exactly one such symmetric cluster.
inline std::optional<SymmetricCluster> symmetric_top_tier(const Fbas& fbas) {
  CompiledFbas engine(fbas);
  for (auto& cluster : find_symmetric_clusters(fbas)) {
    if (engine.contains_quorum(cluster.members) && !engine.contains_quorum(fbas.all_nodes() - cluster.members)) {
      return std::move(cluster);
    }
  }
  return std::nullopt;
}

inline void finish(AnalysisResult& r) {
  if (r.minimal_quorums.empty() && r.complete) {
    r.warnings.push_back("no quorums: quorum intersection holds vacuously");
  }
  if (!r.complete) {
    r.warnings.push_back("top tier of " + std::to_string(r.top_tier.size()) +
                         " nodes exceeds the size limit; blocking and splitting sets skipped");
  }
  r.update_statistics();
}

}  // namespace detail

/// Runs every analysis on `fbas`: minimal quorums, intersection, top tier,
/// minimal blocking and splitting sets.
inline AnalysisResult analyze(const Fbas& fbas, const AnalysisOptions& options = {}) {
  AnalysisResult r;
  r.labels = fbas.names();

  if (options.symmetric_shortcuts) {
    if (auto cluster = detail::symmetric_top_tier(fbas)) {
      SymmetricAnalysis s = symmetric_top_tier_analysis(fbas, *cluster, options.abort_above);
      r.used_symmetric_shortcut = true;
      r.minimal_quorums = std::move(s.minimal_quorums);
      r.minimal_blocking_sets = std::move(s.minimal_blocking_sets);
      r.minimal_splitting_sets = std::move(s.minimal_splitting_sets);
      r.has_quorum_intersection = s.has_quorum_intersection;
      r.top_tier = s.top_tier;
      r.complete = s.complete;
      detail::finish(r);
      return r;
    }
  }

  RankedNodes ranked = rank_nodes(fbas, options.damping);
  r.minimal_quorums = find_minimal_quorums(fbas, ranked, options.stats);
  r.top_tier = top_tier(r.minimal_quorums);
  if (options.intersection == IntersectionAlgorithm::Pairwise) {
    r.has_quorum_intersection = all_pairs_intersect(r.minimal_quorums);
  } else {
    r.has_quorum_intersection =
        majority_shortcut_holds(r.minimal_quorums) || no_quorum_in_complements(r.minimal_quorums, fbas);
  }

  if (options.abort_above && r.top_tier.size() > *options.abort_above) {
    r.complete = false;
    detail::finish(r);
    return r;
  }
  r.minimal_blocking_sets = minimal_blocking_sets_from(r.minimal_quorums);
  r.minimal_splitting_sets =
      minimal_splitting_sets_from(fbas, r.minimal_quorums, r.has_quorum_intersection, ranked, options.stats);
  detail::finish(r);
  return r;
}

/// Maps every family member-wise onto groups (ungrouped ids stay themselves),
/// then re-reduces each family to minimal sets.
///
/// New ids are assigned in order of first appearance when walking the old ids.
/// Throws std::invalid_argument if an id belongs to two groups.
inline AnalysisResult merge_families_by_group(const AnalysisResult& result, const std::vector<Grouping>& groups) {
  const std::size_t n = result.labels.size();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> group_of(n, kNone);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (NodeId v : groups[g].members) {
      if (v >= n) continue;
      if (group_of[v] != kNone && group_of[v] != g) {
        throw std::invalid_argument("node '" + result.labels[v] + "' belongs to groups '" +
                                    groups[group_of[v]].name + "' and '" + groups[g].name + "'");
      }
      group_of[v] = g;
    }
  }

  AnalysisResult out;
  std::vector<NodeId> new_id(n);
  std::map<std::size_t, NodeId> group_id;
  for (NodeId v = 0; v < n; ++v) {
    if (group_of[v] == kNone) {
      new_id[v] = static_cast<NodeId>(out.labels.size());
      out.labels.push_back(result.labels[v]);
      continue;
    }
    auto [it, inserted] = group_id.emplace(group_of[v], static_cast<NodeId>(out.labels.size()));
    if (inserted) out.labels.push_back(groups[group_of[v]].name);
    new_id[v] = it->second;
  }

  auto map_set = [&](const NodeIdSet& s) {
    NodeIdSet m;
    for (NodeId v : s) m.insert(new_id[v]);
    return m;
  };
  auto map_family = [&](const NodeSetFamily& f) {
    std::vector<NodeIdSet> sets;
    for (const auto& s : f) sets.push_back(map_set(s));
    return reduce_to_minimal_sets(NodeSetFamily(std::move(sets)));
  };

  out.minimal_quorums = map_family(result.minimal_quorums);
  out.minimal_blocking_sets = map_family(result.minimal_blocking_sets);
  out.minimal_splitting_sets = map_family(result.minimal_splitting_sets);
  out.top_tier = map_set(result.top_tier);
  out.has_quorum_intersection = result.has_quorum_intersection;
  out.complete = result.complete;
  out.used_symmetric_shortcut = result.used_symmetric_shortcut;
  out.warnings = result.warnings;
  out.update_statistics();
  return out;
}

}  // namespace fbas
