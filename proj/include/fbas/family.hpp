#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <unordered_set>
#include <vector>

#include "fbas/node_set.hpp"

namespace fbas {

/// A set of node sets, kept sorted (lexicographic by member list) and free of duplicates.
class NodeSetFamily {
 public:
  NodeSetFamily() = default;
  explicit NodeSetFamily(std::vector<NodeIdSet> sets) : sets_(std::move(sets)) { normalize(); }
  NodeSetFamily(std::initializer_list<NodeIdSet> sets) : sets_(sets) { normalize(); }

  const std::vector<NodeIdSet>& sets() const { return sets_; }
  std::size_t size() const { return sets_.size(); }
  bool empty() const { return sets_.empty(); }
  auto begin() const { return sets_.begin(); }
  auto end() const { return sets_.end(); }

  bool contains(const NodeIdSet& s) const { return std::binary_search(sets_.begin(), sets_.end(), s); }

  /// Union of all member sets.
  NodeIdSet members() const {
    NodeIdSet out;
    for (const auto& s : sets_) out |= s;
    return out;
  }

  friend bool operator==(const NodeSetFamily&, const NodeSetFamily&) = default;

 private:
  void normalize() {
    std::sort(sets_.begin(), sets_.end());
    sets_.erase(std::unique(sets_.begin(), sets_.end()), sets_.end());
  }

  std::vector<NodeIdSet> sets_;
};

namespace detail {

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > (std::size_t{1} << 40)) return r;  // large enough to never be chosen
  }
  return r;
}

/// Calls visit(sub) for each subset of `members` with exactly `size` elements until it returns true.
template <class Visit>
bool any_subset_of_size(const std::vector<NodeId>& members, std::size_t size, std::size_t start, NodeIdSet& sub,
                        Visit& visit) {
  if (size == 0) return visit(sub);
  for (std::size_t i = start; i + size <= members.size(); ++i) {
    sub.insert(members[i]);
    bool hit = any_subset_of_size(members, size - 1, i + 1, sub, visit);
    sub.erase(members[i]);
    if (hit) return true;
  }
  return false;
}

}  // namespace detail

/// Keeps exactly the sets that have no proper subset in the family.
///
/// Candidates are visited by increasing size and only compared against kept
/// sets that are strictly smaller, either by scanning them or by looking up
/// the candidate's subsets of each kept size, whichever is cheaper.
inline NodeSetFamily reduce_to_minimal_sets(const NodeSetFamily& family) {
  std::vector<NodeIdSet> by_size(family.begin(), family.end());
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const NodeIdSet& a, const NodeIdSet& b) { return a.size() < b.size(); });
  std::vector<NodeIdSet> kept;
  std::unordered_set<NodeIdSet, NodeIdSetHash> kept_lookup;
  std::map<std::size_t, std::size_t> kept_sizes;  // cardinality -> number kept

  std::size_t smaller = 0;  // kept sets strictly smaller than the current candidate
  std::size_t current_size = 0;
  for (const auto& candidate : by_size) {
    const std::size_t k = candidate.size();
    if (k != current_size) {
      current_size = k;
      smaller = kept.size();
    }
    bool dominated = false;
    if (smaller > 0) {
      std::size_t lookups = 0;
      for (auto [size, count] : kept_sizes) {
        if (size < k) lookups += detail::binomial(k, size);
      }
      if (lookups < smaller) {
        std::vector<NodeId> members = candidate.to_vector();
        auto hit = [&](const NodeIdSet& sub) { return kept_lookup.count(sub) > 0; };
        NodeIdSet sub;
        for (auto [size, count] : kept_sizes) {
          if (size >= k) break;
          if (detail::any_subset_of_size(members, size, 0, sub, hit)) {
            dominated = true;
            break;
          }
        }
      } else {
        for (std::size_t i = 0; i < smaller; ++i) {
          if (kept[i].is_subset_of(candidate)) {
            dominated = true;
            break;
          }
        }
      }
    }
    if (!dominated) {
      kept.push_back(candidate);
      kept_lookup.insert(candidate);
      ++kept_sizes[k];
    }
  }
  return NodeSetFamily(std::move(kept));
}

/// Cardinality distribution of a family.
struct FamilyStats {
  std::map<std::size_t, std::size_t> histogram;
  std::size_t count = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;

  friend bool operator==(const FamilyStats&, const FamilyStats&) = default;
};

inline FamilyStats family_stats(const NodeSetFamily& family) {
  FamilyStats st;
  st.count = family.size();
  if (family.empty()) return st;
  std::size_t total = 0;
  st.min = static_cast<std::size_t>(-1);
  for (const auto& s : family) {
    std::size_t k = s.size();
    ++st.histogram[k];
    total += k;
    st.min = std::min(st.min, k);
    st.max = std::max(st.max, k);
  }
  st.mean = static_cast<double>(total) / static_cast<double>(st.count);
  return st;
}

}  // namespace fbas

namespace fbas {

namespace detail {

/// Depth-first minimal transversal enumeration in the style of Murakami and
/// Uno's MMCS. Edges are kept as index lists: `uncovered` holds edges the
/// partial set misses, `critical[i]` the edges hit only by its i-th member.
class TransversalSearch {
 public:
  explicit TransversalSearch(const std::vector<NodeIdSet>& edges) : edges_(edges) {}

  std::vector<NodeIdSet> run() {
    std::vector<std::uint32_t> uncovered(edges_.size());
    for (std::uint32_t i = 0; i < uncovered.size(); ++i) uncovered[i] = i;
    NodeIdSet candidates;
    for (const auto& e : edges_) candidates |= e;
    step(std::move(uncovered), candidates);
    return std::move(found_);
  }

 private:
  void step(std::vector<std::uint32_t> uncovered, NodeIdSet candidates) {
    if (uncovered.empty()) {
      found_.push_back(chosen_);
      return;
    }
    // Branch on the uncovered edge with the fewest candidates.
    std::uint32_t pick = uncovered.front();
    std::size_t best = edges_[pick].intersection_size(candidates);
    for (std::size_t i = 1; i < uncovered.size() && best > 1; ++i) {
      std::size_t c = edges_[uncovered[i]].intersection_size(candidates);
      if (c < best) {
        best = c;
        pick = uncovered[i];
      }
    }
    const NodeIdSet branch = edges_[pick] & candidates;
    candidates -= branch;

    for (NodeId v : branch) {
      std::vector<std::vector<std::uint32_t>> critical;
      critical.reserve(critical_.size() + 1);
      bool keeps_all = true;
      for (const auto& list : critical_) {
        std::vector<std::uint32_t> rest;
        for (auto e : list) {
          if (!edges_[e].contains(v)) rest.push_back(e);
        }
        if (rest.empty()) {
          keeps_all = false;
          break;
        }
        critical.push_back(std::move(rest));
      }
      if (keeps_all) {
        std::vector<std::uint32_t> hit, still;
        for (auto e : uncovered) (edges_[e].contains(v) ? hit : still).push_back(e);
        critical.push_back(std::move(hit));
        critical.swap(critical_);
        chosen_.insert(v);
        step(std::move(still), candidates);
        chosen_.erase(v);
        critical.swap(critical_);
      }
      candidates.insert(v);
    }
  }

  const std::vector<NodeIdSet>& edges_;
  NodeIdSet chosen_;
  std::vector<std::vector<std::uint32_t>> critical_;
  std::vector<NodeIdSet> found_;
};

}  // namespace detail

/// All minimal sets meeting every member of `edges`. {∅} for an empty family,
/// empty if some member is itself empty.
inline NodeSetFamily minimal_hitting_sets(const NodeSetFamily& edges) {
  for (const auto& e : edges) {
    if (e.empty()) return {};
  }
  return NodeSetFamily(detail::TransversalSearch(edges.sets()).run());
}

}  // namespace fbas
