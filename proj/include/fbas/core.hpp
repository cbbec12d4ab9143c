#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fbas/node_set.hpp"

namespace fbas {

/// Recursive (validators, inner quorum sets, threshold) triple.
///
/// A node set satisfies a quorum set when the number of its members among
/// `validators` plus the number of satisfied inner quorum sets reaches
/// `threshold`. Validators behave as a set; inner quorum sets are counted
/// individually, duplicates included.
struct QuorumSet {
  std::vector<NodeId> validators;
  std::vector<QuorumSet> inner_quorum_sets;
  std::uint32_t threshold = 0;

  /// Validators plus inner quorum sets.
  std::size_t element_count() const { return validators.size() + inner_quorum_sets.size(); }

  /// A quorum set with a threshold above its element count, never satisfied.
  static QuorumSet unsatisfiable() { return QuorumSet{{}, {}, 1}; }

  /// Every node mentioned anywhere in the tree.
  NodeIdSet mentioned_nodes() const {
    NodeIdSet out;
    collect_mentioned(out);
    return out;
  }

  void collect_mentioned(NodeIdSet& out) const {
    for (NodeId v : validators) out.insert(v);
    for (const auto& inner : inner_quorum_sets) inner.collect_mentioned(out);
  }

  /// True iff some node id occurs more than once across the whole tree.
  bool has_repeated_nodes() const {
    NodeIdSet seen;
    return !collect_unique(seen);
  }

  /// Sorted, deduplicated validators and sorted inner sets, recursively.
  /// Two quorum sets are structurally equal iff their normal forms compare equal.
  QuorumSet normalized() const {
    QuorumSet out;
    out.threshold = threshold;
    out.validators = validators;
    std::sort(out.validators.begin(), out.validators.end());
    out.validators.erase(std::unique(out.validators.begin(), out.validators.end()),
                         out.validators.end());
    out.inner_quorum_sets.reserve(inner_quorum_sets.size());
    for (const auto& inner : inner_quorum_sets) out.inner_quorum_sets.push_back(inner.normalized());
    std::sort(out.inner_quorum_sets.begin(), out.inner_quorum_sets.end());
    return out;
  }

  friend bool operator==(const QuorumSet&, const QuorumSet&) = default;
  friend auto operator<=>(const QuorumSet& a, const QuorumSet& b) {
    if (auto c = a.threshold <=> b.threshold; c != 0) return c;
    if (auto c = a.validators <=> b.validators; c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.inner_quorum_sets.begin(), a.inner_quorum_sets.end(), b.inner_quorum_sets.begin(),
        b.inner_quorum_sets.end(), [](const QuorumSet& x, const QuorumSet& y) { return x <=> y; });
  }

 private:
  bool collect_unique(NodeIdSet& seen) const {
    for (NodeId v : validators) {
      if (seen.contains(v)) return false;
      seen.insert(v);
    }
    for (const auto& inner : inner_quorum_sets) {
      if (!inner.collect_unique(seen)) return false;
    }
    return true;
  }
};

/// True iff `candidate` satisfies `quorum_set`. A threshold of 0 is always met.
inline bool satisfies(const NodeIdSet& candidate, const QuorumSet& quorum_set) {
  std::uint32_t need = quorum_set.threshold;
  if (need == 0) return true;
  std::size_t remaining = quorum_set.element_count();
  for (NodeId v : quorum_set.validators) {
    --remaining;
    if (candidate.contains(v) && --need == 0) return true;
    if (remaining < need) return false;
  }
  for (const auto& inner : quorum_set.inner_quorum_sets) {
    --remaining;
    if (satisfies(candidate, inner) && --need == 0) return true;
    if (remaining < need) return false;
  }
  return false;
}

struct Node {
  std::string public_key;
  QuorumSet quorum_set;
};

/// A node population with one quorum set per node. Immutable after construction.
///
/// Quorum sets are stored in normal form (validators deduplicated and sorted).
/// A node need not list itself; slice semantics add the owner implicitly.
class Fbas {
 public:
  Fbas() = default;

  /// Throws std::invalid_argument if a quorum set references an id >= nodes.size().
  explicit Fbas(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    for (auto& node : nodes_) {
      node.quorum_set = node.quorum_set.normalized();
      NodeIdSet mentioned = node.quorum_set.mentioned_nodes();
      if (!mentioned.empty()) {
        NodeId max_id = 0;
        for (NodeId v : mentioned) max_id = v;
        if (max_id >= nodes_.size()) {
          throw std::invalid_argument("quorum set of '" + node.public_key +
                                      "' references unknown node " + std::to_string(max_id));
        }
      }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) by_key_.emplace(nodes_[i].public_key, i);
  }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  const QuorumSet& quorum_set(NodeId id) const { return nodes_.at(id).quorum_set; }
  const std::string& name(NodeId id) const { return nodes_.at(id).public_key; }
  const std::vector<Node>& nodes() const { return nodes_; }

  std::optional<NodeId> find(const std::string& public_key) const {
    auto it = by_key_.find(public_key);
    if (it == by_key_.end()) return std::nullopt;
    return static_cast<NodeId>(it->second);
  }

  NodeIdSet all_nodes() const { return NodeIdSet::full(nodes_.size()); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(nodes_.size());
    for (const auto& n : nodes_) out.push_back(n.public_key);
    return out;
  }

  friend bool operator==(const Fbas& a, const Fbas& b) {
    if (a.nodes_.size() != b.nodes_.size()) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
      if (a.nodes_[i].public_key != b.nodes_[i].public_key ||
          a.nodes_[i].quorum_set != b.nodes_[i].quorum_set) {
        return false;
      }
    }
    return true;
  }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

/// A named group of nodes, e.g. an organization.
struct Grouping {
  std::string name;
  NodeIdSet members;
};

/// `candidate` contains a slice of `node`: the node is a member and its quorum set is satisfied.
inline bool is_slice_for(const NodeIdSet& candidate, NodeId node, const Fbas& fbas) {
  return candidate.contains(node) && satisfies(candidate, fbas.quorum_set(node));
}

/// Non-empty and satisfies the quorum set of each of its members.
inline bool is_quorum(const NodeIdSet& candidate, const Fbas& fbas) {
  if (candidate.empty()) return false;
  for (NodeId v : candidate) {
    if (!satisfies(candidate, fbas.quorum_set(v))) return false;
  }
  return true;
}

/// Every member of `partial` has a slice inside `partial ∪ available`.
inline bool is_satisfiable(const NodeIdSet& partial, const NodeIdSet& available, const Fbas& fbas) {
  NodeIdSet pool = partial | available;
  for (NodeId v : partial) {
    if (!satisfies(pool, fbas.quorum_set(v))) return false;
  }
  return true;
}

/// Largest quorum inside `candidate` (empty if there is none).
///
/// Repeatedly drops members whose quorum set the remaining set does not
/// satisfy; the fixed point is the union of all quorums inside `candidate`.
inline NodeIdSet greatest_quorum(NodeIdSet candidate, const Fbas& fbas) {
  bool changed = true;
  while (changed && !candidate.empty()) {
    changed = false;
    NodeIdSet drop;
    for (NodeId v : candidate) {
      if (!satisfies(candidate, fbas.quorum_set(v))) drop.insert(v);
    }
    if (!drop.empty()) {
      candidate -= drop;
      changed = true;
    }
  }
  return candidate;
}

inline bool contains_quorum(const NodeIdSet& candidate, const Fbas& fbas) {
  return !greatest_quorum(candidate, fbas).empty();
}

}  // namespace fbas
