#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "fbas/core.hpp"

namespace fbas {

/// Satisfaction engine over a sub-universe of an FBAS.
///
/// The universe is a list of global node ids; local id i stands for
/// `universe[i]`. Quorum sets are compiled against it: validators outside the
/// universe are dropped (they are never present in a local candidate set) and
/// thresholds are kept. Structurally equal compiled quorum sets are shared, so
/// a fixed-point pass evaluates each distinct quorum set once.
class CompiledFbas {
 public:
  CompiledFbas(const Fbas& fbas, std::vector<NodeId> universe) : universe_(std::move(universe)) {
    LocalIds local;
    local.reserve(universe_.size());
    for (std::size_t i = 0; i < universe_.size(); ++i) local.emplace(universe_[i], static_cast<NodeId>(i));

    std::map<std::string, std::uint32_t> by_key;
    qset_of_.reserve(universe_.size());
    for (NodeId global : universe_) {
      const QuorumSet& qs = fbas.quorum_set(global);
      std::string key = canonical_key(qs, local);
      auto [it, inserted] = by_key.emplace(key, static_cast<std::uint32_t>(roots_.size()));
      if (inserted) {
        std::uint32_t root = static_cast<std::uint32_t>(gates_.size());
        gates_.emplace_back();
        compile_into(root, qs, local);
        roots_.push_back(root);
      }
      qset_of_.push_back(it->second);
    }
  }

  /// Engine over the whole population, local ids equal global ids.
  explicit CompiledFbas(const Fbas& fbas) : CompiledFbas(fbas, identity(fbas.size())) {}

  std::size_t size() const { return universe_.size(); }
  std::size_t distinct_quorum_sets() const { return roots_.size(); }
  NodeId global_id(NodeId local) const { return universe_[local]; }
  const std::vector<NodeId>& universe() const { return universe_; }
  std::uint32_t quorum_set_index(NodeId local) const { return qset_of_[local]; }
  NodeIdSet all() const { return NodeIdSet::full(universe_.size()); }

  NodeIdSet to_global(const NodeIdSet& local) const {
    NodeIdSet out;
    for (NodeId v : local) out.insert(universe_[v]);
    return out;
  }

  /// The quorum set of local node `v` is satisfied by `set`.
  bool satisfied(NodeId v, const NodeIdSet& set) const { return eval(roots_[qset_of_[v]], set); }

  bool is_quorum(const NodeIdSet& set) const {
    if (set.empty()) return false;
    Cache cache(roots_.size(), kUnknown);
    for (NodeId v : set) {
      if (!cached_eval(cache, v, set)) return false;
    }
    return true;
  }

  /// Every member of `members` is satisfied by `pool`.
  bool all_satisfied(const NodeIdSet& members, const NodeIdSet& pool) const {
    Cache cache(roots_.size(), kUnknown);
    for (NodeId v : members) {
      if (!cached_eval(cache, v, pool)) return false;
    }
    return true;
  }

  /// Union of all quorums inside `set`.
  NodeIdSet greatest_quorum(NodeIdSet set) const {
    Cache cache(roots_.size(), kUnknown);
    while (!set.empty()) {
      std::fill(cache.begin(), cache.end(), kUnknown);
      NodeIdSet next = set;
      for (NodeId v : set) {
        if (!cached_eval(cache, v, set)) next.erase(v);
      }
      if (next == set) break;
      set = std::move(next);
    }
    return set;
  }

  bool contains_quorum(const NodeIdSet& set) const { return !greatest_quorum(set).empty(); }

  /// Whether local node `v` could have two slices whose intersection lies
  /// inside `allowed`.
  ///
  /// Nodes in `allowed` may serve both slices; every other node serves at
  /// most one. Children of a gate are treated as independent resources, which
  /// is exact for quorum set trees without repeated nodes and an
  /// over-approximation otherwise.
  bool pair_capable(NodeId v, const NodeIdSet& allowed) const {
    return pair_level(roots_[qset_of_[v]], allowed) == Capability::Twice;
  }

  /// pair_capable for every member of `members`, each distinct quorum set evaluated once.
  bool all_pair_capable(const NodeIdSet& members, const NodeIdSet& allowed) const {
    Cache cache(roots_.size(), kUnknown);
    for (NodeId v : members) {
      auto& c = cache[qset_of_[v]];
      if (c == kUnknown) c = pair_level(roots_[qset_of_[v]], allowed) == Capability::Twice ? 1 : 0;
      if (c == 0) return false;
    }
    return true;
  }

  /// Whether some member of `chosen` is dead weight: for every X with
  /// chosen ⊆ X ⊆ pool, dropping it from X changes the satisfaction of no
  /// quorum set of a pool node. A quorum in that range that strictly contains
  /// `chosen` then stays a quorum without it, so it is not minimal.
  bool has_dead_weight(const NodeIdSet& chosen, const NodeIdSet& pool) const {
    boost::container::small_vector<std::uint32_t, 16> roots;
    {
      Cache seen(roots_.size(), 0);
      for (NodeId v : pool) {
        if (!seen[qset_of_[v]]) {
          seen[qset_of_[v]] = 1;
          roots.push_back(roots_[qset_of_[v]]);
        }
      }
    }
    for (NodeId u : chosen) {
      NodeIdSet rest = chosen.without(u);
      bool pivotal = false;
      for (auto root : roots) {
        if (may_be_pivotal(root, u, rest, pool)) {
          pivotal = true;
          break;
        }
      }
      if (!pivotal) return true;
    }
    return false;
  }

 private:
  struct Gate {
    NodeIdSet validators;
    std::uint32_t threshold = 0;
    std::uint32_t first_child = 0;
    std::uint32_t child_count = 0;
  };

  enum class Capability { Never, Once, Twice };

  using LocalIds = std::unordered_map<NodeId, NodeId>;
  static constexpr std::int8_t kUnknown = -1;
  using Cache = boost::container::small_vector<std::int8_t, 64>;

  static std::vector<NodeId> identity(std::size_t n) {
    std::vector<NodeId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<NodeId>(i);
    return ids;
  }

  static std::string canonical_key(const QuorumSet& qs, const LocalIds& local) {
    std::vector<NodeId> vs;
    for (NodeId v : qs.validators) {
      if (auto it = local.find(v); it != local.end()) vs.push_back(it->second);
    }
    std::sort(vs.begin(), vs.end());
    std::vector<std::string> inner;
    for (const auto& i : qs.inner_quorum_sets) inner.push_back(canonical_key(i, local));
    std::sort(inner.begin(), inner.end());
    std::string key = std::to_string(qs.threshold) + "[";
    for (auto v : vs) key += std::to_string(v) + ",";
    key += "](";
    for (const auto& i : inner) key += i + ";";
    return key + ")";
  }

  void compile_into(std::uint32_t index, const QuorumSet& qs, const LocalIds& local) {
    Gate gate;
    for (NodeId v : qs.validators) {
      if (auto it = local.find(v); it != local.end()) gate.validators.insert(it->second);
    }
    gate.threshold = qs.threshold;
    gate.first_child = static_cast<std::uint32_t>(gates_.size());
    gate.child_count = static_cast<std::uint32_t>(qs.inner_quorum_sets.size());
    gates_.resize(gates_.size() + qs.inner_quorum_sets.size());
    for (std::uint32_t i = 0; i < gate.child_count; ++i) {
      compile_into(gate.first_child + i, qs.inner_quorum_sets[i], local);
    }
    gates_[index] = std::move(gate);
  }

  bool cached_eval(Cache& cache, NodeId v, const NodeIdSet& set) const {
    auto& c = cache[qset_of_[v]];
    if (c == kUnknown) c = eval(roots_[qset_of_[v]], set) ? 1 : 0;
    return c == 1;
  }

  bool eval(std::uint32_t index, const NodeIdSet& set) const {
    const Gate& g = gates_[index];
    if (g.threshold == 0) return true;
    std::size_t count = g.validators.intersection_size(set);
    if (count >= g.threshold) return true;
    std::size_t remaining = g.child_count;
    for (std::uint32_t i = 0; i < g.child_count; ++i) {
      if (count + remaining < g.threshold) return false;
      --remaining;
      if (eval(g.first_child + i, set) && ++count >= g.threshold) return true;
    }
    return false;
  }

  /// Over-approximates: some Y with lower ⊆ Y ⊆ pool∖{u} fails gate `index`
  /// while Y ∪ {u} meets it.
  bool may_be_pivotal(std::uint32_t index, NodeId u, const NodeIdSet& lower, const NodeIdSet& pool) const {
    const Gate& g = gates_[index];
    if (g.threshold == 0 || eval(index, lower) || !eval(index, pool)) return false;
    if (g.validators.contains(u)) return true;
    for (std::uint32_t i = 0; i < g.child_count; ++i) {
      if (may_be_pivotal(g.first_child + i, u, lower, pool)) return true;
    }
    return false;
  }

  Capability pair_level(std::uint32_t index, const NodeIdSet& allowed) const {
    const Gate& g = gates_[index];
    if (g.threshold == 0) return Capability::Twice;
    std::size_t twice = g.validators.intersection_size(allowed);
    std::size_t once = g.validators.size() - twice;
    for (std::uint32_t i = 0; i < g.child_count; ++i) {
      switch (pair_level(g.first_child + i, allowed)) {
        case Capability::Twice: ++twice; break;
        case Capability::Once: ++once; break;
        case Capability::Never: break;
      }
    }
    if (twice + once < g.threshold) return Capability::Never;
    std::size_t missing = twice >= g.threshold ? 0 : g.threshold - twice;
    return 2 * missing <= once ? Capability::Twice : Capability::Once;
  }

  std::vector<NodeId> universe_;
  std::vector<Gate> gates_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::uint32_t> qset_of_;
};

}  // namespace fbas
