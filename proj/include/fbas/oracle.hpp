#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbas/core.hpp"
#include "fbas/family.hpp"

namespace fbas::oracle {

/// Brute-force reference over all 2^n node subsets. Shares nothing with the
/// search code except quorum set satisfaction.
class BruteForce {
 public:
  static constexpr std::size_t kMaxNodes = 20;
  /// Up to this many quorums every pair is intersected explicitly.
  static constexpr std::size_t kAllPairsLimit = 4096;

  explicit BruteForce(const Fbas& fbas) : n_(fbas.size()) {
    if (n_ > kMaxNodes) {
      throw std::invalid_argument("brute force limited to " + std::to_string(kMaxNodes) + " nodes, got " +
                                  std::to_string(n_));
    }
    const std::uint32_t count = 1U << n_;
    is_quorum_.assign(count, false);
    for (std::uint32_t mask = 1; mask < count; ++mask) {
      NodeIdSet s = to_set(mask);
      bool ok = true;
      for (NodeId v = 0; v < n_ && ok; ++v) {
        if ((mask >> v) & 1U) ok = satisfies(s, fbas.quorum_set(v));
      }
      is_quorum_[mask] = ok;
    }
    has_quorum_ = superset_closure(is_quorum_, false);

    // Intersections of distinct quorum pairs, closed upward. With many
    // quorums, pairs of minimal quorums stand in for all pairs: any two
    // distinct quorums contain either distinct minimal quorums M1, M2 (whose
    // intersection is smaller) or one shared minimal quorum M, and M qualifies
    // as soon as a second quorum exists.
    std::vector<std::uint32_t> quorums, minimal;
    for (std::uint32_t mask = 1; mask < count; ++mask) {
      if (!is_quorum_[mask]) continue;
      quorums.push_back(mask);
      bool is_min = true;
      for (NodeId v = 0; v < n_ && is_min; ++v) {
        if (((mask >> v) & 1U) && has_quorum_[mask & ~(1U << v)]) is_min = false;
      }
      if (is_min) minimal.push_back(mask);
    }
    quorum_count_ = quorums.size();
    std::vector<bool> meet(count, false);
    if (quorums.size() <= kAllPairsLimit) {
      for (std::size_t i = 0; i < quorums.size(); ++i) {
        for (std::size_t j = i + 1; j < quorums.size(); ++j) meet[quorums[i] & quorums[j]] = true;
      }
    } else {
      for (std::size_t i = 0; i < minimal.size(); ++i) {
        meet[minimal[i]] = true;
        for (std::size_t j = i + 1; j < minimal.size(); ++j) meet[minimal[i] & minimal[j]] = true;
      }
    }
    has_meet_ = superset_closure(meet, true);
  }

  std::size_t size() const { return n_; }
  std::size_t quorum_count() const { return quorum_count_; }

  bool is_quorum(std::uint32_t mask) const { return is_quorum_[mask]; }
  bool contains_quorum(std::uint32_t mask) const { return has_quorum_[mask]; }

  NodeSetFamily quorums() const {
    return collect([&](std::uint32_t m) { return is_quorum_[m]; });
  }

  NodeSetFamily minimal_quorums() const {
    return collect([&](std::uint32_t m) {
      if (!is_quorum_[m]) return false;
      for (NodeId v = 0; v < n_; ++v) {
        if (((m >> v) & 1U) && has_quorum_[m & ~(1U << v)]) return false;
      }
      return true;
    });
  }

  /// Every two quorums share a node.
  bool has_quorum_intersection() const { return !has_meet_[0]; }

  bool is_blocking(std::uint32_t mask) const { return !has_quorum_[full() & ~mask]; }

  NodeSetFamily minimal_blocking_sets() const {
    return collect([&](std::uint32_t m) {
      if (!is_blocking(m)) return false;
      for (NodeId v = 0; v < n_; ++v) {
        if (((m >> v) & 1U) && is_blocking(m & ~(1U << v))) return false;
      }
      return true;
    });
  }

  /// Some two distinct quorums intersect only inside `mask`.
  bool is_splitting(std::uint32_t mask) const { return has_meet_[mask]; }

  NodeSetFamily minimal_splitting_sets() const {
    return collect([&](std::uint32_t m) {
      if (!is_splitting(m)) return false;
      for (NodeId v = 0; v < n_; ++v) {
        if (((m >> v) & 1U) && is_splitting(m & ~(1U << v))) return false;
      }
      return true;
    });
  }

  static NodeIdSet to_set(std::uint32_t mask) {
    NodeIdSet s;
    for (NodeId v = 0; mask != 0; ++v, mask >>= 1) {
      if (mask & 1U) s.insert(v);
    }
    return s;
  }

 private:
  std::uint32_t full() const { return (1U << n_) - 1; }

  /// out[m] = some marked subset of m (or, when `include_empty`, m itself may be empty).
  std::vector<bool> superset_closure(const std::vector<bool>& marked, bool include_empty) const {
    std::vector<bool> out = marked;
    if (!include_empty) out[0] = false;
    for (NodeId v = 0; v < n_; ++v) {
      for (std::uint32_t m = 0; m < out.size(); ++m) {
        if (((m >> v) & 1U) && out[m & ~(1U << v)]) out[m] = true;
      }
    }
    return out;
  }

  template <class Pred>
  NodeSetFamily collect(Pred&& keep) const {
    std::vector<NodeIdSet> out;
    for (std::uint32_t m = 0; m <= full(); ++m) {
      if (keep(m)) out.push_back(to_set(m));
    }
    return NodeSetFamily(std::move(out));
  }

  std::size_t n_;
  std::vector<bool> is_quorum_;
  std::vector<bool> has_quorum_;
  std::vector<bool> has_meet_;
  std::size_t quorum_count_ = 0;
};

inline NodeSetFamily brute_quorums(const Fbas& fbas) { return BruteForce(fbas).quorums(); }
inline NodeSetFamily brute_minimal_quorums(const Fbas& fbas) { return BruteForce(fbas).minimal_quorums(); }
inline NodeSetFamily brute_blocking_sets(const Fbas& fbas) { return BruteForce(fbas).minimal_blocking_sets(); }
inline NodeSetFamily brute_splitting_sets(const Fbas& fbas) { return BruteForce(fbas).minimal_splitting_sets(); }

}  // namespace fbas::oracle
