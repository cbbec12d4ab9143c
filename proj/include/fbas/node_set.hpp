#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <ostream>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace fbas {

/// Dense node index, assigned at ingestion in input order.
using NodeId = std::uint32_t;

/// Set of node indices backed by a bitset.
///
/// Storage for the first 256 ids lives inline, so the sets used inside the
/// enumeration loops never touch the heap. Binary operations accept operands
/// of different widths; missing words read as zero.
class NodeIdSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = NodeId;
    using difference_type = std::ptrdiff_t;
    using pointer = const NodeId*;
    using reference = NodeId;

    const_iterator() = default;
    const_iterator(const NodeIdSet* set, std::size_t word, Word rest)
        : set_(set), word_(word), rest_(rest) {
      skip_empty();
    }

    NodeId operator*() const {
      return static_cast<NodeId>(word_ * kWordBits + std::countr_zero(rest_));
    }
    const_iterator& operator++() {
      rest_ &= rest_ - 1;
      skip_empty();
      return *this;
    }
    const_iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const const_iterator& a, const const_iterator& b) {
      return a.word_ == b.word_ && a.rest_ == b.rest_;
    }

   private:
    void skip_empty() {
      while (rest_ == 0 && set_ != nullptr && ++word_ < set_->words_.size()) {
        rest_ = set_->words_[word_];
      }
      if (rest_ == 0 && set_ != nullptr) word_ = set_->words_.size();
    }

    const NodeIdSet* set_ = nullptr;
    std::size_t word_ = 0;
    Word rest_ = 0;
  };

  NodeIdSet() = default;

  /// Empty set able to hold ids below `capacity` without growing.
  explicit NodeIdSet(std::size_t capacity) : words_(word_count(capacity), 0) {}

  NodeIdSet(std::initializer_list<NodeId> ids) {
    for (NodeId id : ids) insert(id);
  }

  template <class Range>
  static NodeIdSet from_range(const Range& ids, std::size_t capacity = 0) {
    NodeIdSet s(capacity);
    for (auto id : ids) s.insert(static_cast<NodeId>(id));
    return s;
  }

  /// {0, 1, ..., n-1}
  static NodeIdSet full(std::size_t n) {
    NodeIdSet s(n);
    for (std::size_t w = 0; w < s.words_.size(); ++w) {
      std::size_t bits = std::min(kWordBits, n - w * kWordBits);
      s.words_[w] = bits == kWordBits ? ~Word{0} : ((Word{1} << bits) - 1);
    }
    return s;
  }

  void insert(NodeId id) {
    std::size_t w = id / kWordBits;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= Word{1} << (id % kWordBits);
  }

  void erase(NodeId id) {
    std::size_t w = id / kWordBits;
    if (w < words_.size()) words_[w] &= ~(Word{1} << (id % kWordBits));
  }

  bool contains(NodeId id) const {
    std::size_t w = id / kWordBits;
    return w < words_.size() && ((words_[w] >> (id % kWordBits)) & 1U);
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }

  void clear() { std::fill(words_.begin(), words_.end(), Word{0}); }

  /// Smallest member. Precondition: !empty().
  NodeId first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) {
        return static_cast<NodeId>(w * kWordBits + std::countr_zero(words_[w]));
      }
    }
    return 0;
  }

  NodeIdSet& operator|=(const NodeIdSet& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }

  NodeIdSet& operator&=(const NodeIdSet& o) {
    std::size_t common = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < common; ++i) words_[i] &= o.words_[i];
    for (std::size_t i = common; i < words_.size(); ++i) words_[i] = 0;
    return *this;
  }

  /// Set difference.
  NodeIdSet& operator-=(const NodeIdSet& o) {
    std::size_t common = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < common; ++i) words_[i] &= ~o.words_[i];
    return *this;
  }

  friend NodeIdSet operator|(NodeIdSet a, const NodeIdSet& b) { return a |= b; }
  friend NodeIdSet operator&(NodeIdSet a, const NodeIdSet& b) { return a &= b; }
  friend NodeIdSet operator-(NodeIdSet a, const NodeIdSet& b) { return a -= b; }

  NodeIdSet with(NodeId id) const {
    NodeIdSet s = *this;
    s.insert(id);
    return s;
  }
  NodeIdSet without(NodeId id) const {
    NodeIdSet s = *this;
    s.erase(id);
    return s;
  }

  bool is_subset_of(const NodeIdSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      Word other = i < o.words_.size() ? o.words_[i] : 0;
      if ((words_[i] & ~other) != 0) return false;
    }
    return true;
  }

  bool intersects(const NodeIdSet& o) const {
    std::size_t common = std::min(words_.size(), o.words_.size());
    for (std::size_t i = 0; i < common; ++i) {
      if ((words_[i] & o.words_[i]) != 0) return true;
    }
    return false;
  }

  std::size_t intersection_size(const NodeIdSet& o) const {
    std::size_t common = std::min(words_.size(), o.words_.size());
    std::size_t n = 0;
    for (std::size_t i = 0; i < common; ++i) {
      n += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    }
    return n;
  }

  const_iterator begin() const {
    return words_.empty() ? end() : const_iterator(this, 0, words_[0]);
  }
  const_iterator end() const { return const_iterator(this, words_.size(), 0); }

  std::vector<NodeId> to_vector() const { return {begin(), end()}; }

  friend bool operator==(const NodeIdSet& a, const NodeIdSet& b) {
    std::size_t n = std::max(a.words_.size(), b.words_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (a.word(i) != b.word(i)) return false;
    }
    return true;
  }

  /// Lexicographic order of the sorted member lists: {0,1,2} < {0,3} < {1}.
  friend bool operator<(const NodeIdSet& a, const NodeIdSet& b) {
    auto ia = a.begin(), ib = b.begin();
    auto ea = a.end(), eb = b.end();
    for (; ia != ea && ib != eb; ++ia, ++ib) {
      if (*ia != *ib) return *ia < *ib;
    }
    return ia == ea && ib != eb;
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    std::size_t last = words_.size();
    while (last > 0 && words_[last - 1] == 0) --last;
    for (std::size_t i = 0; i < last; ++i) {
      h ^= std::hash<Word>{}(words_[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

  friend std::ostream& operator<<(std::ostream& os, const NodeIdSet& s) {
    os << '{';
    bool first = true;
    for (NodeId id : s) {
      if (!first) os << ',';
      os << id;
      first = false;
    }
    return os << '}';
  }

 private:
  static std::size_t word_count(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
  Word word(std::size_t i) const { return i < words_.size() ? words_[i] : 0; }

  boost::container::small_vector<Word, 4> words_;
};

struct NodeIdSetHash {
  std::size_t operator()(const NodeIdSet& s) const { return s.hash(); }
};

}  // namespace fbas
