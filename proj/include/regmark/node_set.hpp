#pragma once

#include <cstdint>
#include <cassert>
#include <string>
#include <vector>

namespace regmark {

// Set of node ids in 1..64, stored as a bitmask. Graphs here stay well
// below that bound (d <= a few dozen).
class NodeSet {
 public:
  constexpr NodeSet() = default;
  constexpr explicit NodeSet(std::uint64_t bits) : bits_(bits) {}

  static NodeSet of(std::initializer_list<int> ids) {
    NodeSet s;
    for (int i : ids) s.add(i);
    return s;
  }
  static NodeSet from(const std::vector<int>& ids) {
    NodeSet s;
    for (int i : ids) s.add(i);
    return s;
  }
  // {1, ..., d}
  static constexpr NodeSet full(int d) {
    return NodeSet(d >= 64 ? ~0ull : (1ull << d) - 1);
  }

  void add(int id) {
    assert(id >= 1 && id <= 64);
    bits_ |= 1ull << (id - 1);
  }
  void remove(int id) { bits_ &= ~(1ull << (id - 1)); }
  bool contains(int id) const {
    return id >= 1 && id <= 64 && (bits_ >> (id - 1)) & 1;
  }
  bool empty() const { return bits_ == 0; }
  int size() const { return __builtin_popcountll(bits_); }
  std::uint64_t bits() const { return bits_; }
  int min() const {
    assert(bits_ != 0);
    return __builtin_ctzll(bits_) + 1;
  }
  int max() const {
    assert(bits_ != 0);
    return 64 - __builtin_clzll(bits_);
  }

  bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }
  bool disjoint_with(NodeSet o) const { return (bits_ & o.bits_) == 0; }

  friend NodeSet operator|(NodeSet a, NodeSet b) { return NodeSet(a.bits_ | b.bits_); }
  friend NodeSet operator&(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & b.bits_); }
  friend NodeSet operator-(NodeSet a, NodeSet b) { return NodeSet(a.bits_ & ~b.bits_); }
  NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
  NodeSet& operator&=(NodeSet o) { bits_ &= o.bits_; return *this; }
  NodeSet& operator-=(NodeSet o) { bits_ &= ~o.bits_; return *this; }
  friend bool operator==(NodeSet a, NodeSet b) { return a.bits_ == b.bits_; }
  friend bool operator!=(NodeSet a, NodeSet b) { return a.bits_ != b.bits_; }
  friend bool operator<(NodeSet a, NodeSet b) { return a.bits_ < b.bits_; }

  std::vector<int> to_vector() const {
    std::vector<int> out;
    out.reserve(size());
    for (std::uint64_t m = bits_; m;) {
      int b = __builtin_ctzll(m);
      out.push_back(b + 1);
      m &= m - 1;
    }
    return out;
  }

  // "5,6,8,9"; empty set as "-"
  std::string str() const {
    if (empty()) return "-";
    std::string out;
    for (int i : to_vector()) {
      if (!out.empty()) out += ',';
      out += std::to_string(i);
    }
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::uint64_t m = bits_; m;) {
      f(__builtin_ctzll(m) + 1);
      m &= m - 1;
    }
  }

  // Iterates all nonempty subsets of this set.
  template <typename F>
  void for_each_nonempty_subset(F&& f) const {
    for (std::uint64_t s = bits_; s; s = (s - 1) & bits_) {
      f(NodeSet(s));
      if (s == 0) break;
    }
  }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace regmark
