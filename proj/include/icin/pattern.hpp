#pragma once
// Missingness patterns and the partial order over them.
//
// A pattern is a fixed-length vector of indicators, 1 = item missing.
// precedes(a, b) holds when b misses at least the items a misses. The
// lattice recursion only needs some linear extension of this order; it is
// fixed as count-of-ones then lexicographic so runs are reproducible.

#include <cstdint>
#include <string>
#include <vector>

#include "icin/errors.hpp"

namespace icin {

class Pattern {
public:
  Pattern() = default;
  explicit Pattern(std::vector<std::uint8_t> bits);
  static Pattern zeros(int p);
  static Pattern ones(int p);
  static Pattern from_string(const std::string& s);  // e.g. "010"

  int size() const { return static_cast<int>(bits_.size()); }
  bool missing(int j) const { return bits_[static_cast<std::size_t>(j)] != 0; }
  bool observed(int j) const { return !missing(j); }
  int missing_count() const;
  bool all_observed() const { return missing_count() == 0; }

  // copy with indicator j set; items are 0-based
  Pattern with_bit(int j, bool missing) const;

  std::string str() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool operator==(const Pattern& o) const { return bits_ == o.bits_; }
  bool operator!=(const Pattern& o) const { return !(*this == o); }
  bool operator<(const Pattern& o) const { return bits_ < o.bits_; }  // lexicographic

private:
  std::vector<std::uint8_t> bits_;
};

// a ≼ b: every item missing under a is missing under b
bool precedes(const Pattern& a, const Pattern& b);
// a ≺ b
bool strictly_precedes(const Pattern& a, const Pattern& b);
// traversal comparator: count of ones, ties by lexicographic bit string
bool traversal_less(const Pattern& a, const Pattern& b);

// Finite set of realizable patterns. Must contain the all-observed pattern.
// Patterns are kept in traversal order.
class PatternSet {
public:
  PatternSet(int p, std::vector<Pattern> patterns);
  static PatternSet full(int p);  // all 2^p patterns

  int item_count() const { return p_; }
  int size() const { return static_cast<int>(order_.size()); }
  const std::vector<Pattern>& order() const { return order_; }
  const Pattern& at(int idx) const { return order_[static_cast<std::size_t>(idx)]; }
  bool contains(const Pattern& m) const { return index_of(m) >= 0; }
  int index_of(const Pattern& m) const;  // -1 when absent

  // members strictly preceding m, in traversal order; m need not belong
  std::vector<Pattern> strict_predecessors(const Pattern& m) const;

private:
  int p_ = 0;
  std::vector<Pattern> order_;
};

}  // namespace icin
