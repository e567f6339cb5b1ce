#include "icin/pattern.hpp"

#include <algorithm>

namespace icin {

Pattern::Pattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    require(b == 0 || b == 1, errc::invalid_argument, "pattern entries must be 0 or 1");
}

Pattern Pattern::zeros(int p) {
  require(p >= 1, errc::invalid_argument, "pattern length must be >= 1");
  return Pattern(std::vector<std::uint8_t>(static_cast<std::size_t>(p), 0));
}

Pattern Pattern::ones(int p) {
  require(p >= 1, errc::invalid_argument, "pattern length must be >= 1");
  return Pattern(std::vector<std::uint8_t>(static_cast<std::size_t>(p), 1));
}

Pattern Pattern::from_string(const std::string& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    require(c == '0' || c == '1', errc::invalid_argument,
            "pattern string must contain only 0/1: \"" + s + "\"");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  require(!bits.empty(), errc::invalid_argument, "empty pattern string");
  return Pattern(std::move(bits));
}

int Pattern::missing_count() const {
  int n = 0;
  for (auto b : bits_) n += b;
  return n;
}

Pattern Pattern::with_bit(int j, bool missing) const {
  require(j >= 0 && j < size(), errc::invalid_argument, "pattern item index out of range");
  std::vector<std::uint8_t> bits = bits_;
  bits[static_cast<std::size_t>(j)] = missing ? 1 : 0;
  return Pattern(std::move(bits));
}

std::string Pattern::str() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

bool precedes(const Pattern& a, const Pattern& b) {
  require(a.size() == b.size(), errc::invalid_argument, "pattern length mismatch");
  for (int j = 0; j < a.size(); ++j)
    if (a.missing(j) && !b.missing(j)) return false;
  return true;
}

bool strictly_precedes(const Pattern& a, const Pattern& b) {
  return a != b && precedes(a, b);
}

bool traversal_less(const Pattern& a, const Pattern& b) {
  const int ca = a.missing_count(), cb = b.missing_count();
  if (ca != cb) return ca < cb;
  return a.bits() < b.bits();
}

PatternSet::PatternSet(int p, std::vector<Pattern> patterns) : p_(p) {
  require(p >= 1, errc::invalid_argument, "item count must be >= 1");
  require(!patterns.empty(), errc::invalid_argument, "pattern set is empty");
  for (const auto& m : patterns)
    require(m.size() == p, errc::invalid_argument,
            "pattern " + m.str() + " has wrong length for p=" + std::to_string(p));
  std::sort(patterns.begin(), patterns.end(), traversal_less);
  for (std::size_t i = 1; i < patterns.size(); ++i)
    require(patterns[i] != patterns[i - 1], errc::invalid_argument,
            "duplicate pattern " + patterns[i].str());
  require(patterns.front() == Pattern::zeros(p), errc::invalid_argument,
          "pattern set must contain the all-observed pattern " + Pattern::zeros(p).str());
  order_ = std::move(patterns);
}

PatternSet PatternSet::full(int p) {
  require(p >= 1 && p <= 20, errc::unsupported_size, "full pattern set needs 1 <= p <= 20");
  std::vector<Pattern> all;
  all.reserve(std::size_t{1} << p);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << p); ++mask) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) bits[static_cast<std::size_t>(j)] = (mask >> j) & 1u;
    all.emplace_back(std::move(bits));
  }
  return PatternSet(p, std::move(all));
}

int PatternSet::index_of(const Pattern& m) const {
  if (m.size() != p_) return -1;
  auto it = std::lower_bound(order_.begin(), order_.end(), m, traversal_less);
  if (it != order_.end() && *it == m) return static_cast<int>(it - order_.begin());
  return -1;
}

std::vector<Pattern> PatternSet::strict_predecessors(const Pattern& m) const {
  require(m.size() == p_, errc::invalid_argument, "pattern length mismatch");
  std::vector<Pattern> out;
  for (const auto& s : order_)
    if (strictly_precedes(s, m)) out.push_back(s);
  return out;
}

}  // namespace icin
