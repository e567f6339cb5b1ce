#include "icin/monotone.hpp"

#include <cmath>

namespace icin {

bool is_monotone(const Pattern& m) {
  bool seen_missing = false;
  for (int j = 0; j < m.size(); ++j) {
    if (m.missing(j))
      seen_missing = true;
    else if (seen_missing)
      return false;
  }
  return true;
}

int dropout_time(const Pattern& m) {
  require(is_monotone(m), errc::invalid_argument,
          "pattern " + m.str() + " is not monotone (missing entries must be a suffix)");
  return 1 + m.size() - m.missing_count();
}

Pattern dropout_pattern(int p, int t) {
  require(p >= 1, errc::invalid_argument, "need p >= 1");
  require(t >= 1 && t <= p + 1, errc::invalid_argument,
          "dropout time must lie in 1..p+1");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(p), 0);
  for (int j = t - 1; j < p; ++j) bits[static_cast<std::size_t>(j)] = 1;
  return Pattern(std::move(bits));
}

PatternSet dropout_chain(int p, int earliest_time) {
  require(earliest_time >= 1 && earliest_time <= p + 1, errc::invalid_argument,
          "earliest dropout time must lie in 1..p+1");
  std::vector<Pattern> chain;
  for (int t = earliest_time; t <= p + 1; ++t) chain.push_back(dropout_pattern(p, t));
  return PatternSet(p, std::move(chain));
}

void validate_dropout_chain(const PatternSet& ps) {
  std::vector<int> times;
  for (const auto& m : ps.order()) {
    require(is_monotone(m), errc::invalid_argument,
            "pattern " + m.str() + " is not a dropout pattern");
    times.push_back(dropout_time(m));
  }
  // traversal order is by missing count, so times are descending from p+1
  require(times.front() == ps.item_count() + 1, errc::invalid_argument,
          "dropout chain must contain the fully observed pattern");
  for (std::size_t i = 1; i < times.size(); ++i)
    require(times[i] == times[i - 1] - 1, errc::invalid_argument,
            "dropout chain must be contiguous in dropout time");
}

FullDataDistribution build_monotone(const ObservedDistribution& observed) {
  validate_dropout_chain(observed.patterns);
  FullDataDistribution g = build_full_data(observed);

  // factorization cross-check of the general engine on the chain
  const auto& sp = g.space;
  for (int i = 0; i + 1 < g.patterns.size(); ++i) {
    // order is descending in time: entry i+1 drops one time earlier
    const int t = dropout_time(g.patterns.at(i + 1));
    const auto& g_next = g.log_g[static_cast<std::size_t>(i)];      // T = t+1
    const auto& g_this = g.log_g[static_cast<std::size_t>(i + 1)];  // T = t
    const auto& eta_this = g.eta.values[static_cast<std::size_t>(i + 1)];
    const Pattern& m = g.patterns.at(i + 1);
    std::vector<int> cell;
    for (std::size_t x = 0; x < sp.cell_count(); ++x) {
      sp.decode(x, cell);
      const double lhs = g_this[x];
      const double rhs = eta_this[sp.observed_index(cell, m)] + g_next[x];
      if (std::fabs(lhs - rhs) > 1e-12)
        fail(errc::numeric, "dropout factorization identity violated at time " +
                                std::to_string(t) + " (|delta| = " +
                                std::to_string(std::fabs(lhs - rhs)) + ")");
    }
  }
  return g;
}

double sequential_log_odds(const FullDataDistribution& g, int t, const std::vector<int>& cell) {
  const int p = g.space.item_count();
  require(t >= 1 && t <= p, errc::invalid_argument, "time must lie in 1..p");
  const int i_t = g.patterns.index_of(dropout_pattern(p, t));
  const int i_next = g.patterns.index_of(dropout_pattern(p, t + 1));
  require(i_t >= 0 && i_next >= 0, errc::invalid_argument,
          "both dropout times " + std::to_string(t) + " and " + std::to_string(t + 1) +
              " must be in the chain");
  const Pattern m = dropout_pattern(p, t);
  return -g.eta.values[static_cast<std::size_t>(i_t)][g.space.observed_index(cell, m)];
}

}  // namespace icin
