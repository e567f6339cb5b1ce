#include "icin/loglinear.hpp"

#include <cmath>

namespace icin {

bool LoglinearTerm::active(const std::vector<int>& cell, const Pattern& m) const {
  for (std::size_t t = 0; t < x_items.size(); ++t)
    if (cell[static_cast<std::size_t>(x_items[t])] != x_levels[t]) return false;
  for (int j : m_items)
    if (!m.missing(j)) return false;
  return true;
}

std::string LoglinearTerm::label() const {
  std::string s;
  for (std::size_t t = 0; t < x_items.size(); ++t) {
    if (!s.empty()) s += "*";
    s += "X" + std::to_string(x_items[t] + 1) + "=" + std::to_string(x_levels[t] + 1);
  }
  for (int j : m_items) {
    if (!s.empty()) s += "*";
    s += "M" + std::to_string(j + 1);
  }
  return s.empty() ? "1" : s;
}

double LoglinearDecomposition::reconstruct_log_mass(const Pattern& m,
                                                    const std::vector<int>& cell) const {
  require(patterns.contains(m), errc::invalid_argument,
          "pattern " + m.str() + " is not in the decomposed support");
  double s = 0;
  for (const auto& t : terms)
    if (t.active(cell, m)) s += t.coefficient;
  return s;
}

LoglinearDecomposition loglinear_decomposition(const FullDataDistribution& g, int max_items) {
  const int p = g.space.item_count();
  require(p <= max_items, errc::unsupported_size,
          "loglinear decomposition capped at " + std::to_string(max_items) + " items");

  LoglinearDecomposition out{g.space, g.patterns, {}};

  std::vector<int> probe(static_cast<std::size_t>(p), 0);
  for (int i = 0; i < g.patterns.size(); ++i) {
    const Pattern& m = g.patterns.at(i);
    std::vector<int> obs_items, mis_items;
    for (int j = 0; j < p; ++j)
      (m.observed(j) ? obs_items : mis_items).push_back(j);
    const auto& eta = g.eta.values[static_cast<std::size_t>(i)];

    // eta_m as a function of the observed cell, read through the space
    auto eta_at = [&](const std::vector<int>& obs_vals) {
      std::fill(probe.begin(), probe.end(), 0);
      for (std::size_t t = 0; t < obs_items.size(); ++t)
        probe[static_cast<std::size_t>(obs_items[t])] = obs_vals[t];
      return eta[g.space.observed_index(probe, m)];
    };

    const int no = static_cast<int>(obs_items.size());
    for (std::uint32_t amask = 0; amask < (std::uint32_t{1} << no); ++amask) {
      // items of this interaction
      std::vector<int> a_pos;  // positions within obs_items
      for (int t = 0; t < no; ++t)
        if (amask & (std::uint32_t{1} << t)) a_pos.push_back(t);

      // enumerate non-reference level assignments over the subset
      std::vector<int> lev(a_pos.size(), 1);
      for (;;) {
        // Moebius sum over sub-subsets: coefficient at these levels
        double coef = 0;
        std::vector<int> vals(static_cast<std::size_t>(no), 0);
        const std::size_t na = a_pos.size();
        for (std::uint32_t bmask = 0; bmask < (std::uint32_t{1} << na); ++bmask) {
          std::fill(vals.begin(), vals.end(), 0);
          int popcnt = 0;
          for (std::size_t t = 0; t < na; ++t)
            if (bmask & (std::uint32_t{1} << t)) {
              vals[static_cast<std::size_t>(a_pos[t])] = lev[t];
              ++popcnt;
            }
          const double sign = ((static_cast<int>(na) - popcnt) % 2 == 0) ? 1.0 : -1.0;
          coef += sign * eta_at(vals);
        }

        LoglinearTerm term;
        for (std::size_t t = 0; t < na; ++t) {
          term.x_items.push_back(obs_items[static_cast<std::size_t>(a_pos[t])]);
          term.x_levels.push_back(lev[t]);
        }
        term.m_items = mis_items;
        term.coefficient = coef;
        out.terms.push_back(std::move(term));

        // next level assignment (each coordinate runs 1..K_j-1)
        std::size_t t = 0;
        for (; t < na; ++t) {
          const int K = g.space.levels(obs_items[static_cast<std::size_t>(a_pos[t])]);
          if (++lev[t] < K) break;
          lev[t] = 1;
        }
        if (t == na) break;
      }
    }
  }
  return out;
}

}  // namespace icin
