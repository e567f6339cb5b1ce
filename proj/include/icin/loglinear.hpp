#pragma once
// Corner-point loglinear re-expression of log g: every eta_m splits into
// main effects and interactions among the observed-item dummies and the
// missingness dummies of m, never pairing an item with its own indicator.
// Reference levels are the first category and the observed state.

#include <string>
#include <vector>

#include "icin/categorical.hpp"

namespace icin {

struct LoglinearTerm {
  std::vector<int> x_items;   // items carrying X dummies, ascending
  std::vector<int> x_levels;  // matching levels, never the reference 0
  std::vector<int> m_items;   // items carrying M_j = 1 dummies, ascending
  double coefficient = 0.0;

  // active at (x, m) iff every listed level matches and every listed
  // indicator is missing
  bool active(const std::vector<int>& cell, const Pattern& m) const;
  std::string label() const;  // e.g. "X1=2*M2*M3"; "1" for the intercept
};

struct LoglinearDecomposition {
  CategoricalSpace space;
  PatternSet patterns;
  std::vector<LoglinearTerm> terms;

  double reconstruct_log_mass(const Pattern& m, const std::vector<int>& cell) const;
};

// cap: decomposition is exponential in p; refuse beyond max_items
LoglinearDecomposition loglinear_decomposition(const FullDataDistribution& g,
                                               int max_items = 6);

}  // namespace icin
