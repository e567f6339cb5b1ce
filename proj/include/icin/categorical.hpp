#pragma once
// Nonparametric-saturated full-data distributions for categorical items
// under itemwise conditionally independent nonresponse.
//
// build_full_data maps a strictly positive observed-data distribution
// f(x_obs, m) to the unique joint g(x, m) whose per-item missingness logit
// is free of that item's own value and whose margins over the missing
// coordinates reproduce f exactly. Everything runs in the log domain with
// log-sum-exp for the inner marginalization.
//
// Levels are 0-based internally; file formats use 1-based cells or labels.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "icin/errors.hpp"
#include "icin/pattern.hpp"

namespace icin {

// Finite product space {0..K_1-1} x ... x {0..K_p-1} with mixed-radix cell
// indexing (last item fastest).
class CategoricalSpace {
public:
  explicit CategoricalSpace(std::vector<int> levels);

  int item_count() const { return static_cast<int>(levels_.size()); }
  int levels(int j) const { return levels_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& all_levels() const { return levels_; }
  std::size_t cell_count() const { return cells_; }

  std::size_t index_of(const std::vector<int>& cell) const;
  std::vector<int> cell_at(std::size_t idx) const;
  void decode(std::size_t idx, std::vector<int>& cell) const;

  // indexing of the observed subspace of a pattern (items with m_j = 0,
  // ascending j, last observed item fastest)
  std::size_t observed_cell_count(const Pattern& m) const;
  std::size_t observed_index(const std::vector<int>& full_cell, const Pattern& m) const;
  std::vector<int> observed_cell_at(std::size_t idx, const Pattern& m) const;

  bool operator==(const CategoricalSpace& o) const { return levels_ == o.levels_; }

private:
  std::vector<int> levels_;
  std::vector<std::size_t> stride_;
  std::size_t cells_ = 1;
};

// f(x_obs, m): one mass per (pattern, observed cell), expected to total 1.
struct ObservedDistribution {
  CategoricalSpace space;
  PatternSet patterns;
  std::vector<std::vector<double>> mass;  // [pattern idx][observed cell idx]

  double total() const;
  void validate(double total_tol = 1e-12) const;
};

struct EtaTable {
  std::vector<std::vector<double>> values;  // [pattern idx][observed cell idx]
};

struct FullDataDistribution {
  CategoricalSpace space;
  PatternSet patterns;
  EtaTable eta;
  std::vector<std::vector<double>> log_g;  // [pattern idx][full cell idx]

  double log_mass(int pattern_idx, std::size_t cell_idx) const {
    return log_g[static_cast<std::size_t>(pattern_idx)][cell_idx];
  }
  // 0 / -inf when m is not a realizable pattern
  double mass(const Pattern& m, const std::vector<int>& cell) const;
  double log_mass(const Pattern& m, const std::vector<int>& cell) const;
  double total() const;
};

// Theorem-1 recursion along the traversal order of the pattern set.
EtaTable build_eta(const ObservedDistribution& observed);
FullDataDistribution build_full_data(const ObservedDistribution& observed);

// logit pr_g(M_j = 1 | M_-j, X = x); the j-th bit of m_base is ignored.
// +/-inf when exactly one sibling pattern is realizable.
double missingness_logit(const FullDataDistribution& g, int j, const Pattern& m_base,
                         const std::vector<int>& cell);

// pr(X = x) = sum_m g(x, m), indexed by full cell
std::vector<double> item_marginal(const FullDataDistribution& g);

using CellPredicate = std::function<bool(const std::vector<int>&)>;
struct NamedEvent {
  std::string name;
  CellPredicate pred;
};

double event_probability(const FullDataDistribution& g, const CellPredicate& event);

// One simulated respondent: values[j] = -1 where the item is missing.
struct MaskedRecord {
  Pattern pattern;
  std::vector<int> values;
};

std::vector<MaskedRecord> simulate(const FullDataDistribution& g, std::size_t n,
                                   std::uint64_t seed);

// Empirical observed-data distribution of a sample; realized patterns
// define the pattern set (the all-observed pattern must occur).
ObservedDistribution empirical_distribution(const CategoricalSpace& space,
                                            const std::vector<MaskedRecord>& records);

}  // namespace icin
