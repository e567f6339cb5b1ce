#pragma once
// Shared fixture helpers for the test suites.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "icin/categorical.hpp"

namespace icin::test {

inline PatternSet make_patterns(int p, const std::vector<std::string>& strs) {
  std::vector<Pattern> ms;
  for (const auto& s : strs) ms.push_back(Pattern::from_string(s));
  return PatternSet(p, std::move(ms));
}

// masses per pattern in observed-cell index order (last observed item fastest)
inline ObservedDistribution make_observed(
    std::vector<int> levels, const std::vector<std::string>& patterns,
    const std::map<std::string, std::vector<double>>& masses) {
  CategoricalSpace space(std::move(levels));
  PatternSet ps = make_patterns(space.item_count(), patterns);
  std::vector<std::vector<double>> mass(static_cast<std::size_t>(ps.size()));
  for (int i = 0; i < ps.size(); ++i) {
    const auto it = masses.find(ps.at(i).str());
    if (it == masses.end()) throw std::runtime_error("fixture: no masses for pattern");
    mass[static_cast<std::size_t>(i)] = it->second;
  }
  return ObservedDistribution{std::move(space), std::move(ps), std::move(mass)};
}

// The worked p=2 binary table: f(.,00) = {(1,1):0.20,(1,2):0.10,(2,1):0.10,
// (2,2):0.20}, f(.,01) = {0.10, 0.10}, f(.,10) = {0.05, 0.05}, f(11) = 0.10.
inline ObservedDistribution p2_fixture() {
  return make_observed({2, 2}, {"00", "01", "10", "11"},
                       {{"00", {0.20, 0.10, 0.10, 0.20}},
                        {"01", {0.10, 0.10}},
                        {"10", {0.05, 0.05}},
                        {"11", {0.10}}});
}

// asymmetric variant whose induced mechanism pr(M = m | X = x) varies with
// the missing coordinates
inline ObservedDistribution p2_skew_fixture() {
  return make_observed({2, 2}, {"00", "01", "10", "11"},
                       {{"00", {0.25, 0.10, 0.15, 0.10}},
                        {"01", {0.10, 0.10}},
                        {"10", {0.05, 0.05}},
                        {"11", {0.10}}});
}

// strictly positive random observed distribution over a random pattern set
// containing the all-observed pattern
inline ObservedDistribution random_observed(std::mt19937_64& rng, int p, int max_levels = 3,
                                            bool all_patterns = false) {
  std::uniform_int_distribution<int> pick_level(2, max_levels);
  std::vector<int> levels(static_cast<std::size_t>(p));
  for (auto& k : levels) k = pick_level(rng);
  CategoricalSpace space(levels);

  std::vector<Pattern> pats;
  const PatternSet full = PatternSet::full(p);
  std::bernoulli_distribution keep(0.7);
  for (const auto& m : full.order())
    if (all_patterns || m.missing_count() == 0 || keep(rng)) pats.push_back(m);
  PatternSet ps(p, std::move(pats));

  std::uniform_real_distribution<double> mass(0.05, 1.0);
  std::vector<std::vector<double>> f(static_cast<std::size_t>(ps.size()));
  double total = 0;
  for (int i = 0; i < ps.size(); ++i) {
    f[static_cast<std::size_t>(i)].resize(space.observed_cell_count(ps.at(i)));
    for (double& v : f[static_cast<std::size_t>(i)]) {
      v = mass(rng);
      total += v;
    }
  }
  for (auto& pm : f)
    for (double& v : pm) v /= total;
  return ObservedDistribution{std::move(space), std::move(ps), std::move(f)};
}

}  // namespace icin::test
