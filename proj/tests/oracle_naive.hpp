#pragma once
// Independent oracles for the construction, kept deliberately unlike the
// library: linear-domain long double arithmetic over maps keyed by pattern
// strings, plus the closed forms for two items. Test-only code.

#include <map>
#include <string>
#include <vector>

#include "icin/categorical.hpp"

namespace icin::test {

// full-data masses computed by direct enumeration of the recursion
struct NaiveFullData {
  // key: (pattern string, full cell), value: g(x, m)
  std::map<std::pair<std::string, std::vector<int>>, long double> g;
};

inline NaiveFullData naive_build(const ObservedDistribution& obs) {
  const auto& sp = obs.space;
  const auto& ps = obs.patterns;
  const int p = sp.item_count();

  // exp(eta) tables per pattern, keyed by the observed values
  std::map<std::string, std::map<std::vector<int>, long double>> E;

  std::vector<int> cell;
  auto observed_values = [&](const std::vector<int>& full, const Pattern& m) {
    std::vector<int> vals;
    for (int j = 0; j < p; ++j)
      if (m.observed(j)) vals.push_back(full[static_cast<std::size_t>(j)]);
    return vals;
  };

  NaiveFullData out;
  for (int i = 0; i < ps.size(); ++i) {
    const Pattern& m = ps.at(i);

    // t(x) = prod over strict predecessors of exp(eta) at x
    std::map<std::vector<int>, long double> t;
    for (std::size_t x = 0; x < sp.cell_count(); ++x) {
      sp.decode(x, cell);
      long double prod = 1.0L;
      for (int k = 0; k < ps.size(); ++k) {
        const Pattern& mk = ps.at(k);
        if (!strictly_precedes(mk, m)) continue;
        prod *= E[mk.str()][observed_values(cell, mk)];
      }
      t[cell] = prod;
    }

    // integrate t over the missing coordinates per observed cell
    std::map<std::vector<int>, long double> integral;
    for (const auto& [full, val] : t) integral[observed_values(full, m)] += val;

    for (std::size_t o = 0; o < sp.observed_cell_count(m); ++o) {
      const std::vector<int> vals = sp.observed_cell_at(o, m);
      const long double f = obs.mass[static_cast<std::size_t>(i)][o];
      E[m.str()][vals] = f / integral[vals];
    }

    for (const auto& [full, val] : t)
      out.g[{m.str(), full}] = val * E[m.str()][observed_values(full, m)];
  }
  return out;
}

// closed forms for two items with all four patterns:
//   g(x, 01) = f00(x1, x2) f01(x1) / f00(x1)
//   g(x, 10) = f00(x1, x2) f10(x2) / f00(x2)
//   g(x, 11) proportional to f00 f01(x1) f10(x2) / (f00(x1) f00(x2)),
//            scaled so the slice totals f(11)
struct ClosedFormP2 {
  // [x1][x2][pattern index 00,01,10,11]
  long double g[4][4][4];
};

inline ClosedFormP2 closed_form_p2(const ObservedDistribution& obs) {
  const auto& sp = obs.space;
  if (sp.item_count() != 2 || obs.patterns.size() != 4)
    throw std::runtime_error("closed form needs p=2 with all four patterns");
  const int K1 = sp.levels(0), K2 = sp.levels(1);
  const int i00 = obs.patterns.index_of(Pattern::from_string("00"));
  const int i01 = obs.patterns.index_of(Pattern::from_string("01"));
  const int i10 = obs.patterns.index_of(Pattern::from_string("10"));
  const int i11 = obs.patterns.index_of(Pattern::from_string("11"));

  auto f00 = [&](int a, int b) {
    return static_cast<long double>(
        obs.mass[static_cast<std::size_t>(i00)][static_cast<std::size_t>(a * K2 + b)]);
  };
  auto f01 = [&](int a) {
    return static_cast<long double>(
        obs.mass[static_cast<std::size_t>(i01)][static_cast<std::size_t>(a)]);
  };
  auto f10 = [&](int b) {
    return static_cast<long double>(
        obs.mass[static_cast<std::size_t>(i10)][static_cast<std::size_t>(b)]);
  };
  const long double f11 = obs.mass[static_cast<std::size_t>(i11)][0];

  std::vector<long double> m1(static_cast<std::size_t>(K1), 0.0L);
  std::vector<long double> m2(static_cast<std::size_t>(K2), 0.0L);
  for (int a = 0; a < K1; ++a)
    for (int b = 0; b < K2; ++b) {
      m1[static_cast<std::size_t>(a)] += f00(a, b);
      m2[static_cast<std::size_t>(b)] += f00(a, b);
    }

  ClosedFormP2 out{};
  long double unnorm_total = 0.0L;
  for (int a = 0; a < K1; ++a)
    for (int b = 0; b < K2; ++b)
      unnorm_total += f00(a, b) * f01(a) * f10(b) /
                      (m1[static_cast<std::size_t>(a)] * m2[static_cast<std::size_t>(b)]);

  for (int a = 0; a < K1; ++a)
    for (int b = 0; b < K2; ++b) {
      out.g[a][b][0] = f00(a, b);
      out.g[a][b][1] = f00(a, b) * f01(a) / m1[static_cast<std::size_t>(a)];
      out.g[a][b][2] = f00(a, b) * f10(b) / m2[static_cast<std::size_t>(b)];
      out.g[a][b][3] = f11 * f00(a, b) * f01(a) * f10(b) /
                       (m1[static_cast<std::size_t>(a)] * m2[static_cast<std::size_t>(b)] *
                        unnorm_total);
    }
  return out;
}

}  // namespace icin::test
