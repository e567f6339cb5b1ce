#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "icin/categorical.hpp"
#include "oracle_naive.hpp"
#include "test_util.hpp"

using namespace icin;
using namespace icin::test;

namespace {

// max over (pattern, observed cell) of |sum_x g - f|
double max_saturation_gap(const ObservedDistribution& obs, const FullDataDistribution& g) {
  double worst = 0;
  std::vector<int> cell;
  for (int i = 0; i < obs.patterns.size(); ++i) {
    const Pattern& m = obs.patterns.at(i);
    std::vector<double> margin(obs.space.observed_cell_count(m), 0.0);
    for (std::size_t x = 0; x < obs.space.cell_count(); ++x) {
      obs.space.decode(x, cell);
      margin[obs.space.observed_index(cell, m)] += std::exp(g.log_mass(i, x));
    }
    for (std::size_t o = 0; o < margin.size(); ++o)
      worst = std::max(worst, std::fabs(margin[o] - obs.mass[static_cast<std::size_t>(i)][o]));
  }
  return worst;
}

}  // namespace

TEST_CASE("hand-computed eta on the p=2 fixture") {
  const ObservedDistribution obs = p2_fixture();
  const EtaTable eta = build_eta(obs);
  const int i00 = obs.patterns.index_of(Pattern::from_string("00"));
  const int i01 = obs.patterns.index_of(Pattern::from_string("01"));

  // base case: eta_00 = log f
  CHECK(eta.values[static_cast<std::size_t>(i00)][0] == doctest::Approx(std::log(0.20)).epsilon(1e-14));
  // eta_01(x1=1) = log 0.10 - log 0.30
  CHECK(eta.values[static_cast<std::size_t>(i01)][0] ==
        doctest::Approx(std::log(0.10) - std::log(0.30)).epsilon(1e-14));
}

TEST_CASE("hand-computed g on the p=2 fixture") {
  const ObservedDistribution obs = p2_fixture();
  const FullDataDistribution g = build_full_data(obs);

  CHECK(g.mass(Pattern::from_string("01"), {0, 0}) == doctest::Approx(1.0 / 15).epsilon(1e-12));
  CHECK(g.mass(Pattern::from_string("01"), {0, 1}) == doctest::Approx(1.0 / 30).epsilon(1e-12));
  CHECK(g.mass(Pattern::from_string("11"), {0, 0}) == doctest::Approx(1.0 / 30).epsilon(1e-12));
  CHECK(g.mass(Pattern::from_string("11"), {0, 1}) == doctest::Approx(1.0 / 60).epsilon(1e-12));

  // m = 0_p slice equals f exactly
  CHECK(g.mass(Pattern::from_string("00"), {0, 0}) == doctest::Approx(0.20).epsilon(1e-14));
  CHECK(g.mass(Pattern::from_string("00"), {1, 0}) == doctest::Approx(0.10).epsilon(1e-14));

  CHECK(g.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform table gives constant eta at the base pattern") {
  const ObservedDistribution obs =
      make_observed({2, 2}, {"00", "01", "10", "11"},
                    {{"00", {1.0 / 16, 1.0 / 16, 1.0 / 16, 1.0 / 16}},
                     {"01", {1.0 / 8, 1.0 / 8}},
                     {"10", {1.0 / 8, 1.0 / 8}},
                     {"11", {0.25}}});
  const EtaTable eta = build_eta(obs);
  for (double v : eta.values[0]) CHECK(v == doctest::Approx(std::log(1.0 / 16)).epsilon(1e-14));
}

TEST_CASE("positivity violations fail fast with the offending pattern") {
  ObservedDistribution obs = p2_fixture();
  obs.mass[1][0] = 0.0;
  obs.mass[1][1] = 0.20;  // keep the total at 1
  try {
    build_full_data(obs);
    FAIL("expected a positivity error");
  } catch (const error& e) {
    CHECK(e.code() == errc::positivity);
    CHECK(std::string(e.what()).find("01") != std::string::npos);
  }
}

TEST_CASE("construction matches the naive linear-domain oracle") {
  std::mt19937_64 rng(20240811);
  std::vector<int> cell;
  for (int rep = 0; rep < 60; ++rep) {
    const int p = 2 + static_cast<int>(rng() % 3);
    const ObservedDistribution obs = random_observed(rng, p);
    const FullDataDistribution g = build_full_data(obs);
    const NaiveFullData naive = naive_build(obs);
    for (int i = 0; i < obs.patterns.size(); ++i)
      for (std::size_t x = 0; x < obs.space.cell_count(); ++x) {
        obs.space.decode(x, cell);
        const double expected =
            static_cast<double>(naive.g.at({obs.patterns.at(i).str(), cell}));
        CHECK(std::exp(g.log_mass(i, x)) == doctest::Approx(expected).epsilon(1e-11));
      }
  }
}

TEST_CASE("saturation and normalization on random tables") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = 2 + static_cast<int>(rng() % 3);
    const ObservedDistribution obs = random_observed(rng, p);
    const FullDataDistribution g = build_full_data(obs);
    CHECK(max_saturation_gap(obs, g) < 1e-10);
    CHECK(std::fabs(g.total() - 1.0) < 1e-10);
  }
}

TEST_CASE("closed-form equivalence for p=2 with all four patterns") {
  std::mt19937_64 rng(123);
  std::vector<int> cell;
  for (int rep = 0; rep < 40; ++rep) {
    const ObservedDistribution obs = random_observed(rng, 2, 3, /*all_patterns=*/true);
    const FullDataDistribution g = build_full_data(obs);
    const ClosedFormP2 cf = closed_form_p2(obs);
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < obs.space.levels(0); ++a)
        for (int b = 0; b < obs.space.levels(1); ++b) {
          const int idx = obs.patterns.index_of(
              Pattern({static_cast<std::uint8_t>(i >> 1), static_cast<std::uint8_t>(i & 1)}));
          const double got = g.mass(obs.patterns.at(idx), {a, b});
          CHECK(got == doctest::Approx(static_cast<double>(cf.g[a][b][i])).epsilon(1e-12));
        }
  }

  // the worked fixture, against the spec numbers
  const FullDataDistribution g = build_full_data(p2_fixture());
  CHECK(g.mass(Pattern::from_string("01"), {0, 0}) == doctest::Approx(0.0667).epsilon(2e-3));
  CHECK(g.mass(Pattern::from_string("11"), {0, 0}) == doctest::Approx(0.0333).epsilon(2e-3));
}

TEST_CASE("missingness logit is free of the item's own value") {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    const int p = 2 + static_cast<int>(rng() % 3);
    const ObservedDistribution obs = random_observed(rng, p);
    const FullDataDistribution g = build_full_data(obs);
    for (int j = 0; j < p; ++j) {
      for (const auto& base : PatternSet::full(p).order()) {
        const Pattern m1 = base.with_bit(j, true);
        const Pattern m0 = base.with_bit(j, false);
        if (!obs.patterns.contains(m1) || !obs.patterns.contains(m0)) continue;
        std::vector<int> cell(static_cast<std::size_t>(p), 0);
        const double ref = missingness_logit(g, j, base, cell);
        for (int lvl = 1; lvl < obs.space.levels(j); ++lvl) {
          cell[static_cast<std::size_t>(j)] = lvl;
          CHECK(std::fabs(missingness_logit(g, j, base, cell) - ref) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("missingness logit on the p=2 fixture and its edge conventions") {
  const ObservedDistribution obs = p2_fixture();
  const FullDataDistribution g = build_full_data(obs);

  // j=1, other item observed: pr(M1=1 | M2=0, x) = 0.0333/(0.2+0.0333) = 0.1429,
  // the same at x1=2, so the logit is log(1/6) at both cells
  const double l1 = missingness_logit(g, 0, Pattern::from_string("00"), {0, 0});
  const double l2 = missingness_logit(g, 0, Pattern::from_string("00"), {1, 0});
  CHECK(l1 == doctest::Approx(std::log(1.0 / 6)).epsilon(1e-12));
  CHECK(l1 == doctest::Approx(l2).epsilon(1e-12));
  CHECK(1.0 / (1.0 + std::exp(-l1)) == doctest::Approx(0.1429).epsilon(1e-3));

  // absent sibling pattern: probability-zero convention
  const ObservedDistribution sparse = make_observed(
      {2, 2}, {"00", "01"}, {{"00", {0.2, 0.2, 0.2, 0.2}}, {"01", {0.1, 0.1}}});
  const FullDataDistribution gs = build_full_data(sparse);
  CHECK(std::isinf(missingness_logit(gs, 0, Pattern::from_string("00"), {0, 0})));
  CHECK(missingness_logit(gs, 0, Pattern::from_string("00"), {0, 0}) < 0);
  CHECK_THROWS_AS(missingness_logit(gs, 0, Pattern::from_string("01"), {0, 0}), const error&);
}

TEST_CASE("nonignorability witness: pr(M = m | X = x) varies with the missing item") {
  // skewed table, pattern 01 (x2 missing): pr(M=01 | x) differs across x2
  const FullDataDistribution g = build_full_data(p2_skew_fixture());
  const std::vector<double> marg = item_marginal(g);
  auto pr_m_given_x = [&](const std::vector<int>& cell) {
    return g.mass(Pattern::from_string("01"), cell) / marg[g.space.index_of(cell)];
  };
  CHECK(std::fabs(pr_m_given_x({0, 0}) - pr_m_given_x({0, 1})) > 1e-3);
}

TEST_CASE("item marginal on the fixture") {
  const ObservedDistribution obs = p2_fixture();
  const FullDataDistribution g = build_full_data(obs);
  const std::vector<double> marg = item_marginal(g);
  CHECK(marg[g.space.index_of({0, 0})] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  double total = 0;
  for (double v : marg) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  // a table concentrated on the complete pattern reproduces f
  const ObservedDistribution solo =
      make_observed({2, 2}, {"00"}, {{"00", {0.4, 0.3, 0.2, 0.1}}});
  const FullDataDistribution gsolo = build_full_data(solo);
  const std::vector<double> msolo = item_marginal(gsolo);
  CHECK(msolo[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(msolo[3] == doctest::Approx(0.1).epsilon(1e-14));

  // the fixture is symmetric under swapping the two off-diagonal cells
  CHECK(marg[g.space.index_of({0, 1})] ==
        doctest::Approx(marg[g.space.index_of({1, 0})]).epsilon(1e-12));
}

TEST_CASE("event probability") {
  const FullDataDistribution g = build_full_data(p2_fixture());
  CHECK(event_probability(g, [](const std::vector<int>&) { return true; }) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(event_probability(g, [](const std::vector<int>&) { return false; }) == 0.0);
  const double x1_is_1 =
      event_probability(g, [](const std::vector<int>& c) { return c[0] == 0; });
  const std::vector<double> marg = item_marginal(g);
  CHECK(x1_is_1 ==
        doctest::Approx(marg[g.space.index_of({0, 0})] + marg[g.space.index_of({0, 1})])
            .epsilon(1e-12));
}

TEST_CASE("simulation: determinism and convergence to the generator") {
  const FullDataDistribution g = build_full_data(p2_fixture());

  const auto a = simulate(g, 500, 42);
  const auto b = simulate(g, 500, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pattern == b[i].pattern);
    CHECK(a[i].values == b[i].values);
  }
  CHECK(simulate(g, 1, 7).size() == 1);
  CHECK_THROWS_AS(simulate(g, 0, 7), const error&);

  // law of large numbers at n = 1e6: empirical observed masses near f
  const std::size_t n = 1000000;
  const auto records = simulate(g, n, 20250810);
  const ObservedDistribution emp = empirical_distribution(g.space, records);
  const ObservedDistribution obs = p2_fixture();
  REQUIRE(emp.patterns.size() == obs.patterns.size());
  for (int i = 0; i < obs.patterns.size(); ++i)
    for (std::size_t o = 0; o < obs.mass[static_cast<std::size_t>(i)].size(); ++o) {
      const double f = obs.mass[static_cast<std::size_t>(i)][o];
      const double tol = 3.0 * std::sqrt(f * (1 - f) / static_cast<double>(n));
      CHECK(std::fabs(emp.mass[static_cast<std::size_t>(i)][o] - f) < tol);
    }

  // round trip: rebuilding from the empirical table approaches g
  const FullDataDistribution ghat = build_full_data(emp);
  std::vector<int> cell;
  for (int i = 0; i < g.patterns.size(); ++i)
    for (std::size_t x = 0; x < g.space.cell_count(); ++x)
      CHECK(std::fabs(std::exp(ghat.log_mass(i, x)) - std::exp(g.log_mass(i, x))) < 5e-3);
}

TEST_CASE("space guards") {
  CHECK_THROWS_AS(CategoricalSpace({1}), const error&);
  CHECK_THROWS_AS(CategoricalSpace(std::vector<int>{}), const error&);
  CHECK_THROWS_AS(CategoricalSpace(std::vector<int>(12, 10)), const error&);  // 1e12 cells
  const CategoricalSpace sp({2, 3, 2});
  CHECK(sp.cell_count() == 12);
  CHECK(sp.index_of({1, 2, 0}) == sp.cell_count() - 2);
  CHECK(sp.cell_at(sp.index_of({1, 2, 1})) == std::vector<int>{1, 2, 1});
}
