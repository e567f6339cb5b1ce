#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "icin/pattern.hpp"

using namespace icin;

TEST_CASE("precedes follows the missing-items order") {
  CHECK(precedes(Pattern::from_string("001"), Pattern::from_string("101")));
  CHECK(precedes(Pattern::from_string("101"), Pattern::from_string("111")));
  CHECK_FALSE(precedes(Pattern::from_string("001"), Pattern::from_string("110")));
  const Pattern m = Pattern::from_string("0101");
  CHECK(precedes(m, m));
  CHECK_THROWS_AS(precedes(Pattern::from_string("01"), Pattern::from_string("011")),
                  const error&);
}

TEST_CASE("partial-order axioms hold exhaustively for p <= 4") {
  for (int p = 1; p <= 4; ++p) {
    const PatternSet full = PatternSet::full(p);
    for (const auto& a : full.order()) {
      CHECK(precedes(a, a));
      for (const auto& b : full.order()) {
        if (precedes(a, b) && precedes(b, a)) CHECK(a == b);
        for (const auto& c : full.order())
          if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
      }
    }
  }
}

TEST_CASE("strict predecessors in traversal order") {
  const PatternSet full2 = PatternSet::full(2);
  const auto preds = full2.strict_predecessors(Pattern::from_string("11"));
  REQUIRE(preds.size() == 3);
  CHECK(preds[0].str() == "00");
  CHECK(preds[1].str() == "01");
  CHECK(preds[2].str() == "10");

  CHECK(full2.strict_predecessors(Pattern::from_string("00")).empty());

  const PatternSet sparse(2, {Pattern::from_string("00"), Pattern::from_string("11")});
  const auto sp = sparse.strict_predecessors(Pattern::from_string("11"));
  REQUIRE(sp.size() == 1);
  CHECK(sp[0].str() == "00");
}

TEST_CASE("traversal order is a deterministic linear extension") {
  const PatternSet full2 = PatternSet::full(2);
  REQUIRE(full2.size() == 4);
  CHECK(full2.at(0).str() == "00");
  CHECK(full2.at(1).str() == "01");
  CHECK(full2.at(2).str() == "10");
  CHECK(full2.at(3).str() == "11");

  const PatternSet chain(3, {Pattern::from_string("000"), Pattern::from_string("011"),
                             Pattern::from_string("111")});
  CHECK(chain.at(0).str() == "000");
  CHECK(chain.at(1).str() == "011");
  CHECK(chain.at(2).str() == "111");

  const PatternSet trivial(3, {Pattern::zeros(3)});
  CHECK(trivial.size() == 1);

  // every strict predecessor appears earlier, for random subsets
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 2 + static_cast<int>(rng() % 3);
    std::vector<Pattern> pats{Pattern::zeros(p)};
    for (const auto& m : PatternSet::full(p).order())
      if (m.missing_count() > 0 && rng() % 2 == 0) pats.push_back(m);
    const PatternSet ps(p, pats);
    for (int a = 0; a < ps.size(); ++a)
      for (int b = 0; b < ps.size(); ++b)
        if (strictly_precedes(ps.at(a), ps.at(b))) CHECK(a < b);
  }
}

TEST_CASE("sibling patterns") {
  CHECK(Pattern::from_string("010").with_bit(0, true).str() == "110");
  CHECK(Pattern::from_string("010").with_bit(1, false).str() == "000");
  CHECK(Pattern::from_string("111").with_bit(2, true).str() == "111");
  CHECK_THROWS_AS(Pattern::from_string("010").with_bit(3, true), const error&);

  // involution: restoring the original bit recovers the pattern
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    const int p = 1 + static_cast<int>(rng() % 6);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(p));
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() % 2);
    const Pattern m(bits);
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
    CHECK(m.with_bit(j, true).with_bit(j, m.missing(j)) == m);
  }
}

TEST_CASE("pattern set validation") {
  CHECK_THROWS_AS(PatternSet(2, {Pattern::from_string("01")}), const error&);  // no 0_p
  CHECK_THROWS_AS(PatternSet(2, {Pattern::from_string("00"), Pattern::from_string("00")}),
                  const error&);  // duplicate
  CHECK_THROWS_AS(PatternSet(3, {Pattern::from_string("00")}), const error&);  // length
  CHECK(PatternSet(1, {Pattern::from_string("0"), Pattern::from_string("1")}).size() == 2);
}

TEST_CASE("serialization round trip") {
  const Pattern m = Pattern::from_string("0101");
  CHECK(Pattern::from_string(m.str()) == m);
  CHECK_THROWS_AS(Pattern::from_string("01x"), const error&);
  CHECK_THROWS_AS(Pattern::from_string(""), const error&);
}
