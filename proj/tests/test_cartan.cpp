#include <catch2/catch_amalgamated.hpp>

#include "bsgal/cartan.hpp"
#include "test_support.hpp"

using namespace bsgal;
using namespace bsgal::testing;

TEST_CASE("cartan matrices of small types") {
  const CartanDatum a2 = build_cartan("A2");
  CHECK(a2.entry(1, 1) == 2);
  CHECK(a2.entry(1, 2) == -1);
  CHECK(a2.entry(2, 1) == -1);
  CHECK(a2.entry(2, 2) == 2);

  const CartanDatum b2 = build_cartan("B2");
  CHECK(b2.entry(1, 2) == -1);
  CHECK(b2.entry(2, 1) == -2);
}

TEST_CASE("positive root counts across the families") {
  const std::vector<std::pair<std::string, int>> table = {
      {"A1", 1},  {"A2", 3},  {"A3", 6},  {"A4", 10}, {"A5", 15},
      {"B2", 4},  {"B3", 9},  {"B4", 16}, {"C3", 9},  {"C4", 16},
      {"D3", 6},  {"D4", 12}, {"D5", 20}, {"E6", 36}, {"E7", 63},
      {"E8", 120}, {"F4", 24}, {"G2", 6}};
  for (const auto& [name, count] : table) {
    const CartanDatum d = build_cartan(name);
    INFO(name);
    CHECK(d.positive_count() == count);
    CHECK(static_cast<int>(d.roots().size()) == 2 * count);
  }
}

TEST_CASE("A2 positive roots are a1, a2, a1+a2") {
  const CartanDatum a2 = build_cartan("A2");
  REQUIRE(a2.positive_count() == 3);
  CHECK(a2.is_root(root_of({1, 0})));
  CHECK(a2.is_root(root_of({0, 1})));
  CHECK(a2.is_root(root_of({1, 1})));
  CHECK_FALSE(a2.is_root(root_of({2, 1})));
}

TEST_CASE("invalid family or rank is rejected") {
  CHECK_THROWS_AS(build_cartan("B1"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("D2"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("E5"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("F3"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("G3"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("A9"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("H3"), InvalidCartanError);
  CHECK_THROWS_AS(build_cartan("A"), InvalidCartanError);
}

TEST_CASE("reflect on explicit roots") {
  const CartanDatum a2 = build_cartan("A2");
  CHECK(reflect(a2, 1, root_of({0, 1})) == root_of({1, 1}));
  CHECK(reflect(a2, 1, root_of({1, 0})) == root_of({-1, 0}));

  const CartanDatum b2 = build_cartan("B2");
  CHECK(reflect(b2, 2, root_of({1, 0})) == root_of({1, 2}));

  CHECK_THROWS_AS(reflect(a2, 1, root_of({2, 1})), Error);
}

TEST_CASE("simple reflections are involutions preserving the root set") {
  for (const std::string& name : {"A3", "B3", "G2", "F4"}) {
    const CartanDatum d = build_cartan(name);
    for (int i = 1; i <= d.rank(); ++i)
      for (const Root& r : d.roots()) {
        const Root s = reflect(d, i, r);
        CHECK(d.is_root(s));
        CHECK(reflect(d, i, s) == r);
      }
  }
}

TEST_CASE("weyl_from_word basics") {
  const CartanDatum a2 = build_cartan("A2");
  const WeylElement w0 = weyl_from_word(a2, {1, 2, 1});
  CHECK(w0.length() == 3);
  CHECK(weyl_from_word(a2, {}).is_identity());
  CHECK(weyl_from_word(a2, {1, 1}).is_identity());
  CHECK(weyl_from_word(a2, {1, 2, 1}) == weyl_from_word(a2, {2, 1, 2}));
}

TEST_CASE("lengths and inversion sets") {
  const CartanDatum a2 = build_cartan("A2");
  const WeylElement w0 = weyl_from_word(a2, {1, 2, 1});
  const std::vector<Root> inv = inversion_set(w0);
  REQUIRE(inv.size() == 3);
  CHECK(inversion_set(WeylElement::identity(a2)).empty());
  const WeylElement s1 = WeylElement::simple_reflection(a2, 1);
  const std::vector<Root> inv1 = inversion_set(s1);
  REQUIRE(inv1.size() == 1);
  CHECK(inv1[0] == root_of({1, 0}));
}

TEST_CASE("length equals inversion count on random words") {
  for (const std::string& name : {"A3", "B3", "G2"}) {
    const CartanDatum d = build_cartan(name);
    for (const Word& w : sample_reduced_words(d, 8, 6, 7)) {
      const WeylElement v = weyl_from_word(d, w);
      CHECK(static_cast<std::size_t>(v.length()) == inversion_set(v).size());
      CHECK(v.length() == static_cast<int>(w.size()));
      CHECK(is_reduced(d, w));
    }
  }
}

TEST_CASE("is_reduced") {
  const CartanDatum a2 = build_cartan("A2");
  CHECK(is_reduced(a2, {1, 2, 1}));
  CHECK_FALSE(is_reduced(a2, {1, 1}));
  const CartanDatum a3 = build_cartan("A3");
  CHECK(is_reduced(a3, {2, 1, 3, 2}));
  CHECK_FALSE(is_reduced(a3, {2, 1, 3, 1}));
}

TEST_CASE("bruhat order examples") {
  const CartanDatum a2 = build_cartan("A2");
  const WeylElement e = WeylElement::identity(a2);
  const WeylElement s1 = WeylElement::simple_reflection(a2, 1);
  const WeylElement s2 = WeylElement::simple_reflection(a2, 2);
  const WeylElement s1s2 = weyl_from_word(a2, {1, 2});
  const WeylElement s2s1 = weyl_from_word(a2, {2, 1});
  const WeylElement w0 = weyl_from_word(a2, {1, 2, 1});

  CHECK(bruhat_leq(e, w0));
  CHECK(bruhat_leq(e, e));
  CHECK(bruhat_leq(s2, w0));
  CHECK_FALSE(bruhat_leq(s1s2, s2s1));
  CHECK_FALSE(bruhat_leq(s2s1, s1s2));
  CHECK(bruhat_leq(s1, s1s2));
  CHECK(bruhat_leq(s2, s1s2));
}

TEST_CASE("bruhat order agrees with the subword oracle on A3") {
  const CartanDatum a3 = build_cartan("A3");
  const std::vector<WeylElement> group = whole_group(a3);
  REQUIRE(group.size() == 24);
  for (const WeylElement& u : group)
    for (const WeylElement& w : group) {
      INFO(word_to_string(reduced_word_of(u))
           << " vs " << word_to_string(reduced_word_of(w)));
      CHECK(bruhat_leq(u, w) == brute_bruhat_leq(u, w));
    }
}

TEST_CASE("bruhat order restricted to equal lengths is equality") {
  const CartanDatum b2 = build_cartan("B2");
  for (const WeylElement& u : whole_group(b2))
    for (const WeylElement& w : whole_group(b2))
      if (u.length() == w.length() && bruhat_leq(u, w)) CHECK(u == w);
}

TEST_CASE("minimal coset representatives") {
  const CartanDatum a2 = build_cartan("A2");
  const ParabolicType t2({2});
  CHECK(min_coset_rep(weyl_from_word(a2, {1, 2}), t2) ==
        WeylElement::simple_reflection(a2, 1));
  CHECK(min_coset_rep(weyl_from_word(a2, {1, 2}), ParabolicType{}) ==
        weyl_from_word(a2, {1, 2}));
  CHECK(min_coset_rep(WeylElement::simple_reflection(a2, 1), ParabolicType({1}))
            .is_identity());
}

TEST_CASE("minimal representatives send parabolic positives to positives") {
  const CartanDatum b3 = build_cartan("B3");
  const ParabolicType t0({1, 3});
  for (const WeylElement& w : whole_group(b3)) {
    const WeylElement u = min_coset_rep(w, t0);
    for (const Root& nu : b3.parabolic_positive_roots(t0))
      CHECK(u.apply(nu).is_positive());
  }
}

TEST_CASE("coset fixed points of small words") {
  const CartanDatum a2 = build_cartan("A2");
  CHECK(coset_fixed_points(a2, {1, 2, 1}, ParabolicType{}).size() == 6);
  CHECK(coset_fixed_points(a2, {}, ParabolicType{}).size() == 1);

  const CartanDatum a3 = build_cartan("A3");
  const auto pts = coset_fixed_points(a3, {2, 1, 3, 2}, ParabolicType{});
  // 1 + 3 + 5 + 4 + 1 elements by length; every length-2 element of S4 sits
  // below s2 s1 s3 s2, and four of the six length-3 elements do.
  CHECK(pts.size() == 14);

  // Independent count: group elements below the product, by raw subword
  // enumeration.
  const WeylElement w = weyl_from_word(a3, {2, 1, 3, 2});
  std::size_t below = 0;
  for (const WeylElement& v : whole_group(a3))
    if (brute_bruhat_leq(v, w)) ++below;
  CHECK(below == pts.size());

  // Sorted by length then image order, identity first, top element present.
  CHECK(pts.front().is_identity());
  for (std::size_t k = 1; k < pts.size(); ++k)
    CHECK(pts[k - 1].length() <= pts[k].length());
  bool has_top = false;
  for (const auto& u : pts)
    if (u == w) has_top = true;
  CHECK(has_top);

  CHECK_THROWS_AS(coset_fixed_points(a2, {1, 1}, ParabolicType{}),
                  NonReducedWordError);
}

TEST_CASE("coset fixed points respect the parabolic") {
  const CartanDatum a3 = build_cartan("A3");
  const ParabolicType t0({1, 2});
  const auto pts = coset_fixed_points(a3, {1, 2, 3}, t0);
  // W / W_{t0} has four classes; every class lies below the top word.
  CHECK(pts.size() == 4);
  for (const auto& u : pts) CHECK(is_min_coset_rep(u, t0));
}

TEST_CASE("reduced words produced for elements are reduced") {
  const CartanDatum b2 = build_cartan("B2");
  for (const WeylElement& w : whole_group(b2)) {
    const Word word = reduced_word_of(w);
    CHECK(static_cast<int>(word.size()) == w.length());
    CHECK(is_reduced(b2, word));
    CHECK(weyl_from_word(b2, word) == w);
  }
}

TEST_CASE("weyl element inverse and products") {
  const CartanDatum b2 = build_cartan("B2");
  for (const WeylElement& w : whole_group(b2)) {
    CHECK((w * w.inverse()).is_identity());
    CHECK(w.inverse().length() == w.length());
  }
  const WeylElement a = weyl_from_word(b2, {1, 2});
  const WeylElement b = weyl_from_word(b2, {2, 1, 2});
  CHECK(a * b == weyl_from_word(b2, {1, 2, 2, 1, 2}));
}
