#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bsgal/cartan.hpp"

// Shared helpers for the test suites.  The oracles here deliberately avoid
// the code paths they are checking: Bruhat membership is decided by raw
// subword-product enumeration, and expected counts are frozen constants.

namespace bsgal::testing {

inline Root root_of(std::vector<int> coeffs) {
  Root r;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    r.c[i] = static_cast<int16_t>(coeffs[i]);
  return r;
}

/// Every element expressible as a product of a subsequence of the word.
/// For a reduced word this is the lower Bruhat interval of its product.
inline std::vector<WeylElement> subword_products(const CartanDatum& d,
                                                 const Word& word) {
  std::set<std::string> seen;
  std::vector<WeylElement> out;
  const std::size_t n = word.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    WeylElement v = WeylElement::identity(d);
    for (std::size_t t = 0; t < n; ++t)
      if (mask & (std::uint64_t{1} << t)) v = v.mul_simple_right(word[t]);
    std::string key;
    for (int j = 1; j <= d.rank(); ++j)
      key += v.image_of_simple(j).to_string() + "|";
    if (seen.insert(key).second) out.push_back(v);
  }
  return out;
}

/// Brute-force Bruhat test: u <= w iff u appears among the subword products
/// of a reduced word of w.
inline bool brute_bruhat_leq(const WeylElement& u, const WeylElement& w) {
  for (const WeylElement& v :
       subword_products(u.datum(), reduced_word_of(w)))
    if (v == u) return true;
  return false;
}

/// The whole Weyl group, by closure under right multiplication.
inline std::vector<WeylElement> whole_group(const CartanDatum& d) {
  std::vector<WeylElement> out{WeylElement::identity(d)};
  std::set<std::string> seen;
  auto key = [&](const WeylElement& v) {
    std::string k;
    for (int j = 1; j <= d.rank(); ++j)
      k += v.image_of_simple(j).to_string() + "|";
    return k;
  };
  seen.insert(key(out[0]));
  for (std::size_t head = 0; head < out.size(); ++head) {
    const WeylElement v = out[head];
    for (int i = 1; i <= d.rank(); ++i) {
      WeylElement vs = v.mul_simple_right(i);
      if (seen.insert(key(vs)).second) out.push_back(vs);
    }
  }
  return out;
}

/// All reduced words of length <= cap, by ascent-only DFS (every prefix of a
/// reduced word is reduced).  Includes the empty word.
inline std::vector<Word> all_reduced_words(const CartanDatum& d, int cap) {
  std::vector<Word> out;
  Word word;
  auto rec = [&](auto&& self, const WeylElement& v) -> void {
    out.push_back(word);
    if (static_cast<int>(word.size()) == cap) return;
    for (int i = 1; i <= d.rank(); ++i) {
      if (v.has_right_descent(i)) continue;
      word.push_back(i);
      self(self, v.mul_simple_right(i));
      word.pop_back();
    }
  };
  rec(rec, WeylElement::identity(d));
  return out;
}

/// Deterministic sample of reduced words for a datum: the lexicographically
/// first maximal ascent chain (truncated to cap) plus seeded random ascent
/// walks of assorted lengths.
inline std::vector<Word> sample_reduced_words(const CartanDatum& d, int cap,
                                              int walks, std::uint64_t seed) {
  std::vector<Word> out;
  std::set<std::string> seen;
  auto push = [&](const Word& w) {
    std::string k;
    for (int v : w) k += static_cast<char>('0' + v);
    if (seen.insert(k).second) out.push_back(w);
  };

  Word greedy;
  WeylElement v = WeylElement::identity(d);
  while (static_cast<int>(greedy.size()) < cap) {
    int pick = 0;
    for (int i = 1; i <= d.rank(); ++i)
      if (!v.has_right_descent(i)) {
        pick = i;
        break;
      }
    if (pick == 0) break;
    greedy.push_back(pick);
    v = v.mul_simple_right(pick);
  }
  for (std::size_t len = 1; len <= greedy.size(); ++len)
    if (len == greedy.size() || len == 1 || len == static_cast<std::size_t>(cap) / 2)
      push(Word(greedy.begin(), greedy.begin() + static_cast<long>(len)));

  std::mt19937_64 rng(seed);
  for (int t = 0; t < walks; ++t) {
    const int want = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(cap));
    Word w;
    WeylElement u = WeylElement::identity(d);
    while (static_cast<int>(w.size()) < want) {
      std::vector<int> ascents;
      for (int i = 1; i <= d.rank(); ++i)
        if (!u.has_right_descent(i)) ascents.push_back(i);
      if (ascents.empty()) break;
      const int pick = ascents[rng() % ascents.size()];
      w.push_back(pick);
      u = u.mul_simple_right(pick);
    }
    if (!w.empty()) push(w);
  }
  return out;
}

inline std::uint64_t binomial(int n, int k) {
  std::uint64_t v = 1;
  for (int t = 0; t < k; ++t) v = v * static_cast<std::uint64_t>(n - t) /
                                   static_cast<std::uint64_t>(t + 1);
  return v;
}

}  // namespace bsgal::testing
