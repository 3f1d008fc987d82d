#pragma once

#include <cstdint>
#include <vector>

#include "bsgal/cartan.hpp"

// Independent enumeration of the fibre Poincare polynomial through subword
// walks, after Deodhar.  Depends on the Weyl-group layer only; none of the
// wall / block / relation machinery is used here, so the two computations of
// the fibre polynomial cross-check each other.

namespace bsgal {

/// Walk all 2^r subexpressions of the (reduced, source-first) word.  Keep
/// the walks whose end value z lies in the coset u W_{t0} and weigh each by
///
///   d = #{positions whose letter is a descent of the running prefix}
///     + #{walls through the target face with z^{-1}(wall) < 0},
///
/// counting a descent position whether or not the letter is taken.  Returns
/// the ascending coefficient list of sum q^d.
inline std::vector<std::uint64_t> deodhar_polynomial(
    const CartanDatum& d, const Word& word, const ParabolicType& t0,
    const WeylElement& u_any,
    WallConvention conv = WallConvention::full_face) {
  if (!is_reduced(d, word))
    throw NonReducedWordError("deodhar_polynomial needs a reduced word");
  const WeylElement u = min_coset_rep(u_any, t0);
  const std::vector<Root> face = face_wall_roots(d, u, t0, conv);
  const int r = static_cast<int>(word.size());

  std::vector<std::uint64_t> coeff;
  auto tally = [&](int deg) {
    if (static_cast<int>(coeff.size()) <= deg) coeff.resize(deg + 1, 0);
    coeff[static_cast<std::size_t>(deg)] += 1;
  };

  // Iterative DFS over take/skip choices; prefix and its inverse are carried
  // along so descents and the face-wall correction cost O(rank^2).
  struct Frame {
    WeylElement v;
    WeylElement vinv;
    int p;
    int descents;
  };
  std::vector<Frame> stack;
  stack.push_back(Frame{WeylElement::identity(d),
                        WeylElement::identity(d), 1, 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.p > r) {
      if (min_coset_rep(f.v, t0) == u) {
        int correction = 0;
        for (const Root& pi : face)
          if (f.vinv.apply(pi).is_negative()) ++correction;
        tally(f.descents + correction);
      }
      continue;
    }
    const int k = word[static_cast<std::size_t>(f.p - 1)];
    const int descents = f.descents + (f.v.has_right_descent(k) ? 1 : 0);
    stack.push_back(Frame{f.v, f.vinv, f.p + 1, descents});
    stack.push_back(Frame{f.v.mul_simple_right(k), f.vinv.mul_simple_left(k),
                          f.p + 1, descents});
  }
  if (coeff.empty()) coeff.push_back(0);
  return coeff;
}

}  // namespace bsgal
