#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bsgal/errors.hpp"

// Exact root systems of finite type and their Weyl groups, with all
// arithmetic over the integers in the simple-root basis.
//
// Convention, used everywhere: the Cartan matrix entry is
//     a[i][j] = <alpha_j, alpha_i^vee>,
// so the simple reflection acts by
//     s_i(alpha_j) = alpha_j - a[i][j] * alpha_i,
// and on a general root beta = sum_j beta_j alpha_j by
//     s_i(beta) = beta - (sum_j beta_j a[i][j]) * alpha_i.
// Simple indices are 1-based.  Words are stored source-first: the first
// letter of a word is the leftmost factor of the product it spells.

namespace bsgal {

inline constexpr int kMaxRank = 8;

enum class Family : char {
  A = 'A',
  B = 'B',
  C = 'C',
  D = 'D',
  E = 'E',
  F = 'F',
  G = 'G'
};

/// A root written in the simple-root basis.  Slots beyond the rank stay
/// zero, so equality, ordering and hashing need not know the rank.
struct Root {
  std::array<int16_t, kMaxRank> c{};

  bool is_zero() const {
    for (int16_t v : c)
      if (v != 0) return false;
    return true;
  }

  /// All nonzero coefficients of a root share one sign.
  bool is_positive() const {
    for (int16_t v : c)
      if (v != 0) return v > 0;
    return false;
  }

  bool is_negative() const {
    for (int16_t v : c)
      if (v != 0) return v < 0;
    return false;
  }

  Root operator-() const {
    Root r;
    for (int i = 0; i < kMaxRank; ++i) r.c[i] = static_cast<int16_t>(-c[i]);
    return r;
  }

  Root abs() const { return is_negative() ? -*this : *this; }

  friend bool operator==(const Root& a, const Root& b) { return a.c == b.c; }
  friend bool operator!=(const Root& a, const Root& b) { return !(a == b); }
  friend bool operator<(const Root& a, const Root& b) { return a.c < b.c; }

  static Root simple(int i) {
    Root r;
    r.c[i - 1] = 1;
    return r;
  }

  std::string to_string() const {
    std::string out;
    for (int i = 0; i < kMaxRank; ++i) {
      int v = c[i];
      if (v == 0) continue;
      if (!out.empty()) out += v > 0 ? "+" : "-";
      else if (v < 0) out += "-";
      int m = std::abs(v);
      if (m != 1) out += std::to_string(m);
      out += "a" + std::to_string(i + 1);
    }
    return out.empty() ? "0" : out;
  }
};

struct RootHash {
  std::size_t operator()(const Root& r) const {
    std::size_t h = 1469598103934665603ull;
    for (int16_t v : r.c) {
      h ^= static_cast<std::size_t>(static_cast<uint16_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// A word in the simple generators, 1-based letters, source-first.
using Word = std::vector<int>;

/// A subset of the simple indices {1..rank}, kept sorted and unique.
struct ParabolicType {
  std::vector<int> gens;

  ParabolicType() = default;
  explicit ParabolicType(std::vector<int> g) : gens(std::move(g)) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  }

  bool contains(int i) const {
    return std::binary_search(gens.begin(), gens.end(), i);
  }
  bool empty() const { return gens.empty(); }

  friend bool operator==(const ParabolicType& a, const ParabolicType& b) {
    return a.gens == b.gens;
  }
};

/// Which walls through the target face count towards wall multiplicities:
/// one wall per positive root of the standard parabolic (full_face), or only
/// the ones attached to its simple generators (simple_face).
enum class WallConvention { full_face, simple_face };

namespace detail {

inline int expected_positive_count(Family f, int rank) {
  switch (f) {
    case Family::A: return rank * (rank + 1) / 2;
    case Family::B:
    case Family::C: return rank * rank;
    case Family::D: return rank * (rank - 1);
    case Family::E: return rank == 6 ? 36 : rank == 7 ? 63 : 120;
    case Family::F: return 24;
    case Family::G: return 6;
  }
  return -1;
}

inline bool valid_type(Family f, int rank) {
  switch (f) {
    case Family::A: return rank >= 1 && rank <= kMaxRank;
    case Family::B:
    case Family::C: return rank >= 2 && rank <= kMaxRank;
    case Family::D: return rank >= 3 && rank <= kMaxRank;
    case Family::E: return rank >= 6 && rank <= 8;
    case Family::F: return rank == 4;
    case Family::G: return rank == 2;
  }
  return false;
}

}  // namespace detail

/// A root system of finite type: Cartan matrix plus the precomputed
/// reflection closure of the simple roots, with an id for every root.
/// Immutable after construction; WeylElement values keep a pointer to their
/// datum, which must outlive them.
class CartanDatum {
 public:
  CartanDatum(Family family, int rank) : family_(family), rank_(rank) {
    if (!detail::valid_type(family, rank))
      throw InvalidCartanError(std::string("invalid Cartan type ") +
                               static_cast<char>(family) +
                               std::to_string(rank));
    fill_matrix();
    close_roots();
  }

  Family family() const { return family_; }
  int rank() const { return rank_; }
  std::string name() const {
    return std::string(1, static_cast<char>(family_)) + std::to_string(rank_);
  }

  int entry(int i, int j) const { return a_[i - 1][j - 1]; }

  Root simple(int i) const { return Root::simple(i); }

  /// s_i(beta) for any vector beta in the root lattice.
  Root reflect_simple(int i, const Root& beta) const {
    int pairing = 0;
    for (int j = 1; j <= rank_; ++j) pairing += beta.c[j - 1] * entry(i, j);
    Root out = beta;
    out.c[i - 1] = static_cast<int16_t>(out.c[i - 1] - pairing);
    return out;
  }

  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<Root>& positive_roots() const { return positive_; }
  int positive_count() const { return static_cast<int>(positive_.size()); }

  bool is_root(const Root& r) const { return id_.count(r) != 0; }

  /// Dense id over all roots (positives enumerate 0..N-1 in lex order,
  /// negatives follow).  Throws if the vector is not a root.
  int root_id(const Root& r) const {
    auto it = id_.find(r);
    if (it == id_.end())
      throw Error("not a root of " + name() + ": " + r.to_string());
    return it->second;
  }

  std::optional<int> try_root_id(const Root& r) const {
    auto it = id_.find(r);
    if (it == id_.end()) return std::nullopt;
    return it->second;
  }

  /// Positive roots lying in the span of the generators of t0.
  std::vector<Root> parabolic_positive_roots(const ParabolicType& t0) const {
    std::vector<Root> out;
    for (const Root& r : positive_) {
      bool inside = true;
      for (int j = 1; j <= rank_ && inside; ++j)
        if (r.c[j - 1] != 0 && !t0.contains(j)) inside = false;
      if (inside) out.push_back(r);
    }
    return out;
  }

 private:
  void fill_matrix() {
    for (auto& row : a_) row.fill(0);
    for (int i = 0; i < rank_; ++i) a_[i][i] = 2;
    auto edge = [&](int i, int j, int aij, int aji) {
      a_[i - 1][j - 1] = aij;
      a_[j - 1][i - 1] = aji;
    };
    switch (family_) {
      case Family::A:
        for (int i = 1; i < rank_; ++i) edge(i, i + 1, -1, -1);
        break;
      case Family::B:
        for (int i = 1; i + 1 < rank_; ++i) edge(i, i + 1, -1, -1);
        edge(rank_ - 1, rank_, -1, -2);  // alpha_rank is the short root
        break;
      case Family::C:
        for (int i = 1; i + 1 < rank_; ++i) edge(i, i + 1, -1, -1);
        edge(rank_ - 1, rank_, -2, -1);  // alpha_rank is the long root
        break;
      case Family::D:
        for (int i = 1; i + 1 < rank_; ++i) edge(i, i + 1, -1, -1);
        edge(rank_ - 2, rank_, -1, -1);
        break;
      case Family::E:
        // Bourbaki numbering: chain 1-3-4-5-...-rank, node 2 attached to 4.
        edge(1, 3, -1, -1);
        for (int i = 3; i < rank_; ++i) edge(i, i + 1, -1, -1);
        edge(2, 4, -1, -1);
        break;
      case Family::F:
        edge(1, 2, -1, -1);
        edge(2, 3, -1, -2);  // alpha_3, alpha_4 are the short roots
        edge(3, 4, -1, -1);
        break;
      case Family::G:
        edge(1, 2, -3, -1);  // alpha_1 short, alpha_2 long
        break;
    }
  }

  void close_roots() {
    const int expected = detail::expected_positive_count(family_, rank_);
    std::unordered_map<Root, int, RootHash> seen;
    std::vector<Root> queue;
    for (int i = 1; i <= rank_; ++i) {
      Root r = Root::simple(i);
      seen.emplace(r, 0);
      queue.push_back(r);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Root r = queue[head];
      for (int i = 1; i <= rank_; ++i) {
        Root s = reflect_simple(i, r);
        if (seen.emplace(s, 0).second) queue.push_back(s);
      }
      if (static_cast<int>(queue.size()) > 2 * expected)
        throw InvalidCartanError("reflection closure of " + name() +
                                 " exceeds the expected root count");
    }
    if (static_cast<int>(queue.size()) != 2 * expected)
      throw InvalidCartanError("reflection closure of " + name() +
                               " has the wrong size");
    for (const Root& r : queue)
      (r.is_positive() ? positive_ : negative_).push_back(r);
    std::sort(positive_.begin(), positive_.end());
    std::sort(negative_.begin(), negative_.end());
    roots_ = positive_;
    roots_.insert(roots_.end(), negative_.begin(), negative_.end());
    id_.clear();
    for (int k = 0; k < static_cast<int>(roots_.size()); ++k)
      id_.emplace(roots_[k], k);
  }

  Family family_;
  int rank_;
  std::array<std::array<int, kMaxRank>, kMaxRank> a_{};
  std::vector<Root> roots_;
  std::vector<Root> positive_;
  std::vector<Root> negative_;
  std::unordered_map<Root, int, RootHash> id_;
};

inline Family parse_family(char c) {
  switch (c) {
    case 'A': case 'B': case 'C': case 'D': case 'E': case 'F': case 'G':
      return static_cast<Family>(c);
    default:
      throw InvalidCartanError(std::string("unknown family letter '") + c +
                               "'");
  }
}

inline CartanDatum build_cartan(Family family, int rank) {
  return CartanDatum(family, rank);
}

/// Parses strings like "A3" or "G2".
inline CartanDatum build_cartan(const std::string& type) {
  if (type.size() < 2) throw InvalidCartanError("bad Cartan type: " + type);
  Family f = parse_family(type[0]);
  for (std::size_t k = 1; k < type.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(type[k])))
      throw InvalidCartanError("bad Cartan type: " + type);
  return CartanDatum(f, std::atoi(type.c_str() + 1));
}

/// An element of the Weyl group in canonical form: the images of the simple
/// roots, plus the cached length.  Words are never the canonical form.
class WeylElement {
 public:
  WeylElement() = default;

  static WeylElement identity(const CartanDatum& d) {
    WeylElement w;
    w.datum_ = &d;
    for (int i = 1; i <= d.rank(); ++i) w.im_[i - 1] = Root::simple(i);
    w.len_ = 0;
    return w;
  }

  static WeylElement simple_reflection(const CartanDatum& d, int i) {
    WeylElement w;
    w.datum_ = &d;
    for (int j = 1; j <= d.rank(); ++j) w.im_[j - 1] = d.reflect_simple(i, d.simple(j));
    w.len_ = 1;
    return w;
  }

  /// Builds an element from the images of the simple roots; every image must
  /// be a root and the induced map must permute the root set.
  static WeylElement from_simple_images(const CartanDatum& d,
                                        const std::array<Root, kMaxRank>& im) {
    WeylElement w;
    w.datum_ = &d;
    w.im_ = im;
    for (int j = 1; j <= d.rank(); ++j)
      if (!d.is_root(im[j - 1]))
        throw Error("from_simple_images: image of a simple root is not a root");
    w.len_ = w.count_inversions();
    return w;
  }

  const CartanDatum& datum() const { return *datum_; }
  int length() const { return len_; }
  bool is_identity() const { return len_ == 0; }

  const Root& image_of_simple(int j) const { return im_[j - 1]; }

  /// Linear action on any vector in the root lattice.
  Root apply(const Root& beta) const {
    Root out;
    const int n = datum_->rank();
    for (int j = 0; j < n; ++j) {
      int b = beta.c[j];
      if (b == 0) continue;
      for (int k = 0; k < n; ++k)
        out.c[k] = static_cast<int16_t>(out.c[k] + b * im_[j].c[k]);
    }
    return out;
  }

  /// w * s_i, with the length updated incrementally.
  WeylElement mul_simple_right(int i) const {
    WeylElement out;
    out.datum_ = datum_;
    const int n = datum_->rank();
    for (int j = 1; j <= n; ++j) {
      Root sj = datum_->reflect_simple(i, Root::simple(j));
      out.im_[j - 1] = apply(sj);
    }
    out.len_ = len_ + (im_[i - 1].is_positive() ? 1 : -1);
    return out;
  }

  /// s_i * w, with the length updated incrementally.
  WeylElement mul_simple_left(int i) const {
    WeylElement out;
    out.datum_ = datum_;
    const int n = datum_->rank();
    for (int j = 1; j <= n; ++j)
      out.im_[j - 1] = datum_->reflect_simple(i, im_[j - 1]);
    // l(s_i w) = l(w) +- 1 according to the sign of w^{-1}(alpha_i); that
    // sign equals the sign of the coefficient pattern of alpha_i in the
    // inverse image, which we detect through the descent test below.
    out.len_ = len_ + (has_left_descent(i) ? -1 : 1);
    return out;
  }

  /// l(w s_i) < l(w)  <=>  w(alpha_i) < 0.
  bool has_right_descent(int i) const { return im_[i - 1].is_negative(); }

  /// l(s_i w) < l(w)  <=>  w^{-1}(alpha_i) < 0.
  bool has_left_descent(int i) const {
    // w^{-1}(alpha_i) < 0 iff alpha_i is the image of some negative root,
    // iff applying w^{-1} is not needed: scan for the root mapping to it.
    // Cheaper: s_i w has some length; compare inversion counts lazily.
    // We use: l(s_i w) < l(w) iff w^{-1}(alpha_i) < 0 iff there is a simple
    // j with w(alpha_j) = -alpha_i or, in general, the preimage is negative.
    // Direct scan over the root set is exact and fast at our ranks.
    const Root target = Root::simple(i);
    for (const Root& r : datum_->positive_roots()) {
      if (apply(r) == target) return false;
      Root neg = -r;
      if (apply(neg) == target) return true;
    }
    throw InvariantViolationError("root image scan failed");
  }

  WeylElement operator*(const WeylElement& other) const {
    WeylElement out;
    out.datum_ = datum_;
    const int n = datum_->rank();
    for (int j = 1; j <= n; ++j) out.im_[j - 1] = apply(other.im_[j - 1]);
    out.len_ = out.count_inversions();
    return out;
  }

  WeylElement inverse() const {
    WeylElement out;
    out.datum_ = datum_;
    const int n = datum_->rank();
    // w^{-1}(alpha_j) is the unique root mapped to alpha_j by w.
    for (int j = 1; j <= n; ++j) {
      Root target = Root::simple(j);
      bool found = false;
      for (const Root& r : datum_->roots()) {
        if (apply(r) == target) {
          out.im_[j - 1] = r;
          found = true;
          break;
        }
      }
      if (!found) throw InvariantViolationError("inverse image scan failed");
    }
    out.len_ = len_;
    return out;
  }

  friend bool operator==(const WeylElement& a, const WeylElement& b) {
    return a.im_ == b.im_;
  }
  friend bool operator!=(const WeylElement& a, const WeylElement& b) {
    return !(a == b);
  }

  /// Lexicographic order on the image arrays; used only for deterministic
  /// output ordering.
  friend bool operator<(const WeylElement& a, const WeylElement& b) {
    return a.im_ < b.im_;
  }

  std::size_t hash() const {
    std::size_t h = 14695981039346656037ull;
    RootHash rh;
    for (const Root& r : im_) {
      h ^= rh(r);
      h *= 1099511628211ull;
    }
    return h;
  }

 private:
  int count_inversions() const {
    int n = 0;
    for (const Root& r : datum_->positive_roots())
      if (apply(r).is_negative()) ++n;
    return n;
  }

  const CartanDatum* datum_ = nullptr;
  std::array<Root, kMaxRank> im_{};
  int len_ = 0;
};

struct WeylHash {
  std::size_t operator()(const WeylElement& w) const { return w.hash(); }
};

inline int length(const WeylElement& w) { return w.length(); }

/// s_i(beta); beta must be a root of the datum.
inline Root reflect(const CartanDatum& d, int i, const Root& beta) {
  if (i < 1 || i > d.rank()) throw Error("simple index out of range");
  if (!d.is_root(beta))
    throw Error("reflect: " + beta.to_string() + " is not a root");
  return d.reflect_simple(i, beta);
}

inline void check_word(const CartanDatum& d, const Word& word) {
  for (int k : word)
    if (k < 1 || k > d.rank())
      throw Error("word letter " + std::to_string(k) + " out of range for " +
                  d.name());
}

/// Product of the simple reflections of `word`, applied left to right in
/// source-first order.  The empty word gives the identity.
inline WeylElement weyl_from_word(const CartanDatum& d, const Word& word) {
  check_word(d, word);
  WeylElement w = WeylElement::identity(d);
  for (int k : word) w = w.mul_simple_right(k);
  return w;
}

/// {pi > 0 : w(pi) < 0}, sorted lexicographically.
inline std::vector<Root> inversion_set(const WeylElement& w) {
  std::vector<Root> out;
  for (const Root& r : w.datum().positive_roots())
    if (w.apply(r).is_negative()) out.push_back(r);
  return out;
}

inline bool is_reduced(const CartanDatum& d, const Word& word) {
  check_word(d, word);
  WeylElement w = WeylElement::identity(d);
  for (int k : word) {
    if (w.has_right_descent(k)) return false;
    w = w.mul_simple_right(k);
  }
  return true;
}

/// Some reduced word for w, source-first, built by greedy right descents.
inline Word reduced_word_of(const WeylElement& w) {
  Word out;
  WeylElement v = w;
  const int n = v.datum().rank();
  while (v.length() > 0) {
    int pick = 0;
    for (int i = 1; i <= n; ++i)
      if (v.has_right_descent(i)) {
        pick = i;
        break;
      }
    if (pick == 0) throw InvariantViolationError("no descent on a nontrivial element");
    out.push_back(pick);
    v = v.mul_simple_right(pick);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

/// Bruhat order through the lifting scan: walk a reduced word of w from the
/// left and greedily absorb left descents into u; u <= w iff u empties.
inline bool bruhat_leq(const WeylElement& u, const WeylElement& w) {
  if (u.length() > w.length()) return false;
  const Word word = reduced_word_of(w);
  WeylElement x = u;
  WeylElement xinv = u.inverse();
  for (int s : word) {
    if (xinv.image_of_simple(s).is_negative()) {
      x = x.mul_simple_left(s);
      xinv = xinv.mul_simple_right(s);
    }
  }
  return x.is_identity();
}

/// The element of minimal length in the coset w * W_{t0}: repeatedly strip
/// right descents lying in t0.
inline WeylElement min_coset_rep(const WeylElement& w, const ParabolicType& t0) {
  WeylElement u = w;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j : t0.gens) {
      if (u.has_right_descent(j)) {
        u = u.mul_simple_right(j);
        moved = true;
        break;
      }
    }
  }
  return u;
}

inline bool is_min_coset_rep(const WeylElement& u, const ParabolicType& t0) {
  for (int j : t0.gens)
    if (u.has_right_descent(j)) return false;
  return true;
}

/// All minimal coset representatives u with u W_{t0} meeting the Bruhat
/// interval below the product of `word`; sorted by length, then by the
/// lexicographic order on image arrays.  The word must be reduced.
inline std::vector<WeylElement> coset_fixed_points(const CartanDatum& d,
                                                   const Word& word,
                                                   const ParabolicType& t0) {
  if (!is_reduced(d, word))
    throw NonReducedWordError("coset_fixed_points: word is not reduced");
  // The set of subword products of a reduced word is the lower Bruhat
  // interval of its product.
  std::unordered_map<WeylElement, bool, WeylHash> interval;
  interval.emplace(WeylElement::identity(d), true);
  for (int k : word) {
    std::vector<WeylElement> fresh;
    for (const auto& [v, _] : interval) {
      WeylElement vs = v.mul_simple_right(k);
      if (!interval.count(vs)) fresh.push_back(vs);
    }
    for (const auto& v : fresh) interval.emplace(v, true);
  }
  std::vector<WeylElement> out;
  for (const auto& [v, _] : interval)
    if (is_min_coset_rep(v, t0)) out.push_back(v);
  std::sort(out.begin(), out.end(), [](const WeylElement& a, const WeylElement& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a < b;
  });
  return out;
}

/// Walls through the face u(F_{t0}): the walls of all reflections of the
/// standard parabolic conjugated by u (full_face), or only of its simple
/// generators (simple_face).  Returned unsigned (positive roots), sorted.
inline std::vector<Root> face_wall_roots(const CartanDatum& d,
                                         const WeylElement& u,
                                         const ParabolicType& t0,
                                         WallConvention conv) {
  std::vector<Root> nus;
  if (conv == WallConvention::full_face) {
    nus = d.parabolic_positive_roots(t0);
  } else {
    for (int j : t0.gens) nus.push_back(Root::simple(j));
  }
  std::vector<Root> out;
  out.reserve(nus.size());
  for (const Root& nu : nus) out.push_back(u.apply(nu).abs());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// {pi > 0 : u^{-1}(pi) < 0}: the walls separating the fundamental chamber
/// from the face u(F_{t0}) when u is a minimal coset representative.
inline std::vector<Root> separating_wall_roots(const WeylElement& u) {
  return inversion_set(u.inverse());
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(w[i]);
  }
  return out;
}

}  // namespace bsgal
