#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bsgal/fibre.hpp"
#include "bsgal/sign_table.hpp"

// Concrete matrix realization of the family-A groups over prime fields:
// elementary unipotents, signed permutation matrices for the simple
// reflections, flag classes by column reduction, retraction of realized
// points, and exhaustive point counting of the Bott-Samelson variety.
// Everything here is independent of the combinatorial wall machinery, which
// is exactly what makes it usable as an oracle.

namespace bsgal {

struct FieldSpec {
  uint32_t p = 0;
};

inline bool is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline FieldSpec make_field(uint32_t p) {
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  return FieldSpec{p};
}

inline void require_family_a(const CartanDatum& d, const char* what) {
  if (d.family() != Family::A)
    throw UnsupportedTypeError(std::string(what) +
                               " is implemented for family A only, got " +
                               d.name());
}

inline constexpr int kMaxDim = kMaxRank + 1;

/// Square matrix over F_p, dimension at most kMaxDim.
struct FpMat {
  int n = 0;
  uint32_t p = 0;
  std::array<uint32_t, kMaxDim * kMaxDim> a{};

  uint32_t& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
  uint32_t at(int i, int j) const {
    return a[static_cast<std::size_t>(i * n + j)];
  }

  static FpMat identity(int n, uint32_t p) {
    FpMat m;
    m.n = n;
    m.p = p;
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  FpMat operator*(const FpMat& o) const {
    FpMat out;
    out.n = n;
    out.p = p;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const uint64_t v = at(i, k);
        if (v == 0) continue;
        for (int j = 0; j < n; ++j)
          out.at(i, j) = static_cast<uint32_t>(
              (out.at(i, j) + v * o.at(k, j)) % p);
      }
    return out;
  }

  friend bool operator==(const FpMat& x, const FpMat& y) {
    return x.n == y.n && x.p == y.p && x.a == y.a;
  }
};

namespace detail {

inline uint32_t fp_inv(uint32_t v, uint32_t p) {
  // Extended Euclid; p is prime and v nonzero mod p.
  int64_t a = v % p, b = p, x0 = 1, x1 = 0;
  while (b != 0) {
    const int64_t q = a / b;
    a -= q * b;
    std::swap(a, b);
    x0 -= q * x1;
    std::swap(x0, x1);
  }
  x0 %= static_cast<int64_t>(p);
  if (x0 < 0) x0 += p;
  return static_cast<uint32_t>(x0);
}

/// Matrix slot of the root generator: the root e_i - e_j maps to the
/// elementary matrix E_{ij}.  In the simple-root basis a positive root of
/// A_n is the interval alpha_lo + ... + alpha_hi = e_lo - e_{hi+1}.
inline std::pair<int, int> root_entry(const CartanDatum& d, const Root& beta) {
  const Root pos = beta.abs();
  int lo = -1, hi = -1;
  for (int i = 1; i <= d.rank(); ++i) {
    const int c = pos.c[i - 1];
    if (c == 0) continue;
    if (c != 1) throw Error("not a family-A root: " + beta.to_string());
    if (lo == -1) lo = i;
    else if (i != hi + 1)
      throw Error("not a family-A root: " + beta.to_string());
    hi = i;
  }
  if (lo == -1) throw Error("zero vector is not a root");
  const int row = lo - 1, col = hi;  // 0-based entries of E_{lo, hi+1}
  if (beta.is_positive()) return {row, col};
  return {col, row};
}

}  // namespace detail

/// p_beta(lambda) = I + lambda * E for the elementary slot of the root.
inline FpMat unipotent(const CartanDatum& d, const Root& beta, uint32_t lambda,
                       const FieldSpec& field) {
  require_family_a(d, "unipotent");
  if (!d.is_root(beta))
    throw Error("unipotent: " + beta.to_string() + " is not a root");
  FpMat m = FpMat::identity(d.rank() + 1, field.p);
  const auto [i, j] = detail::root_entry(d, beta);
  m.at(i, j) = lambda % field.p;
  return m;
}

/// The simple reflection as a signed permutation matrix: the 2x2 block
/// [[0,-1],[1,0]] at rows/columns (i, i+1).
inline FpMat reflection_matrix(const CartanDatum& d, int i,
                               const FieldSpec& field) {
  require_family_a(d, "reflection_matrix");
  FpMat m = FpMat::identity(d.rank() + 1, field.p);
  m.at(i - 1, i - 1) = 0;
  m.at(i, i) = 0;
  m.at(i - 1, i) = field.p - 1;
  m.at(i, i - 1) = 1;
  return m;
}

/// The sign n with s_i p_beta(t) s_i^{-1} = p_{s_i(beta)}(n t), read off the
/// matrix realization (computed over a prime large enough to keep +-1
/// unambiguous) and verified entrywise.
inline int sign_n(const CartanDatum& d, int i, const Root& beta) {
  require_family_a(d, "sign_n");
  static const FieldSpec field = make_field(65521);
  const FpMat s = reflection_matrix(d, i, field);
  // s^{-1} = s^3 for this block shape; cheaper: transpose of the signed
  // permutation works too, but a direct product keeps the code obvious.
  const FpMat sinv = s * s * s;
  const FpMat lhs = s * unipotent(d, beta, 1, field) * sinv;
  const Root image = d.reflect_simple(i, beta);
  for (int n : {1, -1}) {
    const uint32_t lam = n == 1 ? 1u : field.p - 1u;
    if (lhs == unipotent(d, image, lam, field)) return n;
  }
  throw InvariantViolationError("conjugation of p_" + beta.to_string() +
                                " by s" + std::to_string(i) +
                                " is not an elementary matrix");
}

/// Populates the full table of conjugation signs for a family-A datum.
inline SignTable build_sign_table(const CartanDatum& d) {
  require_family_a(d, "build_sign_table");
  SignTable table(d);
  for (int i = 1; i <= d.rank(); ++i)
    for (const Root& beta : d.roots()) table.set(i, beta, sign_n(d, i, beta));
  return table;
}

namespace detail {

/// Pivot permutation of the Bruhat class: column-reduce against earlier
/// pivot rows (right multiplication by upper triangulars), then take the
/// lowest nonzero row of each column.  sigma[col] = row, 0-based.  The fully
/// reduced matrix is left in m for the flag tests.
inline std::array<int, kMaxDim> column_reduce(FpMat& m) {
  std::array<int, kMaxDim> sigma{};
  for (int j = 0; j < m.n; ++j) {
    for (int t = 0; t < j; ++t) {
      const int rt = sigma[static_cast<std::size_t>(t)];
      const uint32_t v = m.at(rt, j);
      if (v == 0) continue;
      const uint32_t f =
          static_cast<uint32_t>((static_cast<uint64_t>(v) *
                                 fp_inv(m.at(rt, t), m.p)) % m.p);
      for (int i = 0; i < m.n; ++i)
        m.at(i, j) = static_cast<uint32_t>(
            (m.at(i, j) + static_cast<uint64_t>(m.p - f) * m.at(i, t)) % m.p);
    }
    int pivot = -1;
    for (int i = m.n - 1; i >= 0; --i)
      if (m.at(i, j) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) throw Error("singular matrix in column reduction");
    sigma[static_cast<std::size_t>(j)] = pivot;
  }
  return sigma;
}

inline std::array<int, kMaxDim> bruhat_sigma(const FpMat& m) {
  FpMat copy = m;
  return column_reduce(copy);
}

/// The Weyl element of a pivot permutation: alpha_t maps to the root
/// e_{sigma(t)+1} - e_{sigma(t+1)+1}.
inline WeylElement perm_to_weyl(const CartanDatum& d,
                                const std::array<int, kMaxDim>& sigma) {
  std::array<Root, kMaxRank> im{};
  for (int t = 1; t <= d.rank(); ++t) {
    const int a = sigma[static_cast<std::size_t>(t - 1)] + 1;
    const int b = sigma[static_cast<std::size_t>(t)] + 1;
    Root r;
    if (a < b)
      for (int i = a; i < b; ++i) r.c[i - 1] = 1;
    else
      for (int i = b; i < a; ++i) r.c[i - 1] = -1;
    im[static_cast<std::size_t>(t - 1)] = r;
  }
  return WeylElement::from_simple_images(d, im);
}

/// Whether the flag of the reduced matrix is the coordinate flag of its
/// pivot permutation, partial dimensions {1..rank} minus t0.
inline bool is_coordinate_flag(const FpMat& reduced,
                               const std::array<int, kMaxDim>& sigma,
                               const CartanDatum& d, const ParabolicType& t0) {
  std::array<bool, kMaxDim> pivot_row{};
  for (int dcol = 1; dcol <= d.rank(); ++dcol) {
    pivot_row[static_cast<std::size_t>(sigma[static_cast<std::size_t>(
        dcol - 1)])] = true;
    if (t0.contains(dcol)) continue;
    // Columns 0..dcol-1 must be supported on the pivot rows seen so far.
    for (int j = 0; j < dcol; ++j)
      for (int i = 0; i < reduced.n; ++i)
        if (reduced.at(i, j) != 0 && !pivot_row[static_cast<std::size_t>(i)])
          return false;
  }
  return true;
}

}  // namespace detail

/// A realized point of the Bott-Samelson variety: the chart gallery, the
/// coordinates (source-first; coords[p-1] sits at descending index r-p+1),
/// the factor matrices and their product.
struct PointedGallery {
  const GalleryType* tau = nullptr;
  Gallery gallery;
  FieldSpec field;
  std::vector<uint32_t> coords;
  std::vector<FpMat> factors;
  FpMat product;
};

/// The factor at a crossing is p_{+alpha}(x) s, at a bend p_{-alpha}(x).
inline PointedGallery realize_point(const GalleryType& tau, const Gallery& g,
                                    const std::vector<uint32_t>& coords,
                                    const FieldSpec& field) {
  const CartanDatum& d = tau.cartan();
  require_family_a(d, "realize_point");
  if (static_cast<int>(coords.size()) != tau.r)
    throw Error("coordinate vector has the wrong length");
  PointedGallery pg;
  pg.tau = &tau;
  pg.gallery = g;
  pg.field = field;
  pg.coords = coords;
  pg.product = FpMat::identity(d.rank() + 1, field.p);
  for (int p = 1; p <= tau.r; ++p) {
    const int k = tau.letter_at_position(p);
    const uint32_t x = coords[static_cast<std::size_t>(p - 1)] % field.p;
    FpMat f;
    if (g.crossing_at_position(p))
      f = unipotent(d, Root::simple(k), x, field) *
          reflection_matrix(d, k, field);
    else
      f = unipotent(d, -Root::simple(k), x, field);
    pg.factors.push_back(f);
    pg.product = pg.product * f;
  }
  return pg;
}

/// The image of the point in the partial flag variety: either a T-fixed
/// point, reported through its minimal coset representative, or not.
struct TargetFlag {
  bool is_fixed = false;
  WeylElement u;  // meaningful only when is_fixed
};

inline TargetFlag target_flag(const PointedGallery& pg) {
  const CartanDatum& d = pg.tau->cartan();
  FpMat reduced = pg.product;
  const auto sigma = detail::column_reduce(reduced);
  TargetFlag out;
  out.is_fixed =
      detail::is_coordinate_flag(reduced, sigma, d, pg.tau->target_type);
  if (out.is_fixed)
    out.u = min_coset_rep(detail::perm_to_weyl(d, sigma), pg.tau->target_type);
  return out;
}

/// Retraction of a realized point: walk the factors source to target and
/// record, at every position, whether the Bruhat class of the running
/// product moved.  Combinatorial galleries realized at the centre of their
/// own chart retract to themselves.
inline Gallery retract_point(const PointedGallery& pg) {
  const CartanDatum& d = pg.tau->cartan();
  FpMat prefix = FpMat::identity(d.rank() + 1, pg.field.p);
  auto prev = detail::bruhat_sigma(prefix);
  Gallery out;
  out.r = pg.tau->r;
  for (int p = 1; p <= pg.tau->r; ++p) {
    prefix = prefix * pg.factors[static_cast<std::size_t>(p - 1)];
    const auto cur = detail::bruhat_sigma(prefix);
    if (cur != prev) out.bits |= 1u << (out.r - p);
    prev = cur;
  }
  return out;
}

/// Exhaustive census of the variety over F_q: every point visited once by
/// walking the chart tree (q crossing branches plus the bend point per
/// position), counted by retraction class and by fixed target point.
struct Census {
  std::uint64_t total = 0;
  std::map<uint32_t, std::uint64_t> class_counts;  // gallery bits -> points
  std::map<WeylElement, std::uint64_t> fixed_counts;
  std::uint64_t nonfixed = 0;
};

inline Census enumerate_points_fq(const GalleryType& tau, uint32_t q,
                                  std::uint64_t budget = 10'000'000) {
  const CartanDatum& d = tau.cartan();
  require_family_a(d, "enumerate_points_fq");
  const FieldSpec field = make_field(q);
  std::uint64_t leaves = 1;
  for (int p = 0; p < tau.r; ++p) {
    leaves *= q + 1;
    if (leaves > budget)
      throw BudgetExceededError("(q+1)^r exceeds the point budget");
  }

  Census census;
  const int m = d.rank() + 1;
  std::vector<FpMat> s_mats, prefix(static_cast<std::size_t>(tau.r) + 1);
  for (int i = 1; i <= d.rank(); ++i)
    s_mats.push_back(reflection_matrix(d, i, field));
  prefix[0] = FpMat::identity(m, field.p);
  std::vector<std::array<int, kMaxDim>> sigma(static_cast<std::size_t>(tau.r) +
                                              1);
  sigma[0] = detail::bruhat_sigma(prefix[0]);

  // Depth-first over the (q+1)-ary chart tree; branch value q means "bend".
  std::vector<uint32_t> choice(static_cast<std::size_t>(tau.r), 0);
  std::vector<uint32_t> bits_at(static_cast<std::size_t>(tau.r) + 1, 0);
  int depth = 0;
  while (true) {
    if (depth == tau.r) {
      census.total += 1;
      census.class_counts[bits_at[static_cast<std::size_t>(depth)]] += 1;
      FpMat reduced = prefix[static_cast<std::size_t>(depth)];
      const auto sig = detail::column_reduce(reduced);
      if (detail::is_coordinate_flag(reduced, sig, d, tau.target_type))
        census.fixed_counts[min_coset_rep(detail::perm_to_weyl(d, sig),
                                          tau.target_type)] += 1;
      else
        census.nonfixed += 1;
      --depth;
      while (depth >= 0 && choice[static_cast<std::size_t>(depth)] == q)
        --depth;
      if (depth < 0) break;
      choice[static_cast<std::size_t>(depth)] += 1;
      continue;
    }
    const std::size_t dz = static_cast<std::size_t>(depth);
    const uint32_t c = choice[dz];
    const int k = tau.letter_at_position(depth + 1);
    if (c == q) {
      // Bend branch: identity factor, class unchanged.
      prefix[dz + 1] = prefix[dz];
      sigma[dz + 1] = sigma[dz];
      bits_at[dz + 1] = bits_at[dz];
    } else {
      prefix[dz + 1] =
          prefix[dz] * unipotent(d, Root::simple(k), c, field) * s_mats[k - 1];
      sigma[dz + 1] = detail::bruhat_sigma(prefix[dz + 1]);
      bits_at[dz + 1] = bits_at[dz];
      if (sigma[dz + 1] != sigma[dz])
        bits_at[dz + 1] |= 1u << (tau.r - depth - 1);
    }
    ++depth;
    if (depth < tau.r) choice[static_cast<std::size_t>(depth)] = 0;
  }
  return census;
}

/// Multilinear polynomial over F_p in the chart coordinates.  Every
/// coordinate lives in exactly one factor of the product, so products of
/// factor entries never repeat a variable and a monomial is just the bit set
/// of the positions it uses.
struct MultilinearPoly {
  uint32_t p = 0;
  std::map<uint32_t, uint32_t> terms;  // variable mask -> coefficient

  static MultilinearPoly constant(uint32_t p, uint32_t c) {
    MultilinearPoly out;
    out.p = p;
    if (c % p) out.terms[0] = c % p;
    return out;
  }
  static MultilinearPoly variable(uint32_t p, int position) {
    MultilinearPoly out;
    out.p = p;
    out.terms[1u << (position - 1)] = 1;
    return out;
  }

  void add_term(uint32_t mask, uint64_t coeff) {
    const uint32_t c = static_cast<uint32_t>(coeff % p);
    if (c == 0) return;
    auto [it, fresh] = terms.emplace(mask, c);
    if (!fresh) {
      it->second = (it->second + c) % p;
      if (it->second == 0) terms.erase(it);
    }
  }

  MultilinearPoly operator+(const MultilinearPoly& o) const {
    MultilinearPoly out = *this;
    for (const auto& [mask, c] : o.terms) out.add_term(mask, c);
    return out;
  }

  MultilinearPoly operator*(const MultilinearPoly& o) const {
    MultilinearPoly out;
    out.p = p;
    for (const auto& [m1, c1] : terms)
      for (const auto& [m2, c2] : o.terms) {
        if (m1 & m2)
          throw InvariantViolationError("polynomial product is not multilinear");
        out.add_term(m1 | m2, static_cast<uint64_t>(c1) * c2);
      }
    return out;
  }

  bool is_zero() const { return terms.empty(); }

  /// Substitutes known coordinate values; remaining variables stay symbolic.
  MultilinearPoly specialize(const std::map<int, uint32_t>& values) const {
    MultilinearPoly out;
    out.p = p;
    for (const auto& [mask, c] : terms) {
      uint64_t coeff = c;
      uint32_t rest = 0;
      for (int pos = 1; pos <= 32; ++pos) {
        if (!(mask & (1u << (pos - 1)))) continue;
        const auto it = values.find(pos);
        if (it == values.end())
          rest |= 1u << (pos - 1);
        else
          coeff = coeff * it->second % p;
      }
      out.add_term(rest, coeff);
    }
    return out;
  }
};

namespace detail {

/// The membership conditions of the fibre cell in its chart: the entries of
/// u^{-1} * g(x) that must vanish for the flag to equal the fixed point,
/// with the chart coordinates of the load-bearing positions symbolic and
/// every other coordinate zero.
inline std::vector<MultilinearPoly> cell_conditions(const GalleryType& tau,
                                                    const Gallery& g,
                                                    const FixedPoint& x,
                                                    const FieldSpec& field) {
  const CartanDatum& d = tau.cartan();
  const int m = d.rank() + 1;
  const auto j_mask = analyze_gallery(tau, g).j_mask;

  using PolyMat = std::vector<MultilinearPoly>;
  auto at = [m](PolyMat& mat, int i, int j) -> MultilinearPoly& {
    return mat[static_cast<std::size_t>(i * m + j)];
  };
  auto from_fp = [&](const FpMat& s) {
    PolyMat out(static_cast<std::size_t>(m * m),
                MultilinearPoly::constant(field.p, 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        out[static_cast<std::size_t>(i * m + j)] =
            MultilinearPoly::constant(field.p, s.at(i, j));
    return out;
  };

  // u^{-1} as a constant matrix, from a reduced word of u.
  FpMat u_mat = FpMat::identity(m, field.p);
  for (int k : reduced_word_of(x.u)) u_mat = u_mat * reflection_matrix(d, k, field);
  FpMat u_inv = FpMat::identity(m, field.p);
  {
    // Small and exact: Gauss-Jordan.
    FpMat a = u_mat;
    for (int col = 0; col < m; ++col) {
      int pivot = -1;
      for (int row = col; row < m; ++row)
        if (a.at(row, col) != 0) {
          pivot = row;
          break;
        }
      for (int j = 0; j < m; ++j) {
        std::swap(a.a[static_cast<std::size_t>(pivot * m + j)],
                  a.a[static_cast<std::size_t>(col * m + j)]);
        std::swap(u_inv.a[static_cast<std::size_t>(pivot * m + j)],
                  u_inv.a[static_cast<std::size_t>(col * m + j)]);
      }
      const uint32_t inv = fp_inv(a.at(col, col), field.p);
      for (int j = 0; j < m; ++j) {
        a.at(col, j) = static_cast<uint32_t>(
            static_cast<uint64_t>(a.at(col, j)) * inv % field.p);
        u_inv.at(col, j) = static_cast<uint32_t>(
            static_cast<uint64_t>(u_inv.at(col, j)) * inv % field.p);
      }
      for (int row = 0; row < m; ++row) {
        if (row == col || a.at(row, col) == 0) continue;
        const uint64_t f = field.p - a.at(row, col);
        for (int j = 0; j < m; ++j) {
          a.at(row, j) = static_cast<uint32_t>(
              (a.at(row, j) + f * a.at(col, j)) % field.p);
          u_inv.at(row, j) = static_cast<uint32_t>(
              (u_inv.at(row, j) + f * u_inv.at(col, j)) % field.p);
        }
      }
    }
  }

  PolyMat prod = from_fp(u_inv);
  auto multiply = [&](const PolyMat& rhs) {
    PolyMat out(static_cast<std::size_t>(m * m),
                MultilinearPoly::constant(field.p, 0));
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) {
        const MultilinearPoly& left = prod[static_cast<std::size_t>(i * m + k)];
        if (left.is_zero()) continue;
        for (int j = 0; j < m; ++j) {
          const MultilinearPoly& right = rhs[static_cast<std::size_t>(k * m + j)];
          if (right.is_zero()) continue;
          out[static_cast<std::size_t>(i * m + j)] =
              out[static_cast<std::size_t>(i * m + j)] + left * right;
        }
      }
    prod = std::move(out);
  };

  for (int p = 1; p <= tau.r; ++p) {
    const int j = tau.r - p + 1;
    const int k = tau.letter_at_position(p);
    const Root alpha = Root::simple(k);
    const bool symbolic = (j_mask & (1u << (j - 1))) != 0;
    PolyMat factor;
    if (g.crossing_at_position(p))
      factor = from_fp(reflection_matrix(d, k, field));
    else
      factor = from_fp(FpMat::identity(m, field.p));
    if (symbolic) {
      const auto [row, col] = root_entry(
          d, g.crossing_at_position(p) ? alpha : -alpha);
      // p_{+-alpha}(x_j) multiplies from the left: row `row` of the factor
      // gains x_j times row `col`.
      PolyMat with_var = factor;
      for (int t = 0; t < m; ++t)
        at(with_var, row, t) =
            at(with_var, row, t) +
            MultilinearPoly::variable(field.p, p) *
                factor[static_cast<std::size_t>(col * m + t)];
      factor = std::move(with_var);
    }
    multiply(factor);
  }

  // Block structure of the parabolic: row blocks given by the free
  // dimensions; entries strictly below the block diagonal must vanish.
  std::vector<int> block_of(static_cast<std::size_t>(m), 0);
  {
    int b = 0;
    for (int t = 1; t <= m; ++t) {
      block_of[static_cast<std::size_t>(t - 1)] = b;
      if (t <= d.rank() && !x.t0.contains(t)) ++b;
    }
  }
  std::vector<MultilinearPoly> conditions;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (block_of[static_cast<std::size_t>(i)] >
          block_of[static_cast<std::size_t>(j)]) {
        const MultilinearPoly& entry = prod[static_cast<std::size_t>(i * m + j)];
        if (!entry.is_zero()) conditions.push_back(entry);
      }
  return conditions;
}

/// Solves the membership conditions for the dependent coordinates, a random
/// assignment of the free ones being given.  The system is multilinear with
/// a unique solution, and resolves by repeatedly extracting a condition
/// that has become linear in a single unknown.
inline std::map<int, uint32_t> solve_cell_point(
    const std::vector<MultilinearPoly>& conditions,
    const std::map<int, uint32_t>& free_values,
    const std::vector<int>& unknown_positions, const FieldSpec& field) {
  std::map<int, uint32_t> values = free_values;
  std::vector<MultilinearPoly> pending;
  for (const MultilinearPoly& c : conditions) {
    MultilinearPoly s = c.specialize(values);
    if (!s.is_zero()) pending.push_back(std::move(s));
  }
  std::size_t remaining = unknown_positions.size();
  while (remaining > 0) {
    bool progress = false;
    for (const MultilinearPoly& cond : pending) {
      // Look for a condition of the shape a * x_u + c with a invertible.
      uint32_t var_mask = 0;
      bool single = true;
      for (const auto& [mask, coeff] : cond.terms) {
        (void)coeff;
        if (mask == 0) continue;
        if ((mask & (mask - 1)) != 0 || (var_mask && mask != var_mask)) {
          single = false;
          break;
        }
        var_mask = mask;
      }
      if (!single || var_mask == 0) continue;
      uint32_t a = 0, c = 0;
      for (const auto& [mask, coeff] : cond.terms)
        (mask ? a : c) = coeff;
      if (a == 0) continue;
      int position = 1;
      while (!(var_mask & (1u << (position - 1)))) ++position;
      const uint32_t value = static_cast<uint32_t>(
          static_cast<uint64_t>(field.p - c) * fp_inv(a, field.p) % field.p);
      values[position] = value;
      --remaining;
      std::vector<MultilinearPoly> next;
      for (const MultilinearPoly& q : pending) {
        MultilinearPoly s = q.specialize(values);
        if (!s.is_zero()) next.push_back(std::move(s));
      }
      pending = std::move(next);
      progress = true;
      break;
    }
    if (!progress)
      throw InvariantViolationError(
          "cell sampler could not triangularize the membership conditions");
  }
  if (!pending.empty())
    throw InvariantViolationError(
        "cell membership conditions are inconsistent at the sampled point");
  return values;
}

}  // namespace detail

/// Random sampling check of one fibre cell against its equations: points of
/// the cell (dependent coordinates solved exactly from the matrix
/// realization) must land on the fixed point and satisfy every emitted
/// linear relation, and points violating exactly one relation must miss the
/// fixed point.
struct SampleCheckResult {
  bool pass = true;
  std::string counterexample;
};

inline SampleCheckResult sample_check_cell(const GalleryType& tau,
                                           const Gallery& g,
                                           const FixedPoint& x,
                                           const FieldSpec& field, int trials,
                                           std::uint64_t seed,
                                           const SignTable* table = nullptr) {
  const CartanDatum& d = tau.cartan();
  require_family_a(d, "sample_check_cell");
  SignTable local;
  if (table == nullptr) {
    local = build_sign_table(d);
    table = &local;
  }
  const FibreCell cell = fibre_cell(tau, g, x, table);
  for (const Relation& rel : cell.equations.relations)
    for (const Relation::Term& term : rel.terms)
      if (!term.sign.has_value())
        throw UnresolvedSignsError("cell has unresolved relation signs");

  // Free parameters of the cell: J^2 minus the relation leads.  Every other
  // load-bearing coordinate is dependent and gets solved from the matrix
  // membership conditions.
  std::vector<int> free_idx, dependent_idx;
  {
    std::vector<bool> is_lead(static_cast<std::size_t>(tau.r) + 1, false);
    for (const Relation& rel : cell.equations.relations)
      is_lead[static_cast<std::size_t>(rel.lead)] = true;
    for (int j : cell.j2)
      if (!is_lead[static_cast<std::size_t>(j)]) free_idx.push_back(j);
    for (int j : cell.j_set)
      if (std::find(free_idx.begin(), free_idx.end(), j) == free_idx.end())
        dependent_idx.push_back(j);
  }
  const std::vector<MultilinearPoly> conditions =
      detail::cell_conditions(tau, g, x, field);

  std::mt19937_64 rng(seed);
  auto rand_fp = [&]() { return static_cast<uint32_t>(rng() % field.p); };
  auto rand_nonzero = [&]() {
    return static_cast<uint32_t>(1 + rng() % (field.p - 1));
  };
  auto position_of = [&](int j) { return tau.r - j + 1; };

  SampleCheckResult result;
  auto fail = [&](const std::string& what, const std::vector<uint32_t>& coords) {
    result.pass = false;
    std::string cs = what + " on " + g.to_string() + " coords [";
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) cs += ",";
      cs += std::to_string(coords[i]);
    }
    cs += "]";
    result.counterexample = cs;
  };

  for (int t = 0; t < trials && result.pass; ++t) {
    std::map<int, uint32_t> free_values;  // keyed by source-first position
    for (int j : free_idx) free_values[position_of(j)] = rand_fp();
    std::vector<int> unknowns;
    for (int j : dependent_idx) unknowns.push_back(position_of(j));
    const std::map<int, uint32_t> solved =
        detail::solve_cell_point(conditions, free_values, unknowns, field);
    std::vector<uint32_t> coords(static_cast<std::size_t>(tau.r), 0);
    for (const auto& [pos, v] : solved)
      coords[static_cast<std::size_t>(pos - 1)] = v;

    const PointedGallery point = realize_point(tau, g, coords, field);
    const TargetFlag flag = target_flag(point);
    if (!flag.is_fixed || !(flag.u == x.u)) {
      fail("on-variety sample missed the fixed point", coords);
      break;
    }
    if (!(retract_point(point) == g)) {
      fail("on-variety sample left its retraction class", coords);
      break;
    }
    // The emitted linear relations must vanish on true cell points.
    for (const Relation& rel : cell.equations.relations) {
      std::uint64_t lhs = coords[static_cast<std::size_t>(
          position_of(rel.lead) - 1)];
      for (const Relation::Term& term : rel.terms) {
        const uint32_t coeff = *term.sign == 1 ? field.p - 1u : 1u;
        lhs += static_cast<std::uint64_t>(coeff) *
               coords[static_cast<std::size_t>(position_of(term.index) - 1)];
      }
      if (lhs % field.p != 0) {
        fail("linear relation fails on a true cell point", coords);
        break;
      }
    }
    if (!result.pass) break;

    // Violating exactly one relation must leave the fibre.
    if (!cell.equations.relations.empty()) {
      const Relation& rel = cell.equations.relations[static_cast<std::size_t>(
          t % static_cast<int>(cell.equations.relations.size()))];
      std::vector<uint32_t> bad = coords;
      std::size_t slot = static_cast<std::size_t>(position_of(rel.lead) - 1);
      bad[slot] = (bad[slot] + rand_nonzero()) % field.p;
      const TargetFlag off = target_flag(realize_point(tau, g, bad, field));
      if (off.is_fixed && off.u == x.u)
        fail("relation-violating sample hit the fixed point", bad);
    }
  }
  return result;
}

}  // namespace bsgal
