#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsgal/cartan.hpp"

// Combinatorial galleries of a fixed type and the cellular decomposition of
// the Bott-Samelson variety they index.
//
// Index bookkeeping: a gallery of length r is stored source-first as a bit
// vector; position p (1-based from the source) corresponds to the descending
// index j = r - p + 1 used in all reports.  Bit set = the gallery crosses the
// wall at that position, bit clear = it bends there.

namespace bsgal {

/// A gallery type: a reduced word together with the type of the target face.
struct GalleryType {
  const CartanDatum* datum = nullptr;
  Word word;  // source-first; word[p-1] is the letter at descending index r-p+1
  ParabolicType target_type;
  WeylElement full_product;   // product of all letters
  WeylElement min_rep;        // minimal coset representative of its class
  int r = 0;

  const CartanDatum& cartan() const { return *datum; }
  int letter_at_position(int p) const { return word[p - 1]; }
  int letter_at_index(int j) const { return word[r - j]; }
};

inline GalleryType gallery_type(const CartanDatum& d, const Word& word,
                                const ParabolicType& t0) {
  if (!is_reduced(d, word))
    throw NonReducedWordError("gallery type needs a reduced word, got " +
                              word_to_string(word));
  GalleryType tau;
  tau.datum = &d;
  tau.word = word;
  tau.target_type = t0;
  tau.full_product = weyl_from_word(d, word);
  tau.min_rep = min_coset_rep(tau.full_product, t0);
  tau.r = static_cast<int>(word.size());
  return tau;
}

/// A combinatorial gallery as a crossing bit vector, source-first.
struct Gallery {
  uint32_t bits = 0;
  int r = 0;

  bool crossing_at_position(int p) const { return (bits >> (r - p)) & 1u; }
  bool crossing_at_index(int j) const { return (bits >> (j - 1)) & 1u; }

  static Gallery all_crossings(int r) {
    Gallery g;
    g.r = r;
    g.bits = r == 0 ? 0u : ((r == 32 ? 0u : (1u << r)) - 1u);
    return g;
  }

  static Gallery from_string(const std::string& s) {
    Gallery g;
    g.r = static_cast<int>(s.size());
    for (int p = 1; p <= g.r; ++p) {
      char c = s[p - 1];
      if (c != '0' && c != '1') throw Error("bad gallery string: " + s);
      if (c == '1') g.bits |= 1u << (g.r - p);
    }
    return g;
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(r), '0');
    for (int p = 1; p <= r; ++p)
      if (crossing_at_position(p)) s[p - 1] = '1';
    return s;
  }

  friend bool operator==(const Gallery& a, const Gallery& b) {
    return a.r == b.r && a.bits == b.bits;
  }
  friend bool operator<(const Gallery& a, const Gallery& b) {
    return a.bits < b.bits;  // numeric order == lex order on the strings
  }
};

/// All 2^r galleries of the type, in lexicographic order on bit strings.
inline std::vector<Gallery> enumerate_galleries(const GalleryType& tau) {
  if (tau.r > 24)
    throw BudgetExceededError("gallery enumeration capped at r <= 24");
  std::vector<Gallery> out;
  out.reserve(std::size_t{1} << tau.r);
  for (uint32_t code = 0; code < (1u << tau.r); ++code)
    out.push_back(Gallery{code, tau.r});
  return out;
}

/// Wall data at one position: the unsigned wall, the signed root
/// beta_j = gamma_r ... gamma_j (alpha_{k_j}), whether the gallery crosses
/// there, and whether the wall is load-bearing (beta_j < 0).
struct WallRecord {
  int j = 0;  // descending index, r down to 1
  Root wall;
  Root beta;
  bool crossing = false;
  bool load_bearing = false;
};

namespace detail {

/// One pass over a gallery: wall records (descending j), the full product,
/// the minimal-representative target, and the load-bearing index mask
/// (bit j-1 set iff index j is load-bearing).  The load-bearing predicate is
/// computed twice, from the sign of beta_j and from the half-space test
/// u_j^{-1}(|beta_j|) < 0 with u_j the prefix through position p; the two
/// must agree.
struct GalleryData {
  std::vector<WallRecord> records;  // descending j
  WeylElement full_product;
  WeylElement target;
  uint32_t j_mask = 0;
};

inline GalleryData analyze_gallery(const GalleryType& tau, const Gallery& g) {
  if (g.r != tau.r) throw Error("gallery length does not match its type");
  const CartanDatum& d = tau.cartan();
  GalleryData out;
  out.records.resize(static_cast<std::size_t>(tau.r));
  WeylElement v = WeylElement::identity(d);
  WeylElement vinv = v;
  for (int p = 1; p <= tau.r; ++p) {
    const int j = tau.r - p + 1;
    const int k = tau.letter_at_position(p);
    const bool crossing = g.crossing_at_position(p);
    if (crossing) {
      v = v.mul_simple_right(k);
      vinv = vinv.mul_simple_left(k);
    }
    WallRecord rec;
    rec.j = j;
    rec.crossing = crossing;
    rec.beta = v.apply(Root::simple(k));
    rec.wall = rec.beta.abs();
    rec.load_bearing = rec.beta.is_negative();
    const bool half_space = vinv.apply(rec.wall).is_negative();
    if (half_space != rec.load_bearing)
      throw InvariantViolationError(
          "load-bearing sign test and half-space test disagree at index " +
          std::to_string(j));
    if (rec.load_bearing) out.j_mask |= 1u << (j - 1);
    out.records[static_cast<std::size_t>(p - 1)] = rec;
  }
  out.full_product = v;
  out.target = min_coset_rep(v, tau.target_type);
  return out;
}

inline std::vector<int> mask_to_indices_desc(uint32_t mask) {
  std::vector<int> out;
  for (int j = 31; j >= 1; --j)
    if (mask & (1u << (j - 1))) out.push_back(j);
  return out;
}

}  // namespace detail

/// Minimal coset representative of the class of the full crossing product.
inline WeylElement target(const GalleryType& tau, const Gallery& g) {
  return detail::analyze_gallery(tau, g).target;
}

/// The r wall records, descending index j = r..1.
inline std::vector<WallRecord> wall_sequence(const GalleryType& tau,
                                             const Gallery& g) {
  return detail::analyze_gallery(tau, g).records;
}

/// J(gamma): the descending list of load-bearing indices.  Its size is the
/// dimension of the cell of gamma.
inline std::vector<int> load_bearing_set(const GalleryType& tau,
                                         const Gallery& g) {
  return detail::mask_to_indices_desc(detail::analyze_gallery(tau, g).j_mask);
}

/// A gallery is minimal iff its walls are pairwise distinct and form exactly
/// the set of walls separating the fundamental chamber from the target face.
inline bool is_minimal_gallery(const GalleryType& tau, const Gallery& g) {
  detail::GalleryData data = detail::analyze_gallery(tau, g);
  std::vector<Root> met;
  met.reserve(data.records.size());
  for (const WallRecord& rec : data.records) met.push_back(rec.wall);
  std::sort(met.begin(), met.end());
  if (std::adjacent_find(met.begin(), met.end()) != met.end()) return false;
  std::vector<Root> sep = separating_wall_roots(data.target);
  std::sort(sep.begin(), sep.end());
  return met == sep;
}

/// delta <= gamma iff J(delta) is a subset of J(gamma).
inline bool cell_order_leq(const GalleryType& tau, const Gallery& delta,
                           const Gallery& gamma) {
  const uint32_t a = detail::analyze_gallery(tau, delta).j_mask;
  const uint32_t b = detail::analyze_gallery(tau, gamma).j_mask;
  return (a & ~b) == 0;
}

/// Per-position chart data for the affine chart centred at a gallery:
/// sign_positive is the sign of the root in the unipotent factor (crossing:
/// +alpha, bend: -alpha); with_reflection says whether the factor carries the
/// simple reflection.
struct ChartSpec {
  struct Entry {
    int j = 0;
    int letter = 0;
    bool sign_positive = false;
    bool with_reflection = false;
  };
  std::vector<Entry> entries;  // descending j
};

inline ChartSpec chart(const GalleryType& tau, const Gallery& g) {
  ChartSpec spec;
  spec.entries.reserve(static_cast<std::size_t>(tau.r));
  for (int p = 1; p <= tau.r; ++p) {
    const bool crossing = g.crossing_at_position(p);
    spec.entries.push_back(ChartSpec::Entry{tau.r - p + 1,
                                            tau.letter_at_position(p),
                                            crossing, crossing});
  }
  return spec;
}

/// The cell census of the whole Bott-Samelson variety: one row per gallery
/// (lex order) with its load-bearing set and cell dimension, plus the
/// Poincare coefficients (count of cells per dimension).
struct CellsReport {
  struct Row {
    Gallery gallery;
    std::vector<int> j_set;  // descending
    int dim = 0;
  };
  std::vector<Row> rows;
  std::vector<std::uint64_t> poincare;  // ascending coefficients
};

inline CellsReport bs_cells_report(const GalleryType& tau) {
  CellsReport report;
  report.poincare.assign(static_cast<std::size_t>(tau.r) + 1, 0);
  for (const Gallery& g : enumerate_galleries(tau)) {
    detail::GalleryData data = detail::analyze_gallery(tau, g);
    CellsReport::Row row;
    row.gallery = g;
    row.j_set = detail::mask_to_indices_desc(data.j_mask);
    row.dim = static_cast<int>(row.j_set.size());
    report.poincare[static_cast<std::size_t>(row.dim)] += 1;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace bsgal
