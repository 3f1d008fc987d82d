#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsgal/gallery.hpp"
#include "bsgal/sign_table.hpp"

// The fibre of the resolution map over a torus-fixed point of the Schubert
// variety: galleries over the point, wall multiplicities, the block
// decomposition of repeated load-bearing walls, the linear equations cutting
// each cell out of its chart, dimensions, Poincare coefficients and
// irreducible components.

namespace bsgal {

/// A T-fixed point of the Schubert variety, held as the minimal coset
/// representative u together with the walls through its face and the walls
/// separating it from the fundamental chamber.
struct FixedPoint {
  const CartanDatum* datum = nullptr;
  WeylElement u;
  ParabolicType t0;
  WallConvention convention = WallConvention::full_face;
  std::vector<Root> face_walls;        // sorted
  std::vector<Root> separating_walls;  // sorted

  bool is_face_wall(const Root& pi) const {
    return std::binary_search(face_walls.begin(), face_walls.end(), pi);
  }
  bool is_separating(const Root& pi) const {
    return std::binary_search(separating_walls.begin(), separating_walls.end(),
                              pi);
  }
};

inline FixedPoint make_fixed_point(const CartanDatum& d,
                                   const WeylElement& u_any,
                                   const ParabolicType& t0,
                                   WallConvention conv =
                                       WallConvention::full_face) {
  FixedPoint x;
  x.datum = &d;
  x.u = min_coset_rep(u_any, t0);
  x.t0 = t0;
  x.convention = conv;
  x.face_walls = face_wall_roots(d, x.u, t0, conv);
  x.separating_walls = separating_wall_roots(x.u);
  std::sort(x.separating_walls.begin(), x.separating_walls.end());
  return x;
}

/// All galleries whose target is the fixed point, in lexicographic order.
/// DFS over the crossing choices, pruned by the coset distance bound: the
/// remaining letters must at least cover the length of the minimal
/// representative of v^{-1} u W_{t0}.
inline std::vector<Gallery> galleries_over(const GalleryType& tau,
                                           const FixedPoint& x) {
  std::vector<Gallery> out;
  const CartanDatum& d = tau.cartan();
  struct Node {
    WeylElement v;
    WeylElement vinv;
    uint32_t bits;
    int p;
  };
  std::vector<Node> stack;
  stack.push_back(Node{WeylElement::identity(d), WeylElement::identity(d), 0, 1});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const int remaining = tau.r - node.p + 1;
    if (min_coset_rep(node.vinv * x.u, tau.target_type).length() > remaining)
      continue;
    if (node.p > tau.r) {
      out.push_back(Gallery{node.bits, tau.r});
      continue;
    }
    const int k = tau.letter_at_position(node.p);
    // Push the crossing branch first so the bend branch pops first and the
    // output stays in ascending lex order.
    stack.push_back(Node{node.v.mul_simple_right(k), node.vinv.mul_simple_left(k),
                         node.bits | (1u << (tau.r - node.p)), node.p + 1});
    stack.push_back(Node{node.v, node.vinv, node.bits, node.p + 1});
  }
  return out;
}

/// The occurrence lists of the walls met by a gallery over x: per distinct
/// wall, its descending positive indices followed by a negative sentinel
/// when the wall also passes through the target face.  Walls through the
/// face that the gallery never meets keep an empty positive part.
struct WallOccurrences {
  struct Group {
    Root wall;
    std::vector<int> indices;
  };
  std::vector<Group> groups;
};

namespace detail {

struct FibreCellData {
  GalleryData gallery_data;
  WallOccurrences occurrences;
  uint32_t j2_mask = 0;
  // Per group with nonempty J^2 trace: the blocks (descending runs headed by
  // a load-bearing crossing) and whether a relation is emitted.
  struct GroupAnalysis {
    std::size_t group = 0;
    std::vector<std::vector<int>> blocks;
    bool relation = false;
  };
  std::vector<GroupAnalysis> group_analyses;
};

inline FibreCellData analyze_fibre_cell(const GalleryType& tau,
                                        const Gallery& g, const FixedPoint& x) {
  FibreCellData out;
  out.gallery_data = analyze_gallery(tau, g);
  if (!(out.gallery_data.target == x.u))
    throw TargetMismatchError("gallery " + g.to_string() +
                              " does not lie over the given fixed point");
  const CartanDatum& d = tau.cartan();

  // Group the positions by wall, in order of first encounter from the
  // source (descending leading index).
  std::map<int, std::size_t> slot_of_root;  // root id -> group slot
  auto& groups = out.occurrences.groups;
  for (const WallRecord& rec : out.gallery_data.records) {
    const int id = d.root_id(rec.wall);
    auto it = slot_of_root.find(id);
    if (it == slot_of_root.end()) {
      slot_of_root.emplace(id, groups.size());
      groups.push_back(WallOccurrences::Group{rec.wall, {rec.j}});
    } else {
      groups[it->second].indices.push_back(rec.j);
    }
  }
  // Face walls: sentinels -1, -2, ... in lex order of the wall roots.
  int sentinel = 0;
  for (const Root& pi : x.face_walls) {
    --sentinel;
    const int id = d.root_id(pi);
    auto it = slot_of_root.find(id);
    if (it == slot_of_root.end()) {
      slot_of_root.emplace(id, groups.size());
      groups.push_back(WallOccurrences::Group{pi, {sentinel}});
    } else {
      groups[it->second].indices.push_back(sentinel);
    }
  }

  // J^2: load-bearing indices whose wall occurs at least twice.
  for (const auto& group : groups) {
    if (group.indices.size() < 2) continue;
    for (int j : group.indices)
      if (j > 0 && (out.gallery_data.j_mask & (1u << (j - 1))))
        out.j2_mask |= 1u << (j - 1);
  }

  // Blocks and relation emission per wall.
  for (std::size_t s = 0; s < groups.size(); ++s) {
    const auto& group = groups[s];
    std::vector<int> trace;  // I_l intersect J^2, descending
    for (int j : group.indices)
      if (j > 0 && (out.j2_mask & (1u << (j - 1)))) trace.push_back(j);
    if (trace.empty()) continue;

    FibreCellData::GroupAnalysis ga;
    ga.group = s;
    for (int j : trace) {
      if (g.crossing_at_index(j)) {
        ga.blocks.emplace_back();
        ga.blocks.back().push_back(j);
      } else {
        if (ga.blocks.empty())
          throw MalformedStructureError(
              "load-bearing bend at index " + std::to_string(j) + " of " +
              g.to_string() + " has no earlier load-bearing crossing on wall " +
              group.wall.to_string());
        ga.blocks.back().push_back(j);
      }
    }

    // Relation condition, stated on the indices: the smallest occurrence of
    // the wall is positive and load-bearing (hence the tail of the last
    // block).  Under the full face convention this must agree with the
    // separation test on the fixed point.
    const int last = group.indices.back();
    const bool index_cond =
        last > 0 && (out.j2_mask & (1u << (last - 1))) != 0;
    if (x.convention == WallConvention::full_face) {
      const bool separation_cond = x.is_separating(group.wall);
      if (index_cond != separation_cond)
        throw InvariantViolationError(
            "relation index condition and separation test disagree on wall " +
            group.wall.to_string() + " of " + g.to_string());
    }
    ga.relation = index_cond;
    out.group_analyses.push_back(std::move(ga));
  }
  return out;
}

/// Slides the bend factor at index f leftwards to the anchor crossing,
/// conjugating through every crossing in between (the anchor's own
/// reflection included); returns the sign carried by the variable when it
/// merges with the anchor's unipotent.
inline int slide_sign_up(const GalleryType& tau, const Gallery& g, int f,
                         int anchor, const SignTable& table) {
  const CartanDatum& d = tau.cartan();
  Root delta = -Root::simple(tau.letter_at_index(f));
  int n = 1;
  for (int i = f + 1; i <= anchor; ++i) {
    if (!g.crossing_at_index(i)) continue;
    const int k = tau.letter_at_index(i);
    n *= table.sign(k, delta);
    delta = d.reflect_simple(k, delta);
  }
  if (delta != Root::simple(tau.letter_at_index(anchor)))
    throw InvariantViolationError("slide from index " + std::to_string(f) +
                                  " missed the anchor root at " +
                                  std::to_string(anchor));
  return n;
}

/// Slides the factor at index t (above the anchor) rightwards down to the
/// anchor crossing.  A crossing factor first peels past its own reflection;
/// every crossing strictly between is then conjugated through.
inline int slide_sign_down(const GalleryType& tau, const Gallery& g, int t,
                           int anchor, const SignTable& table) {
  const CartanDatum& d = tau.cartan();
  const int k_t = tau.letter_at_index(t);
  Root delta = -Root::simple(k_t);
  int n = g.crossing_at_index(t) ? table.sign(k_t, delta) : 1;
  for (int i = t - 1; i > anchor; --i) {
    if (!g.crossing_at_index(i)) continue;
    const int k = tau.letter_at_index(i);
    const Root next = d.reflect_simple(k, delta);
    n *= table.sign(k, next);
    delta = next;
  }
  if (delta != Root::simple(tau.letter_at_index(anchor)))
    throw InvariantViolationError("slide from index " + std::to_string(t) +
                                  " missed the anchor root at " +
                                  std::to_string(anchor));
  return n;
}

}  // namespace detail

inline WallOccurrences wall_occurrences(const GalleryType& tau,
                                        const Gallery& g, const FixedPoint& x) {
  return detail::analyze_fibre_cell(tau, g, x).occurrences;
}

/// J^2(gamma): load-bearing indices whose wall occurs at least twice among
/// the walls met by the gallery, walls through the target face included.
inline std::vector<int> j2_set(const GalleryType& tau, const Gallery& g,
                               const FixedPoint& x) {
  return detail::mask_to_indices_desc(
      detail::analyze_fibre_cell(tau, g, x).j2_mask);
}

/// A maximal run of J^2 indices on one wall: a load-bearing crossing
/// followed by the subsequent load-bearing bends on that wall.
struct Block {
  Root wall;
  std::vector<int> indices;  // descending; front() is the crossing
};

inline std::vector<Block> blocks(const GalleryType& tau, const Gallery& g,
                                 const FixedPoint& x) {
  detail::FibreCellData data = detail::analyze_fibre_cell(tau, g, x);
  std::vector<Block> out;
  for (const auto& ga : data.group_analyses)
    for (const auto& idx : ga.blocks)
      out.push_back(Block{data.occurrences.groups[ga.group].wall, idx});
  return out;
}

/// The linear equations of one fibre cell inside its chart: coordinates
/// outside J^2 pinned to zero (listed only for load-bearing indices; the
/// rest vanish on the cell already), plus one relation per separating wall
/// with a nonempty J^2 trace,
///     x_lead - sum_f sign_f * x_f = 0,
/// supported on the whole J^2 trace of the wall and anchored at the head of
/// its last block.  Variables of earlier blocks enter the relation as well:
/// their unipotent factors survive the intermediate crossings toward the
/// fundamental chamber and recombine on the wall's final crossing (random
/// matrix sampling is the arbiter here, and rejects the last-block-only
/// variant).  Signs come from the symbolic slide when a sign table is
/// available and are left unresolved otherwise.
struct Relation {
  struct Term {
    int index = 0;
    std::optional<int> sign;  // +1 / -1, or empty when unresolved
  };
  Root wall;
  int lead = 0;
  std::vector<Term> terms;
};

struct CellEquations {
  std::vector<int> zero_indices;  // J minus J^2, descending
  std::vector<Relation> relations;
};

inline CellEquations cell_equations(const GalleryType& tau, const Gallery& g,
                                    const FixedPoint& x,
                                    const SignTable* sign_source = nullptr) {
  detail::FibreCellData data = detail::analyze_fibre_cell(tau, g, x);
  CellEquations eq;
  eq.zero_indices =
      detail::mask_to_indices_desc(data.gallery_data.j_mask & ~data.j2_mask);
  for (const auto& ga : data.group_analyses) {
    if (!ga.relation) continue;
    Relation rel;
    rel.wall = data.occurrences.groups[ga.group].wall;
    rel.lead = ga.blocks.back().front();
    for (const auto& block : ga.blocks)
      for (int t : block) {
        if (t == rel.lead) continue;
        Relation::Term term;
        term.index = t;
        if (sign_source != nullptr)
          term.sign = t < rel.lead
                          ? -detail::slide_sign_up(tau, g, t, rel.lead,
                                                   *sign_source)
                          : -detail::slide_sign_down(tau, g, t, rel.lead,
                                                     *sign_source);
        rel.terms.push_back(term);
      }
    eq.relations.push_back(std::move(rel));
  }
  return eq;
}

/// One cell of the fibre: its gallery, J and J^2, equations, the per-wall
/// dimension contributions and the total dimension.
struct FibreCell {
  Gallery gallery;
  std::vector<int> j_set;
  std::vector<int> j2;
  CellEquations equations;
  std::vector<std::pair<Root, int>> wall_dims;
  int dim = 0;
};

inline FibreCell fibre_cell(const GalleryType& tau, const Gallery& g,
                            const FixedPoint& x,
                            const SignTable* sign_source = nullptr) {
  detail::FibreCellData data = detail::analyze_fibre_cell(tau, g, x);
  FibreCell cell;
  cell.gallery = g;
  cell.j_set = detail::mask_to_indices_desc(data.gallery_data.j_mask);
  cell.j2 = detail::mask_to_indices_desc(data.j2_mask);
  cell.equations = cell_equations(tau, g, x, sign_source);
  for (const auto& ga : data.group_analyses) {
    int trace = 0;
    for (const auto& block : ga.blocks) trace += static_cast<int>(block.size());
    const int c = trace - (ga.relation ? 1 : 0);
    cell.wall_dims.emplace_back(data.occurrences.groups[ga.group].wall, c);
    cell.dim += c;
  }
  const int check = static_cast<int>(cell.j2.size()) -
                    static_cast<int>(cell.equations.relations.size());
  if (check != cell.dim)
    throw InvariantViolationError("cell dimension bookkeeping mismatch on " +
                                  g.to_string());
  return cell;
}

/// The assembled fibre over one fixed point.
struct FibreReport {
  WeylElement u;
  std::vector<FibreCell> cells;              // gallery lex order
  std::vector<std::uint64_t> poincare;       // #cells per dimension
  int dim = 0;
  std::vector<Gallery> components;           // maximal cells, (dim desc, lex)
  bool connected = false;
};

namespace detail {

inline FibreReport assemble_report(const GalleryType& tau, const FixedPoint& x,
                                   const std::vector<Gallery>& over,
                                   const SignTable* sign_source) {
  FibreReport report;
  report.u = x.u;
  std::vector<uint32_t> j_masks;
  for (const Gallery& g : over) {
    report.cells.push_back(fibre_cell(tau, g, x, sign_source));
    uint32_t mask = 0;
    for (int j : report.cells.back().j_set) mask |= 1u << (j - 1);
    j_masks.push_back(mask);
  }
  report.dim = 0;
  for (const FibreCell& cell : report.cells)
    report.dim = std::max(report.dim, cell.dim);
  report.poincare.assign(static_cast<std::size_t>(report.dim) + 1, 0);
  for (const FibreCell& cell : report.cells)
    report.poincare[static_cast<std::size_t>(cell.dim)] += 1;

  // Components: maximal galleries in the closure order restricted to the
  // fibre.  Connectivity is read off the comparability graph.
  const std::size_t n = over.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<bool> maximal(n, true);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      const bool a_le_b = (j_masks[a] & ~j_masks[b]) == 0;
      if (a_le_b) {
        maximal[a] = false;
        parent[find(a)] = find(b);
      }
    }
  std::vector<std::size_t> comp_idx;
  for (std::size_t a = 0; a < n; ++a)
    if (maximal[a]) comp_idx.push_back(a);
  std::sort(comp_idx.begin(), comp_idx.end(), [&](std::size_t a, std::size_t b) {
    if (report.cells[a].dim != report.cells[b].dim)
      return report.cells[a].dim > report.cells[b].dim;
    return over[a] < over[b];
  });
  for (std::size_t a : comp_idx) report.components.push_back(over[a]);
  std::size_t roots_seen = 0;
  for (std::size_t a = 0; a < n; ++a)
    if (find(a) == a) ++roots_seen;
  report.connected = n == 0 || roots_seen == 1;
  return report;
}

}  // namespace detail

inline FibreReport fibre_report(const GalleryType& tau, const FixedPoint& x,
                                const SignTable* sign_source = nullptr) {
  if (!bruhat_leq(x.u, tau.min_rep))
    throw PointNotInVarietyError("the point lies outside the Schubert variety "
                                 "of the word");
  return detail::assemble_report(tau, x, galleries_over(tau, x), sign_source);
}

/// Every fixed point of the variety with its fibre report, in the order of
/// coset_fixed_points.  Each gallery is analysed once, against its own
/// target bucket.
inline std::vector<FibreReport> fibre_sweep(
    const GalleryType& tau, const SignTable* sign_source = nullptr,
    WallConvention conv = WallConvention::full_face) {
  std::map<WeylElement, std::vector<Gallery>> buckets;
  for (const Gallery& g : enumerate_galleries(tau))
    buckets[detail::analyze_gallery(tau, g).target].push_back(g);
  std::vector<FibreReport> out;
  for (const WeylElement& u :
       coset_fixed_points(tau.cartan(), tau.word, tau.target_type)) {
    const FixedPoint x = make_fixed_point(tau.cartan(), u, tau.target_type, conv);
    out.push_back(detail::assemble_report(tau, x, buckets[u], sign_source));
  }
  return out;
}

/// The product map restricted to a cell fibres over the Bruhat cell of its
/// target, so j(gamma) = dim C^gamma_x + l(u) with x the target of gamma.
inline bool fibration_split_check(const GalleryType& tau, const Gallery& g) {
  detail::GalleryData data = detail::analyze_gallery(tau, g);
  const FixedPoint x =
      make_fixed_point(tau.cartan(), data.target, tau.target_type);
  const FibreCell cell = fibre_cell(tau, g, x);
  int j_count = 0;
  for (int j = 1; j <= tau.r; ++j)
    if (data.j_mask & (1u << (j - 1))) ++j_count;
  return j_count == cell.dim + data.target.length();
}

}  // namespace bsgal
