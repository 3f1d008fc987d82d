// Command-line surface: cell censuses, fibre reports, Deodhar polynomials
// and finite-field verification sweeps, as text tables or stable JSON.
//
// Exit codes: 0 success, 2 usage/parse errors (including matrix checks
// requested outside family A), 3 non-reduced word, 4 point outside the
// variety, 5 verification mismatch, 6 budget exceeded.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsgal/chevalley.hpp"
#include "bsgal/deodhar.hpp"

namespace {

using nlohmann::json;
using namespace bsgal;

constexpr int kExitParse = 2;
constexpr int kExitNonReduced = 3;
constexpr int kExitPointOutside = 4;
constexpr int kExitMismatch = 5;
constexpr int kExitBudget = 6;

struct RunConfig {
  std::string cartan;
  std::string word;
  std::string target_type;
  std::string point = "e";
  std::string format = "table";
  bool json_flag = false;
  std::string target_walls = "full";
  uint32_t q = 2;
  int trials = 50;
  std::uint64_t seed = 12345;
  std::uint64_t budget = 10'000'000;

  bool json_output() const { return json_flag || format == "json"; }
  WallConvention convention() const {
    return target_walls == "simple" ? WallConvention::simple_face
                                    : WallConvention::full_face;
  }
};

std::vector<int> parse_csv(const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw Error("empty entry in list '" + text + "'");
    std::size_t pos = 0;
    const int v = std::stoi(item, &pos);
    if (pos != item.size()) throw Error("bad integer '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string weyl_point_string(const WeylElement& u) {
  return word_to_string(reduced_word_of(u));
}

json poly_json(const std::vector<std::uint64_t>& p) {
  json out = json::array();
  for (std::uint64_t c : p) out.push_back(c);
  return out;
}

std::string poly_string(const std::vector<std::uint64_t>& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + "]";
}

json relation_json(const Relation& rel) {
  json terms = json::array();
  for (const Relation::Term& t : rel.terms)
    terms.push_back(json::array({t.index, t.sign ? *t.sign : 0}));
  return json{{"lead", rel.lead}, {"terms", terms}};
}

std::string relation_string(const Relation& rel) {
  std::string out = "x" + std::to_string(rel.lead) + " =";
  if (rel.terms.empty()) return out + " 0";
  for (const Relation::Term& t : rel.terms) {
    if (!t.sign)
      out += " +-x" + std::to_string(t.index);
    else
      out += std::string(*t.sign > 0 ? " +" : " -") + "x" +
             std::to_string(t.index);
  }
  return out;
}

json indices_json(const std::vector<int>& idx) {
  json out = json::array();
  for (int j : idx) out.push_back(j);
  return out;
}

std::string indices_string(const std::vector<int>& idx) {
  std::string out = "{";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(idx[i]);
  }
  return out + "}";
}

// The gallery type points at the datum member, so Inputs is built in place
// and never moved afterwards.
struct Inputs {
  CartanDatum datum;
  Word word;
  ParabolicType t0;
  GalleryType tau;

  Inputs(CartanDatum d, Word w, ParabolicType t)
      : datum(std::move(d)),
        word(std::move(w)),
        t0(std::move(t)),
        tau(gallery_type(datum, word, t0)) {}
};

std::unique_ptr<Inputs> make_inputs(const RunConfig& cfg) {
  CartanDatum datum = build_cartan(cfg.cartan);
  Word word = parse_csv(cfg.word);
  check_word(datum, word);
  ParabolicType t0(parse_csv(cfg.target_type));
  for (int j : t0.gens)
    if (j < 1 || j > datum.rank())
      throw Error("target-type index " + std::to_string(j) + " out of range");
  return std::make_unique<Inputs>(std::move(datum), std::move(word),
                                  std::move(t0));
}

WeylElement resolve_point(const Inputs& in, const std::string& text) {
  if (text == "e") return WeylElement::identity(in.datum);
  const Word w = parse_csv(text);
  check_word(in.datum, w);
  if (!is_reduced(in.datum, w))
    throw PointNotInVarietyError("point word " + text + " is not reduced");
  return min_coset_rep(weyl_from_word(in.datum, w), in.t0);
}

int cmd_cells(const RunConfig& cfg) {
  const std::unique_ptr<Inputs> hold = make_inputs(cfg);
  const Inputs& in = *hold;
  const CellsReport report = bs_cells_report(in.tau);
  for (std::size_t p = 0; p < report.poincare.size(); ++p) {
    // The coefficient row is binomial by construction; a failure here means
    // a broken build, not bad input.
    std::uint64_t binom = 1;
    for (std::size_t t = 0; t < p; ++t)
      binom = binom * (report.poincare.size() - 1 - t) / (t + 1);
    if (report.poincare[p] != binom)
      throw InvariantViolationError("cell census is not the binomial row");
  }
  if (cfg.json_output()) {
    json cells = json::array();
    for (const auto& row : report.rows)
      cells.push_back(json{{"gallery", row.gallery.to_string()},
                           {"J", indices_json(row.j_set)},
                           {"dim", row.dim}});
    const json out = {{"cartan", in.datum.name()},
                      {"word", indices_json(in.word)},
                      {"target_type", indices_json(in.t0.gens)},
                      {"r", in.tau.r},
                      {"cells", cells},
                      {"poincare", poly_json(report.poincare)}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::printf("cells of %s, word %s, r = %d\n", in.datum.name().c_str(),
              word_to_string(in.word).c_str(), in.tau.r);
  std::printf("%-*s  %-14s %s\n", std::max(7, in.tau.r), "gallery", "J", "dim");
  for (const auto& row : report.rows)
    std::printf("%-*s  %-14s %d\n", std::max(7, in.tau.r),
                row.gallery.to_string().c_str(),
                indices_string(row.j_set).c_str(), row.dim);
  std::printf("poincare: %s\n", poly_string(report.poincare).c_str());
  return 0;
}

json fibre_point_json(const FibreReport& report,
                      const std::vector<std::uint64_t>& deodhar, bool match) {
  json cells = json::array();
  for (const FibreCell& cell : report.cells) {
    json relations = json::array();
    for (const Relation& rel : cell.equations.relations)
      relations.push_back(relation_json(rel));
    cells.push_back(json{{"gallery", cell.gallery.to_string()},
                         {"J", indices_json(cell.j_set)},
                         {"J2", indices_json(cell.j2)},
                         {"zero", indices_json(cell.equations.zero_indices)},
                         {"relations", relations},
                         {"dim", cell.dim}});
  }
  json components = json::array();
  for (const Gallery& g : report.components) components.push_back(g.to_string());
  return json{{"point", weyl_point_string(report.u)},
              {"cells", cells},
              {"poincare", poly_json(report.poincare)},
              {"dim", report.dim},
              {"components", components},
              {"connected", report.connected},
              {"deodhar", poly_json(deodhar)},
              {"match", match}};
}

void fibre_point_table(const Inputs& in, const FibreReport& report,
                       const std::vector<std::uint64_t>& deodhar, bool match) {
  std::printf("fibre over point %s\n", weyl_point_string(report.u).c_str());
  for (const FibreCell& cell : report.cells) {
    std::string rels;
    for (const Relation& rel : cell.equations.relations) {
      if (!rels.empty()) rels += "; ";
      rels += relation_string(rel);
    }
    std::printf("  %-*s J=%-12s J2=%-12s dim %d%s%s\n", std::max(7, in.tau.r),
                cell.gallery.to_string().c_str(),
                indices_string(cell.j_set).c_str(),
                indices_string(cell.j2).c_str(), cell.dim,
                rels.empty() ? "" : "  ", rels.c_str());
  }
  std::string comps;
  for (const Gallery& g : report.components) {
    if (!comps.empty()) comps += ", ";
    comps += g.to_string();
  }
  std::printf("  poincare %s  dim %d  components [%s]  connected %s\n",
              poly_string(report.poincare).c_str(), report.dim, comps.c_str(),
              report.connected ? "yes" : "no");
  std::printf("  deodhar  %s  match %s\n", poly_string(deodhar).c_str(),
              match ? "yes" : "no");
}

int cmd_fibre(const RunConfig& cfg) {
  const std::unique_ptr<Inputs> hold = make_inputs(cfg);
  const Inputs& in = *hold;
  SignTable table;
  const SignTable* table_ptr = nullptr;
  if (in.datum.family() == Family::A) {
    table = build_sign_table(in.datum);
    table_ptr = &table;
  }
  const WallConvention conv = cfg.convention();

  auto one_point = [&](const FixedPoint& x) {
    const FibreReport report = fibre_report(in.tau, x, table_ptr);
    const auto deodhar =
        deodhar_polynomial(in.datum, in.word, in.t0, x.u, conv);
    return std::tuple<FibreReport, std::vector<std::uint64_t>, bool>(
        report, deodhar, report.poincare == deodhar);
  };

  if (cfg.point == "all") {
    bool all_match = true;
    json fibres = json::array();
    for (const WeylElement& u :
         coset_fixed_points(in.datum, in.word, in.t0)) {
      const FixedPoint x = make_fixed_point(in.datum, u, in.t0, conv);
      auto [report, deodhar, match] = one_point(x);
      all_match = all_match && match;
      if (cfg.json_output())
        fibres.push_back(fibre_point_json(report, deodhar, match));
      else
        fibre_point_table(in, report, deodhar, match);
    }
    if (cfg.json_output()) {
      const json out = {{"cartan", in.datum.name()},
                        {"word", indices_json(in.word)},
                        {"target_type", indices_json(in.t0.gens)},
                        {"fibres", fibres},
                        {"match", all_match}};
      std::cout << out.dump(2) << "\n";
    }
    return 0;
  }

  const WeylElement u = resolve_point(in, cfg.point);
  const FixedPoint x = make_fixed_point(in.datum, u, in.t0, conv);
  auto [report, deodhar, match] = one_point(x);
  if (cfg.json_output()) {
    json out = fibre_point_json(report, deodhar, match);
    out["cartan"] = in.datum.name();
    out["word"] = indices_json(in.word);
    out["target_type"] = indices_json(in.t0.gens);
    std::cout << out.dump(2) << "\n";
  } else {
    std::printf("fibre of %s, word %s\n", in.datum.name().c_str(),
                word_to_string(in.word).c_str());
    fibre_point_table(in, report, deodhar, match);
  }
  return 0;
}

int cmd_deodhar(const RunConfig& cfg) {
  const std::unique_ptr<Inputs> hold = make_inputs(cfg);
  const Inputs& in = *hold;
  const WallConvention conv = cfg.convention();
  auto emit = [&](const WeylElement& u) {
    const auto poly = deodhar_polynomial(in.datum, in.word, in.t0, u, conv);
    if (cfg.json_output()) {
      const json out = {{"cartan", in.datum.name()},
                        {"word", indices_json(in.word)},
                        {"target_type", indices_json(in.t0.gens)},
                        {"point", weyl_point_string(u)},
                        {"deodhar", poly_json(poly)}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::printf("deodhar %s word %s point %s: %s\n", in.datum.name().c_str(),
                  word_to_string(in.word).c_str(),
                  weyl_point_string(u).c_str(), poly_string(poly).c_str());
    }
  };
  if (cfg.point == "all") {
    for (const WeylElement& u : coset_fixed_points(in.datum, in.word, in.t0))
      emit(u);
    return 0;
  }
  emit(resolve_point(in, cfg.point));
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const std::unique_ptr<Inputs> hold = make_inputs(cfg);
  const Inputs& in = *hold;
  if (in.datum.family() != Family::A)
    throw UnsupportedTypeError("verify needs a family-A type, got " +
                               in.datum.name());
  if (!is_prime(cfg.q)) throw Error("q must be prime");
  const uint32_t q = cfg.q;

  const Census census = enumerate_points_fq(in.tau, q, cfg.budget);
  std::uint64_t expected_total = 1;
  for (int p = 0; p < in.tau.r; ++p) expected_total *= q + 1;
  std::printf("verify %s word %s over F_%u: %llu points (expected %llu)\n",
              in.datum.name().c_str(), word_to_string(in.word).c_str(), q,
              static_cast<unsigned long long>(census.total),
              static_cast<unsigned long long>(expected_total));
  if (census.total != expected_total) {
    std::printf("MISMATCH: total point count\n");
    return kExitMismatch;
  }

  // Retraction classes against the cell dimensions.
  const CellsReport cells = bs_cells_report(in.tau);
  for (const auto& row : cells.rows) {
    std::uint64_t predicted = 1;
    for (int t = 0; t < row.dim; ++t) predicted *= q;
    const auto it = census.class_counts.find(row.gallery.bits);
    const std::uint64_t got = it == census.class_counts.end() ? 0 : it->second;
    if (got != predicted) {
      std::printf("MISMATCH: retraction class %s has %llu points, expected "
                  "q^%d = %llu\n",
                  row.gallery.to_string().c_str(),
                  static_cast<unsigned long long>(got), row.dim,
                  static_cast<unsigned long long>(predicted));
      return kExitMismatch;
    }
  }
  std::printf("  %zu retraction classes match q^dim\n", cells.rows.size());

  // Fibre cardinalities against the fibre Poincare polynomials, and the
  // cell equations against random on/off samples.
  const SignTable table = build_sign_table(in.datum);
  const WallConvention conv = cfg.convention();
  std::size_t cells_checked = 0;
  const auto sweep = fibre_sweep(in.tau, &table, conv);
  if (census.fixed_counts.size() != sweep.size()) {
    std::printf("MISMATCH: %zu fixed targets counted, %zu fixed points "
                "predicted\n",
                census.fixed_counts.size(), sweep.size());
    return kExitMismatch;
  }
  for (const FibreReport& report : sweep) {
    std::uint64_t predicted = 0, power = 1;
    for (std::size_t k = 0; k < report.poincare.size(); ++k) {
      predicted += report.poincare[k] * power;
      power *= q;
    }
    const auto it = census.fixed_counts.find(report.u);
    const std::uint64_t got = it == census.fixed_counts.end() ? 0 : it->second;
    if (got != predicted) {
      std::printf("MISMATCH: fibre over %s has %llu points, expected %llu\n",
                  weyl_point_string(report.u).c_str(),
                  static_cast<unsigned long long>(got),
                  static_cast<unsigned long long>(predicted));
      return kExitMismatch;
    }
    const FixedPoint x = make_fixed_point(in.datum, report.u, in.t0, conv);
    const FieldSpec sample_field = make_field(101);
    for (const FibreCell& cell : report.cells) {
      const SampleCheckResult res =
          sample_check_cell(in.tau, cell.gallery, x, sample_field, cfg.trials,
                            cfg.seed + cells_checked, &table);
      ++cells_checked;
      if (!res.pass) {
        std::printf("MISMATCH: %s\n", res.counterexample.c_str());
        return kExitMismatch;
      }
    }
  }
  std::printf("  %zu fixed points match their fibre polynomials\n",
              census.fixed_counts.size());
  std::printf("  %zu cells pass %d-trial sampling over F_101\n",
              cells_checked, cfg.trials);
  std::printf("verify: PASS\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bott-Samelson cell decompositions and resolution fibres"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("cartan", cfg.cartan, "Cartan type, e.g. A3")->required();
    sub->add_option("--word", cfg.word,
                    "reduced word, comma-separated 1-based letters, "
                    "source-first (leftmost factor first)");
    sub->add_option("--target-type", cfg.target_type,
                    "generators of the target parabolic type");
    sub->add_option("--format", cfg.format, "table or json")
        ->check(CLI::IsMember({"table", "json"}));
    sub->add_flag("--json", cfg.json_flag, "shorthand for --format json");
    sub->add_option("--target-walls", cfg.target_walls,
                    "face walls counted for multiplicities: full or simple")
        ->check(CLI::IsMember({"full", "simple"}));
    sub->add_option("--seed", cfg.seed, "seed for sampling runs");
  };

  CLI::App* cells = app.add_subcommand("cells", "cell census of the variety");
  add_common(cells);
  CLI::App* fibre = app.add_subcommand("fibre", "fibre over a fixed point");
  add_common(fibre);
  fibre->add_option("--point", cfg.point,
                    "fixed point: a reduced word, 'e', or 'all'");
  CLI::App* deodhar = app.add_subcommand("deodhar", "subword-walk polynomial");
  add_common(deodhar);
  deodhar->add_option("--point", cfg.point,
                      "fixed point: a reduced word, 'e', or 'all'");
  CLI::App* verify =
      app.add_subcommand("verify", "finite-field census and sampling checks");
  add_common(verify);
  verify->add_option("--q", cfg.q, "field size (prime)");
  verify->add_option("--trials", cfg.trials, "sampling trials per cell");
  verify->add_option("--budget", cfg.budget, "maximum number of points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (cells->parsed()) return cmd_cells(cfg);
    if (fibre->parsed()) return cmd_fibre(cfg);
    if (deodhar->parsed()) return cmd_deodhar(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    return kExitParse;
  } catch (const NonReducedWordError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonReduced;
  } catch (const PointNotInVarietyError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitPointOutside;
  } catch (const BudgetExceededError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitBudget;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitParse;
  }
}
