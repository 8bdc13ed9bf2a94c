// One line per acceptance criterion. Exit status is nonzero if any criterion
// fails other than the ones listed in known_failures (see README).

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>

#include <sarki/cli.hpp>
#include <sarki/io/json.hpp>
#include <sarki/links.hpp>
#include <sarki/relations.hpp>
#include <sarki/words.hpp>

#include "support.hpp"

using namespace sarki;
using Clock = std::chrono::steady_clock;

namespace {

struct Result {
  bool pass = true;
  std::string note;
  void fail(const std::string& why) {
    if (pass) note = why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

using Row = std::tuple<std::string, int, int, i64, i64, int>;

Result c1_type_II_table() {
  Result r;
  auto t0 = Clock::now();
  std::set<Row> computed;
  std::set<std::string> blocks;
  auto printed = io::load_table_linkII(cli::data_dir() / "table_linkII.json");
  for (const auto& row : printed) blocks.insert(key(row.source));
  for (const auto& b : blocks)
    for (const auto& l : enumerate_type_II_point(parse_surface(b), FieldProfile::arbitrary()))
      computed.insert({b, l.a, l.b, l.d, l.m, l.target_k2()});
  double dt = seconds_since(t0);
  std::set<Row> expect;
  for (const auto& row : printed) expect.insert({key(row.source), row.a, row.b, row.d, row.m, row.target_k2});
  if (blocks.size() != 9) r.fail(std::to_string(blocks.size()) + " blocks in the table file, expected 9");
  if (computed != expect) r.fail("computed rows differ from the printed table");
  if (dt >= 1.0) r.fail("took " + std::to_string(dt) + " s");
  if (computed.size() != 33)
    r.fail("rows match the printed table exactly, but the table has " + std::to_string(computed.size()) +
           " rows and the criterion states 33");
  return r;
}

Result c2_exclusions() {
  Result r;
  using Ex = std::tuple<std::string, int, int>;
  std::set<Ex> rejected;
  std::set<Ex> kept;
  for (const auto& m : point_families())
    for (const auto& l : enumerate_type_II_point(m, FieldProfile::arbitrary())) kept.insert({key(m), l.a, l.b});
  for (const auto& m : point_families())
    for (int a = 1; a < m.k2; ++a)
      for (const auto& row : solve_type_II_quadratic_raw(m.k2, m.lambda, m.h2, a))
        if (!kept.count({key(m), a, row.b})) rejected.insert({key(m), a, row.b});
  std::set<Ex> expect = {{"dp:9:l1", 2, 1}, {"dp:9:l1", 5, 1}, {"dp:9:l1", 7, 7}, {"dp:9:l1", 8, 8},
                         {"dp:8:l1", 1, 2}, {"dp:8:l1", 3, 1}, {"dp:8:l1", 5, 2}, {"dp:8:l1", 7, 7},
                         {"dp:3", 1, 6},    {"dp:2", 1, 8}};
  if (rejected != expect) r.fail("rejected set has " + std::to_string(rejected.size()) + " rows");
  return r;
}

Result c3_type_I() {
  Result r;
  std::vector<std::tuple<std::string, int, std::string, std::string>> got;
  for (const auto& m : point_families())
    for (const auto& l : enumerate_type_I(m)) {
      MarkedLattice L = MarkedLattice::of(m).blow_up(l.a, false);
      got.push_back({key(m), l.a, L.format({l.d, -l.m}), key(l.target)});
    }
  decltype(got) expect = {{"dp:9:l3", 1, "H-E", "hirz:1"},
                          {"dp:9:l3", 4, "2H-E", "conic:5"},
                          {"dp:8:l2", 2, "H-E", "conic:6"},
                          {"dp:8:l1", 2, "H-2E", "conic:6:pointless"},
                          {"dp:4", 1, "H-2E", "conic:3"}};
  if (got != expect) r.fail(std::to_string(got.size()) + " type I cases");
  return r;
}

Result c4_type_IV() {
  Result r;
  int seen = 0;
  for (int d1 = 1; d1 <= 4; ++d1)
    for (int d2 = 1; d2 <= 4; ++d2)
      for (int f = 1; f <= 64; ++f) {
        if (f % (d1 * d2) != 0) continue;
        auto k = type_IV_analysis(d1, d2, f);
        if (!k) continue;
        ++seen;
        if (k->k2 != 1 && k->k2 != 2 && k->k2 != 4 && k->k2 != 8)
          r.fail("K^2 = " + std::to_string(k->k2) + " at " + std::to_string(d1) + "," + std::to_string(d2) + "," +
                 std::to_string(f));
        if (8 * d1 * d2 != k->k2 * f) r.fail("K^2 f1f2 != 8 d1 d2");
      }
  if (seen == 0) r.fail("no admissible triple");
  return r;
}

std::multiset<std::string> edge_classes(const ElementaryRelation& x) {
  std::multiset<std::string> s;
  for (const auto& e : x.edges) s.insert(x.lattice().format(e.cls));
  return s;
}

Result c5_atlas(std::vector<ElementaryRelation>& out) {
  Result r;
  auto t0 = Clock::now();
  out = enumerate_pieces(FieldProfile::arbitrary(), true, 60);
  double dt = seconds_since(t0);
  auto golden = io::load_pieces(cli::data_dir() / "pieces");
  int rational = static_cast<int>(enumerate_pieces(FieldProfile::arbitrary(), false, 60).size());
  if (rational != 27) r.fail(std::to_string(rational) + " rational pieces");
  if (out.size() != 36 || golden.size() != 36)
    r.fail(std::to_string(out.size()) + " generated, " + std::to_string(golden.size()) + " golden");
  std::map<std::string, const ElementaryRelation*> byid;
  for (const auto& x : out) byid[x.id] = &x;
  for (const auto& g : golden) {
    auto it = byid.find(g.id);
    if (it == byid.end()) {
      r.fail(g.id + " not generated");
      continue;
    }
    const auto& c = *it->second;
    ElementaryRelation nc = normalize(c), ng = normalize(g);
    if (c.size() != g.size() || nc.corners != ng.corners || nc.sides != ng.sides || edge_classes(c) != edge_classes(g) ||
        !same_relation(c, g))
      r.fail(g.id + " differs from its golden");
  }
  if (dt >= 10.0) r.fail("took " + std::to_string(dt) + " s");
  r.note = r.pass ? std::to_string(out.size()) + " pieces in " + std::to_string(dt).substr(0, 4) + " s" : r.note;
  return r;
}

Result c6_spots(const std::vector<ElementaryRelation>& atlas) {
  Result r;
  auto get = [&](const std::string& id) -> const ElementaryRelation& {
    for (const auto& x : atlas)
      if (x.id == id) return x;
    throw consistency_error("missing " + id);
  };
  const auto& a = get("P2_11");
  if (a.size() != 5 || edge_classes(a) != std::multiset<std::string>{"E", "F", "H-E-F", "H-E", "H-F"})
    r.fail("P2_11 is not the expected pentagon");
  bool contractions_ok = true;
  for (const auto& e : a.edges)
    if (e.kind == ElementKind::Contraction) {
      std::string s = a.lattice().format(e.cls);
      contractions_ok &= s == "E" || s == "F" || s == "H-E-F";
    }
  if (!contractions_ok) r.fail("P2_11 contracted classes");
  const auto& b = get("P2_17");
  if (b.size() != 12 || !edge_classes(b).count("42H-14E-15F")) r.fail("P2_17 lacks 42H-14E-15F or is not a 12-gon");
  const auto& c = get("X8_22");
  // degrees live on the contracted classes; fibration edges carry delta = 1
  bool all2 = c.size() == 6;
  int contractions = 0;
  for (const auto& e : c.edges) {
    bool blown = e.kind == ElementKind::Contraction;
    contractions += blown;
    all2 &= e.degree == (blown ? 2 : 1);
  }
  all2 &= contractions == 4;
  if (!all2) r.fail("X8_22 is not a hexagon of degree 2 elements");
  return r;
}

Result c7_oracle(const std::vector<ElementaryRelation>& atlas) {
  Result r;
  for (const auto& x : atlas) {
    try {
      if (!same_relation(walk_relation(x.fibration), x)) r.fail(x.id + ": walks differ");
    } catch (const error& e) {
      r.fail(x.id + ": " + e.what());
    }
  }
  return r;
}

Result c8_rationality() {
  Result r;
  auto g = build_link_graph(FieldProfile::arbitrary(), true);
  const auto& c = g.component_of("dp:9:l3");
  std::set<std::string> got(c.begin(), c.end());
  std::set<std::string> expect = {"dp:9:l3", "dp:8:l2", "dp:6", "dp:5", "hirz", "conic:5", "conic:6"};
  if (got != expect) r.fail("component of P2 has " + std::to_string(got.size()) + " families");
  for (const auto& n : c)
    if (g.models.at(n).k2 < 5) r.fail(n + " has K^2 < 5");
  return r;
}

Result c9_sep_closed() {
  Result r;
  for (int p : {2, 3, 5, 7}) {
    std::string ps = "p=" + std::to_string(p) + ": ";
    if (fixture::computed_point_links(p) != fixture::expected_point_links(p)) r.fail(ps + "link list differs");
    std::string why;
    if (!fixture::curve_links_ok(p, &why)) r.fail(ps + why);
    auto f = FieldProfile::sep_closed(p);
    if (fixture::piece_ids(enumerate_pieces(f, false)) != fixture::expected_rational_pieces(p))
      r.fail(ps + "rational pieces differ");
    // non-rational: the K^2 <= 4 table (X9_33 never) plus the X8 pieces in char 2
    auto nr = fixture::piece_ids(enumerate_pieces(f, true));
    for (const auto& id : fixture::expected_rational_pieces(p)) nr.erase(id);
    if (nr.count("X9_33")) r.fail(ps + "X9_33 present");
    for (const auto& id : nr) {
      bool low = id.rfind("X3", 0) == 0 || id.rfind("X4", 0) == 0;
      bool x8 = p == 2 && id.rfind("X8nq", 0) == 0;
      if (!low && !x8) r.fail(ps + "unexpected non-rational piece " + id);
    }
  }
  return r;
}

Result c10_diophantine() {
  Result r;
  std::vector<std::pair<int, int>> none = {{2, 1}, {3, 2}, {4, 3}, {5, 4}, {6, 5}, {8, 7}, {9, 8}, {3, 1},
                                           {5, 3}, {6, 4}, {8, 6}, {9, 7}, {5, 1}, {6, 2}, {8, 2}, {9, 5}};
  std::string solvable;
  for (auto [a, b] : none)
    if (square_solvable(a, b)) solvable += " " + std::to_string(a) + "d^2=" + std::to_string(b) + "m^2";
  int disagreements = 0;
  for (i64 A = 1; A <= 50; ++A)
    for (i64 B = 1; B <= 50; ++B) {
      bool brute = false;
      for (i64 d = 1; d <= 1000 && !brute; ++d) {
        i64 lhs = A * d * d;
        if (lhs % B) continue;
        i64 m2 = lhs / B;
        i64 m = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(m2))));
        brute = m * m == m2 && m <= 1000;
      }
      disagreements += brute != square_solvable(A, B);
    }
  if (disagreements) r.fail(std::to_string(disagreements) + " disagreements with brute force");
  // (8,2) has d=1, m=2; the listed equation only excludes it together with d > m
  if (!solvable.empty()) r.fail("listed as unsolvable but solvable:" + solvable + "; brute force agrees on all pairs");
  return r;
}

Result c11_involutions() {
  Result r;
  std::map<int, std::pair<i64, i64>> dm;
  for (const auto& l : enumerate_type_II_point(p2(), FieldProfile::arbitrary()))
    if (l.a == l.b) dm[l.a] = {l.d, l.m};
  if (dm[7] != std::make_pair<i64, i64>(21, 8)) r.fail("(7,7) row");
  if (dm[8] != std::make_pair<i64, i64>(48, 17)) r.fail("(8,8) row");
  return r;
}

Result c12_quotient(const std::vector<ElementaryRelation>& atlas) {
  Result r;
  auto t0 = Clock::now();
  for (const auto& x : atlas)
    if (!phi(relation_to_word(x, default_class_ids(x))).is_identity()) r.fail(x.id + " word is not trivial");
  for (int e = 1; e <= 12; ++e) {
    if (!phi(relation_to_word(relation_over_curve(hirzebruch(0), e, e), {})).is_identity()) r.fail("F0 square");
    if (!phi(relation_to_word(relation_over_curve(conic_bundle(6), e, e), {{"M"}, {}}), fixture::all_degrees)
             .is_identity())
      r.fail("X6 square");
  }
  auto pool = fixture::make_pool();
  std::mt19937_64 rng(12);
  std::vector<std::string> starts;
  for (const auto& [k, v] : pool.out) starts.push_back(k);
  std::uniform_int_distribution<std::size_t> pick(0, starts.size() - 1), len(0, 16);
  for (int i = 0; i < 10000; ++i) {
    std::string s = starts[pick(rng)];
    auto w1 = fixture::random_word(pool, s, len(rng), rng);
    auto w2 = fixture::random_word(pool, fixture::end_key(w1, s), len(rng), rng);
    auto w = concat(w1, w2);
    const Membership m = fixture::all_degrees;
    if (!(phi(w, m) == phi(w1, m) * phi(w2, m))) r.fail("homomorphism law");
    if (!(fixture::reduce_random_order(fixture::raw_blocks(w, m), rng) == phi(w, m))) r.fail("confluence");
    if (!phi(concat(w, inverse(w)), m).is_identity()) r.fail("w w^-1");
    if (!w.letters.empty() && !phi(SarkisovWord{{w.letters[0], inverse(w.letters[0])}}, m).is_identity())
      r.fail("trivial relation of length 2");
  }
  double dt = seconds_since(t0);
  if (dt >= 5.0) r.fail("took " + std::to_string(dt) + " s");
  return r;
}

}  // namespace

int main() {
  // criteria that cannot pass as stated; the analysis is in the README
  const std::set<int> known_failures = {1, 10};
  std::vector<ElementaryRelation> atlas;
  std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"type II table", c1_type_II_table},
      {"exclusions", c2_exclusions},
      {"type I cases", c3_type_I},
      {"type IV degrees", c4_type_IV},
      {"relation atlas", [&] { return c5_atlas(atlas); }},
      {"spot figures", [&] { return c6_spots(atlas); }},
      {"oracle equivalence", [&] { return c7_oracle(atlas); }},
      {"rationality bound", c8_rationality},
      {"separably closed filters", c9_sep_closed},
      {"diophantine suite", c10_diophantine},
      {"involution formulas", c11_involutions},
      {"quotient properties", [&] { return c12_quotient(atlas); }},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int n = static_cast<int>(i) + 1;
    Result r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << n << " " << criteria[i].first;
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    if (!r.pass && known_failures.count(n)) std::cout << " [known]";
    std::cout << "\n";
    if (!r.pass && !known_failures.count(n)) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
