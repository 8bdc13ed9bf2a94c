#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "catalog.hpp"
#include "checked.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "links.hpp"
#include "model.hpp"

namespace sarki {

enum class BaseKind { Point, Curve };

// Origin is a del Pezzo surface of rank 1 blown up in (a, b), or F0 / X4/P1
// blown up in one point (degrees stored as (0, d)). Over a curve, degrees are
// the point degrees (dx, dy) on the bundle.
struct RankThreeFibration {
  MinimalModel origin;
  std::vector<int> degrees;
  BaseKind base = BaseKind::Point;
  LatticePtr lattice;
};

// Origins whose Picard lattice has the two-symbol (H1, H2) part.
inline bool two_symbol_origin(const MinimalModel& m) {
  return (m.family == Family::Hirzebruch && m.n == 0) ||
         (m.family == Family::ConicBundle && m.k2 == 4 && !m.pointless_base);
}

inline RankThreeFibration rank_three_fibration(const MinimalModel& origin, int a, int b, bool strict = true) {
  RankThreeFibration T;
  T.origin = origin;
  T.degrees = {a, b};
  if (origin.over_point()) {
    if (a < 1 || b < 1) throw input_error("point degrees must be >= 1");
    T.lattice = make_lattice(origin, {a, b}, strict);
  } else if (two_symbol_origin(origin)) {
    if (a != 0 || b < 1) throw input_error("over " + key(origin) + " give degrees 0,d with d >= 1");
    T.lattice = make_lattice(origin, {b}, strict);
  } else {
    throw input_error("no rank 3 fibration over a point is catalogued with origin " + key(origin));
  }
  return T;
}

enum class ElementKind { Contraction, Fibration };

inline const char* element_kind_name(ElementKind k) {
  return k == ElementKind::Contraction ? "contraction" : "fibration";
}

// One boundary element of the polygon: a contracted class (degree d) or a
// fibre class (degree = delta).
struct Element {
  ElementKind kind = ElementKind::Contraction;
  Vec cls;
  int degree = 0;

  bool operator==(const Element&) const = default;
  bool operator<(const Element& o) const {
    return std::tie(kind, cls, degree) < std::tie(o.kind, o.cls, o.degree);
  }
};

struct ElementaryRelation {
  std::string id;
  RankThreeFibration fibration;
  std::string center_label;
  int center_k2 = 0;
  std::vector<std::string> corners;  // corners[i] sits between edges i and i+1
  std::vector<std::string> sides;    // sides[i] belongs to edges[i]
  std::vector<Element> edges;
  std::vector<MinimalModel> corner_models;  // empty when read from a file
  std::vector<std::string> diagnostics;

  std::size_t size() const { return edges.size(); }
  const MarkedLattice& lattice() const { return *fibration.lattice; }
};

// ---------------------------------------------------------------------------
// small rank-3 helpers

namespace detail {

inline Vec cross(const Vec& u, const Vec& v) {
  using checked::mul;
  using checked::sub;
  return {sub(mul(u[1], v[2]), mul(u[2], v[1])), sub(mul(u[2], v[0]), mul(u[0], v[2])),
          sub(mul(u[0], v[1]), mul(u[1], v[0]))};
}

inline Vec apply_gram(const MarkedLattice& L, const Vec& v) {
  Vec out(L.rank(), 0);
  for (std::size_t i = 0; i < L.rank(); ++i)
    for (std::size_t j = 0; j < L.rank(); ++j)
      out[i] = checked::add(out[i], checked::mul(L.gram()[i][j], v[j]));
  return out;
}

inline Vec primitive(Vec v) {
  i64 g = content(v);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

inline Vec scaled(const Vec& v, i64 k) {
  Vec out = v;
  for (auto& x : out) x = checked::mul(x, k);
  return out;
}

inline Vec plus(const Vec& a, const Vec& b, i64 k = 1) {
  Vec out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = checked::add(out[i], checked::mul(k, b[i]));
  return out;
}

inline void require_rank3(const MarkedLattice& L) {
  if (L.rank() != 3) throw input_error("this construction needs a lattice of rank 3");
}

// Primitive generator of {u, v}^perp, positive against -K.
inline Vec orthogonal_generator(const MarkedLattice& L, const Vec& u, const Vec& v) {
  require_rank3(L);
  Vec h = primitive(cross(apply_gram(L, u), apply_gram(L, v)));
  if (content(h) == 0) throw consistency_error("classes " + L.format(u) + ", " + L.format(v) + " are proportional");
  if (L.k_dot(h) > 0) h = scaled(h, -1);
  return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// cone enumeration

struct CandidateSet {
  std::vector<Vec> first_kind;
  std::vector<Vec> fibres;
  std::vector<std::string> diagnostics;
};

namespace detail {

struct VecHash {
  std::size_t operator()(const Vec& v) const {
    std::size_t h = 1469598103934665603ULL;
    for (i64 x : v) h = (h ^ static_cast<std::size_t>(x + 0x9e3779b9)) * 1099511628211ULL;
    return h;
  }
};

// w = s u + t v with s, t >= 1 and u, v in the set, both different from w.
inline bool is_two_term_sum(const Vec& w, const std::vector<Vec>& all,
                            const std::unordered_set<Vec, VecHash>& lookup, int bound) {
  for (const auto& u : all) {
    if (u == w) continue;
    for (i64 s = 1;; ++s) {
      Vec r = plus(w, u, -s);
      bool in_range = true;
      for (i64 x : r)
        if (std::abs(x) > 2 * static_cast<i64>(bound)) in_range = false;
      if (!in_range) break;
      i64 g = content(r);
      if (g == 0) break;
      for (i64 t = 1; t <= g; ++t) {
        if (g % t != 0) continue;
        Vec v = r;
        for (auto& x : v) x /= t;
        if (v != w && lookup.count(v)) return true;
      }
    }
  }
  return false;
}

}  // namespace detail

// Curves of the first kind and fibre classes of T in the box [-bound, bound],
// H-part coefficients >= 0, filtered for extremality.
inline CandidateSet curve_candidates(const RankThreeFibration& T, int bound = 60) {
  if (bound < 1 || bound > 1000) throw input_error("bound must lie in 1..1000");
  const MarkedLattice& L = *T.lattice;
  detail::require_rank3(L);
  const auto& G = L.gram();
  const auto& K = L.canonical();
  const std::size_t hd = L.h_dim();
  std::vector<Vec> fk_all, fib_all;
  Vec v(3);
  const i64 B = bound;
  for (v[0] = 0; v[0] <= B; ++v[0])
    for (v[1] = hd > 1 ? 0 : -B; v[1] <= B; ++v[1])
      for (v[2] = -B; v[2] <= B; ++v[2]) {
        i64 sq = 0, kd = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            sq += v[i] * G[i][j] * v[j];
            kd += K[i] * G[i][j] * v[j];
          }
        if (sq < 0 && sq == kd) fk_all.push_back(v);
        else if (sq == 0 && kd < 0 && kd % 2 == 0 && content(v) == 1) fib_all.push_back(v);
      }

  CandidateSet out;
  std::unordered_set<Vec, detail::VecHash> lookup(fk_all.begin(), fk_all.end());
  for (const auto& w : fk_all)
    if (!detail::is_two_term_sum(w, fk_all, lookup, bound)) out.first_kind.push_back(w);
  for (const auto& f : fib_all) {
    bool nef = std::all_of(out.first_kind.begin(), out.first_kind.end(),
                           [&](const Vec& c) { return L.dot(f, c) >= 0; });
    if (nef) out.fibres.push_back(f);
  }
  auto near = [&](const Vec& c) {
    return std::any_of(c.begin(), c.end(), [&](i64 x) { return std::abs(x) > B - 5; });
  };
  for (const auto* set : {&out.first_kind, &out.fibres})
    for (const auto& c : *set)
      if (near(c))
        out.diagnostics.push_back("class " + L.format(c) + " is within 5 of the bound " + std::to_string(bound) +
                                  "; the bound may be too small");
  return out;
}

// ---------------------------------------------------------------------------
// labels

namespace detail {

inline MinimalModel corner_over_point(const MarkedLattice& L, const Element& c1, const Element& c2) {
  int k2 = static_cast<int>(L.k2()) + c1.degree + c2.degree;
  Vec kx = plus(plus(L.canonical(), c1.cls, -1), c2.cls, -1);
  int lambda = static_cast<int>(content(kx));
  if (k2 <= 6) lambda = 1;
  return dp_from_invariants(k2, lambda);
}

}  // namespace detail

// Fill center, corners, sides and corner models from the edge cycle.
inline void label_relation(ElementaryRelation& rel) {
  const MarkedLattice& L = rel.lattice();
  const auto& e = rel.edges;
  const std::size_t n = e.size();
  const int kt = static_cast<int>(L.k2());
  rel.center_k2 = kt;
  rel.center_label = "X" + std::to_string(kt);
  rel.corners.assign(n, "");
  rel.sides.assign(n, "");
  auto at = [&](std::size_t i) -> const Element& { return e[(i + n) % n]; };
  auto is_fib = [&](std::size_t i) { return at(i).kind == ElementKind::Fibration; };

  if (rel.fibration.base == BaseKind::Curve) {
    const MinimalModel& b = rel.fibration.origin;
    std::string over = b.pointless_base ? "/B" : "/P1";
    for (std::size_t i = 0; i < n; ++i) {
      rel.sides[i] = "X" + std::to_string(kt + e[i].degree) + over;
      rel.corners[i] = label(rel.corner_models[i]);
    }
    return;
  }

  rel.corner_models.assign(n, MinimalModel{});
  for (std::size_t i = 0; i < n; ++i) {
    const Element& a = at(i);
    const Element& b = at(i + 1);
    MinimalModel m;
    if (a.kind == ElementKind::Contraction && b.kind == ElementKind::Contraction) {
      m = detail::corner_over_point(L, a, b);
    } else {
      if (a.kind == ElementKind::Fibration && b.kind == ElementKind::Fibration)
        throw consistency_error("two adjacent fibre classes");
      const Element& c = a.kind == ElementKind::Contraction ? a : b;
      const Element& f = a.kind == ElementKind::Contraction ? b : a;
      // the contraction's other neighbour
      bool other_is_fibre = a.kind == ElementKind::Contraction ? is_fib(i - 1 + n) : is_fib(i + 2);
      int k2 = kt + c.degree;
      if (k2 == 8) m = hirzebruch(other_is_fibre ? 0 : 1);
      else m = conic_bundle(k2, f.degree == 2);
    }
    rel.corner_models[i] = m;
    rel.corners[i] = label(m);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Element& c = e[i];
    if (c.kind == ElementKind::Fibration) {
      rel.sides[i] = "X" + std::to_string(kt) + (c.degree == 2 ? "/B" : "/P1");
      continue;
    }
    int k2 = kt + c.degree;
    if (k2 == 8) rel.sides[i] = is_fib(i + n - 1) && is_fib(i + 1) ? "F0" : "F1";
    else rel.sides[i] = "X" + std::to_string(k2);
  }
}

// ---------------------------------------------------------------------------
// normal form: dihedral minimum

inline ElementaryRelation dihedral_image(const ElementaryRelation& rel, std::size_t r, bool reflect) {
  const std::size_t n = rel.size();
  ElementaryRelation out = rel;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ei = reflect ? (2 * n - 1 - i - r) % n : (i + r) % n;
    std::size_t ci = reflect ? (3 * n - 2 - i - r) % n : (i + r) % n;
    out.edges[i] = rel.edges[ei];
    out.sides[i] = rel.sides[ei];
    out.corners[i] = rel.corners[ci];
    if (!rel.corner_models.empty()) out.corner_models[i] = rel.corner_models[ci];
  }
  return out;
}

inline auto normal_key(const ElementaryRelation& r) { return std::tie(r.corners, r.sides, r.edges); }

inline ElementaryRelation normalize(const ElementaryRelation& rel) {
  if (rel.size() == 0) return rel;
  ElementaryRelation best = rel;
  for (int refl = 0; refl < 2; ++refl)
    for (std::size_t r = 0; r < rel.size(); ++r) {
      ElementaryRelation c = dihedral_image(rel, r, refl == 1);
      if (normal_key(c) < normal_key(best)) best = std::move(c);
    }
  return best;
}

// Labels and degrees only, so pieces in different bases compare.
struct RelationSignature {
  std::vector<std::string> corners;
  std::vector<std::string> sides;
  std::vector<std::pair<int, int>> edges;  // (kind, degree)
  auto operator<=>(const RelationSignature&) const = default;
};

inline RelationSignature signature(const ElementaryRelation& rel) {
  std::optional<RelationSignature> best;
  for (int refl = 0; refl < 2; ++refl)
    for (std::size_t r = 0; r < rel.size(); ++r) {
      ElementaryRelation c = dihedral_image(rel, r, refl == 1);
      RelationSignature s{c.corners, c.sides, {}};
      for (const auto& e : c.edges) s.edges.emplace_back(static_cast<int>(e.kind), e.degree);
      if (!best || s < *best) best = s;
    }
  return best.value_or(RelationSignature{});
}

// same polygon up to rotation and reflection
inline bool same_relation(const ElementaryRelation& a, const ElementaryRelation& b) {
  if (a.size() != b.size()) return false;
  return normal_key(normalize(a)) == normal_key(normalize(b));
}

// ---------------------------------------------------------------------------
// build_relation: walk the orthogonality cycle of the extremal classes

inline ElementaryRelation build_relation(const RankThreeFibration& T, int bound = 60) {
  if (T.base != BaseKind::Point) throw input_error("build_relation handles fibrations over a point");
  const MarkedLattice& L = *T.lattice;
  CandidateSet cs = curve_candidates(T, bound);
  std::vector<Element> nodes;
  for (const auto& c : cs.first_kind)
    nodes.push_back({ElementKind::Contraction, c, static_cast<int>(-L.dot(c, c))});
  for (const auto& f : cs.fibres) nodes.push_back({ElementKind::Fibration, f, static_cast<int>(-L.k_dot(f) / 2)});

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (nodes[i].kind == ElementKind::Fibration && nodes[j].kind == ElementKind::Fibration) continue;
      if (L.dot(nodes[i].cls, nodes[j].cls) == 0) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  auto dump = [&] {
    std::ostringstream os;
    for (std::size_t i = 0; i < n; ++i) {
      os << L.format(nodes[i].cls) << " ->";
      for (auto j : adj[i]) os << ' ' << L.format(nodes[j].cls);
      os << '\n';
    }
    return os.str();
  };
  if (n < 3) throw consistency_error("fewer than three extremal classes", dump());
  for (std::size_t i = 0; i < n; ++i)
    if (adj[i].size() != 2)
      throw consistency_error("class " + L.format(nodes[i].cls) + " meets " + std::to_string(adj[i].size()) +
                                  " others orthogonally, expected 2",
                              dump());

  // start at the last exceptional class
  Vec last = L.exceptional(L.degrees().size() - 1);
  std::size_t start = 0;
  bool found = false;
  for (std::size_t i = 0; i < n; ++i)
    if (nodes[i].cls == last) {
      start = i;
      found = true;
    }
  if (!found) throw consistency_error("exceptional class " + L.format(last) + " is not extremal", dump());
  // orientation: the first exceptional class (if any other) comes last
  std::size_t nb0 = adj[start][0], nb1 = adj[start][1];
  std::size_t second = nb0;
  if (L.degrees().size() > 1) {
    Vec first = L.exceptional(0);
    if (nodes[nb0].cls == first) second = nb1;
  } else if (nodes[nb1].cls > nodes[nb0].cls) {
    second = nb1;
  }

  std::vector<std::size_t> cycle{start};
  std::size_t prev = start, cur = second;
  while (cur != start) {
    if (cycle.size() > n) throw consistency_error("cycle does not close", dump());
    cycle.push_back(cur);
    std::size_t nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = nxt;
  }
  if (cycle.size() != n) throw consistency_error("extremal classes form more than one cycle", dump());

  ElementaryRelation rel;
  rel.fibration = T;
  for (auto i : cycle) rel.edges.push_back(nodes[i]);
  rel.diagnostics = cs.diagnostics;
  label_relation(rel);
  return rel;
}

// ---------------------------------------------------------------------------
// two-rays stepping

struct Step {
  Element next;
  LinkDescriptor link;  // the link at the current element's side
};

namespace detail {

inline Element contraction(const MarkedLattice& L, const Vec& v) {
  return {ElementKind::Contraction, v, static_cast<int>(-L.dot(v, v))};
}

inline Element fibre(const MarkedLattice& L, const Vec& v) {
  return {ElementKind::Fibration, v, static_cast<int>(-L.k_dot(v) / 2)};
}

inline const std::set<Candidate>& type_II_table() {
  static const std::set<Candidate> table = type_II_fixpoint(FieldProfile::arbitrary());
  return table;
}

inline const std::vector<LinkDescriptor>& type_I_table() {
  static const std::vector<LinkDescriptor> table = [] {
    std::vector<LinkDescriptor> v;
    for (const auto& m : point_families()) {
      auto t = enumerate_type_I(m);
      v.insert(v.end(), t.begin(), t.end());
    }
    return v;
  }();
  return table;
}

}  // namespace detail

// Given consecutive elements (prev, cur) of the polygon, the element after cur.
inline Step two_ray_step(const MarkedLattice& L, const Element& prev, const Element& cur) {
  detail::require_rank3(L);
  const int kt = static_cast<int>(L.k2());
  auto fail = [&](const std::string& why) {
    return consistency_error("no link continues after " + L.format(prev.cls) + ", " + L.format(cur.cls) + ": " +
                             why);
  };

  if (cur.kind == ElementKind::Fibration) {
    // type II over the base: the other component of the fibre through the point
    if (prev.kind != ElementKind::Contraction) throw fail("two adjacent fibre classes");
    if (prev.degree % cur.degree != 0) throw fail("point degree not a multiple of the fibre degree");
    Vec nxt = detail::plus(detail::scaled(cur.cls, prev.degree / cur.degree), prev.cls, -1);
    Element next = detail::contraction(L, nxt);
    if (classify(L, nxt).kind != ClassKind::FirstKind || L.dot(nxt, cur.cls) != 0)
      throw fail("complementary class is not a curve of the first kind");
    int k2 = kt + next.degree;
    MinimalModel src = k2 == 8 ? hirzebruch(0) : conic_bundle(kt + prev.degree, cur.degree == 2);
    MinimalModel tgt = k2 == 8 ? hirzebruch(0) : conic_bundle(k2, cur.degree == 2);
    LinkDescriptor l;
    l.type = LinkType::TypeII_Curve;
    l.source = src;
    l.target = tgt;
    l.a = prev.degree;
    l.b = next.degree;
    l.delta = prev.degree / cur.degree;
    return {next, l};
  }

  if (prev.kind == ElementKind::Contraction) {
    // corner over a point: look the link up in the type I / II tables
    Vec h = detail::orthogonal_generator(L, prev.cls, cur.cls);
    Vec kx = detail::plus(detail::plus(L.canonical(), prev.cls, -1), cur.cls, -1);
    i64 h2 = L.dot(h, h);
    i64 kh = -L.dot(kx, h);
    if (h2 <= 0 || kh % h2 != 0) throw fail("corner has no ample generator");
    int k2 = kt + prev.degree + cur.degree;
    MinimalModel x = dp_from_invariants(k2, static_cast<int>(kh / h2));
    int a = prev.degree;
    std::vector<Step> hits;
    for (const auto& c : detail::type_II_table()) {
      if (!(c.source == x) || c.a != a) continue;
      Vec e = detail::plus(detail::scaled(h, c.row.d), prev.cls, -c.row.m);
      if (L.dot(e, e) != -c.row.b || L.k_dot(e) != -c.row.b || L.dot(e, cur.cls) != 0) continue;
      LinkDescriptor l;
      l.type = LinkType::TypeII_Point;
      l.source = x;
      l.target = c.target;
      l.a = a;
      l.b = c.row.b;
      l.d = c.row.d;
      l.m = c.row.m;
      if (std::none_of(hits.begin(), hits.end(), [&](const Step& s) { return s.next.cls == e; }))
        hits.push_back({detail::contraction(L, e), l});
    }
    for (const auto& t : detail::type_I_table()) {
      if (!(t.source == x) || t.a != a) continue;
      Vec f = detail::plus(detail::scaled(h, t.d), prev.cls, -t.m);
      if (L.dot(f, f) != 0 || L.k_dot(f) != -2 * t.delta || L.dot(f, cur.cls) != 0) continue;
      hits.push_back({detail::fibre(L, f), t});
    }
    if (hits.size() != 1)
      throw fail(std::to_string(hits.size()) + " table rows match at " + key(x) + " with a=" + std::to_string(a));
    return hits.front();
  }

  // prev is a fibre: the corner is a conic bundle Z; on T/cur try type III, else IV
  Vec ky = detail::plus(L.canonical(), cur.cls, -1);
  int kz = kt + cur.degree;
  std::vector<Step> hits;
  for (const auto& t : detail::type_I_table()) {
    if (t.target.k2 != kz || t.delta != prev.degree) continue;
    const MinimalModel& x = t.source;
    i64 den = t.d - static_cast<i64>(x.lambda) * t.m;
    if (den == 0) continue;
    Vec num = detail::plus(prev.cls, ky, t.m);
    if (std::any_of(num.begin(), num.end(), [&](i64 v) { return v % den != 0; })) continue;
    Vec h = num;
    for (auto& v : h) v /= den;
    Vec e = detail::plus(ky, h, x.lambda);
    if (L.dot(e, e) != -t.a || L.dot(h, h) != x.h2 || L.dot(e, cur.cls) != 0 || L.dot(e, h) != 0) continue;
    LinkDescriptor l = reversed(t);
    if (kz == 8) l.source = hirzebruch(1);
    hits.push_back({detail::contraction(L, e), l});
  }
  if (hits.size() > 1) throw fail("several type III rows match");
  if (hits.size() == 1) return hits.front();

  Vec r = detail::apply_gram(L, cur.cls);
  Vec w = detail::cross(r, prev.cls);
  Vec g = detail::primitive(
      detail::plus(detail::scaled(prev.cls, L.dot(w, w)), w, -2 * L.dot(w, prev.cls)));
  if (content(g) == 0) throw fail("no second isotropic direction");
  if (L.k_dot(g) > 0) g = detail::scaled(g, -1);
  if (classify(L, g).kind != ClassKind::FibreClass) throw fail("second isotropic class is not a fibre class");
  if (kz != 1 && kz != 2 && kz != 4 && kz != 8) throw fail("type IV needs K^2 in {1, 2, 4, 8}, got " + std::to_string(kz));
  LinkDescriptor l;
  l.type = LinkType::TypeIV;
  l.source = l.target = kz == 8 ? hirzebruch(0) : conic_bundle(kz);
  return {detail::fibre(L, g), l};
}

// Iterate two_ray_step from the origin corner until the walk closes.
inline ElementaryRelation walk_relation(const RankThreeFibration& T, int max_steps = 64) {
  if (T.base != BaseKind::Point) throw input_error("walk_relation handles fibrations over a point");
  const MarkedLattice& L = *T.lattice;
  detail::require_rank3(L);
  Element first, second;
  if (T.origin.over_point()) {
    first = detail::contraction(L, L.exceptional(0));
    second = detail::contraction(L, L.exceptional(1));
  } else {
    first = detail::fibre(L, L.basis(0));
    second = detail::contraction(L, L.exceptional(0));
  }
  std::vector<Element> walk{first, second};
  std::ostringstream partial;
  partial << L.format(first.cls) << ' ' << L.format(second.cls);
  for (int i = 0;; ++i) {
    if (i >= max_steps) throw consistency_error("walk did not close in " + std::to_string(max_steps) + " steps",
                                                partial.str());
    Step s;
    try {
      s = two_ray_step(L, walk[walk.size() - 2], walk.back());
    } catch (const consistency_error& e) {
      throw consistency_error(e.what(), partial.str());
    }
    if (walk.back() == first && s.next == second) break;
    walk.push_back(s.next);
    partial << ' ' << L.format(s.next.cls);
  }
  walk.pop_back();  // first element repeated at the end

  // same presentation as build_relation: start at the second element
  ElementaryRelation rel;
  rel.fibration = T;
  for (std::size_t i = 1; i < walk.size(); ++i) rel.edges.push_back(walk[i]);
  rel.edges.push_back(walk[0]);
  label_relation(rel);
  return rel;
}

// ---------------------------------------------------------------------------
// the square over a curve

inline Vec fibre_class(const MarkedLattice& L) {
  const MinimalModel& m = L.ambient();
  Vec f = L.zero();
  if (m.family == Family::Hirzebruch) {
    f[0] = 1;  // f, or H1 when n = 0
    return f;
  }
  if (m.family != Family::ConicBundle) throw input_error("fibre class needs a fibred model");
  if (m.pointless_base) return {1, -2};
  switch (m.k2) {
    case 6: f[0] = 1; f[1] = -1; break;
    case 5: f[0] = 2; f[1] = -1; break;
    case 4: f[0] = 1; break;
    case 3: f[0] = 1; f[1] = -2; break;
    default: f[1] = 1; break;
  }
  return f;
}

inline ElementaryRelation relation_over_curve(const MinimalModel& bundle, int delta_x, int delta_y,
                                              const FieldProfile& field = FieldProfile::arbitrary()) {
  if (bundle.over_point()) throw input_error("the square lives over a conic bundle or Hirzebruch surface");
  if (delta_x < 1 || delta_y < 1) throw constraint_error("relative degrees must be >= 1");
  // validates existence and the field's degree constraint
  LinkDescriptor lx = type_II_over_curve(bundle, delta_x, field);
  LinkDescriptor ly = type_II_over_curve(bundle, delta_y, field);
  const int dx = lx.a, dy = ly.a;

  RankThreeFibration T;
  T.origin = bundle;
  T.degrees = {dx, dy};
  T.base = BaseKind::Curve;
  T.lattice = std::make_shared<const MarkedLattice>(
      MarkedLattice::of(bundle).blow_up(dx, false).blow_up(dy, false).with_exceptional_names({"E", "F"}));
  const MarkedLattice& L = *T.lattice;
  Vec f = fibre_class(MarkedLattice::of(bundle));
  f.resize(L.rank(), 0);
  const std::size_t r = L.rank();
  Vec E = L.basis(r - 2), F = L.basis(r - 1);

  ElementaryRelation rel;
  rel.fibration = T;
  rel.edges = {{ElementKind::Contraction, E, dx},
               {ElementKind::Contraction, detail::plus(detail::scaled(f, delta_y), F, -1), dy},
               {ElementKind::Contraction, detail::plus(detail::scaled(f, delta_x), E, -1), dx},
               {ElementKind::Contraction, F, dy}};
  rel.corner_models = {bundle, bundle, bundle, bundle};
  if (bundle.family == Family::Hirzebruch) {
    int n = bundle.n;
    int ny = std::abs(n - delta_y), nx = std::abs(n - delta_x);
    rel.corner_models = {hirzebruch(ny), hirzebruch(std::abs(ny - delta_x)), hirzebruch(nx), bundle};
  }
  label_relation(rel);
  rel.center_label += bundle.pointless_base ? "/B" : "/P1";
  return rel;
}

// ---------------------------------------------------------------------------
// links around a relation; side i joins corner i-1 to corner i

inline std::vector<LinkDescriptor> relation_links(const ElementaryRelation& rel) {
  if (rel.corner_models.size() != rel.size()) throw input_error("relation carries no corner models");
  const std::size_t n = rel.size();
  const MarkedLattice& L = rel.lattice();
  const auto& e = rel.edges;
  auto at = [&](std::size_t i) -> const Element& { return e[i % n]; };
  std::vector<LinkDescriptor> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Element& p = at(i + n - 1);
    const Element& c = at(i);
    const Element& q = at(i + 1);
    LinkDescriptor l;
    l.source = rel.corner_models[(i + n - 1) % n];
    l.target = rel.corner_models[i];
    bool pf = p.kind == ElementKind::Fibration, qf = q.kind == ElementKind::Fibration;
    if (rel.fibration.base == BaseKind::Curve || c.kind == ElementKind::Fibration) {
      l.type = LinkType::TypeII_Curve;
      l.a = p.degree;
      l.b = q.degree;
      int bd = c.kind == ElementKind::Fibration ? c.degree : l.source.base_degree();
      l.delta = p.degree / bd;
      if (l.source.family == Family::Hirzebruch && l.target.family == Family::Hirzebruch)
        l.hirzebruch_shift = std::make_pair(l.source.n, l.target.n);
    } else if (!pf && !qf) {
      l.type = LinkType::TypeII_Point;
      l.a = p.degree;
      l.b = q.degree;
      Vec h = detail::orthogonal_generator(L, p.cls, c.cls);
      l.d = L.dot(q.cls, h) / L.dot(h, h);
      l.m = L.dot(q.cls, p.cls) / p.degree;
    } else if (!pf && qf) {
      l.type = LinkType::TypeI;
      l.a = p.degree;
      l.delta = q.degree;
      Vec h = detail::orthogonal_generator(L, p.cls, c.cls);
      l.d = L.dot(q.cls, h) / L.dot(h, h);
      l.m = L.dot(q.cls, p.cls) / p.degree;
    } else if (pf && !qf) {
      l.type = LinkType::TypeIII;
      l.b = q.degree;
      l.delta = p.degree;
      Vec h = detail::orthogonal_generator(L, q.cls, c.cls);
      l.d = L.dot(p.cls, h) / L.dot(h, h);
      l.m = L.dot(p.cls, q.cls) / q.degree;
    } else {
      l.type = LinkType::TypeIV;
    }
    out.push_back(l);
  }
  return out;
}

// ---------------------------------------------------------------------------
// the atlas of pieces over a point

struct FigureEntry {
  std::string origin;  // surface key
  int a;
  int b;
  std::string id;
  bool rational;
};

// Which figure each P(X; a, b) is drawn in.
inline const std::vector<FigureEntry>& figure_map() {
  static const std::vector<FigureEntry> map = [] {
    std::vector<FigureEntry> v;
    auto add = [&](std::string o, int a, int b, std::string id, bool rat = true) {
      v.push_back({std::move(o), a, b, std::move(id), rat});
    };
    for (int a = 1; a <= 4; ++a)
      for (int b = a; a + b < 9; ++b) add("dp:9:l3", a, b, "P2_" + std::to_string(a) + std::to_string(b));
    const char* q1[] = {"P2_12", "P2_22", "P2_23", "P2_24", "P2_25", "P2_26"};
    for (int b = 1; b <= 6; ++b) add("dp:8:l2", 1, b, q1[b - 1]);
    for (auto [a, b] : {std::pair{2, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 3}, {3, 4}})
      add("dp:8:l2", a, b, "X8_" + std::to_string(a) + std::to_string(b));
    const char* x6[] = {"P2_23", "X8_23", "X8_33", "X8_34"};
    for (int b = 1; b <= 4; ++b) add("dp:6", 1, b, x6[b - 1]);
    add("dp:6", 2, 2, "X6_22");
    add("dp:6", 2, 3, "X6_23");
    add("dp:5", 1, 1, "P2_15");
    add("dp:5", 1, 2, "P2_25");
    add("dp:5", 1, 3, "P2_35");
    add("dp:5", 2, 2, "X8_25");
    const char* f0[] = {"P2_11", "F0_02", "P2_13", "F0_04", "P2_15", "F0_06", "P2_17"};
    for (int d = 1; d <= 7; ++d) add("hirz:0", 0, d, f0[d - 1]);
    add("dp:9:l1", 3, 3, "X9_33", false);
    add("dp:8:l1", 2, 2, "X8nq_22", false);
    add("dp:8:l1", 2, 4, "X8nq_24", false);
    add("dp:3", 1, 1, "X3_11", false);
    add("dp:4", 1, 1, "X4_11", false);
    add("dp:4", 1, 2, "X4_12", false);
    for (int d = 1; d <= 3; ++d) add("conic:4", 0, d, "X4_0" + std::to_string(d), false);
    return v;
  }();
  return map;
}

// Pieces the degree filter admits but the field still rules out.
inline bool piece_excluded(const FigureEntry& e, const FieldProfile& field) {
  return field.closure == Closure::SeparablyClosed && field.p == 3 && e.origin == "dp:9:l3" && e.a == 3 && e.b == 3;
}

inline bool piece_admissible(const FigureEntry& e, const FieldProfile& field) {
  MinimalModel m = parse_surface(e.origin);
  if (!exists_over(m, field)) return false;
  auto ok = allowed_point_degrees(m, field);
  if (e.a != 0 && !ok(e.a)) return false;
  if (!ok(e.b)) return false;
  return !piece_excluded(e, field);
}

inline ElementaryRelation build_piece(const FigureEntry& e, int bound = 60) {
  ElementaryRelation r = build_relation(rank_three_fibration(parse_surface(e.origin), e.a, e.b), bound);
  r.id = e.id;
  return r;
}

// One relation per figure, built from the first admissible origin in table order.
inline std::vector<ElementaryRelation> enumerate_pieces(const FieldProfile& field, bool include_nonrational,
                                                        int bound = 60) {
  std::vector<ElementaryRelation> out;
  std::set<std::string> seen;
  for (const auto& e : figure_map()) {
    if (!e.rational && !include_nonrational) continue;
    if (seen.count(e.id) || !piece_admissible(e, field)) continue;
    seen.insert(e.id);
    out.push_back(build_piece(e, bound));
  }
  return out;
}

// ---------------------------------------------------------------------------

inline std::string render_dot(const ElementaryRelation& rel) {
  const MarkedLattice& L = rel.lattice();
  const std::size_t n = rel.size();
  auto q = [](const std::string& s) {
    std::string o = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') o += '\\';
      o += c;
    }
    return o + "\"";
  };
  std::ostringstream os;
  os << "digraph " << q(rel.id.empty() ? "relation" : rel.id) << " {\n";
  os << "  center [label=" << q(rel.center_label) << ", shape=box];\n";
  for (std::size_t i = 0; i < n; ++i) os << "  s" << i << " [label=" << q(rel.sides[i]) << ", shape=ellipse];\n";
  for (std::size_t i = 0; i < n; ++i) os << "  c" << i << " [label=" << q(rel.corners[i]) << ", shape=plaintext];\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Element& e = rel.edges[i];
    std::string lab = L.format(e.cls);
    if (e.kind == ElementKind::Fibration) lab = "fibre " + lab;
    os << "  center -> s" << i << " [label=" << q(lab + " (" + std::to_string(e.degree) + ")") << "];\n";
    os << "  s" << i << " -> c" << (i + n - 1) % n << ";\n";
    os << "  s" << i << " -> c" << i << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace sarki
