#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "catalog.hpp"
#include "checked.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "model.hpp"

namespace sarki {

enum class LinkType { TypeI, TypeII_Point, TypeII_Curve, TypeIII, TypeIV };

inline const char* link_type_name(LinkType t) {
  switch (t) {
    case LinkType::TypeI: return "I";
    case LinkType::TypeII_Point: return "II";
    case LinkType::TypeII_Curve: return "II_curve";
    case LinkType::TypeIII: return "III";
    case LinkType::TypeIV: return "IV";
  }
  return "?";
}

struct LinkDescriptor {
  LinkType type = LinkType::TypeII_Point;
  MinimalModel source;
  MinimalModel target;
  int a = 0;  // degree of the base point on the source side
  int b = 0;  // degree of the base point on the target side
  // TypeII_Point: E' = dH - mE.  TypeI/III: fibre C = dH - mE on the blown-up dP.
  i64 d = 0;
  i64 m = 0;
  int delta = 0;  // fibre delta for I/III, base-relative degree for II over a curve
  std::optional<std::pair<int, int>> hirzebruch_shift;
  Existence existence = Existence::NumericOnly;

  int target_k2() const { return target.k2; }
};

inline auto sort_key(const LinkDescriptor& l) {
  return std::make_tuple(static_cast<int>(l.type), l.a, l.b, l.d, l.m, l.delta, key(l.target));
}

inline void sort_links(std::vector<LinkDescriptor>& v) {
  std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return sort_key(x) < sort_key(y); });
}

// ---------------------------------------------------------------------------
// type II over a point

struct QuadraticRow {
  int b;
  i64 m;
  i64 d_num;  // d = d_num / d_den in lowest terms
  i64 d_den;
  bool d_integral() const { return d_den == 1; }
  i64 d() const { return d_num; }
};

inline void check_normalization(int k2, int lambda, int h2) {
  bool ok = (k2 == 9 && lambda == 3 && h2 == 1) || (k2 == 8 && lambda == 2 && h2 == 2) ||
            (k2 == 9 && lambda == 1 && h2 == 9) || (k2 == 8 && lambda == 1 && h2 == 8) ||
            (lambda == 1 && k2 >= 1 && k2 <= 6 && h2 == k2);
  if (!ok)
    throw input_error("(K^2, lambda, H^2) = (" + std::to_string(k2) + ", " + std::to_string(lambda) + ", " +
                      std::to_string(h2) + ") is not a valid normalization");
}

// Positive integer roots m of m^2 a(a-K2) + 2abm + b(b+K2) = 0, any d.
inline std::vector<QuadraticRow> solve_type_II_quadratic_raw(int k2, int lambda, int h2, int a) {
  check_normalization(k2, lambda, h2);
  if (a < 1 || a >= k2) throw input_error("point degree a must satisfy 1 <= a < K^2");
  std::vector<QuadraticRow> out;
  const i64 A = checked::mul(a, a - k2);  // < 0
  for (int b = 1; b <= 9 - k2 + a; ++b) {
    const i64 B = 2LL * a * b;
    const i64 C = static_cast<i64>(b) * (b + k2);
    const i64 disc = checked::sub(checked::mul(B, B), checked::mul(4 * A, C));
    if (!is_square(disc)) continue;
    i64 root = static_cast<i64>(__builtin_sqrtl(static_cast<long double>(disc)));
    while (root * root > disc) --root;
    while ((root + 1) * (root + 1) <= disc) ++root;
    // A < 0 and C > 0: exactly one positive root
    const i64 num = B + root;
    const i64 den = -2 * A;
    if (num % den != 0) continue;
    const i64 m = num / den;
    if (m <= 0) continue;
    i64 dn = b + a * m;
    i64 dd = static_cast<i64>(lambda) * h2;
    i64 g = std::gcd(dn, dd);
    dn /= g;
    dd /= g;
    // -b = d K.H + a m  and  -b = d^2 H^2 - a m^2, cross-multiplied
    const i64 kh = -static_cast<i64>(lambda) * h2;
    if (checked::add(checked::mul(dn, kh), checked::mul(dd, a * m)) != -b * dd)
      throw consistency_error("canonical identity fails for raw row");
    if (checked::sub(checked::mul(checked::mul(dn, dn), h2), checked::mul(dd * dd, a * m * m)) != -b * dd * dd)
      throw consistency_error("self-intersection identity fails for raw row");
    out.push_back({b, m, dn, dd});
  }
  return out;
}

struct TypeIIRow {
  int b;
  i64 m;
  i64 d;
  bool operator==(const TypeIIRow&) const = default;
};

// Rows with integral d, re-verified on the blown-up lattice.
inline std::vector<TypeIIRow> solve_type_II_quadratic(int k2, int lambda, int h2, int a) {
  std::vector<TypeIIRow> out;
  for (const auto& r : solve_type_II_quadratic_raw(k2, lambda, h2, a)) {
    if (!r.d_integral() || r.d() <= 0) continue;
    MarkedLattice L = MarkedLattice::of(dp_from_invariants(k2, lambda)).blow_up(a, false);
    Vec e{r.d(), -r.m};
    if (L.dot(e, e) != -r.b || L.k_dot(e) != -r.b) throw consistency_error("E' fails re-verification");
    out.push_back({r.b, r.m, r.d()});
  }
  return out;
}

inline std::vector<MinimalModel> point_families() {
  std::vector<MinimalModel> v = {p2(), severi_brauer(), quadric(), dp8_nonquadric()};
  for (int d = 6; d >= 1; --d) v.push_back(del_pezzo(d));
  return v;
}

// Families of del Pezzo surfaces of Picard rank one with a given degree.
inline std::vector<MinimalModel> point_families_of_degree(int k2) {
  std::vector<MinimalModel> v;
  for (const auto& m : point_families())
    if (m.k2 == k2) v.push_back(m);
  return v;
}

namespace detail {

struct Candidate {
  MinimalModel source;
  int a;
  TypeIIRow row;
  MinimalModel target;
  bool operator<(const Candidate& o) const {
    return std::make_tuple(key(source), a, row.b, row.m, row.d, key(target)) <
           std::make_tuple(key(o.source), o.a, o.row.b, o.row.m, o.row.d, key(o.target));
  }
};

// All point-to-point type II links over the field, after the fixpoint of the
// reciprocity filter.
inline std::set<Candidate> type_II_fixpoint(const FieldProfile& field) {
  std::set<Candidate> cand;
  for (const auto& src : point_families()) {
    if (!exists_over(src, field)) continue;
    auto ok_src = allowed_point_degrees(src, field);
    for (int a = 1; a < src.k2; ++a) {
      if (!ok_src(a)) continue;
      for (const auto& row : solve_type_II_quadratic(src.k2, src.lambda, src.h2, a)) {
        for (const auto& tgt : point_families_of_degree(src.k2 - a + row.b)) {
          if (!exists_over(tgt, field)) continue;
          if (is_rational_family(tgt) != is_rational_family(src)) continue;
          if (!allowed_point_degrees(tgt, field)(row.b)) continue;
          cand.insert({src, a, row, tgt});
        }
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = cand.begin(); it != cand.end();) {
      bool has_inverse = std::any_of(cand.begin(), cand.end(), [&](const Candidate& c) {
        return c.source == it->target && c.target == it->source && c.a == it->row.b && c.row.b == it->a;
      });
      if (!has_inverse) {
        it = cand.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return cand;
}

}  // namespace detail

inline Existence existence_flag(const LinkDescriptor& l, const FieldProfile& field);

inline std::vector<LinkDescriptor> enumerate_type_II_point(const MinimalModel& source, const FieldProfile& field) {
  if (!source.over_point()) throw input_error("type II links over a point start from a del Pezzo surface of Picard rank 1");
  if (source.geom == GeomClass::GeomNonNormal) return {};
  std::vector<LinkDescriptor> out;
  for (const auto& c : detail::type_II_fixpoint(field)) {
    if (!(c.source == source)) continue;
    LinkDescriptor l;
    l.type = LinkType::TypeII_Point;
    l.source = c.source;
    l.target = c.target;
    l.a = c.a;
    l.b = c.row.b;
    l.d = c.row.d;
    l.m = c.row.m;
    l.existence = existence_flag(l, field);
    out.push_back(l);
  }
  sort_links(out);
  return out;
}

// ---------------------------------------------------------------------------
// type I and III

// Fibre classes C = alpha H - beta E on Bl(X; a) with C^2 = 0, primitive, delta <= 2.
inline std::vector<LinkDescriptor> enumerate_type_I(const MinimalModel& source,
                                                    const FieldProfile& field = FieldProfile::arbitrary()) {
  if (!source.over_point()) throw input_error("type I links start from a del Pezzo surface of Picard rank 1");
  std::vector<LinkDescriptor> out;
  if (source.geom == GeomClass::GeomNonNormal || !exists_over(source, field)) return out;
  auto ok = allowed_point_degrees(source, field);
  for (int a = 1; a < source.k2; ++a) {
    if (!ok(a)) continue;
    MarkedLattice L = MarkedLattice::of(source).blow_up(a, false);
    for (i64 alpha = 1; alpha <= 12; ++alpha) {
      for (i64 beta = 1; beta <= 12; ++beta) {
        Vec c{alpha, -beta};
        if (std::gcd(alpha, beta) != 1 || L.dot(c, c) != 0) continue;
        i64 kc = L.k_dot(c);
        if (kc >= 0 || kc % 2 != 0) continue;
        int delta = static_cast<int>(-kc / 2);
        if (delta > 2) continue;
        int k2y = source.k2 - a;
        MinimalModel tgt = k2y == 8 && delta == 1 ? hirzebruch(1) : conic_bundle(k2y, delta == 2);
        if (!exists_over(tgt, field)) continue;
        LinkDescriptor l;
        l.type = LinkType::TypeI;
        l.source = source;
        l.target = tgt;
        l.a = a;
        l.d = alpha;
        l.m = beta;
        l.delta = delta;
        l.existence = existence_flag(l, field);
        out.push_back(l);
      }
    }
  }
  sort_links(out);
  return out;
}

inline LinkDescriptor reversed(const LinkDescriptor& l) {
  LinkDescriptor r = l;
  std::swap(r.source, r.target);
  std::swap(r.a, r.b);
  if (l.type == LinkType::TypeI) r.type = LinkType::TypeIII;
  else if (l.type == LinkType::TypeIII) r.type = LinkType::TypeI;
  if (l.type == LinkType::TypeII_Point) {
    // E' of the inverse is the exceptional curve of the source point; d, m are
    // recovered from the inverse row of the target table.
    r.d = 0;
    r.m = 0;
  }
  if (l.hirzebruch_shift) r.hirzebruch_shift = std::make_pair(l.hirzebruch_shift->second, l.hirzebruch_shift->first);
  return r;
}

// Type III links leaving a conic bundle (inverse of type I).
inline std::vector<LinkDescriptor> enumerate_type_III(const MinimalModel& bundle, const FieldProfile& field) {
  std::vector<LinkDescriptor> out;
  if (bundle.over_point()) return out;
  if (bundle.family == Family::Hirzebruch && bundle.n != 1) return out;
  for (const auto& src : point_families()) {
    for (const auto& l : enumerate_type_I(src, field)) {
      if (l.target == bundle) out.push_back(reversed(l));
    }
  }
  sort_links(out);
  return out;
}

// ---------------------------------------------------------------------------
// type IV

struct TypeIVResult {
  int k2;
  std::string kind;  // "product of conics", "Geiser", "Bertini", or "" for K^2 = 4
};

inline std::optional<TypeIVResult> type_IV_analysis(i64 d1, i64 d2, i64 f1f2) {
  if (d1 < 1 || d2 < 1 || f1f2 < 1) throw input_error("degrees and f1.f2 must be positive");
  if (f1f2 % (d1 * d2) != 0) throw input_error("f1.f2 must be a multiple of d1*d2");
  i64 num = 8 * d1 * d2;
  if (num % f1f2 != 0) return std::nullopt;
  i64 k2 = num / f1f2;
  switch (k2) {
    case 8: return TypeIVResult{8, "product of conics"};
    case 4: return TypeIVResult{4, ""};
    case 2: return TypeIVResult{2, "Geiser"};
    case 1: return TypeIVResult{1, "Bertini"};
    default: return std::nullopt;
  }
}

inline std::vector<LinkDescriptor> enumerate_type_IV(const MinimalModel& bundle, const FieldProfile& field) {
  std::vector<LinkDescriptor> out;
  bool has = (bundle.family == Family::Hirzebruch && bundle.n == 0) ||
             (bundle.family == Family::ConicBundle && !bundle.pointless_base &&
              (bundle.k2 == 1 || bundle.k2 == 2 || bundle.k2 == 4));
  if (!has || !exists_over(bundle, field)) return out;
  LinkDescriptor l;
  l.type = LinkType::TypeIV;
  l.source = bundle;
  l.target = bundle;
  l.existence = existence_flag(l, field);
  out.push_back(l);
  return out;
}

// ---------------------------------------------------------------------------
// type II over a curve

inline LinkDescriptor type_II_over_curve(const MinimalModel& bundle, int delta, const FieldProfile& field,
                                         std::optional<int> target_n = std::nullopt, bool on_section = false) {
  if (bundle.over_point()) throw input_error("type II over a curve needs a conic bundle or Hirzebruch surface");
  if (delta < 1) throw constraint_error("delta must be >= 1");
  if (!exists_over(bundle, field))
    throw constraint_error(key(bundle) + " does not exist over " + field_string(field));
  int degree = delta * bundle.base_degree();
  if (!allowed_point_degrees(bundle, field)(degree))
    throw constraint_error("no point of degree " + std::to_string(degree) + " on " + key(bundle) + " over " +
                           field_string(field));
  LinkDescriptor l;
  l.type = LinkType::TypeII_Curve;
  l.source = bundle;
  l.target = bundle;
  l.a = l.b = degree;
  l.delta = delta;
  if (bundle.family == Family::Hirzebruch) {
    int n = bundle.n;
    int np = target_n.value_or(on_section ? n + delta : std::abs(n - delta));
    if (np < 0 || (np - n - delta) % 2 != 0 || std::abs(n - np) > delta)
      throw constraint_error("F_" + std::to_string(n) + " cannot reach F_" + std::to_string(np) +
                             " with a point of degree " + std::to_string(delta));
    l.target = hirzebruch(np);
    l.hirzebruch_shift = std::make_pair(n, np);
  } else if (target_n) {
    throw input_error("target index applies only to Hirzebruch surfaces");
  }
  l.existence = existence_flag(l, field);
  return l;
}

// ---------------------------------------------------------------------------

// A d^2 = B m^2 has a solution in positive integers.
inline bool square_solvable(i64 A, i64 B) {
  if (A < 1 || B < 1) throw input_error("square_solvable needs A, B >= 1");
  i64 g = std::gcd(A, B);
  return is_square(checked::mul(A / g, B / g));
}

enum class ConicContraction { SecondConicBundle, BirationalTarget };

struct ConicBundleContractions {
  ConicContraction kind;
  int target_k2 = 0;  // BirationalTarget
  int degree = 0;
  bool outside_hypothesis = false;
  std::string fixed_part;  // anticanonical fixed part for K^2 in {1,2}
};

inline ConicBundleContractions conic_bundle_contractions(int k2) {
  switch (k2) {
    case 1: return {ConicContraction::SecondConicBundle, 0, 0, false, "C^2=-3, geometrically integral"};
    case 2: return {ConicContraction::SecondConicBundle, 0, 0, false, "C^2=-6, Galois-conjugate pair"};
    case 4: return {ConicContraction::SecondConicBundle};
    case 3: return {ConicContraction::BirationalTarget, 4, 1};
    case 5: return {ConicContraction::BirationalTarget, 9, 4};
    case 6: return {ConicContraction::BirationalTarget, 8, 2};
    case 7: return {ConicContraction::BirationalTarget, 8, 1, true};
    default: throw input_error("conic bundle degree must lie in 1..7");
  }
}

// ---------------------------------------------------------------------------

inline Existence existence_flag(const LinkDescriptor& l, const FieldProfile& field) {
  if (l.type == LinkType::TypeI || l.type == LinkType::TypeIII) {
    const MinimalModel& dp = l.type == LinkType::TypeI ? l.source : l.target;
    int deg = l.type == LinkType::TypeI ? l.a : l.b;
    if (dp.family == Family::P2 && deg == 1) return Existence::Constructed;
  }
  if (field.closure != Closure::SeparablyClosed || field.p == 0) return Existence::NumericOnly;
  auto is = [&](Family s, int a, int b, Family t) {
    return l.source.family == s && l.target.family == t && l.a == a && l.b == b;
  };
  if (l.type == LinkType::TypeI || l.type == LinkType::TypeIII) {
    const MinimalModel& dp = l.type == LinkType::TypeI ? l.source : l.target;
    int deg = l.type == LinkType::TypeI ? l.a : l.b;
    if (field.p == 2 && ((dp.family == Family::P2 && deg == 4) || (dp.family == Family::Quadric && deg == 2)))
      return Existence::Constructed;
    return Existence::NumericOnly;
  }
  if (l.type != LinkType::TypeII_Point) return Existence::NumericOnly;
  if (field.p == 2 && (is(Family::P2, 2, 1, Family::Quadric) || is(Family::Quadric, 1, 2, Family::P2) ||
                       is(Family::Quadric, 4, 4, Family::Quadric)))
    return Existence::Constructed;
  if (field.p == 3 && is(Family::P2, 3, 3, Family::P2)) return Existence::Constructed;
  if (field.p == 5 && (is(Family::P2, 5, 1, Family::DelPezzo) || is(Family::DelPezzo, 1, 5, Family::P2)))
    return Existence::Constructed;
  return Existence::NumericOnly;
}

// Every link leaving a model; over-curve degrees run up to max_degree.
inline std::vector<LinkDescriptor> enumerate_links(const MinimalModel& m, const FieldProfile& field,
                                                   int max_degree = 8) {
  std::vector<LinkDescriptor> out;
  if (!exists_over(m, field)) return out;
  if (m.over_point()) {
    out = enumerate_type_II_point(m, field);
    auto t1 = enumerate_type_I(m, field);
    out.insert(out.end(), t1.begin(), t1.end());
  } else {
    for (int e = 1; e <= max_degree; ++e) {
      if (!allowed_point_degrees(m, field)(e * m.base_degree())) continue;
      out.push_back(type_II_over_curve(m, e, field));
    }
    auto t3 = enumerate_type_III(m, field);
    out.insert(out.end(), t3.begin(), t3.end());
    auto t4 = enumerate_type_IV(m, field);
    out.insert(out.end(), t4.begin(), t4.end());
  }
  sort_links(out);
  return out;
}

// ---------------------------------------------------------------------------

struct LinkGraph {
  std::vector<std::string> nodes;
  std::map<std::string, MinimalModel> models;
  std::vector<LinkDescriptor> edges;
  std::vector<std::vector<std::string>> components;

  const std::vector<std::string>& component_of(const std::string& node) const {
    for (const auto& c : components)
      if (std::find(c.begin(), c.end(), node) != c.end()) return c;
    throw input_error("node '" + node + "' is not in the graph");
  }
};

inline LinkGraph build_link_graph(const FieldProfile& field, bool include_nonrational) {
  LinkGraph g;
  std::vector<MinimalModel> reps;
  for (const auto& m : all_families(include_nonrational)) {
    if (!exists_over(m, field)) continue;
    std::string k = family_key(m);
    g.nodes.push_back(k);
    g.models[k] = m;
    reps.push_back(m);
    if (m.family == Family::Hirzebruch) reps.push_back(hirzebruch(1));
  }
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) idx[g.nodes[i]] = i;
  std::vector<std::size_t> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& m : reps) {
    for (const auto& l : enumerate_links(m, field, 8)) {
      auto s = idx.find(family_key(l.source));
      auto t = idx.find(family_key(l.target));
      if (s == idx.end() || t == idx.end()) continue;
      g.edges.push_back(l);
      parent[find(s->second)] = find(t->second);
    }
  }
  std::map<std::size_t, std::vector<std::string>> comp;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) comp[find(i)].push_back(g.nodes[i]);
  for (auto& [root, members] : comp) g.components.push_back(members);
  std::sort(g.components.begin(), g.components.end(), [&](const auto& x, const auto& y) {
    return idx[x.front()] < idx[y.front()];
  });
  return g;
}

}  // namespace sarki
