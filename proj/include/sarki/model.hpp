#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"

namespace sarki {

enum class Closure { Arbitrary, Perfect, SeparablyClosed, AlgebraicallyClosed };

struct FieldProfile {
  Closure closure = Closure::Arbitrary;
  int p = 0;  // 0: characteristic zero, or unspecified for Arbitrary/Perfect

  bool operator==(const FieldProfile&) const = default;

  // degrees of closed points are all 1
  bool only_rational_points() const {
    return closure == Closure::AlgebraicallyClosed ||
           (closure == Closure::SeparablyClosed && p == 0);
  }
  bool p_power_degrees() const { return closure == Closure::SeparablyClosed && p > 0; }

  static FieldProfile arbitrary() { return {}; }
  static FieldProfile sep_closed(int p) { return {Closure::SeparablyClosed, p}; }
};

enum class Family { P2, SeveriBrauer, Quadric, DP8NonQuadric, DelPezzo, ConicBundle, Hirzebruch };
enum class GeomClass { Smooth, GeomCanonical, GeomNonNormal };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::P2: return "P2";
    case Family::SeveriBrauer: return "SeveriBrauer";
    case Family::Quadric: return "Quadric";
    case Family::DP8NonQuadric: return "DP8NonQuadric";
    case Family::DelPezzo: return "DelPezzo";
    case Family::ConicBundle: return "ConicBundle";
    case Family::Hirzebruch: return "Hirzebruch";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view s) {
  for (Family f : {Family::P2, Family::SeveriBrauer, Family::Quadric, Family::DP8NonQuadric,
                   Family::DelPezzo, Family::ConicBundle, Family::Hirzebruch})
    if (s == family_name(f)) return f;
  return std::nullopt;
}

inline const char* geom_name(GeomClass g) {
  switch (g) {
    case GeomClass::Smooth: return "Smooth";
    case GeomClass::GeomCanonical: return "GeomCanonical";
    case GeomClass::GeomNonNormal: return "GeomNonNormal";
  }
  return "?";
}

struct MinimalModel {
  Family family = Family::P2;
  int k2 = 9;
  int lambda = 3;  // -K = lambda H; 0 for fibred models
  int h2 = 1;      // H^2; 0 for fibred models
  int n = 0;       // Hirzebruch index
  bool pointless_base = false;  // conic bundle over a conic without rational points
  GeomClass geom = GeomClass::Smooth;
  std::string singularity;  // geometric singularity note, e.g. "A1"

  bool operator==(const MinimalModel& o) const {
    return family == o.family && k2 == o.k2 && lambda == o.lambda && n == o.n &&
           pointless_base == o.pointless_base && geom == o.geom;
  }

  bool over_point() const { return family != Family::ConicBundle && family != Family::Hirzebruch; }
  int rho() const { return over_point() ? 1 : 2; }
  // delta of a fibre over a closed point of minimal degree on the base
  int base_degree() const { return pointless_base ? 2 : 1; }
};

// Factories for the closed-world catalogue.
inline MinimalModel p2() { return {Family::P2, 9, 3, 1}; }
inline MinimalModel severi_brauer() { return {Family::SeveriBrauer, 9, 1, 9}; }
inline MinimalModel quadric() { return {Family::Quadric, 8, 2, 2, 0, false, GeomClass::GeomCanonical}; }
inline MinimalModel dp8_nonquadric() {
  return {Family::DP8NonQuadric, 8, 1, 8, 0, false, GeomClass::GeomCanonical};
}
inline MinimalModel del_pezzo(int k2, GeomClass g = GeomClass::GeomCanonical) {
  if (k2 < 1 || k2 > 6) throw input_error("del Pezzo family of degree " + std::to_string(k2) + " is not a λ=1 family");
  return {Family::DelPezzo, k2, 1, k2, 0, false, g};
}
inline MinimalModel hirzebruch(int n) {
  if (n < 0) throw input_error("Hirzebruch index must be >= 0");
  return {Family::Hirzebruch, 8, 0, 0, n};
}
inline MinimalModel conic_bundle(int k2, bool pointless = false) {
  if (k2 < 1 || k2 > 6) throw input_error("conic bundle of degree " + std::to_string(k2) + " is not in the catalogue");
  if (pointless && k2 != 6) throw input_error("pointless-base conic bundles are catalogued only for K^2 = 6");
  return {Family::ConicBundle, k2, 0, 0, 0, pointless, GeomClass::GeomCanonical};
}

// Point del Pezzo family from (K^2, lambda).
inline MinimalModel dp_from_invariants(int k2, int lambda) {
  if (k2 == 9 && lambda == 3) return p2();
  if (k2 == 9 && lambda == 1) return severi_brauer();
  if (k2 == 8 && lambda == 2) return quadric();
  if (k2 == 8 && lambda == 1) return dp8_nonquadric();
  if (lambda == 1 && k2 >= 1 && k2 <= 6) return del_pezzo(k2);
  throw input_error("no del Pezzo family with K^2=" + std::to_string(k2) + ", lambda=" + std::to_string(lambda));
}

inline bool is_rational_family(const MinimalModel& m) {
  switch (m.family) {
    case Family::P2:
    case Family::Quadric:
    case Family::Hirzebruch: return true;
    case Family::DelPezzo: return m.geom != GeomClass::GeomNonNormal && (m.k2 == 5 || m.k2 == 6);
    case Family::ConicBundle: return !m.pointless_base && (m.k2 == 5 || m.k2 == 6);
    default: return false;
  }
}

// Canonical spec string; also the fine key used for words.
inline std::string key(const MinimalModel& m) {
  switch (m.family) {
    case Family::P2: return "dp:9:l3";
    case Family::SeveriBrauer: return "dp:9:l1";
    case Family::Quadric: return "dp:8:l2";
    case Family::DP8NonQuadric: return "dp:8:l1";
    case Family::DelPezzo:
      return "dp:" + std::to_string(m.k2) + (m.geom == GeomClass::GeomNonNormal ? ":nonnormal" : "");
    case Family::Hirzebruch: return "hirz:" + std::to_string(m.n);
    case Family::ConicBundle: return "conic:" + std::to_string(m.k2) + (m.pointless_base ? ":pointless" : "");
  }
  return "?";
}

// Family-level key: all F_n merged, non-normal forms merged with their degree.
inline std::string family_key(const MinimalModel& m) {
  if (m.family == Family::Hirzebruch) return "hirz";
  if (m.family == Family::DelPezzo) return "dp:" + std::to_string(m.k2);
  return key(m);
}

// Short label as printed on relation diagrams.
inline std::string label(const MinimalModel& m) {
  switch (m.family) {
    case Family::P2: return "P2";
    case Family::SeveriBrauer: return "X9";
    case Family::Quadric:
    case Family::DP8NonQuadric: return "X8";
    case Family::DelPezzo: return "X" + std::to_string(m.k2);
    case Family::Hirzebruch: return "F" + std::to_string(m.n) + "/P1";
    case Family::ConicBundle: return "X" + std::to_string(m.k2) + (m.pointless_base ? "/B" : "/P1");
  }
  return "?";
}

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline std::optional<int> to_int(std::string_view s) {
  int v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// dp:<K2>[:l<lambda>][:nonquadric|:sb|:nonnormal] | hirz:<n> | conic:<K2>[:pointless]
inline MinimalModel parse_surface(std::string_view spec) {
  auto bad = [&](const std::string& why) {
    return input_error("bad surface spec '" + std::string(spec) + "': " + why);
  };
  auto parts = detail::split(spec, ':');
  if (parts.size() < 2) throw bad("expected dp:<K2>, hirz:<n> or conic:<K2>");
  auto num = detail::to_int(parts[1]);
  if (!num) throw bad("expected an integer after '" + std::string(parts[0]) + ":'");

  if (parts[0] == "hirz") {
    if (parts.size() != 2) throw bad("hirz takes no modifiers");
    if (*num < 0) throw bad("n must be >= 0");
    return hirzebruch(*num);
  }
  if (parts[0] == "conic") {
    if (parts.size() > 3 || (parts.size() == 3 && parts[2] != "pointless")) throw bad("unknown modifier");
    if (*num == 8) throw bad("conic bundles of degree 8 are Hirzebruch surfaces, use hirz:<n>");
    if (*num == 7) throw bad("there is no Mori conic bundle of degree 7");
    if (*num < 1 || *num > 6) throw bad("K^2 must lie in 1..6");
    bool pointless = parts.size() == 3;
    if (pointless && *num != 6) throw bad("pointless base is only catalogued for K^2 = 6");
    return conic_bundle(*num, pointless);
  }
  if (parts[0] != "dp") throw bad("unknown surface kind '" + std::string(parts[0]) + "'");

  int k2 = *num;
  if (k2 < 1 || k2 > 9) throw bad("K^2 must lie in 1..9");
  if (k2 == 7) throw bad("no del Pezzo surface of degree 7 has Picard rank 1");
  std::optional<int> lambda;
  std::string tag;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    auto p = parts[i];
    if (!p.empty() && p[0] == 'l') {
      auto l = detail::to_int(p.substr(1));
      if (!l || lambda) throw bad("bad lambda modifier");
      lambda = *l;
    } else if (p == "nonquadric" || p == "sb" || p == "nonnormal") {
      if (!tag.empty()) throw bad("at most one family modifier");
      tag = std::string(p);
    } else {
      throw bad("unknown modifier '" + std::string(p) + "'");
    }
  }

  if (tag == "nonnormal") {
    if (lambda && *lambda != 1) throw bad("non-normal forms have lambda = 1");
    if (k2 > 4) throw bad("geometrically non-normal del Pezzo surfaces of Picard rank 1 have K^2 <= 4");
    return del_pezzo(k2, GeomClass::GeomNonNormal);
  }
  if (k2 == 9) {
    if (tag == "nonquadric") throw bad("nonquadric applies to K^2 = 8");
    int l = lambda.value_or(tag == "sb" ? 1 : 3);
    if (tag == "sb" && l != 1) throw bad("Severi-Brauer surfaces have lambda = 1");
    if (l == 3) return p2();
    if (l == 1) return severi_brauer();
    throw bad("K^2 = 9 admits lambda 3 or 1");
  }
  if (k2 == 8) {
    if (tag == "sb") throw bad("sb applies to K^2 = 9");
    int l = lambda.value_or(tag == "nonquadric" ? 1 : 2);
    if (tag == "nonquadric" && l != 1) throw bad("non-quadric dP8 has lambda = 1");
    if (l == 2) return quadric();
    if (l == 1) return dp8_nonquadric();
    throw bad("K^2 = 8 admits lambda 2 or 1");
  }
  if (!tag.empty()) throw bad("modifier '" + tag + "' does not apply to K^2 = " + std::to_string(k2));
  if (lambda && *lambda != 1) throw bad("K^2 <= 6 forces lambda = 1");
  return del_pezzo(k2);
}

// arbitrary | perfect[:p] | sep-closed:<p> | alg-closed:<p>
inline FieldProfile parse_field(std::string_view spec) {
  auto bad = [&](const std::string& why) {
    return input_error("bad field spec '" + std::string(spec) + "': " + why);
  };
  auto parts = detail::split(spec, ':');
  FieldProfile f;
  if (parts[0] == "arbitrary") {
    if (parts.size() != 1) throw bad("arbitrary takes no characteristic");
    return f;
  }
  if (parts[0] == "perfect") f.closure = Closure::Perfect;
  else if (parts[0] == "sep-closed") f.closure = Closure::SeparablyClosed;
  else if (parts[0] == "alg-closed") f.closure = Closure::AlgebraicallyClosed;
  else throw bad("unknown field kind");
  if (parts.size() > 2) throw bad("too many components");
  if (parts.size() == 1) {
    if (f.closure != Closure::Perfect) throw bad("characteristic required");
    return f;
  }
  auto p = detail::to_int(parts[1]);
  if (!p || *p < 0 || (*p != 0 && !is_prime(*p))) throw bad("characteristic must be 0 or prime");
  f.p = *p;
  return f;
}

inline std::string field_string(const FieldProfile& f) {
  switch (f.closure) {
    case Closure::Arbitrary: return "arbitrary";
    case Closure::Perfect: return f.p ? "perfect:" + std::to_string(f.p) : "perfect";
    case Closure::SeparablyClosed: return "sep-closed:" + std::to_string(f.p);
    case Closure::AlgebraicallyClosed: return "alg-closed:" + std::to_string(f.p);
  }
  return "?";
}

}  // namespace sarki
