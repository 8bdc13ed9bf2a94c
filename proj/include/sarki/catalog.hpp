#pragma once

#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace sarki {

struct DegreePredicate {
  MinimalModel model;
  FieldProfile field;

  bool operator()(i64 e) const {
    if (e < 1) return false;
    if (field.only_rational_points() && e != 1) return false;
    if (field.p_power_degrees() && !is_power_of(e, field.p)) return false;
    if (model.family == Family::SeveriBrauer && e % 3 != 0) return false;
    if (model.family == Family::DP8NonQuadric && e % 2 != 0) return false;
    if (model.family == Family::ConicBundle && model.pointless_base && e % 2 != 0) return false;
    return true;
  }
};

inline DegreePredicate allowed_point_degrees(const MinimalModel& m, const FieldProfile& f) { return {m, f}; }

// Rows of the base-change table for geometrically non-normal del Pezzo surfaces.
struct NonNormalRow {
  std::string y;
  std::string c;
  int pullback_k2;
  int rho_sep;
  bool operator==(const NonNormalRow&) const = default;
};

inline std::vector<NonNormalRow> non_normal_dp_table(int p) {
  if (!is_prime(p)) throw input_error("characteristic " + std::to_string(p) + " is not prime");
  if (p == 3) return {{"P2", "H", 1, 1}, {"P(1,1,3)", "H", 3, 1}};
  if (p == 2)
    return {{"P2", "H", 4, 1},        {"P2", "2H", 1, 1},        {"P(1,1,2)", "2H", 2, 1},
            {"P(1,1,4)", "2H", 4, 1}, {"P1xP1", "F", 4, 2},      {"P1xP1", "F+G", 2, 2},
            {"F1", "S1", 5, 2},       {"F1", "S1+F", 3, 2},      {"F2", "S2", 6, 2},
            {"F2", "S2+F", 4, 2},     {"F4", "S4", 8, 2},        {"F4", "S4+F", 6, 2}};
  return {};
}

// Degrees of geometrically integral, non-normal del Pezzo surfaces of Picard rank 1.
inline bool nonnormal_rank_one_degree(int p, int k2) {
  if (p == 3) return k2 == 1 || k2 == 3;
  if (p == 2) return k2 == 1 || k2 == 2 || k2 == 4;
  return false;
}

inline bool exists_over(const MinimalModel& m, const FieldProfile& f) {
  if (m.geom == GeomClass::GeomNonNormal) {
    if (f.closure == Closure::Perfect || f.closure == Closure::AlgebraicallyClosed) return false;
    if (f.p == 0) return f.closure == Closure::Arbitrary && (m.k2 <= 4);
    return nonnormal_rank_one_degree(f.p, m.k2);
  }
  if (f.only_rational_points()) return m.family == Family::P2 || m.family == Family::Hirzebruch;
  if (f.closure != Closure::SeparablyClosed) return true;
  switch (m.family) {
    case Family::P2:
    case Family::Hirzebruch: return true;
    case Family::SeveriBrauer: return false;
    case Family::Quadric:
    case Family::DP8NonQuadric: return f.p == 2;
    case Family::DelPezzo:
      if (m.k2 == 6) return false;
      if (m.k2 == 5) return f.p == 5;
      return true;
    case Family::ConicBundle:
      if (m.k2 == 5 || m.k2 == 6) return f.p == 2;
      return true;
  }
  return false;
}

// The rational Mori fibre spaces; F_n is one family entry (n = 0 representative).
inline std::vector<MinimalModel> rational_minimal_models(const FieldProfile& f) {
  std::vector<MinimalModel> all = {p2(),           quadric(),       del_pezzo(6),   del_pezzo(5),
                                   hirzebruch(0), conic_bundle(5), conic_bundle(6)};
  std::vector<MinimalModel> out;
  for (auto m : all) {
    if (!exists_over(m, f)) continue;
    if (f.closure == Closure::SeparablyClosed) {
      // over a separably closed field a rank-one dP other than P2 is singular geometrically
      if (m.family == Family::Quadric) m.singularity = "A1";
      if (m.family == Family::DelPezzo && m.k2 == 5) m.singularity = "A4";
    }
    out.push_back(m);
  }
  return out;
}

// Every family the catalogue knows, rational ones first.
inline std::vector<MinimalModel> all_families(bool include_nonrational) {
  std::vector<MinimalModel> out = rational_minimal_models(FieldProfile::arbitrary());
  if (!include_nonrational) return out;
  out.push_back(severi_brauer());
  out.push_back(dp8_nonquadric());
  for (int d = 4; d >= 1; --d) out.push_back(del_pezzo(d));
  out.push_back(conic_bundle(6, true));
  for (int d = 4; d >= 1; --d) out.push_back(conic_bundle(d));
  return out;
}

inline bool is_super_rigid(const MinimalModel& m) {
  if (!m.over_point()) throw input_error("rigidity is decided here only for del Pezzo surfaces of Picard rank 1");
  return m.geom == GeomClass::GeomNonNormal;
}

// Index constraint recorded in the catalogue file.
inline int degree_divisor(const MinimalModel& m) {
  if (m.family == Family::SeveriBrauer) return 3;
  if (m.family == Family::DP8NonQuadric) return 2;
  if (m.family == Family::ConicBundle && m.pointless_base) return 2;
  return 1;
}

enum class Existence { Constructed, NumericOnly };

inline const char* existence_name(Existence e) { return e == Existence::Constructed ? "Constructed" : "NumericOnly"; }

}  // namespace sarki
