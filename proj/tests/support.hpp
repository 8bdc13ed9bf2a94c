#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <sarki/links.hpp>
#include <sarki/relations.hpp>
#include <sarki/words.hpp>

namespace fixture {

using namespace sarki;

// ---------------------------------------------------------------------------
// separably closed fields: what the classification allows

using LinkKey = std::tuple<std::string, std::string, std::string, int, int>;  // type, source, target, a, b

inline std::set<LinkKey> expected_point_links(int p) {
  std::set<LinkKey> s = {{"I", "dp:9:l3", "hirz", 1, 0}, {"III", "hirz", "dp:9:l3", 0, 1}, {"IV", "hirz", "hirz", 0, 0}};
  if (p == 2) {
    s.insert({"I", "dp:9:l3", "conic:5", 4, 0});
    s.insert({"III", "conic:5", "dp:9:l3", 0, 4});
    s.insert({"I", "dp:8:l2", "conic:6", 2, 0});
    s.insert({"III", "conic:6", "dp:8:l2", 0, 2});
    s.insert({"II", "dp:9:l3", "dp:8:l2", 2, 1});
    s.insert({"II", "dp:8:l2", "dp:9:l3", 1, 2});
    s.insert({"II", "dp:9:l3", "dp:9:l3", 8, 8});
    s.insert({"II", "dp:8:l2", "dp:8:l2", 4, 4});
  }
  if (p == 3) s.insert({"II", "dp:9:l3", "dp:9:l3", 3, 3});
  if (p == 5) {
    s.insert({"II", "dp:9:l3", "dp:5", 5, 1});
    s.insert({"II", "dp:5", "dp:9:l3", 1, 5});
  }
  if (p == 7) s.insert({"II", "dp:9:l3", "dp:9:l3", 7, 7});
  return s;
}

// Links between rational surfaces other than type II over a curve, from every
// rational family (F_n represented by F0 and F1).
inline std::set<LinkKey> computed_point_links(int p) {
  FieldProfile f = FieldProfile::sep_closed(p);
  std::vector<MinimalModel> src;
  for (const auto& m : rational_minimal_models(f)) {
    src.push_back(m);
    if (m.family == Family::Hirzebruch) src.push_back(hirzebruch(1));
  }
  std::set<LinkKey> s;
  for (const auto& m : src)
    for (const auto& l : enumerate_links(m, f, 16)) {
      if (l.type == LinkType::TypeII_Curve) continue;
      s.insert({link_type_name(l.type), family_key(l.source), family_key(l.target), l.a, l.b});
    }
  return s;
}

// Over-curve links must have p-power degree and live on F_n, or on X5, X6 when p = 2.
inline bool curve_links_ok(int p, std::string* why = nullptr) {
  FieldProfile f = FieldProfile::sep_closed(p);
  for (const auto& m : rational_minimal_models(f)) {
    if (m.over_point()) continue;
    bool allowed = m.family == Family::Hirzebruch || (p == 2 && m.family == Family::ConicBundle);
    for (const auto& l : enumerate_links(m, f, 64)) {
      if (l.type != LinkType::TypeII_Curve) continue;
      if (!allowed || !is_power_of(l.a, p)) {
        if (why) *why = key(m) + " degree " + std::to_string(l.a);
        return false;
      }
    }
    if (m.family == Family::Hirzebruch) {
      int count = 0;
      for (const auto& l : enumerate_links(m, f, 64)) count += l.type == LinkType::TypeII_Curve;
      int expect = 0;
      for (int e = 1; e <= 64; e *= p) ++expect;
      if (count != expect) {
        if (why) *why = "hirz: " + std::to_string(count) + " elementary transformations, expected " + std::to_string(expect);
        return false;
      }
    }
  }
  return true;
}

inline std::set<std::string> expected_rational_pieces(int p) {
  switch (p) {
    case 2: return {"P2_11", "P2_12", "P2_14", "P2_22", "P2_24", "P2_44", "X8_22", "X8_24", "F0_02", "F0_04"};
    case 3: return {"P2_11", "P2_13"};
    case 5: return {"P2_11", "P2_15"};
    case 7: return {"P2_11", "P2_17"};
  }
  return {"P2_11"};
}

inline std::set<std::string> piece_ids(const std::vector<ElementaryRelation>& v) {
  std::set<std::string> s;
  for (const auto& r : v) s.insert(r.id);
  return s;
}

// ---------------------------------------------------------------------------
// random composable words

struct LetterPool {
  std::map<std::string, std::vector<LinkLetter>> out;  // by source key

  void add(const LinkLetter& x) {
    out[x.source_key].push_back(x);
    out[x.target_key].push_back(inverse(x));
  }
};

inline LetterPool make_pool() {
  LetterPool pool;
  FieldProfile f = FieldProfile::arbitrary();
  const int nmax = 6;
  for (int n = 0; n <= nmax; ++n)
    for (int e = 1; e <= 8; ++e) {
      int np = std::abs(n - e);
      if (np <= nmax) pool.out["hirz:" + std::to_string(n)].push_back(classify_letter(type_II_over_curve(hirzebruch(n), e, f)));
      if (n + e <= nmax)
        pool.out["hirz:" + std::to_string(n)].push_back(classify_letter(type_II_over_curve(hirzebruch(n), e, f, n + e)));
    }
  for (const auto& l : enumerate_type_I(p2())) pool.add(classify_letter(l));
  for (const auto& l : enumerate_type_II_point(p2(), f)) {
    if (l.a == 8) {
      pool.out["dp:9:l3"].push_back(classify_letter(l, std::string("b0")));
      pool.out["dp:9:l3"].push_back(classify_letter(l, std::string("b1")));
    } else if (l.target == p2()) {
      pool.out["dp:9:l3"].push_back(classify_letter(l));
    } else {
      pool.add(classify_letter(l));
    }
  }
  for (int k : {5, 6})
    for (int e = 1; e <= 10; ++e)
      for (const char* id : {"M0", "M1"})
        pool.out["conic:" + std::to_string(k)].push_back(classify_letter(type_II_over_curve(conic_bundle(k), e, f), std::string(id)));
  for (const auto& l : enumerate_type_I(quadric())) pool.add(classify_letter(l));
  return pool;
}

template <class Rng>
SarkisovWord random_word(const LetterPool& pool, const std::string& start, std::size_t len, Rng& rng) {
  SarkisovWord w;
  std::string at = start;
  for (std::size_t i = 0; i < len; ++i) {
    const auto& opts = pool.out.at(at);
    std::uniform_int_distribution<std::size_t> pick(0, opts.size() - 1);
    const LinkLetter& x = opts[pick(rng)];
    w.letters.push_back(x);
    at = x.target_key;
  }
  return w;
}

inline std::string end_key(const SarkisovWord& w, const std::string& start) {
  return w.letters.empty() ? start : w.letters.back().target_key;
}

// Every degree counts, so random words carry nontrivial images.
inline bool all_degrees(const std::string&, int, int) { return true; }

inline std::vector<Block> raw_blocks(const SarkisovWord& w, const Membership& in_n) {
  std::vector<Block> v;
  for (const auto& x : w.letters)
    if (auto b = letter_image(x, in_n)) v.push_back(*b);
  return v;
}

// Merge equal neighbours in a random order until none are left.
template <class Rng>
QuotientElement reduce_random_order(std::vector<Block> v, Rng& rng) {
  for (;;) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].gens.empty()) spots.push_back(i);
      else if (i + 1 < v.size() && v[i].factor == v[i + 1].factor) spots.push_back(i);
    }
    if (spots.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, spots.size() - 1);
    std::size_t i = spots[pick(rng)];
    if (v[i].gens.empty()) {
      v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    std::set<int> x;
    std::set_symmetric_difference(v[i].gens.begin(), v[i].gens.end(), v[i + 1].gens.begin(), v[i + 1].gens.end(),
                                  std::inserter(x, x.end()));
    v[i].gens = std::move(x);
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
  return QuotientElement{v};
}

}  // namespace fixture
