#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "links.hpp"
#include "model.hpp"
#include "relations.hpp"

namespace sarki {

struct Silent {
  bool operator==(const Silent&) const = default;
};
struct HirzebruchII {
  int e = 0;
  bool operator==(const HirzebruchII&) const = default;
};
struct ConicII {
  std::string class_id;
  int d = 0;  // K^2 of the bundle, 5 or 6
  int e = 0;
  bool operator==(const ConicII&) const = default;
};
struct Bertini {
  std::string class_id;
  bool operator==(const Bertini&) const = default;
};

using Marker = std::variant<Silent, HirzebruchII, ConicII, Bertini>;

inline const char* marker_name(const Marker& m) {
  static const char* names[] = {"Silent", "HirzebruchII", "ConicII", "Bertini"};
  return names[m.index()];
}

struct LinkLetter {
  LinkDescriptor link;
  Marker marker;
  std::string source_key;
  std::string target_key;
};

inline bool is_conic_class_bundle(const MinimalModel& m) {
  return m.family == Family::ConicBundle && !m.pointless_base && (m.k2 == 5 || m.k2 == 6);
}

inline LinkLetter classify_letter(const LinkDescriptor& l, const std::optional<std::string>& class_id = std::nullopt) {
  LinkLetter out{l, Silent{}, key(l.source), key(l.target)};
  auto need_id = [&](const char* what) {
    if (!class_id || class_id->empty()) throw input_error(std::string(what) + " letter needs a class id");
    return *class_id;
  };
  if (l.type == LinkType::TypeII_Curve) {
    if (l.source.family == Family::Hirzebruch && l.target.family == Family::Hirzebruch)
      out.marker = HirzebruchII{l.a};
    else if (is_conic_class_bundle(l.source) && l.target == l.source)
      out.marker = ConicII{need_id("conic"), l.source.k2, l.a};
  } else if (l.type == LinkType::TypeII_Point && l.source.family == Family::P2 &&
             l.target.family == Family::P2 && l.a == 8 && l.b == 8) {
    out.marker = Bertini{need_id("Bertini")};
  }
  return out;
}

inline LinkLetter inverse(const LinkLetter& x) {
  LinkLetter r = x;
  r.link = reversed(x.link);
  std::swap(r.source_key, r.target_key);
  return r;
}

struct SarkisovWord {
  std::vector<LinkLetter> letters;
};

inline bool compose_check(const SarkisovWord& w) {
  for (std::size_t i = 0; i + 1 < w.letters.size(); ++i)
    if (w.letters[i].target_key != w.letters[i + 1].source_key) return false;
  return true;
}

inline SarkisovWord concat(const SarkisovWord& a, const SarkisovWord& b) {
  SarkisovWord w = a;
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

// w^{-1}: letters reversed and inverted
inline SarkisovWord inverse(const SarkisovWord& w) {
  SarkisovWord r;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(inverse(*it));
  return r;
}

// ---------------------------------------------------------------------------
// the free product

struct Block {
  std::string factor;  // "hirz", "c5:<id>", "c6:<id>", "bertini:<id>"
  std::set<int> gens;
  bool operator==(const Block&) const = default;
};

struct QuotientElement {
  std::vector<Block> blocks;

  bool is_identity() const { return blocks.empty(); }
  bool operator==(const QuotientElement&) const = default;

  // right multiplication by a single block, keeping normal form
  void push(const Block& b) {
    if (b.gens.empty()) return;
    if (!blocks.empty() && blocks.back().factor == b.factor) {
      std::set<int> x;
      std::set_symmetric_difference(blocks.back().gens.begin(), blocks.back().gens.end(), b.gens.begin(),
                                    b.gens.end(), std::inserter(x, x.end()));
      if (x.empty()) blocks.pop_back();
      else blocks.back().gens = std::move(x);
    } else {
      blocks.push_back(b);
    }
  }
};

inline QuotientElement operator*(QuotientElement x, const QuotientElement& y) {
  for (const auto& b : y.blocks) x.push(b);
  return x;
}

// Normal form of an arbitrary block sequence.
inline QuotientElement reduce(const std::vector<Block>& raw) {
  QuotientElement q;
  for (const auto& b : raw) q.push(b);
  return q;
}

// Degrees e that index generators of a factor. Default: e >= d, with d = 8
// for Hirzebruch surfaces and d = K^2 for conic bundles.
using Membership = std::function<bool(const std::string& factor, int d, int e)>;

inline bool default_membership(const std::string&, int d, int e) { return e >= d; }

inline std::optional<Block> letter_image(const LinkLetter& x, const Membership& in_n = default_membership) {
  if (auto* h = std::get_if<HirzebruchII>(&x.marker)) {
    if (!in_n("hirz", 8, h->e)) return std::nullopt;
    return Block{"hirz", {h->e}};
  }
  if (auto* c = std::get_if<ConicII>(&x.marker)) {
    std::string f = "c" + std::to_string(c->d) + ":" + c->class_id;
    if (!in_n(f, c->d, c->e)) return std::nullopt;
    return Block{f, {c->e}};
  }
  if (auto* b = std::get_if<Bertini>(&x.marker)) return Block{"bertini:" + b->class_id, {0}};
  return std::nullopt;
}

inline QuotientElement phi(const SarkisovWord& w, const Membership& in_n = default_membership) {
  if (!compose_check(w)) throw input_error("word is not composable");
  QuotientElement q;
  for (const auto& x : w.letters)
    if (auto b = letter_image(x, in_n)) q.push(*b);
  return q;
}

// ---------------------------------------------------------------------------
// relations as words

struct ClassIds {
  std::vector<std::string> conic;    // one per run of consecutive conic letters
  std::vector<std::string> bertini;  // one per Bertini letter
};

namespace detail {

inline bool conic_letter(const LinkDescriptor& l) {
  return l.type == LinkType::TypeII_Curve && is_conic_class_bundle(l.source);
}

inline bool bertini_letter(const LinkDescriptor& l) {
  return l.type == LinkType::TypeII_Point && l.source.family == Family::P2 && l.target.family == Family::P2 &&
         l.a == 8 && l.b == 8;
}

// run index of each conic letter, cyclically; -1 elsewhere
inline std::vector<int> conic_runs(const std::vector<LinkDescriptor>& links, int& count) {
  const std::size_t n = links.size();
  std::vector<int> run(n, -1);
  count = 0;
  if (n == 0) return run;
  std::size_t start = 0;
  while (start < n && conic_letter(links[start])) ++start;
  if (start == n) {  // every letter is a conic letter
    std::fill(run.begin(), run.end(), 0);
    count = 1;
    return run;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t i = (start + k) % n;
    if (!conic_letter(links[i])) continue;
    std::size_t prev = (i + n - 1) % n;
    run[i] = conic_letter(links[prev]) && run[prev] >= 0 ? run[prev] : count++;
  }
  return run;
}

}  // namespace detail

inline ClassIds default_class_ids(const ElementaryRelation& rel) {
  auto links = relation_links(rel);
  int runs = 0;
  detail::conic_runs(links, runs);
  ClassIds ids;
  for (int i = 0; i < runs; ++i) ids.conic.push_back("M" + std::to_string(i));
  for (const auto& l : links)
    if (detail::bertini_letter(l)) ids.bertini.push_back("b0");
  return ids;
}

inline SarkisovWord relation_to_word(const ElementaryRelation& rel, const ClassIds& ids) {
  auto links = relation_links(rel);
  int runs = 0;
  auto run = detail::conic_runs(links, runs);
  if (static_cast<int>(ids.conic.size()) < runs)
    throw input_error("relation has " + std::to_string(runs) + " conic classes, " + std::to_string(ids.conic.size()) +
                      " ids given");
  SarkisovWord w;
  std::size_t nb = 0;
  std::map<std::string, int> bertini_count;
  for (std::size_t i = 0; i < links.size(); ++i) {
    std::optional<std::string> id;
    if (run[i] >= 0) id = ids.conic[run[i]];
    if (detail::bertini_letter(links[i])) {
      if (nb >= ids.bertini.size()) throw input_error("missing class id for a Bertini letter");
      id = ids.bertini[nb++];
      ++bertini_count[*id];
    }
    w.letters.push_back(classify_letter(links[i], id));
  }
  for (const auto& [id, c] : bertini_count)
    if (c % 2 != 0) throw input_error("Bertini class " + id + " occurs an odd number of times around the relation");
  if (!w.letters.empty() && w.letters.back().target_key != w.letters.front().source_key)
    throw consistency_error("relation word does not close");
  return w;
}

}  // namespace sarki
