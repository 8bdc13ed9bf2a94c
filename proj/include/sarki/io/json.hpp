#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../catalog.hpp"
#include "../errors.hpp"
#include "../lattice.hpp"
#include "../links.hpp"
#include "../model.hpp"
#include "../relations.hpp"
#include "../words.hpp"

namespace sarki::io {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// models

inline ojson model_json(const MinimalModel& m) {
  ojson j;
  j["family"] = family_name(m.family);
  j["k2"] = m.k2;
  if (m.family == Family::Hirzebruch) j["n"] = m.n;
  else if (m.over_point()) j["lambda"] = m.lambda;
  if (m.pointless_base) j["pointless"] = true;
  if (m.geom == GeomClass::GeomNonNormal) j["geometric_class"] = geom_name(m.geom);
  return j;
}

inline MinimalModel model_from_json(const json& j) {
  try {
    auto fam = family_from_name(j.at("family").get<std::string>());
    if (!fam) throw data_error("unknown family '" + j.at("family").get<std::string>() + "'");
    int k2 = j.at("k2").get<int>();
    switch (*fam) {
      case Family::Hirzebruch: return hirzebruch(j.value("n", 0));
      case Family::ConicBundle: return conic_bundle(k2, j.value("pointless", false));
      case Family::DelPezzo:
        return del_pezzo(k2, j.value("geometric_class", std::string()) == "GeomNonNormal" ? GeomClass::GeomNonNormal
                                                                                          : GeomClass::GeomCanonical);
      default: return dp_from_invariants(k2, j.at("lambda").get<int>());
    }
  } catch (const json::exception& e) {
    throw data_error(std::string("malformed surface record: ") + e.what());
  } catch (const input_error& e) {
    throw data_error(std::string("bad surface record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// links

inline ojson link_json(const LinkDescriptor& l) {
  ojson j;
  j["type"] = link_type_name(l.type);
  j["a"] = l.a;
  j["b"] = l.b;
  j["d"] = l.d;
  j["m"] = l.m;
  j["target_k2"] = l.target_k2();
  j["target"] = key(l.target);
  if (l.type == LinkType::TypeI || l.type == LinkType::TypeIII || l.type == LinkType::TypeII_Curve)
    j["delta"] = l.delta;
  if (l.hirzebruch_shift) j["hirzebruch_shift"] = {l.hirzebruch_shift->first, l.hirzebruch_shift->second};
  if (l.type == LinkType::TypeIV) {
    if (auto r = type_IV_analysis(1, 1, 8 / l.source.k2); r && !r->kind.empty()) j["kind"] = r->kind;
  }
  j["existence"] = existence_name(l.existence);
  return j;
}

inline ojson links_document(const MinimalModel& source, const std::vector<LinkDescriptor>& links) {
  ojson j;
  j["surface"] = model_json(source);
  j["links"] = ojson::array();
  for (const auto& l : links) j["links"].push_back(link_json(l));
  return j;
}

// ---------------------------------------------------------------------------
// relations

inline ojson relation_json(const ElementaryRelation& rel) {
  const MarkedLattice& L = rel.lattice();
  ojson j;
  if (!rel.id.empty()) j["id"] = rel.id;
  j["basis"] = L.names();
  ojson c;
  c["label"] = rel.center_label;
  c["k2"] = rel.center_k2;
  c["origin"] = model_json(rel.fibration.origin);
  c["degrees"] = rel.fibration.degrees;
  if (rel.fibration.base == BaseKind::Curve) c["base"] = "curve";
  j["center"] = c;
  j["corners"] = rel.corners;
  j["sides"] = rel.sides;
  j["edges"] = ojson::array();
  for (const auto& e : rel.edges)
    j["edges"].push_back({{"kind", element_kind_name(e.kind)}, {"class", e.cls}, {"degree", e.degree}});
  return j;
}

inline ElementaryRelation relation_from_json(const json& j) {
  try {
    ElementaryRelation rel;
    rel.id = j.value("id", std::string());
    const json& c = j.at("center");
    MinimalModel origin = model_from_json(c.at("origin"));
    auto deg = c.at("degrees").get<std::vector<int>>();
    if (deg.size() != 2) throw data_error("degrees must have two entries");
    if (c.value("base", std::string("point")) == "curve") {
      rel.fibration = relation_over_curve(origin, deg[0] / origin.base_degree(), deg[1] / origin.base_degree()).fibration;
    } else {
      rel.fibration = rank_three_fibration(origin, deg[0], deg[1], false);
    }
    const MarkedLattice& L = rel.lattice();
    if (j.contains("basis") && j.at("basis").get<std::vector<std::string>>() != L.names())
      throw data_error("basis does not match the lattice of the origin");
    rel.center_label = c.at("label").get<std::string>();
    rel.center_k2 = c.at("k2").get<int>();
    rel.corners = j.at("corners").get<std::vector<std::string>>();
    rel.sides = j.at("sides").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
      Element el;
      std::string kind = e.at("kind").get<std::string>();
      if (kind == "contraction") el.kind = ElementKind::Contraction;
      else if (kind == "fibration") el.kind = ElementKind::Fibration;
      else throw data_error("unknown edge kind '" + kind + "'");
      el.cls = e.at("class").get<Vec>();
      if (el.cls.size() != L.rank()) throw data_error("edge class has the wrong length");
      el.degree = e.at("degree").get<int>();
      rel.edges.push_back(std::move(el));
    }
    if (rel.corners.size() != rel.edges.size() || rel.sides.size() != rel.edges.size())
      throw data_error("corners, sides and edges differ in length");
    return rel;
  } catch (const json::exception& e) {
    throw data_error(std::string("malformed relation: ") + e.what());
  } catch (const input_error& e) {
    throw data_error(std::string("bad relation: ") + e.what());
  } catch (const constraint_error& e) {
    throw data_error(std::string("bad relation: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// words

inline ojson marker_json(const Marker& m) {
  ojson j;
  j["kind"] = marker_name(m);
  if (auto* h = std::get_if<HirzebruchII>(&m)) j["e"] = h->e;
  if (auto* c = std::get_if<ConicII>(&m)) {
    j["class"] = c->class_id;
    j["d"] = c->d;
    j["e"] = c->e;
  }
  if (auto* b = std::get_if<Bertini>(&m)) j["class"] = b->class_id;
  return j;
}

inline ojson letter_json(const LinkLetter& x) {
  return {{"type", link_type_name(x.link.type)},
          {"source", x.source_key},
          {"target", x.target_key},
          {"a", x.link.a},
          {"b", x.link.b},
          {"marker", marker_json(x.marker)}};
}

inline ojson word_json(const SarkisovWord& w) {
  ojson j = ojson::array();
  for (const auto& x : w.letters) j.push_back(letter_json(x));
  return j;
}

inline LinkType link_type_from_name(const std::string& s) {
  for (LinkType t : {LinkType::TypeI, LinkType::TypeII_Point, LinkType::TypeII_Curve, LinkType::TypeIII,
                     LinkType::TypeIV})
    if (s == link_type_name(t)) return t;
  throw input_error("unknown link type '" + s + "'");
}

// The link a letter names, looked up in the enumerations so d, m are filled.
inline LinkDescriptor resolve_letter(LinkType type, const MinimalModel& src, const MinimalModel& tgt, int a, int b) {
  auto where = [&] {
    return std::string(link_type_name(type)) + " link " + key(src) + " -> " + key(tgt) + " (" + std::to_string(a) +
           ", " + std::to_string(b) + ")";
  };
  if (type == LinkType::TypeII_Curve && src.family == Family::Hirzebruch) {
    if (tgt.family != Family::Hirzebruch || a < 1 || b != a) throw input_error("no " + where());
    try {
      return type_II_over_curve(src, a, FieldProfile::arbitrary(), tgt.n);
    } catch (const constraint_error& e) {
      throw input_error("no " + where() + ": " + e.what());
    }
  }
  int reach = std::max({8, a, b});
  for (const auto& l : enumerate_links(src, FieldProfile::arbitrary(), reach)) {
    if (l.type != type || !(l.target == tgt)) continue;
    if (type == LinkType::TypeIV || (l.a == a && l.b == b)) return l;
  }
  throw input_error("no " + where());
}

// Letters are re-classified; a marker given in the file must agree.
inline LinkLetter letter_from_json(const json& j) {
  try {
    LinkType type = link_type_from_name(j.at("type").get<std::string>());
    LinkDescriptor l = resolve_letter(type, parse_surface(j.at("source").get<std::string>()),
                                      parse_surface(j.at("target").get<std::string>()), j.value("a", 0), j.value("b", 0));
    std::optional<std::string> id;
    if (j.contains("class")) id = j.at("class").get<std::string>();
    if (j.contains("marker") && j.at("marker").contains("class")) id = j.at("marker").at("class").get<std::string>();
    LinkLetter x = classify_letter(l, id);
    if (j.contains("marker")) {
      std::string kind = j.at("marker").at("kind").get<std::string>();
      if (kind != marker_name(x.marker))
        throw input_error("marker '" + kind + "' does not fit the " + link_type_name(l.type) + " link from " +
                          x.source_key + " to " + x.target_key);
    }
    return x;
  } catch (const json::exception& e) {
    throw input_error(std::string("malformed letter: ") + e.what());
  }
}

inline SarkisovWord word_from_json(const json& j) {
  if (j.is_object() && !j.contains("letters")) throw input_error("a word object needs a \"letters\" array");
  const json& arr = j.is_object() ? j.at("letters") : j;
  if (!arr.is_array()) throw input_error("a word is an array of letters");
  SarkisovWord w;
  for (const auto& x : arr) w.letters.push_back(letter_from_json(x));
  return w;
}

inline ojson quotient_json(const QuotientElement& q) {
  ojson j = ojson::array();
  for (const auto& b : q.blocks) j.push_back(ojson::array({b.factor, std::vector<int>(b.gens.begin(), b.gens.end())}));
  return j;
}

// ---------------------------------------------------------------------------
// files

inline json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw data_error("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw data_error(p.string() + ": " + e.what());
  }
}

inline std::vector<ElementaryRelation> load_pieces(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw data_error("missing directory " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<ElementaryRelation> out;
  for (const auto& f : files) {
    ElementaryRelation r = relation_from_json(read_json_file(f));
    if (r.id.empty()) r.id = f.stem().string();
    out.push_back(std::move(r));
  }
  return out;
}

struct LinkIIRow {
  MinimalModel source;
  int a, b;
  i64 d, m;
  int target_k2;
};

inline std::vector<LinkIIRow> load_table_linkII(const std::filesystem::path& file) {
  json j = read_json_file(file);
  std::vector<LinkIIRow> out;
  try {
    for (const auto& blk : j.at("blocks")) {
      MinimalModel s = model_from_json(blk.at("surface"));
      for (const auto& r : blk.at("rows"))
        out.push_back({s, r.at("a").get<int>(), r.at("b").get<int>(), r.at("d").get<i64>(), r.at("m").get<i64>(),
                       r.at("target_k2").get<int>()});
    }
  } catch (const json::exception& e) {
    throw data_error(file.string() + ": " + e.what());
  }
  return out;
}

struct LinkIRow {
  MinimalModel source;
  int a;
  i64 d, m;
  int delta;
  std::string target;
};

inline std::vector<LinkIRow> load_table_linkI(const std::filesystem::path& file) {
  json j = read_json_file(file);
  std::vector<LinkIRow> out;
  try {
    for (const auto& r : j.at("rows"))
      out.push_back({model_from_json(r.at("surface")), r.at("a").get<int>(), r.at("d").get<i64>(),
                     r.at("m").get<i64>(), r.at("delta").get<int>(), r.at("target").get<std::string>()});
  } catch (const json::exception& e) {
    throw data_error(file.string() + ": " + e.what());
  }
  return out;
}

struct CatalogRecord {
  std::string key;
  std::string family;
  int k2, lambda, h2, degree_divisor;
  std::string geometric_class;
  bool operator==(const CatalogRecord&) const = default;
};

inline CatalogRecord catalog_record(const MinimalModel& m) {
  return {key(m), family_name(m.family), m.k2, m.lambda, m.h2, degree_divisor(m), geom_name(m.geom)};
}

// The catalogue as the library knows it, in file order.
inline std::vector<CatalogRecord> builtin_catalog() {
  std::vector<MinimalModel> ms = {p2(), severi_brauer(), quadric(), dp8_nonquadric()};
  for (int k = 6; k >= 1; --k) ms.push_back(del_pezzo(k));
  for (int k = 4; k >= 1; --k) ms.push_back(del_pezzo(k, GeomClass::GeomNonNormal));
  for (int k = 6; k >= 1; --k) ms.push_back(conic_bundle(k));
  ms.push_back(conic_bundle(6, true));
  ms.push_back(hirzebruch(0));
  std::vector<CatalogRecord> out;
  for (const auto& m : ms) out.push_back(catalog_record(m));
  return out;
}

inline ojson catalog_json() {
  ojson j;
  j["version"] = 1;
  j["families"] = ojson::array();
  for (const auto& r : builtin_catalog())
    j["families"].push_back({{"key", r.key},
                             {"family", r.family},
                             {"k2", r.k2},
                             {"lambda", r.lambda},
                             {"h2", r.h2},
                             {"degree_divisor", r.degree_divisor},
                             {"geometric_class", r.geometric_class}});
  return j;
}

inline std::vector<CatalogRecord> load_catalog(const std::filesystem::path& file) {
  json j = read_json_file(file);
  std::vector<CatalogRecord> out;
  try {
    if (j.at("version").get<int>() != 1) throw data_error(file.string() + ": unsupported catalogue version");
    for (const auto& r : j.at("families"))
      out.push_back({r.at("key").get<std::string>(), r.at("family").get<std::string>(), r.at("k2").get<int>(),
                     r.at("lambda").get<int>(), r.at("h2").get<int>(), r.at("degree_divisor").get<int>(),
                     r.at("geometric_class").get<std::string>()});
  } catch (const json::exception& e) {
    throw data_error(file.string() + ": " + e.what());
  }
  return out;
}

}  // namespace sarki::io
