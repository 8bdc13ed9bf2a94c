#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "catalog.hpp"
#include "errors.hpp"
#include "io/json.hpp"
#include "links.hpp"
#include "model.hpp"
#include "relations.hpp"
#include "words.hpp"

#ifndef SARKI_DEFAULT_DATA_DIR
#define SARKI_DEFAULT_DATA_DIR "data"
#endif

namespace sarki::cli {

enum Exit { Ok = 0, Mismatch = 1, UserInput = 2, Environment = 3 };

struct CliConfig {
  std::string field = "arbitrary";
  std::string format = "table";
  std::string out;
  int bound = 0;  // 0: command default
  bool strict = true;
};

inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SARKI_DATA_DIR"); env && *env) return env;
  return SARKI_DEFAULT_DATA_DIR;
}

namespace detail {

inline void check_format(const std::string& f, std::initializer_list<const char*> ok, const char* cmd) {
  for (const char* x : ok)
    if (f == x) return;
  throw input_error("format '" + f + "' is not available for " + cmd);
}

inline std::vector<int> parse_pair(const std::string& s, const char* what) {
  auto parts = sarki::detail::split(s, ',');
  if (parts.size() != 2) throw input_error(std::string(what) + " take two comma-separated integers, got '" + s + "'");
  std::vector<int> v;
  for (auto p : parts) {
    auto x = sarki::detail::to_int(p);
    if (!x) throw input_error(std::string("bad integer in ") + what + ": '" + std::string(p) + "'");
    v.push_back(*x);
  }
  return v;
}

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

inline std::string eprime(const LinkDescriptor& l) {
  if (l.type != LinkType::TypeII_Point && l.type != LinkType::TypeI && l.type != LinkType::TypeIII) return "-";
  MarkedLattice L = MarkedLattice::of(l.type == LinkType::TypeIII ? l.target : l.source).blow_up(1, false);
  return L.format({l.d, -l.m});
}

inline std::string links_table(const MinimalModel& m, const std::vector<LinkDescriptor>& links) {
  std::ostringstream os;
  os << key(m) << " (" << label(m) << ", K^2=" << m.k2 << ")\n";
  os << pad("type", 10) << pad("a", 4) << pad("b", 4) << pad("E'", 12) << pad("K^2'", 6) << pad("target", 20)
     << "existence\n";
  for (const auto& l : links)
    os << pad(link_type_name(l.type), 10) << pad(std::to_string(l.a), 4) << pad(std::to_string(l.b), 4)
       << pad(eprime(l), 12) << pad(std::to_string(l.target_k2()), 6) << pad(key(l.target), 20)
       << existence_name(l.existence) << "\n";
  return os.str();
}

inline std::string links_csv(const std::vector<LinkDescriptor>& links) {
  std::ostringstream os;
  os << "type,a,b,d,m,target_k2,target,delta,existence\n";
  for (const auto& l : links)
    os << link_type_name(l.type) << ',' << l.a << ',' << l.b << ',' << l.d << ',' << l.m << ',' << l.target_k2()
       << ',' << key(l.target) << ',' << l.delta << ',' << existence_name(l.existence) << "\n";
  return os.str();
}

inline std::string relation_table(const ElementaryRelation& rel) {
  const MarkedLattice& L = rel.lattice();
  std::ostringstream os;
  os << "center " << rel.center_label << " (K^2=" << rel.center_k2 << "), " << rel.size() << " links\n";
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const Element& e = rel.edges[i];
    os << "  " << pad(element_kind_name(e.kind), 12) << pad(L.format(e.cls), 18) << pad(std::to_string(e.degree), 4)
       << pad(rel.sides[i], 10) << "-> " << rel.corners[i] << "\n";
  }
  for (const auto& d : rel.diagnostics) os << "  note: " << d << "\n";
  return os.str();
}

inline std::string dump(const io::ojson& j) { return j.dump(1) + "\n"; }

}  // namespace detail

// ---------------------------------------------------------------------------

inline int cmd_links(const std::string& spec, const CliConfig& cfg, std::string& out) {
  detail::check_format(cfg.format, {"table", "json", "csv"}, "links");
  MinimalModel m = parse_surface(spec);
  FieldProfile f = parse_field(cfg.field);
  auto links = enumerate_links(m, f, cfg.bound > 0 ? cfg.bound : 8);
  if (cfg.format == "json") out = detail::dump(io::links_document(m, links));
  else if (cfg.format == "csv") out = detail::links_csv(links);
  else out = detail::links_table(m, links);
  return Ok;
}

inline int cmd_relation(const std::string& spec, const std::string& degrees, const std::string& deltas,
                        const CliConfig& cfg, std::string& out) {
  detail::check_format(cfg.format, {"table", "json", "dot"}, "relation");
  MinimalModel m = parse_surface(spec);
  FieldProfile f = parse_field(cfg.field);
  if (degrees.empty() == deltas.empty()) throw input_error("give exactly one of --degrees and --deltas");
  ElementaryRelation rel;
  if (!deltas.empty()) {
    auto d = detail::parse_pair(deltas, "--deltas");
    rel = relation_over_curve(m, d[0], d[1], f);
  } else {
    auto d = detail::parse_pair(degrees, "--degrees");
    if (!exists_over(m, f)) throw input_error(key(m) + " does not exist over " + field_string(f));
    auto ok = allowed_point_degrees(m, f);
    for (int x : d)
      if (x != 0 && !ok(x)) throw input_error("no point of degree " + std::to_string(x) + " over " + field_string(f));
    rel = build_relation(rank_three_fibration(m, d[0], d[1], cfg.strict), cfg.bound > 0 ? cfg.bound : 60);
    for (const auto& e : figure_map())
      if (e.origin == key(m) && e.a == d[0] && e.b == d[1]) rel.id = e.id;
  }
  if (cfg.format == "json") out = detail::dump(io::relation_json(rel));
  else if (cfg.format == "dot") out = render_dot(rel);
  else out = detail::relation_table(rel);
  return Ok;
}

// ---------------------------------------------------------------------------
// verify

namespace detail {

struct Report {
  std::vector<std::string> lines;
  int checked = 0;
  void bad(std::string s) { lines.push_back(std::move(s)); }
};

inline void verify_catalog(const std::filesystem::path& dir, Report& r) {
  auto golden = io::load_catalog(dir / "catalog.json");
  auto built = io::builtin_catalog();
  std::map<std::string, io::CatalogRecord> g, b;
  for (const auto& x : golden) g[x.key] = x;
  for (const auto& x : built) b[x.key] = x;
  for (const auto& [k, x] : g) {
    ++r.checked;
    auto it = b.find(k);
    if (it == b.end()) r.bad("catalog: row " + k + " is not a catalogued family");
    else if (!(it->second == x)) r.bad("catalog: row " + k + " differs from the computed record");
  }
  for (const auto& [k, x] : b)
    if (!g.count(k)) r.bad("catalog: row " + k + " missing from the data file");
}

inline void verify_linkII(const std::filesystem::path& dir, Report& r) {
  auto golden = io::load_table_linkII(dir / "table_linkII.json");
  using Row = std::tuple<int, int, i64, i64, int>;
  std::map<std::string, std::set<Row>> g, c;
  for (const auto& x : golden) {
    g[key(x.source)].insert({x.a, x.b, x.d, x.m, x.target_k2});
  }
  for (const auto& [k, rows] : g) {
    for (const auto& l : enumerate_type_II_point(parse_surface(k), FieldProfile::arbitrary()))
      c[k].insert({l.a, l.b, l.d, l.m, l.target_k2()});
  }
  auto fmt = [](const std::string& s, const Row& x) {
    auto [a, b, d, m, t] = x;
    return s + " row a=" + std::to_string(a) + " b=" + std::to_string(b) + " d=" + std::to_string(d) +
           " m=" + std::to_string(m) + " K2'=" + std::to_string(t);
  };
  for (const auto& [k, rows] : g)
    for (const auto& x : rows) {
      ++r.checked;
      if (!c[k].count(x)) r.bad("linkII: " + fmt(k, x) + " not produced by the solver");
    }
  for (const auto& [k, rows] : c)
    for (const auto& x : rows)
      if (!g[k].count(x)) r.bad("linkII: " + fmt(k, x) + " produced but absent from the table");
}

inline void verify_linkI(const std::filesystem::path& dir, Report& r) {
  auto golden = io::load_table_linkI(dir / "table_linkI.json");
  using Row = std::tuple<int, i64, i64, int, std::string>;
  std::map<std::string, std::set<Row>> g, c;
  for (const auto& x : golden) g[key(x.source)].insert({x.a, x.d, x.m, x.delta, x.target});
  for (const auto& m : point_families())
    for (const auto& l : enumerate_type_I(m)) c[key(m)].insert({l.a, l.d, l.m, l.delta, key(l.target)});
  auto fmt = [](const std::string& s, const Row& x) {
    auto [a, d, m, delta, t] = x;
    return s + " row a=" + std::to_string(a) + " d=" + std::to_string(d) + " m=" + std::to_string(m) +
           " delta=" + std::to_string(delta) + " -> " + t;
  };
  for (const auto& [k, rows] : g)
    for (const auto& x : rows) {
      ++r.checked;
      if (!c[k].count(x)) r.bad("linkI: " + fmt(k, x) + " not produced");
    }
  for (const auto& [k, rows] : c)
    for (const auto& x : rows)
      if (!g[k].count(x)) r.bad("linkI: " + fmt(k, x) + " produced but absent from the table");
}

inline void verify_pieces(const std::filesystem::path& dir, int bound, Report& r) {
  auto golden = io::load_pieces(dir / "pieces");
  auto built = enumerate_pieces(FieldProfile::arbitrary(), true, bound);
  std::map<std::string, const ElementaryRelation*> b;
  for (const auto& x : built) b[x.id] = &x;
  std::set<std::string> seen;
  for (const auto& g : golden) {
    ++r.checked;
    seen.insert(g.id);
    auto it = b.find(g.id);
    if (it == b.end()) {
      r.bad("pieces: " + g.id + " is not generated");
      continue;
    }
    const ElementaryRelation& c = *it->second;
    if (c.size() != g.size())
      r.bad("pieces: " + g.id + " has " + std::to_string(g.size()) + " links in the golden, " +
            std::to_string(c.size()) + " generated");
    else if (c.center_label != g.center_label || c.center_k2 != g.center_k2)
      r.bad("pieces: " + g.id + " center " + g.center_label + " vs generated " + c.center_label);
    else if (!(c.lattice() == g.lattice()) || !same_relation(c, g))
      r.bad("pieces: " + g.id + " polygon differs from the generated one");
  }
  for (const auto& [id, p] : b)
    if (!seen.count(id)) r.bad("pieces: " + id + " generated but no golden file");
}

}  // namespace detail

inline int cmd_verify(const std::string& only, const CliConfig& cfg, std::string& out) {
  auto dir = data_dir();
  if (!std::filesystem::is_directory(dir)) throw data_error("data directory " + dir.string() + " not found");
  detail::Report r;
  std::ostringstream os;
  auto run = [&](const std::string& name, auto&& fn) {
    if (!only.empty() && only != name) return;
    std::size_t before = r.lines.size();
    int c0 = r.checked;
    fn();
    os << name << ": " << (r.checked - c0) << " checked, " << (r.lines.size() - before) << " mismatches\n";
  };
  if (!only.empty() && only != "catalog" && only != "linkII" && only != "linkI" && only != "pieces")
    throw input_error("--only takes catalog, linkII, linkI or pieces");
  run("catalog", [&] { detail::verify_catalog(dir, r); });
  run("linkII", [&] { detail::verify_linkII(dir, r); });
  run("linkI", [&] { detail::verify_linkI(dir, r); });
  run("pieces", [&] { detail::verify_pieces(dir, cfg.bound > 0 ? cfg.bound : 60, r); });
  for (const auto& l : r.lines) os << "MISMATCH " << l << "\n";
  os << (r.lines.empty() ? "OK\n" : "FAILED\n");
  out = os.str();
  return r.lines.empty() ? Ok : Mismatch;
}

// ---------------------------------------------------------------------------

inline int cmd_graph(const CliConfig& cfg, bool nonrational, std::string& out) {
  detail::check_format(cfg.format, {"table", "json", "dot"}, "graph");
  FieldProfile f = parse_field(cfg.field);
  LinkGraph g = build_link_graph(f, nonrational);
  auto min_k2 = [&](const std::vector<std::string>& c) {
    int k = 99;
    for (const auto& n : c) k = std::min(k, g.models.at(n).k2);
    return k;
  };
  std::ostringstream os;
  if (cfg.format == "json") {
    io::ojson j;
    j["field"] = field_string(f);
    j["components"] = io::ojson::array();
    for (const auto& c : g.components) j["components"].push_back({{"families", c}, {"min_k2", min_k2(c)}});
    out = detail::dump(j);
    return Ok;
  }
  if (cfg.format == "dot") {
    os << "graph links {\n";
    for (const auto& n : g.nodes) os << "  \"" << n << "\" [label=\"" << label(g.models.at(n)) << "\"];\n";
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& l : g.edges) {
      std::string s = family_key(l.source), t = family_key(l.target);
      if (t < s) std::swap(s, t);
      if (seen.insert({s, t, link_type_name(l.type)}).second)
        os << "  \"" << s << "\" -- \"" << t << "\" [label=\"" << link_type_name(l.type) << "\"];\n";
    }
    os << "}\n";
    out = os.str();
    return Ok;
  }
  for (std::size_t i = 0; i < g.components.size(); ++i) {
    const auto& c = g.components[i];
    os << "component " << i + 1 << " (" << c.size() << (c.size() == 1 ? " family" : " families") << ", min K^2 = " << min_k2(c) << "):";
    for (const auto& n : c) os << " " << n;
    os << "\n";
  }
  out = os.str();
  return Ok;
}

inline int cmd_quotient(const std::string& file, std::string& out) {
  std::ifstream in(file);
  if (!in) throw input_error("cannot open word file " + file);
  io::json j;
  try {
    j = io::json::parse(in);
  } catch (const io::json::exception& e) {
    throw input_error(file + ": " + e.what());
  }
  QuotientElement q = phi(io::word_from_json(j));
  out = q.is_identity() ? std::string("identity\n") : io::quotient_json(q).dump() + "\n";
  return Ok;
}

// ---------------------------------------------------------------------------

inline int emit(const std::string& text, const CliConfig& cfg) {
  if (cfg.out.empty()) {
    std::cout << text;
    return Ok;
  }
  std::ofstream f(cfg.out);
  if (!f) {
    std::cerr << "error: cannot write " << cfg.out << "\n";
    return Environment;
  }
  f << text;
  return Ok;
}

inline int run(int argc, char** argv) {
  CLI::App app{"Sarkisov links and elementary relations of rational surfaces"};
  app.require_subcommand(1);
  CliConfig cfg;
  std::string spec, degrees, deltas, only, word;
  bool nonrational = false, no_strict = false;

  auto common = [&](CLI::App* s) {
    s->add_option("--field", cfg.field, "field profile: arbitrary | perfect[:p] | sep-closed:<p> | alg-closed:<p>");
    s->add_option("--out", cfg.out, "write output to a file");
    s->add_option("--bound", cfg.bound, "enumeration bound");
  };

  auto* links = app.add_subcommand("links", "list the links leaving a surface");
  links->add_option("surface", spec, "surface spec, e.g. dp:9:l3, hirz:0, conic:6")->required();
  common(links);
  links->add_option("--format", cfg.format, "table | json | csv");

  auto* relation = app.add_subcommand("relation", "elementary relation of a rank 3 fibration");
  relation->add_option("surface", spec, "origin surface spec")->required();
  relation->add_option("--degrees", degrees, "point degrees a,b (0,d over F0 and conic:4)");
  relation->add_option("--deltas", deltas, "relative degrees x,y over a conic bundle or Hirzebruch surface");
  relation->add_flag("--no-strict", no_strict, "skip the degree sum bound");
  relation->add_option("--format", cfg.format, "table | json | dot");
  common(relation);

  auto* verify = app.add_subcommand("verify", "compare computed tables with the shipped data");
  verify->add_option("--only", only, "catalog | linkII | linkI | pieces");
  verify->add_option("--bound", cfg.bound, "enumeration bound for pieces");
  verify->add_option("--out", cfg.out, "write the report to a file");

  auto* graph = app.add_subcommand("graph", "connected components of the link graph");
  graph->add_flag("--nonrational", nonrational, "include the non-rational families");
  graph->add_option("--format", cfg.format, "table | json | dot");
  common(graph);

  auto* quotient = app.add_subcommand("quotient", "image of a word in the free product");
  quotient->add_option("word", word, "word file (JSON)")->required();
  quotient->add_option("--out", cfg.out, "write output to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? Ok : UserInput;
  }
  cfg.strict = !no_strict;

  std::string text;
  int rc = Ok;
  try {
    if (*links) rc = cmd_links(spec, cfg, text);
    else if (*relation) rc = cmd_relation(spec, degrees, deltas, cfg, text);
    else if (*verify) rc = cmd_verify(only, cfg, text);
    else if (*graph) rc = cmd_graph(cfg, nonrational, text);
    else if (*quotient) rc = cmd_quotient(word, text);
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return Environment;
  } catch (const consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (!e.partial().empty()) std::cerr << e.partial() << "\n";
    return Environment;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return UserInput;
  }
  int w = emit(text, cfg);
  return w != Ok ? w : rc;
}

}  // namespace sarki::cli
