#pragma once

#include <cctype>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "checked.hpp"
#include "errors.hpp"
#include "model.hpp"

namespace sarki {

using Vec = std::vector<i64>;
using Matrix = std::vector<Vec>;

// Picard lattice of a marked blow-up of a minimal surface. Basis order is
// (H-part, E_1, ..., E_r) with the E_i in blow-up order.
class MarkedLattice {
 public:
  static MarkedLattice of(const MinimalModel& m) {
    MarkedLattice L;
    L.ambient_ = m;
    switch (m.family) {
      case Family::P2:
      case Family::SeveriBrauer:
      case Family::Quadric:
      case Family::DP8NonQuadric:
      case Family::DelPezzo:
        L.set_h({"H"}, {{m.h2}}, {-m.lambda});
        break;
      case Family::Hirzebruch:
        if (m.n == 0) {
          L.set_h({"H1", "H2"}, {{0, 1}, {1, 0}}, {-2, -2});
        } else {
          // f fibre, s negative section
          L.set_h({"f", "s"}, {{0, 1}, {1, -m.n}}, {-(m.n + 2), -2});
        }
        break;
      case Family::ConicBundle:
        if (m.pointless_base) {
          L.set_h({"H", "G"}, {{8, 0}, {0, -2}}, {-1, 1});
          break;
        }
        switch (m.k2) {
          case 6: L.set_h({"H", "G"}, {{2, 0}, {0, -2}}, {-2, 1}); break;
          case 5: L.set_h({"H", "G"}, {{1, 0}, {0, -4}}, {-3, 1}); break;
          case 4: L.set_h({"H1", "H2"}, {{0, 2}, {2, 0}}, {-1, -1}); break;
          case 3: L.set_h({"H", "G"}, {{4, 0}, {0, -1}}, {-1, 1}); break;
          default: L.set_h({"A", "f"}, {{m.k2, 2}, {2, 0}}, {-1, 0}); break;
        }
        break;
    }
    return L;
  }

  const MinimalModel& ambient() const { return ambient_; }
  std::size_t rank() const { return gram_.size(); }
  std::size_t h_dim() const { return h_dim_; }
  const Matrix& gram() const { return gram_; }
  const Vec& canonical() const { return canonical_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const MarkedLattice& o) const {
    return gram_ == o.gram_ && canonical_ == o.canonical_ && names_ == o.names_;
  }

  i64 dot(const Vec& a, const Vec& b) const {
    if (a.size() != rank() || b.size() != rank()) throw input_error("class length does not match lattice rank");
    i64 s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < rank(); ++j)
        if (gram_[i][j] != 0 && b[j] != 0)
          s = checked::add(s, checked::mul(checked::mul(a[i], gram_[i][j]), b[j]));
    }
    return s;
  }

  i64 k_dot(const Vec& a) const { return dot(canonical_, a); }
  i64 k2() const { return dot(canonical_, canonical_); }
  int sum_degrees() const { return std::accumulate(degrees_.begin(), degrees_.end(), 0); }

  MarkedLattice blow_up(int degree, bool strict = true) const {
    if (degree < 1) throw input_error("point degree must be >= 1");
    if (strict && sum_degrees() + degree >= ambient_.k2)
      throw constraint_error("degree sum " + std::to_string(sum_degrees() + degree) +
                             " violates the del Pezzo bound sum of degrees < K^2 = " +
                             std::to_string(ambient_.k2));
    MarkedLattice L = *this;
    for (auto& row : L.gram_) row.push_back(0);
    L.gram_.push_back(Vec(rank() + 1, 0));
    L.gram_.back().back() = -degree;
    L.canonical_.push_back(1);
    L.degrees_.push_back(degree);
    L.names_.push_back(exceptional_name(degrees_.size()));
    return L;
  }

  // Same lattice with the exceptional symbols renamed.
  MarkedLattice with_exceptional_names(const std::vector<std::string>& names) const {
    if (names.size() != degrees_.size()) throw input_error("one name per exceptional class expected");
    MarkedLattice L = *this;
    for (std::size_t i = 0; i < names.size(); ++i) L.names_[h_dim_ + i] = names[i];
    return L;
  }

  Vec zero() const { return Vec(rank(), 0); }
  Vec basis(std::size_t i) const {
    Vec v = zero();
    v.at(i) = 1;
    return v;
  }
  Vec exceptional(std::size_t i) const { return basis(h_dim_ + i); }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw input_error("unknown basis symbol '" + name + "'");
  }

  // "3H-2E-F", "6H1+12H2-5F"
  std::string format(const Vec& v) const {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      i64 c = v[i];
      if (c < 0) out += "-";
      else if (!out.empty()) out += "+";
      i64 a = c < 0 ? -c : c;
      if (a != 1) out += std::to_string(a);
      out += names_[i];
    }
    return out.empty() ? "0" : out;
  }

  // Inverse of format; accepts an integer factor before a parenthesis, e.g. "3(H-E)-F".
  Vec parse(const std::string& s) const {
    std::size_t pos = 0;
    Vec v = parse_sum(s, pos);
    if (pos != s.size()) throw input_error("trailing input in class '" + s + "'");
    return v;
  }

 private:
  MinimalModel ambient_;
  std::size_t h_dim_ = 0;
  Matrix gram_;
  Vec canonical_;
  std::vector<int> degrees_;
  std::vector<std::string> names_;

  void set_h(std::vector<std::string> names, Matrix g, Vec k) {
    h_dim_ = names.size();
    names_ = std::move(names);
    gram_ = std::move(g);
    canonical_ = std::move(k);
  }

  std::string exceptional_name(std::size_t i) const {
    // figures with a two-symbol H-part blow up only y, named F
    std::size_t j = h_dim_ == 2 ? i + 1 : i;
    if (j == 0) return "E";
    if (j == 1) return "F";
    return "E" + std::to_string(j + 1);
  }

  Vec parse_sum(const std::string& s, std::size_t& pos) const {
    Vec acc = zero();
    bool first = true;
    while (pos < s.size() && s[pos] != ')') {
      i64 sign = 1;
      if (s[pos] == '+' || s[pos] == '-') {
        sign = s[pos] == '-' ? -1 : 1;
        ++pos;
      } else if (!first) {
        throw input_error("expected + or - in class '" + s + "'");
      }
      first = false;
      i64 coef = 1;
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos > start) coef = std::stoll(s.substr(start, pos - start));
      Vec term;
      if (pos < s.size() && s[pos] == '(') {
        ++pos;
        term = parse_sum(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw input_error("unbalanced parenthesis in '" + s + "'");
        ++pos;
      } else {
        std::size_t best = names_.size();
        std::size_t best_len = 0;
        for (std::size_t i = 0; i < names_.size(); ++i)
          if (s.compare(pos, names_[i].size(), names_[i]) == 0 && names_[i].size() > best_len) {
            best = i;
            best_len = names_[i].size();
          }
        if (best == names_.size()) {
          if (pos > start) {  // bare integer is not a class
            throw input_error("missing basis symbol in '" + s + "'");
          }
          throw input_error("unknown symbol in class '" + s + "'");
        }
        pos += best_len;
        term = basis(best);
      }
      for (std::size_t i = 0; i < acc.size(); ++i)
        acc[i] = checked::add(acc[i], checked::mul(sign * coef, term[i]));
    }
    return acc;
  }
};

using LatticePtr = std::shared_ptr<const MarkedLattice>;

inline LatticePtr make_lattice(const MinimalModel& m, const std::vector<int>& degrees, bool strict = true) {
  MarkedLattice L = MarkedLattice::of(m);
  for (int d : degrees) L = L.blow_up(d, strict);
  return std::make_shared<const MarkedLattice>(std::move(L));
}

class DivisorClass {
 public:
  DivisorClass(LatticePtr lat, Vec c) : lat_(std::move(lat)), c_(std::move(c)) {
    if (!lat_) throw input_error("divisor class without lattice");
    if (c_.size() != lat_->rank()) throw input_error("class length does not match lattice rank");
  }
  static DivisorClass parse(LatticePtr lat, const std::string& s) {
    Vec v = lat->parse(s);
    return {std::move(lat), std::move(v)};
  }

  const LatticePtr& lattice() const { return lat_; }
  const Vec& coeffs() const { return c_; }
  std::string str() const { return lat_->format(c_); }

  bool same_lattice(const DivisorClass& o) const { return lat_ == o.lat_ || *lat_ == *o.lat_; }
  bool operator==(const DivisorClass& o) const { return same_lattice(o) && c_ == o.c_; }

  DivisorClass operator+(const DivisorClass& o) const { return combine(o, 1); }
  DivisorClass operator-(const DivisorClass& o) const { return combine(o, -1); }
  friend DivisorClass operator*(i64 k, const DivisorClass& d) {
    Vec v = d.c_;
    for (auto& x : v) x = checked::mul(k, x);
    return {d.lat_, std::move(v)};
  }

 private:
  LatticePtr lat_;
  Vec c_;

  DivisorClass combine(const DivisorClass& o, i64 s) const {
    if (!same_lattice(o)) throw input_error("classes live on different lattices");
    Vec v = c_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = checked::add(v[i], checked::mul(s, o.c_[i]));
    return {lat_, std::move(v)};
  }
};

inline i64 intersect(const DivisorClass& a, const DivisorClass& b) {
  if (!a.same_lattice(b)) throw input_error("intersection of classes on different lattices");
  return a.lattice()->dot(a.coeffs(), b.coeffs());
}

inline i64 canonical_self_intersection(const MarkedLattice& L) { return L.k2(); }

inline i64 content(const Vec& v) {
  i64 g = 0;
  for (i64 x : v) g = std::gcd(g, x < 0 ? -x : x);
  return g;
}

enum class ClassKind { FirstKind, FibreClass, Other };

struct Classification {
  ClassKind kind = ClassKind::Other;
  i64 value = 0;  // degree for FirstKind, delta for FibreClass
  bool operator==(const Classification&) const = default;
};

inline Classification classify(const MarkedLattice& L, const Vec& v) {
  if (content(v) == 0) return {};
  i64 sq = L.dot(v, v);
  i64 kd = L.k_dot(v);
  if (sq < 0 && sq == kd) return {ClassKind::FirstKind, -sq};
  if (sq == 0 && kd < 0 && kd % 2 == 0 && content(v) == 1) return {ClassKind::FibreClass, -kd / 2};
  return {};
}

inline Classification classify_class(const DivisorClass& d) { return classify(*d.lattice(), d.coeffs()); }

}  // namespace sarki
