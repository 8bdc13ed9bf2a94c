#include <catch_amalgamated.hpp>

#include <random>

#include <sarki/lattice.hpp>

using namespace sarki;

TEST_CASE("blow-up of the plane") {
  auto L = make_lattice(p2(), {1, 1});
  CHECK(L->rank() == 3);
  CHECK(L->names() == std::vector<std::string>{"H", "E", "F"});
  CHECK(L->k2() == 7);
  Vec h = L->parse("H-E-F");
  CHECK(L->dot(h, h) == -1);
  CHECK(L->k_dot(h) == -1);
  CHECK(classify(*L, h) == Classification{ClassKind::FirstKind, 1});
  CHECK(classify(*L, L->parse("H-E")) == Classification{ClassKind::FibreClass, 1});
}

TEST_CASE("canonical class squares to K^2 minus the degrees") {
  for (const auto& m : {p2(), severi_brauer(), quadric(), dp8_nonquadric(), del_pezzo(6), del_pezzo(3)}) {
    auto L = MarkedLattice::of(m);
    CHECK(L.k2() == m.k2);
    if (m.k2 > 2) CHECK(L.blow_up(1).blow_up(1).k2() == m.k2 - 2);
  }
  for (int n = 0; n < 5; ++n) CHECK(MarkedLattice::of(hirzebruch(n)).k2() == 8);
  for (int k = 1; k <= 6; ++k) CHECK(MarkedLattice::of(conic_bundle(k)).k2() == k);
  CHECK(MarkedLattice::of(conic_bundle(6, true)).k2() == 6);
}

TEST_CASE("degree sum bound") {
  CHECK_THROWS_AS(make_lattice(p2(), {5, 5}), constraint_error);
  CHECK_THROWS_AS(make_lattice(p2(), {4, 5}), constraint_error);
  CHECK_NOTHROW(make_lattice(p2(), {4, 4}));
  CHECK_NOTHROW(make_lattice(p2(), {5, 5}, false));
  CHECK_THROWS_AS(MarkedLattice::of(p2()).blow_up(0), input_error);
}

TEST_CASE("two-symbol part names the single exceptional class F") {
  auto L = make_lattice(hirzebruch(0), {3});
  CHECK(L->names() == std::vector<std::string>{"H1", "H2", "F"});
  CHECK(L->format(L->parse("6H1+12H2-5F")) == "6H1+12H2-5F");
}

TEST_CASE("parse accepts parentheses and rejects junk") {
  auto L = make_lattice(p2(), {2, 3});
  CHECK(L->parse("3(H-E)-F") == Vec{3, -3, -1});
  CHECK(L->parse("-E") == Vec{0, -1, 0});
  CHECK_THROWS_AS(L->parse("3"), input_error);
  CHECK_THROWS_AS(L->parse("H-X"), input_error);
  CHECK_THROWS_AS(L->parse("H E"), input_error);
  CHECK_THROWS_AS(L->parse("2(H-E"), input_error);
}

TEST_CASE("format and parse are inverse") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> c(-40, 40);
  auto L = make_lattice(quadric(), {2, 3});
  for (int i = 0; i < 2000; ++i) {
    Vec v{c(rng), c(rng), c(rng)};
    CHECK(L->parse(L->format(v)) == v);
  }
}

TEST_CASE("divisor classes") {
  auto L = make_lattice(p2(), {1, 1});
  auto H = DivisorClass::parse(L, "H");
  auto E = DivisorClass::parse(L, "E");
  CHECK(intersect(H - E, H - E) == 0);
  CHECK((2 * H - E).str() == "2H-E");
  auto other = make_lattice(p2(), {1, 2});
  CHECK_THROWS_AS(H + DivisorClass::parse(other, "E"), input_error);
  CHECK_THROWS_AS(DivisorClass(L, Vec{1, 2}), input_error);
}

TEST_CASE("intersection overflow is caught") {
  auto L = MarkedLattice::of(p2()).blow_up(1);
  Vec big{3000000000LL, 0};
  CHECK_THROWS_AS(L.dot(big, Vec{3000000000LL * 1000, 0}), overflow_error);
}

TEST_CASE("content and zero class") {
  CHECK(content(Vec{6, -4, 10}) == 2);
  auto L = make_lattice(p2(), {1, 1});
  CHECK(classify(*L, L->zero()).kind == ClassKind::Other);
  // 2(H-E) is isotropic but not primitive
  CHECK(classify(*L, L->parse("2H-2E")).kind == ClassKind::Other);
}
