#include <catch_amalgamated.hpp>

#include <sarki/catalog.hpp>

using namespace sarki;

TEST_CASE("surface specs round-trip through key") {
  std::vector<MinimalModel> all = {p2(), severi_brauer(), quadric(), dp8_nonquadric(), hirzebruch(0), hirzebruch(7),
                                   conic_bundle(6, true)};
  for (int k = 1; k <= 6; ++k) {
    all.push_back(del_pezzo(k));
    all.push_back(conic_bundle(k));
  }
  for (int k = 1; k <= 4; ++k) all.push_back(del_pezzo(k, GeomClass::GeomNonNormal));
  for (const auto& m : all) CHECK(parse_surface(key(m)) == m);
}

TEST_CASE("surface spec aliases and errors") {
  CHECK(parse_surface("dp:9") == p2());
  CHECK(parse_surface("dp:9:sb") == severi_brauer());
  CHECK(parse_surface("dp:8") == quadric());
  CHECK(parse_surface("dp:8:nonquadric") == dp8_nonquadric());
  CHECK(parse_surface("dp:2:nonnormal").geom == GeomClass::GeomNonNormal);
  for (const char* bad : {"", "dp", "dp:7", "dp:10", "dp:0", "dp:6:l2", "hirz:-1", "conic:7", "conic:5:pointless",
                          "plane", "dp:9:l2", "dp:5:nonnormal"})
    CHECK_THROWS_AS(parse_surface(bad), input_error);
}

TEST_CASE("field specs") {
  CHECK(parse_field("arbitrary") == FieldProfile::arbitrary());
  CHECK(parse_field("sep-closed:3") == FieldProfile::sep_closed(3));
  CHECK(parse_field("perfect").closure == Closure::Perfect);
  CHECK(field_string(parse_field("alg-closed:0")) == "alg-closed:0");
  for (const char* bad : {"sep-closed", "sep-closed:4", "alg-closed", "arbitrary:2", "finite:2", "perfect:2:3"})
    CHECK_THROWS_AS(parse_field(bad), input_error);
}

TEST_CASE("normalisations") {
  CHECK(dp_from_invariants(9, 3) == p2());
  CHECK(dp_from_invariants(8, 1) == dp8_nonquadric());
  CHECK_THROWS_AS(dp_from_invariants(7, 1), input_error);
  CHECK_THROWS_AS(dp_from_invariants(6, 2), input_error);
  CHECK(quadric().h2 == 2);
  CHECK(severi_brauer().h2 == 9);
}

TEST_CASE("point degrees") {
  auto arb = FieldProfile::arbitrary();
  CHECK(allowed_point_degrees(p2(), arb)(5));
  CHECK_FALSE(allowed_point_degrees(severi_brauer(), arb)(2));
  CHECK(allowed_point_degrees(severi_brauer(), arb)(6));
  CHECK_FALSE(allowed_point_degrees(dp8_nonquadric(), arb)(3));
  CHECK_FALSE(allowed_point_degrees(conic_bundle(6, true), arb)(1));
  auto s2 = FieldProfile::sep_closed(2);
  CHECK(allowed_point_degrees(p2(), s2)(8));
  CHECK_FALSE(allowed_point_degrees(p2(), s2)(6));
  CHECK_FALSE(allowed_point_degrees(p2(), parse_field("alg-closed:0"))(2));
  CHECK_FALSE(allowed_point_degrees(p2(), arb)(0));
}

TEST_CASE("existence over separably closed fields") {
  auto s = [](int p) { return FieldProfile::sep_closed(p); };
  CHECK_FALSE(exists_over(severi_brauer(), s(3)));
  CHECK(exists_over(quadric(), s(2)));
  CHECK_FALSE(exists_over(quadric(), s(3)));
  CHECK(exists_over(del_pezzo(5), s(5)));
  CHECK_FALSE(exists_over(del_pezzo(5), s(7)));
  CHECK_FALSE(exists_over(del_pezzo(6), s(2)));
  CHECK(exists_over(conic_bundle(5), s(2)));
  CHECK_FALSE(exists_over(conic_bundle(6), s(3)));
  CHECK(exists_over(del_pezzo(3, GeomClass::GeomNonNormal), s(3)));
  CHECK_FALSE(exists_over(del_pezzo(2, GeomClass::GeomNonNormal), s(3)));
  CHECK(exists_over(del_pezzo(2, GeomClass::GeomNonNormal), s(2)));
  CHECK_FALSE(exists_over(del_pezzo(1, GeomClass::GeomNonNormal), parse_field("perfect")));
}

TEST_CASE("rational minimal models") {
  CHECK(rational_minimal_models(FieldProfile::arbitrary()).size() == 7);
  auto r2 = rational_minimal_models(FieldProfile::sep_closed(2));
  CHECK(r2.size() == 5);  // P2, F_n, quadric, X5/P1, X6/P1
  bool a1 = false;
  for (const auto& m : r2)
    if (m.family == Family::Quadric) a1 = m.singularity == "A1";
  CHECK(a1);
  auto r5 = rational_minimal_models(FieldProfile::sep_closed(5));
  CHECK(r5.size() == 3);
  auto r7 = rational_minimal_models(FieldProfile::sep_closed(7));
  CHECK(r7.size() == 2);
}

TEST_CASE("non-normal base-change table") {
  CHECK(non_normal_dp_table(3).size() == 2);
  CHECK(non_normal_dp_table(2).size() == 12);
  CHECK(non_normal_dp_table(5).empty());
  CHECK_THROWS_AS(non_normal_dp_table(4), input_error);
  CHECK(is_super_rigid(del_pezzo(2, GeomClass::GeomNonNormal)));
  CHECK_FALSE(is_super_rigid(p2()));
  CHECK_THROWS_AS(is_super_rigid(hirzebruch(0)), input_error);
}

TEST_CASE("rationality") {
  CHECK(is_rational_family(p2()));
  CHECK(is_rational_family(del_pezzo(5)));
  CHECK_FALSE(is_rational_family(del_pezzo(4)));
  CHECK_FALSE(is_rational_family(severi_brauer()));
  CHECK_FALSE(is_rational_family(conic_bundle(6, true)));
  CHECK(degree_divisor(severi_brauer()) == 3);
}
