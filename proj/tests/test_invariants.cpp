#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <stdexcept>

#include "qbic/invariants.hpp"

using namespace qbic;

TEST_CASE("invariants of the smooth Fano surface at q = 2 and q = 3", "[invariants]") {
  // substituting q = 2, 3 into the closed forms
  SurfaceInvariants a = surface_invariants(2);
  CHECK(a.deg_plucker == 45);
  CHECK(a.c1_sq == 45);
  CHECK(a.c2 == 27);
  CHECK(a.chi_O == 6);
  CHECK(a.bmy_defect == -36);
  REQUIRE(a.h1_smooth.has_value());
  CHECK(*a.h1_smooth == 5);
  CHECK(*a.h2_smooth == 10);
  CHECK(*a.h1_nodal == 5);  // correction term vanishes at p = 2
  CHECK(*a.h2_nodal == 10);
  CHECK(a.betti1_half == 5);
  CHECK(a.hermitian_blowup_count == 9);
  CHECK(a.conductor_delta == 4);

  SurfaceInvariants b = surface_invariants(3);
  CHECK(b.deg_plucker == 160);
  CHECK(b.c1_sq == 1440);
  CHECK(b.c2 == 432);
  CHECK(b.chi_O == 156);
  CHECK(b.bmy_defect == 144);
  CHECK(*b.h1_smooth == 30);
  CHECK(*b.h2_smooth == 185);
  CHECK(*b.h1_nodal == 31);
  CHECK(*b.h2_nodal == 186);
  CHECK(b.betti1_half == 30);
  CHECK(b.hermitian_blowup_count == 28);
  CHECK(b.conductor_delta == 13);
}

TEST_CASE("Noether identity and integrality across prime powers", "[invariants]") {
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
    SurfaceInvariants inv = surface_invariants(q);
    CHECK(12 * inv.chi_O == inv.c1_sq + inv.c2);
    CHECK(inv.bmy_defect == inv.c1_sq - 3 * inv.c2);
    std::int64_t Q = q;
    CHECK(inv.deg_plucker == (Q + 1) * (Q + 1) * (Q * Q + 1));
    CHECK(inv.betti1_half == Q * (Q - 1) * (Q * Q + 1) / 2);
    CHECK(inv.hermitian_blowup_count == Q * Q * Q + 1);
    CHECK(inv.conductor_delta == 2 * Q * Q - Q - 2);
  }
}

TEST_CASE("surface_invariants rejects non-prime-powers", "[invariants]") {
  for (std::uint32_t q : {1u, 6u, 10u, 12u, 15u})
    CHECK_THROWS_AS(surface_invariants(q), std::invalid_argument);
}

TEST_CASE("BMY defect changes sign exactly between q = 2 and q = 3", "[invariants]") {
  // c1^2 - 3 c2 = q^2 (q+1)^2 (q^2 - 3q + 1): the last factor is -1 at q = 2
  // and positive from q = 3 on, so only q = 2 stays below the BMY bound.
  CHECK(surface_invariants(2).bmy_defect < 0);
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u})
    CHECK(surface_invariants(q).bmy_defect > 0);
}

TEST_CASE("cohomology fields are populated exactly for prime q", "[invariants]") {
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
    SurfaceInvariants inv = surface_invariants(q);
    CHECK(inv.h1_smooth.has_value());
    CHECK(inv.h2_smooth.has_value());
    CHECK(inv.h1_nodal.has_value());
    CHECK(inv.h2_nodal.has_value());
  }
  for (std::uint32_t q : {4u, 8u, 9u, 16u}) {
    SurfaceInvariants inv = surface_invariants(q);
    CHECK(!inv.h1_smooth.has_value());
    CHECK(!inv.h2_smooth.has_value());
    CHECK(!inv.h1_nodal.has_value());
    CHECK(!inv.h2_nodal.has_value());
  }
}

TEST_CASE("Euler characteristic chain in smooth and nodal variants", "[invariants]") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
    SurfaceInvariants inv = surface_invariants(p);
    CHECK(1 - *inv.h1_smooth + *inv.h2_smooth == inv.chi_O);
    CHECK(1 - *inv.h1_nodal + *inv.h2_nodal == inv.chi_O);
    CHECK(*inv.h1_smooth == inv.betti1_half);  // Picard scheme is smooth
  }
}

TEST_CASE("hermitian_blowup_count matches the enumerated Hermitian points", "[invariants]") {
  struct Case { std::uint32_t p, e; };
  for (auto [p, e] : {Case{2, 1}, Case{3, 1}, Case{2, 2}}) {
    std::uint32_t q = 1;
    for (std::uint32_t k = 0; k < e; ++k) q *= p;
    auto K = Field::make(p, 2 * e);
    auto F = normal_form(QbicType::parse("1^3"), p, e, K);
    CHECK(hermitian_points(F).size() ==
          static_cast<std::size_t>(surface_invariants(q).hermitian_blowup_count));
  }
}

TEST_CASE("nodal_consistency ties surface cohomology to the curve count", "[invariants]") {
  struct Expect { std::uint32_t p; std::int64_t corr, h1; };
  for (auto [p, corr, h1] : {Expect{2, 0, 5}, Expect{3, 1, 31}, Expect{5, 10, 270},
                             Expect{7, 35, 1085}}) {
    NodalConsistency rep = nodal_consistency(p);
    CHECK(rep.correction == corr);
    CHECK(rep.h1_nodal == h1);
    CHECK(rep.curve_section_total == h1);
    CHECK(rep.h1_nodal - rep.h1_smooth == corr);
  }
  CHECK_THROWS_AS(nodal_consistency(4), std::invalid_argument);
  CHECK_THROWS_AS(nodal_consistency(6), std::invalid_argument);
}
