#pragma once
// Closed-form numerical invariants of the Fano surface S of lines on a smooth
// q-bic threefold, together with the variants for the mildly degenerate
// threefold of type 1^3 + N_2 whose Fano surface S_0 is nonnormal.
//
// Everything here is a polynomial in q evaluated exactly:
//
//   deg_plucker  degree of S in the Pluecker embedding, (q+1)^2 (q^2+1)
//   c1_sq, c2    Chern numbers of S; they satisfy Noether's identity
//                12 chi(O_S) = c1^2 + c2
//   bmy_defect   c1^2 - 3 c2 = q^2 (q+1)^2 (q^2 - 3q + 1); positive for
//                q >= 3, so S violates the Bogomolov-Miyaoka-Yau bound and
//                cannot lift to characteristic zero, while q = 2 gives -36
//   betti1_half  q(q-1)(q^2+1)/2, half the first etale Betti number and the
//                dimension of the (supersingular) Albanese of S
//
// Coherent cohomology of O_S is only known in closed form when q = p is
// prime, so h1/h2 are optional fields rather than extrapolations: for
// composite q the prime-case formulas are simply wrong.  When populated,
//
//   h1_smooth = p(p-1)(p^2+1)/2          h2_smooth = p(p-1)(5p^4-2p^2-5p-2)/12
//   h*_nodal  = h*_smooth + p(p-1)(p-2)/6
//
// and both variants satisfy 1 - h1 + h2 = chi(O).  The nodal h1 equals the
// total dimension of H^0 of the sheaves F_i on the associated smooth q-bic
// curve (theorem_dims in reps.hpp); nodal_consistency checks that identity
// and the correction term, tying the surface-side closed forms to the
// curve-side linear algebra.
//
// hermitian_blowup_count = q^3 + 1 is the number of blown-up points on the
// normalization of S_0 (the Hermitian points of the curve), and
// conductor_delta = 2q^2 - q - 2 is the degree of the conductor divisor of
// the normalization map.

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "qbic/reps.hpp"

namespace qbic {

struct SurfaceInvariants {
  std::int64_t q = 0;
  std::int64_t deg_plucker = 0;
  std::int64_t c1_sq = 0;
  std::int64_t c2 = 0;
  std::int64_t chi_O = 0;
  std::int64_t bmy_defect = 0;
  std::optional<std::int64_t> h1_smooth;
  std::optional<std::int64_t> h2_smooth;
  std::optional<std::int64_t> h1_nodal;
  std::optional<std::int64_t> h2_nodal;
  std::int64_t betti1_half = 0;
  std::int64_t hermitian_blowup_count = 0;
  std::int64_t conductor_delta = 0;
};

inline SurfaceInvariants surface_invariants(std::uint32_t q32) {
  std::uint32_t p = detail::char_of_prime_power(q32);  // throws if not a prime power
  const std::int64_t q = q32;

  SurfaceInvariants inv;
  inv.q = q;
  const std::int64_t s = (q + 1) * (q + 1);  // (q+1)^2 divides everything surface-side
  inv.deg_plucker = s * (q * q + 1);
  inv.c1_sq = s * (q * q + 1) * (2 * q - 3) * (2 * q - 3);
  inv.c2 = s * (q * q * q * q - 3 * q * q * q + 4 * q * q - 4 * q + 3);
  std::int64_t chi_num = s * (5 * q * q * q * q - 15 * q * q * q + 17 * q * q - 16 * q + 12);
  if (chi_num % 12 != 0) throw std::logic_error("chi(O_S) is not integral");
  inv.chi_O = chi_num / 12;
  inv.bmy_defect = inv.c1_sq - 3 * inv.c2;
  inv.betti1_half = q * (q - 1) * (q * q + 1) / 2;
  inv.hermitian_blowup_count = q * q * q + 1;
  inv.conductor_delta = 2 * q * q - q - 2;

  if (12 * inv.chi_O != inv.c1_sq + inv.c2)
    throw std::logic_error("Noether identity failed");
  if (inv.bmy_defect != q * q * s * (q * q - 3 * q + 1))
    throw std::logic_error("BMY defect factorization failed");

  if (q32 == p) {
    inv.h1_smooth = q * (q - 1) * (q * q + 1) / 2;
    inv.h2_smooth = q * (q - 1) * (5 * q * q * q * q - 2 * q * q - 5 * q - 2) / 12;
    std::int64_t corr = q * (q - 1) * (q - 2) / 6;
    inv.h1_nodal = *inv.h1_smooth + corr;
    inv.h2_nodal = *inv.h2_smooth + corr;
    if (1 - *inv.h1_smooth + *inv.h2_smooth != inv.chi_O ||
        1 - *inv.h1_nodal + *inv.h2_nodal != inv.chi_O)
      throw std::logic_error("Euler characteristic chain failed");
  }
  return inv;
}

// Cross-check between the closed-form nodal cohomology and the curve-side
// dimension count: h^1(S_0, O) must equal the total dimension of the graded
// pieces H^0(C, F_i), and the nodal-minus-smooth correction in both degrees
// is p(p-1)(p-2)/6.  Throws std::logic_error if any of that fails.
struct NodalConsistency {
  std::int64_t p = 0;
  std::int64_t correction = 0;
  std::int64_t h1_smooth = 0;
  std::int64_t h1_nodal = 0;
  std::int64_t curve_section_total = 0;
};

inline NodalConsistency nodal_consistency(std::uint32_t p) {
  if (!detail::is_prime(p)) throw std::invalid_argument("p must be prime");
  SurfaceInvariants inv = surface_invariants(p);

  NodalConsistency rep;
  rep.p = p;
  rep.correction = rep.p * (rep.p - 1) * (rep.p - 2) / 6;
  rep.h1_smooth = *inv.h1_smooth;
  rep.h1_nodal = *inv.h1_nodal;
  rep.curve_section_total = theorem_total(p);

  std::int64_t by_degree = 0;
  for (const auto& [i, dim] : theorem_dims(p).entries) {
    (void)i;
    by_degree += dim;
  }
  if (by_degree != rep.curve_section_total)
    throw std::logic_error("graded dimension table disagrees with its total");
  if (rep.h1_nodal != rep.curve_section_total)
    throw std::logic_error("nodal h^1 disagrees with the curve section count");
  if (rep.h1_nodal - rep.h1_smooth != rep.correction ||
      *inv.h2_nodal - *inv.h2_smooth != rep.correction)
    throw std::logic_error("nodal correction term failed");
  return rep;
}

}  // namespace qbic
