#pragma once

// Enumerative projective geometry over finite fields: points and lines of P^n,
// lines on q-bic hypersurfaces, intersection divisors of lines with plane
// q-bic curves, and the cone-point projections of the nodal q-bic surface.
//
// Points are normalized coordinate vectors (first nonzero entry 1); lines are
// 2-dimensional Subspaces, so their reduced echelon bases deduplicate them.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qbic/qbic.hpp"

namespace qbic {

using Point = std::vector<Fel>;

inline std::uint64_t count_projective_points(std::uint64_t order, std::uint32_t n) {
  std::uint64_t total = 0, pw = 1;
  for (std::uint32_t i = 0; i <= n; ++i, pw *= order) total += pw;
  return total;
}

// Gaussian binomial [n+1 choose 2]: lines of P^n, counted by echelon pattern.
inline std::uint64_t count_projective_lines(std::uint64_t order, std::uint32_t n) {
  std::uint64_t total = 0;
  for (std::uint32_t j1 = 0; j1 <= n; ++j1)
    for (std::uint32_t j2 = j1 + 1; j2 <= n; ++j2) {
      std::uint64_t pw = 1;
      for (std::uint32_t i = 0; i < (n - j1 - 1) + (n - j2); ++i) pw *= order;
      total += pw;
    }
  return total;
}

namespace detail {

constexpr std::uint64_t kEnumDefaultCap = 2'000'000;
constexpr std::uint64_t kEnumLargeCap = 30'000'000;

inline void check_enum_budget(std::uint64_t count, bool allow_large, const char* what) {
  std::uint64_t cap = allow_large ? kEnumLargeCap : kEnumDefaultCap;
  if (count > cap)
    throw std::length_error(std::string(what) + " enumeration of size " +
                            std::to_string(count) +
                            (allow_large ? " exceeds the hard cap"
                                         : " needs the allow_large opt-in"));
}

}  // namespace detail

// Visit every point of P^n(K) once, in a fixed order: by pivot position, then
// lexicographically in the free coordinates.
template <typename Fn>
void for_each_point(const FieldPtr& K, std::uint32_t n, Fn&& fn) {
  auto elems = K->elements();
  Point v(n + 1, 0);
  for (std::uint32_t pivot = 0; pivot <= n; ++pivot) {
    std::fill(v.begin(), v.end(), 0);
    v[pivot] = 1;
    std::uint32_t free = n - pivot;
    std::vector<std::size_t> idx(free, 0);
    for (;;) {
      for (std::uint32_t i = 0; i < free; ++i) v[pivot + 1 + i] = elems[idx[i]];
      fn(const_cast<const Point&>(v));
      std::uint32_t at = free;
      while (at > 0 && ++idx[at - 1] == elems.size()) idx[--at] = 0;
      if (at == 0) break;
    }
  }
}

inline std::vector<Point> enumerate_points(const FieldPtr& K, std::uint32_t n,
                                           bool allow_large = false) {
  std::uint64_t count = count_projective_points(K->order(), n);
  detail::check_enum_budget(count, allow_large, "point");
  std::vector<Point> out;
  out.reserve(count);
  for_each_point(K, n, [&](const Point& v) { out.push_back(v); });
  return out;
}

// Visit every line of P^n(K) once, as a canonical echelon-basis Subspace:
// pivot columns j1 < j2, then lexicographic free entries.
template <typename Fn>
void for_each_line(const FieldPtr& K, std::uint32_t n, Fn&& fn) {
  auto elems = K->elements();
  for (std::uint32_t j1 = 0; j1 <= n; ++j1)
    for (std::uint32_t j2 = j1 + 1; j2 <= n; ++j2) {
      // row 0 is free in columns > j1 except j2; row 1 is free in columns > j2
      std::vector<std::uint32_t> slots;  // row-major indices into B.a
      for (std::uint32_t c = j1 + 1; c <= n; ++c)
        if (c != j2) slots.push_back(c);
      for (std::uint32_t c = j2 + 1; c <= n; ++c) slots.push_back((n + 1) + c);
      Mat B(K, 2, n + 1);
      B.at(0, j1) = 1;
      B.at(1, j2) = 1;
      std::vector<std::size_t> idx(slots.size(), 0);
      for (;;) {
        for (std::size_t i = 0; i < slots.size(); ++i)
          B.a[slots[i]] = elems[idx[i]];
        fn(Subspace{K, n + 1, B});
        std::size_t at = idx.size();
        while (at > 0 && ++idx[at - 1] == elems.size()) idx[--at] = 0;
        if (at == 0) break;
      }
    }
}

inline std::vector<Subspace> enumerate_lines(const FieldPtr& K, std::uint32_t n,
                                             bool allow_large = false) {
  std::uint64_t count = count_projective_lines(K->order(), n);
  detail::check_enum_budget(count, allow_large, "line");
  std::vector<Subspace> out;
  out.reserve(count);
  for_each_line(K, n, [&](const Subspace& L) { out.push_back(L); });
  return out;
}

inline Subspace line_through(const FieldPtr& K, const Point& P, const Point& Q) {
  Mat B(K, 2, P.size());
  for (std::size_t j = 0; j < P.size(); ++j) {
    B.at(0, j) = P[j];
    B.at(1, j) = Q[j];
  }
  Subspace L = span_of_rows(B);
  if (L.dim() != 2) throw std::invalid_argument("points do not span a line");
  return L;
}

// The |K| + 1 rational points of a line, normalized.
inline std::vector<Point> points_on_line(const Subspace& L) {
  if (L.dim() != 2) throw std::invalid_argument("not a line");
  const Field& K = *L.F;
  std::vector<Point> out;
  out.reserve(K.order() + 1);
  std::size_t w = L.ambient;
  for (auto t : L.F->elements()) {
    Point v(w);
    for (std::size_t j = 0; j < w; ++j)
      v[j] = K.add(L.basis.at(0, j), K.mul(t, L.basis.at(1, j)));
    out.push_back(normalize_point(K, std::move(v)));
  }
  Point v(w);
  for (std::size_t j = 0; j < w; ++j) v[j] = L.basis.at(1, j);
  out.push_back(normalize_point(K, std::move(v)));
  return out;
}

// A line lies in X iff beta vanishes on the four ordered basis pairs.
inline bool line_in_hypersurface(const QbicForm& F, const Subspace& L) {
  if (L.dim() != 2 || L.ambient != F.gram.rows)
    throw std::invalid_argument("need a line in the ambient space of the form");
  Point u(L.ambient), v(L.ambient);
  for (std::size_t j = 0; j < L.ambient; ++j) {
    u[j] = L.basis.at(0, j);
    v[j] = L.basis.at(1, j);
  }
  return beta_pair(F, u, u) == 0 && beta_pair(F, u, v) == 0 &&
         beta_pair(F, v, u) == 0 && beta_pair(F, v, v) == 0;
}

template <typename Fn>
void for_each_fano_line(const QbicForm& F, Fn&& fn) {
  for_each_line(F.K, F.n(), [&](const Subspace& L) {
    if (line_in_hypersurface(F, L)) fn(L);
  });
}

inline std::vector<Subspace> fano_lines(const QbicForm& F, bool allow_large = false) {
  detail::check_enum_budget(count_projective_lines(F.K->order(), F.n()), allow_large,
                            "line");
  std::vector<Subspace> out;
  for_each_fano_line(F, [&](const Subspace& L) { out.push_back(L); });
  return out;
}

inline std::uint64_t count_fano_lines(const QbicForm& F, bool allow_large = false) {
  detail::check_enum_budget(count_projective_lines(F.K->order(), F.n()), allow_large,
                            "line");
  std::uint64_t c = 0;
  for_each_fano_line(F, [&](const Subspace&) { ++c; });
  return c;
}

inline std::vector<Subspace> fano_lines_through(const QbicForm& F, const Point& x,
                                                bool allow_large = false) {
  detail::check_enum_budget(count_projective_lines(F.K->order(), F.n()), allow_large,
                            "line");
  std::vector<Subspace> out;
  for_each_fano_line(F, [&](const Subspace& L) {
    if (subspace_member(L, x)) out.push_back(L);
  });
  return out;
}

// Hermitian action on lines: U -> sigma_beta(U^(q^2)); permutes the Fano lines
// of a nonsingular form.
inline Subspace line_phi(const QbicForm& F, const Subspace& L) {
  Mat A = hermitian_descent_matrix(F);
  Mat B = mat_mul(twist(L.basis, 2 * F.e), transpose(A));
  Subspace out = span_of_rows(B);
  if (out.dim() != 2) throw std::logic_error("phi collapsed a line");
  return out;
}

// ---- divisors cut on a line by a plane q-bic curve ----

struct DivisorPoint {
  Point param;         // [s : t] on the line, normalized
  Point point;         // s P + t Q in the ambient plane, normalized
  std::uint32_t mult;  // multiplicity >= 1
};

struct DivisorOnLine {
  std::vector<DivisorPoint> points;
  std::uint32_t unsplit_degree = 0;  // degree of the factor with no rational root
};

namespace detail {

// Binary forms as coefficient vectors: c[k] is the coefficient of s^(d-k) t^k.
inline Fel bform_eval(const Field& K, const std::vector<Fel>& c, Fel a, Fel b) {
  std::size_t d = c.size() - 1;
  Fel acc = 0;
  for (std::size_t k = 0; k <= d; ++k) {
    Fel term = c[k];
    for (std::size_t i = 0; i < d - k; ++i) term = K.mul(term, a);
    for (std::size_t i = 0; i < k; ++i) term = K.mul(term, b);
    acc = K.add(acc, term);
  }
  return acc;
}

// Exact division by the linear form (b s - a t) vanishing at [a : b].
inline std::optional<std::vector<Fel>> bform_divide_root(const Field& K,
                                                         const std::vector<Fel>& c,
                                                         Fel a, Fel b) {
  std::size_t d = c.size() - 1;
  if (d == 0) return std::nullopt;
  std::vector<Fel> quot(d);
  if (b != 0) {
    Fel binv = K.inv(b);
    Fel carry = 0;  // quotient coefficient from the previous step
    for (std::size_t k = 0; k < d; ++k) {
      Fel num = K.add(c[k], K.mul(a, carry));  // -tau = +a
      quot[k] = K.mul(num, binv);
      carry = quot[k];
    }
    Fel rem = K.add(c[d], K.mul(a, carry));
    if (rem != 0) return std::nullopt;
    return quot;
  }
  // linear form proportional to t: divisible iff the s^d coefficient vanishes
  if (c[0] != 0) return std::nullopt;
  Fel tinv = K.inv(K.neg(a));
  for (std::size_t k = 0; k < d; ++k) quot[k] = K.mul(c[k + 1], tinv);
  return quot;
}

inline Point normalize_param(const Field& K, Fel a, Fel b) {
  return normalize_point(K, {a, b});
}

}  // namespace detail

// Restrict the form to the line span(P, Q): f(sP + tQ) as a binary form of
// degree q+1 with at most four nonzero coefficients,
//   beta(P,P) s^{q+1} + beta(P,Q) s^q t + beta(Q,P) s t^q + beta(Q,Q) t^{q+1}.
inline std::vector<Fel> line_restriction_coeffs(const QbicForm& F, const Subspace& L) {
  Point P(L.ambient), Q(L.ambient);
  for (std::size_t j = 0; j < L.ambient; ++j) {
    P[j] = L.basis.at(0, j);
    Q[j] = L.basis.at(1, j);
  }
  std::size_t qq = static_cast<std::size_t>(F.q());
  std::vector<Fel> c(qq + 2, 0);
  c[0] = beta_pair(F, P, P);
  c[1] = beta_pair(F, P, Q);
  c[qq] = F.K->add(c[qq], beta_pair(F, Q, P));
  c[qq + 1] = beta_pair(F, Q, Q);
  return c;
}

namespace detail {

inline Point ambient_of_param(const Subspace& L, Fel a, Fel b) {
  const Field& K = *L.F;
  Point v(L.ambient);
  for (std::size_t j = 0; j < L.ambient; ++j)
    v[j] = K.add(K.mul(a, L.basis.at(0, j)), K.mul(b, L.basis.at(1, j)));
  return normalize_point(K, std::move(v));
}

}  // namespace detail

// Root scan: peel off every rational root of the restriction with its exact
// multiplicity by synthetic division; whatever remains has no rational root.
inline DivisorOnLine divisor_by_root_scan(const QbicForm& F, const Subspace& L) {
  const Field& K = *F.K;
  std::vector<Fel> work = line_restriction_coeffs(F, L);
  bool zero = true;
  for (auto x : work) zero &= (x == 0);
  if (zero) throw std::invalid_argument("line lies in the curve");
  DivisorOnLine div;
  auto try_root = [&](Fel a, Fel b) {
    if (detail::bform_eval(K, work, a, b) != 0) return;
    std::uint32_t mult = 0;
    while (auto quot = detail::bform_divide_root(K, work, a, b)) {
      work = std::move(*quot);
      ++mult;
      if (work.size() == 1) break;
    }
    if (mult > 0)
      div.points.push_back({detail::normalize_param(K, a, b),
                            detail::ambient_of_param(L, a, b), mult});
  };
  try_root(0, 1);
  for (auto t : K.elements()) {
    if (work.size() == 1) break;
    try_root(1, t);
  }
  div.unsplit_degree = static_cast<std::uint32_t>(work.size() - 1);
  return div;
}

// Divisor of X on a line not contained in X.  The tangent-type factorization
// g = l^q m is recognized first, without any root search: each partial
// derivative of g is the q-th power of a linear form (d_s g = a s^q + b2 t^q,
// d_t g = b1 s^q + g t^q), and when g is tangent type the nonvanishing partial
// is m_s l^q or m_t l^q, so l is recovered by entrywise q-th roots and m by
// exact division.  Otherwise fall back to the root scan.
inline DivisorOnLine line_curve_divisor(const QbicForm& F, const Subspace& L) {
  const Field& K = *F.K;
  std::vector<Fel> c = line_restriction_coeffs(F, L);
  bool zero = true;
  for (auto x : c) zero &= (x == 0);
  if (zero) throw std::invalid_argument("line lies in the curve");
  std::size_t qq = c.size() - 2;
  std::uint32_t qm = static_cast<std::uint32_t>(qq);
  for (auto [ls_q, lt_q] : {std::pair<Fel, Fel>{c[0], c[qq]}, {c[1], c[qq + 1]}}) {
    if (ls_q == 0 && lt_q == 0) continue;
    // root of l = ls s + lt t is [-lt : ls]
    Fel a = K.neg(K.frob_pow(lt_q, -static_cast<long long>(F.e)));
    Fel b = K.frob_pow(ls_q, -static_cast<long long>(F.e));
    std::vector<Fel> work = c;
    bool ok = true;
    for (std::uint32_t i = 0; i < qm && ok; ++i) {
      auto quot = detail::bform_divide_root(K, work, a, b);
      if (!quot) ok = false;
      else work = std::move(*quot);
    }
    if (!ok) continue;
    // work = m of degree 1; its root is [-m1 : m0]
    Fel ma = K.neg(work[1]), mb = work[0];
    DivisorOnLine div;
    Point pl = detail::normalize_param(K, a, b);
    Point pm = detail::normalize_param(K, ma, mb);
    if (pl == pm) {
      div.points.push_back({pl, detail::ambient_of_param(L, a, b), qm + 1});
    } else {
      div.points.push_back({pl, detail::ambient_of_param(L, a, b), qm});
      div.points.push_back({pm, detail::ambient_of_param(L, ma, mb), 1});
    }
    return div;
  }
  return divisor_by_root_scan(F, L);
}

// Fano lines meeting the singular locus of X; the singular support is the
// projectivized descent of ker G^T.
inline std::vector<Subspace> singular_fano_locus(const QbicForm& F,
                                                 bool allow_large = false) {
  Subspace S = left_orthogonal_descent(F);
  std::vector<Subspace> out;
  if (S.dim() == 0) return out;
  for (const auto& L : fano_lines(F, allow_large))
    if (intersect(L, S).dim() >= 1) out.push_back(L);
  return out;
}

// ---- the nodal q-bic surface X0 and its cone-point projections ----

// X0 = V(x0^q x1 + x0 x1^q + x2^{q+1} + x3^q x4) in P^4, of type 1^3 + N2,
// with smooth cone point x- = e3 and node x+ = e4; C is the smooth plane curve
// V(x0^q x1 + x0 x1^q + x2^{q+1}) in the plane W = span(e0, e1, e2).
struct NodalGeometry {
  QbicForm X0;
  QbicForm C;
  Point x_plus;
  Point x_minus;
};

inline QbicForm nodal_curve_form(std::uint32_t p, std::uint32_t e, FieldPtr K) {
  Mat G(K, 3, 3);
  G.at(0, 1) = 1;
  G.at(1, 0) = 1;
  G.at(2, 2) = 1;
  return make_form(p, e, std::move(K), std::move(G));
}

inline NodalGeometry make_nodal(std::uint32_t p, std::uint32_t e, FieldPtr K) {
  Mat G(K, 5, 5);
  G.at(0, 1) = 1;
  G.at(1, 0) = 1;
  G.at(2, 2) = 1;
  G.at(3, 4) = 1;
  NodalGeometry NG{make_form(p, e, K, std::move(G)), nodal_curve_form(p, e, K),
                   {0, 0, 0, 0, 1}, {0, 0, 0, 1, 0}};
  return NG;
}

// Project a line of X0 avoiding both cone points into the plane of C and read
// off the tangency and residual points of the (always tangent) image line.
inline std::pair<Point, Point> nodal_phi(const NodalGeometry& NG, const Subspace& L) {
  if (!line_in_hypersurface(NG.X0, L))
    throw std::invalid_argument("line does not lie in X0");
  if (subspace_member(L, NG.x_plus) || subspace_member(L, NG.x_minus))
    throw std::invalid_argument("line passes through a cone point");
  Mat B(L.F, 2, 3);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) B.at(i, j) = L.basis.at(i, j);
  Subspace L0 = span_of_rows(B);
  if (L0.dim() != 2) throw std::logic_error("projection collapsed the line");
  DivisorOnLine div = line_curve_divisor(NG.C, L0);
  std::uint32_t qm = static_cast<std::uint32_t>(NG.C.q());
  if (div.points.size() == 1 && div.points[0].mult == qm + 1)
    return {div.points[0].point, div.points[0].point};
  if (div.points.size() == 2) {
    const auto& first = div.points[0].mult == qm ? div.points[0] : div.points[1];
    const auto& second = div.points[0].mult == qm ? div.points[1] : div.points[0];
    if (first.mult == qm && second.mult == 1) return {first.point, second.point};
  }
  throw std::logic_error("projected line is not tangent to C");
}

inline Point nodal_phi_plus(const NodalGeometry& NG, const Subspace& L) {
  return nodal_phi(NG, L).first;
}

inline Point nodal_phi_minus(const NodalGeometry& NG, const Subspace& L) {
  return nodal_phi(NG, L).second;
}

}  // namespace qbic
