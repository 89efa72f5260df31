#pragma once

// Monomial-basis sheaf cohomology.  H^n(P^n, O(d)) has the basis
// 1/(x0^{i0} ... xn^{in}) with all i_j >= 1 and sum i_j = -d; homogeneous
// polynomials act by contraction (termwise exponent subtraction, dropping any
// result with an exponent <= 0).  On top of this sit the Frobenius action on
// H^{n-1}(X, O_X), H^1 of twists of a plane q-bic curve, the nu^# kernel
// pipeline for the graded pieces H^0(C, F_i), and homogeneous bundle
// cohomology on P^2 via the Euler-sequence resolution.
//
// The canonical cohomology curve is f = x^q y + x y^q - z^{q+1}; the nodal
// geometry of fano.hpp spells its curve with +z^{q+1}, which differs only by
// scaling z by a (q+1)-st root of -1.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qbic/qbic.hpp"

namespace qbic {

// Exponent vector (i0, ..., in) of a basis class 1/(x0^{i0} ... xn^{in}).
using CohClass = std::vector<std::uint32_t>;

// Basis of H^n(P^n, O(d)) for d <= -(n+1), size C(-d-1, n); classes are
// listed in descending lexicographic order of their exponent vectors.
inline std::vector<CohClass> h_top_basis(std::uint32_t n, std::int64_t d) {
  std::vector<CohClass> out;
  if (d > -static_cast<std::int64_t>(n) - 1) return out;
  std::uint64_t total = static_cast<std::uint64_t>(-d);
  CohClass cur(n + 1);
  std::function<void(std::uint32_t, std::uint64_t)> rec = [&](std::uint32_t at,
                                                              std::uint64_t rest) {
    if (at == n) {
      cur[at] = static_cast<std::uint32_t>(rest);
      out.push_back(cur);
      return;
    }
    for (std::uint64_t v = rest - (n - at); v >= 1; --v) {
      cur[at] = static_cast<std::uint32_t>(v);
      rec(at + 1, rest - v);
    }
  };
  rec(0, total);
  return out;
}

// Homogeneous polynomials with sparse exponent-vector storage.
struct SparsePoly {
  FieldPtr K;
  std::uint32_t nvars = 0;
  std::int64_t degree = 0;
  std::map<std::vector<std::uint32_t>, Fel> terms;
};

inline void sparse_add_term(SparsePoly& P, std::vector<std::uint32_t> exps, Fel c) {
  if (c == 0) return;
  auto it = P.terms.find(exps);
  if (it == P.terms.end()) {
    P.terms.emplace(std::move(exps), c);
    return;
  }
  it->second = P.K->add(it->second, c);
  if (it->second == 0) P.terms.erase(it);
}

inline SparsePoly sparse_mul(const SparsePoly& A, const SparsePoly& B) {
  if (A.nvars != B.nvars || !A.K->same(*B.K))
    throw std::invalid_argument("sparse_mul operand mismatch");
  SparsePoly R{A.K, A.nvars, A.degree + B.degree, {}};
  for (const auto& [ea, ca] : A.terms)
    for (const auto& [eb, cb] : B.terms) {
      std::vector<std::uint32_t> e(A.nvars);
      for (std::uint32_t i = 0; i < A.nvars; ++i) e[i] = ea[i] + eb[i];
      sparse_add_term(R, std::move(e), A.K->mul(ca, cb));
    }
  return R;
}

inline SparsePoly sparse_pow(const SparsePoly& A, std::uint64_t k) {
  SparsePoly R{A.K, A.nvars, 0, {}};
  R.terms.emplace(std::vector<std::uint32_t>(A.nvars, 0), Fel{1});
  for (std::uint64_t i = 0; i < k; ++i) R = sparse_mul(R, A);
  return R;
}

inline Fel sparse_eval(const SparsePoly& P, const std::vector<Fel>& x) {
  if (x.size() != P.nvars) throw std::invalid_argument("sparse_eval arity");
  const Field& K = *P.K;
  Fel acc = 0;
  for (const auto& [e, c] : P.terms) {
    Fel term = c;
    for (std::uint32_t i = 0; i < P.nvars; ++i)
      term = K.mul(term, K.pow(x[i], e[i]));
    acc = K.add(acc, term);
  }
  return acc;
}

// f(x) = sum_{i,j} G[i][j] x_i^q x_j as a sparse polynomial over the form's field.
inline SparsePoly sparse_from_form(const QbicForm& F) {
  std::uint32_t nv = static_cast<std::uint32_t>(F.gram.rows);
  std::uint64_t qq = F.q();
  SparsePoly P{F.K, nv, static_cast<std::int64_t>(qq) + 1, {}};
  for (std::uint32_t i = 0; i < nv; ++i)
    for (std::uint32_t j = 0; j < nv; ++j) {
      if (F.gram.at(i, j) == 0) continue;
      std::vector<std::uint32_t> e(nv, 0);
      e[i] += static_cast<std::uint32_t>(qq);
      e[j] += 1;
      sparse_add_term(P, std::move(e), F.gram.at(i, j));
    }
  return P;
}

// contract(P, xi): multiply 1/x^xi by P and keep only classes with all
// exponents >= 1; the surviving class is xi - m for each monomial m of P.
inline std::map<CohClass, Fel> contract(const SparsePoly& P, const CohClass& xi) {
  if (xi.size() != P.nvars) throw std::invalid_argument("contract arity mismatch");
  std::map<CohClass, Fel> out;
  for (const auto& [m, c] : P.terms) {
    CohClass eta(xi.size());
    bool keep = true;
    for (std::size_t i = 0; i < xi.size() && keep; ++i) {
      if (xi[i] <= m[i]) keep = false;
      else eta[i] = xi[i] - m[i];
    }
    if (!keep) continue;
    auto it = out.find(eta);
    if (it == out.end()) out.emplace(std::move(eta), c);
    else {
      it->second = P.K->add(it->second, c);
      if (it->second == 0) out.erase(it);
    }
  }
  return out;
}

// Matrix of xi -> contract(f^{q-1}, xi^{(q)}) on H^{n-1}(X, O_X), identified
// with H^n(P^n, O(-q-1)) through the ideal-sheaf sequence.  The composite of
// the Frobenius with this contraction is the Frobenius of X on top cohomology,
// and the result must vanish identically.
inline Mat frobenius_action_on_X(const QbicForm& F) {
  std::uint32_t n = F.n();
  if (n < 2) throw std::invalid_argument("frobenius_action_on_X needs n >= 2");
  std::uint64_t qq = F.q();
  SparsePoly fq1 = sparse_pow(sparse_from_form(F), qq - 1);
  auto basis = h_top_basis(n, -static_cast<std::int64_t>(qq) - 1);
  std::map<CohClass, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
  Mat M(F.K, basis.size(), basis.size());
  for (std::size_t col = 0; col < basis.size(); ++col) {
    CohClass twisted(basis[col]);
    for (auto& e : twisted) e = static_cast<std::uint32_t>(e * qq);
    for (const auto& [eta, c] : contract(fq1, twisted)) {
      auto it = index.find(eta);
      if (it == index.end()) throw std::logic_error("contraction left the basis");
      M.at(it->second, col) = c;
    }
  }
  return M;
}

// H^1(C, O_C(d)) as the kernel of contract(f, .): H^2(O(d-q-1)) -> H^2(O(d)).
// Meaningful for every d via the ideal-sheaf sequence; for d >= -2 the target
// is zero and the kernel is everything.
struct CurveH1 {
  std::vector<CohClass> ambient;  // basis of H^2(P^2, O(d-q-1))
  Mat kernel;                     // rows = coordinates of a kernel basis
  [[nodiscard]] std::size_t dim() const { return kernel.rows; }
};

inline Mat contract_map_matrix(const SparsePoly& f,
                               const std::vector<CohClass>& source,
                               const std::vector<CohClass>& target,
                               std::uint32_t twist = 1) {
  std::map<CohClass, std::size_t> index;
  for (std::size_t i = 0; i < target.size(); ++i) index.emplace(target[i], i);
  Mat M(f.K, target.size(), source.size());
  for (std::size_t col = 0; col < source.size(); ++col) {
    CohClass s(source[col]);
    for (auto& e : s) e *= twist;
    for (const auto& [eta, c] : contract(f, s)) {
      auto it = index.find(eta);
      if (it == index.end()) throw std::logic_error("contraction left the basis");
      M.at(it->second, col) = c;
    }
  }
  return M;
}

inline CurveH1 curve_h1_basis(const QbicForm& C, std::int64_t d) {
  if (C.gram.rows != 3) throw std::invalid_argument("curve_h1_basis needs a plane curve");
  std::int64_t qq = static_cast<std::int64_t>(C.q());
  SparsePoly f = sparse_from_form(C);
  auto source = h_top_basis(2, d - qq - 1);
  auto target = h_top_basis(2, d);
  Mat M = contract_map_matrix(f, source, target);
  return CurveH1{std::move(source), kernel_basis(M)};
}

// ---- canonical curve, theta, and the dense mod-p nu pipeline ----

// theta~ = z * sum_{j=0}^{q} (-1)^j x^{(q-j)(q-1)} y^{j(q-1)}, degree q^2-q+1;
// multiplying it by x^q y + x y^q telescopes to (x^{q^2} y - x y^{q^2}) z, and
// its zero locus on C is exactly the Hermitian locus.
inline SparsePoly theta_poly(std::uint32_t q, FieldPtr K) {
  SparsePoly P{K, 3, static_cast<std::int64_t>(q) * q - q + 1, {}};
  Fel one = K->from_int(1);
  Fel minus_one = K->neg(one);
  for (std::uint32_t j = 0; j <= q; ++j)
    sparse_add_term(P, {(q - j) * (q - 1), j * (q - 1), 1},
                    j % 2 == 0 ? one : minus_one);
  return P;
}

namespace detail {

inline std::uint32_t char_of_prime_power(std::uint32_t q) {
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t m = q;
    while (m % p == 0) m /= p;
    if (m != 1) throw std::invalid_argument("q must be a prime power");
    return p;
  }
  throw std::invalid_argument("q must be a prime power");
}

}  // namespace detail

// Canonical curve x^q y + x y^q - z^{q+1} over a field of the right characteristic.
inline QbicForm canonical_curve(std::uint32_t q, FieldPtr K) {
  std::uint32_t p = detail::char_of_prime_power(q);
  std::uint32_t e = 0;
  for (std::uint32_t m = q; m > 1; m /= p) ++e;
  Mat G(K, 3, 3);
  G.at(0, 1) = 1;
  G.at(1, 0) = 1;
  G.at(2, 2) = K->neg(K->from_int(1));
  return make_form(p, e, std::move(K), std::move(G));
}

inline SparsePoly theta_poly(std::uint32_t q) {
  return theta_poly(q, Field::make(detail::char_of_prime_power(q), 1));
}

namespace detail {

// Dense homogeneous polynomial in x, y, z over a prime field: coefficient of
// x^a y^b z^{deg-a-b} lives at index a*(deg+1)+b.
struct Dense3 {
  FieldPtr Fp;
  std::uint32_t deg = 0;
  std::vector<Fel> c;

  Dense3(FieldPtr F, std::uint32_t d)
      : Fp(std::move(F)), deg(d), c(static_cast<std::size_t>(d + 1) * (d + 1), 0) {}
  [[nodiscard]] Fel at(std::uint32_t a, std::uint32_t b) const {
    return c[static_cast<std::size_t>(a) * (deg + 1) + b];
  }
  Fel& at(std::uint32_t a, std::uint32_t b) {
    return c[static_cast<std::size_t>(a) * (deg + 1) + b];
  }
};

inline Dense3 dense_from_sparse(const SparsePoly& P) {
  Dense3 D(P.K, static_cast<std::uint32_t>(P.degree));
  for (const auto& [e, coef] : P.terms) D.at(e[0], e[1]) = coef;
  return D;
}

// Multiply by a sparse polynomial with few terms; the workhorse of the
// f-power and theta-power builds.
inline Dense3 dense_mul_sparse(const Dense3& A, const SparsePoly& B) {
  const Field& K = *A.Fp;
  Dense3 R(A.Fp, A.deg + static_cast<std::uint32_t>(B.degree));
  for (const auto& [e, coef] : B.terms) {
    std::uint32_t ax = e[0], ay = e[1];
    for (std::uint32_t a = 0; a <= A.deg; ++a)
      for (std::uint32_t b = 0; b + a <= A.deg; ++b) {
        Fel v = A.at(a, b);
        if (v == 0) continue;
        Fel& slot = R.at(a + ax, b + ay);
        slot = K.add(slot, K.mul(v, coef));
      }
  }
  return R;
}

// Coefficient of the monomial exps (summing to D.deg), else zero.
inline Fel dense_coeff(const Dense3& D, const CohClass& e) {
  if (e[0] + e[1] + e[2] != D.deg) return 0;
  return D.at(e[0], e[1]);
}

}  // namespace detail

// The restricted nu_i map on cohomology: the matrix of
//   xi -> contract(f^{q^2-1} theta~^i, xi^{(q^2)})
// from the kernel basis curve_h1_basis(-i) = H^1(C, O_C(-i)) to the ambient
// basis of H^2(P^2, O(-i(q-1)-q-1)); all coefficients lie in the prime field,
// where the q^2-power twist is linear.
struct NuData {
  Mat matrix;              // target ambient classes x kernel coordinates
  std::size_t source_dim;  // dim H^1(C, O_C(-i))
  std::size_t target_dim;  // ambient target dimension
};

inline NuData nu_matrix(std::uint32_t q, std::uint32_t i) {
  if (i > q) throw std::invalid_argument("nu_matrix needs 0 <= i <= q");
  std::uint32_t p = detail::char_of_prime_power(q);
  auto Fp = Field::make(p, 1);
  QbicForm C = canonical_curve(q, Fp);
  SparsePoly f = sparse_from_form(C);
  // P_i = f^{q^2-1} * theta~^i, built densely
  detail::Dense3 P = detail::dense_from_sparse(f);
  for (std::uint64_t k = 1; k < static_cast<std::uint64_t>(q) * q - 1; ++k)
    P = detail::dense_mul_sparse(P, f);
  SparsePoly theta = theta_poly(q, Fp);
  for (std::uint32_t k = 0; k < i; ++k) P = detail::dense_mul_sparse(P, theta);

  CurveH1 src = curve_h1_basis(C, -static_cast<std::int64_t>(i));
  std::int64_t tgt_sum = static_cast<std::int64_t>(i) * (q - 1) + q + 1;
  auto target = h_top_basis(2, -tgt_sum);
  // ambient matrix A[eta][xi] = coefficient of P at q^2 xi - eta
  Mat A(Fp, target.size(), src.ambient.size());
  for (std::size_t col = 0; col < src.ambient.size(); ++col)
    for (std::size_t row = 0; row < target.size(); ++row) {
      CohClass m(3);
      bool ok = true;
      for (int k = 0; k < 3 && ok; ++k) {
        std::uint64_t need = static_cast<std::uint64_t>(q) * q * src.ambient[col][k];
        if (target[row][k] > need) ok = false;
        else m[k] = static_cast<std::uint32_t>(need - target[row][k]);
      }
      if (ok) A.at(row, col) = detail::dense_coeff(P, m);
    }
  Mat B = mat_mul(A, transpose(src.kernel));
  // the image must consist of curve classes: contract(f, .) kills it
  std::int64_t level = -static_cast<std::int64_t>(i) * (q - 1);
  auto curve_target = h_top_basis(2, level);
  if (!curve_target.empty()) {
    Mat Mf = contract_map_matrix(f, target, curve_target);
    Mat Z = mat_mul(Mf, B);
    for (auto v : Z.a)
      if (v != 0) throw std::logic_error("nu image escapes the curve subspace");
  }
  return NuData{std::move(B), src.dim(), target.size()};
}

// dim H^0(C, F_i) for 0 <= i <= q-1: the kernel of the restricted nu_i.
// i = q is excluded: the divided-power identification behind the direct
// method only holds in degrees below q.
inline std::uint32_t nu_kernel_dim(std::uint32_t q, std::uint32_t i) {
  if (i >= q) throw std::invalid_argument("nu_kernel_dim needs 0 <= i <= q-1");
  NuData nd = nu_matrix(q, i);
  return static_cast<std::uint32_t>(nd.source_dim - rank(nd.matrix));
}

// Full direct table (i, dim H^0(C, F_i)) for 0 <= i <= q-1, sharing one
// incremental build of the product polynomials.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> f_table_direct(
    std::uint32_t q) {
  std::uint32_t p = detail::char_of_prime_power(q);
  auto Fp = Field::make(p, 1);
  QbicForm C = canonical_curve(q, Fp);
  SparsePoly f = sparse_from_form(C);
  SparsePoly theta = theta_poly(q, Fp);
  detail::Dense3 P = detail::dense_from_sparse(f);
  for (std::uint64_t k = 1; k < static_cast<std::uint64_t>(q) * q - 1; ++k)
    P = detail::dense_mul_sparse(P, f);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t i = 0; i < q; ++i) {
    CurveH1 src = curve_h1_basis(C, -static_cast<std::int64_t>(i));
    std::int64_t tgt_sum = static_cast<std::int64_t>(i) * (q - 1) + q + 1;
    auto target = h_top_basis(2, -tgt_sum);
    Mat A(Fp, target.size(), src.ambient.size());
    for (std::size_t col = 0; col < src.ambient.size(); ++col)
      for (std::size_t row = 0; row < target.size(); ++row) {
        CohClass m(3);
        bool ok = true;
        for (int k = 0; k < 3 && ok; ++k) {
          std::uint64_t need = static_cast<std::uint64_t>(q) * q * src.ambient[col][k];
          if (target[row][k] > need) ok = false;
          else m[k] = static_cast<std::uint32_t>(need - target[row][k]);
        }
        if (ok) A.at(row, col) = detail::dense_coeff(P, m);
      }
    Mat B = mat_mul(A, transpose(src.kernel));
    std::int64_t level = -static_cast<std::int64_t>(i) * (q - 1);
    auto curve_target = h_top_basis(2, level);
    if (!curve_target.empty()) {
      Mat Mf = contract_map_matrix(f, target, curve_target);
      Mat Z = mat_mul(Mf, B);
      for (auto v : Z.a)
        if (v != 0) throw std::logic_error("nu image escapes the curve subspace");
    }
    out.emplace_back(i, static_cast<std::uint32_t>(src.dim() - rank(B)));
    if (i + 1 < q) P = detail::dense_mul_sparse(P, theta);
  }
  return out;
}

// Graded dimension table of the H^0(C, F_i): direct mode lists the computed
// kernel dimensions for 0 <= i <= q-1; formula mode (prime q) covers the whole
// range 0 <= i <= 2q^2-q-2 from the closed-form description.
struct GradedDimTable {
  std::uint32_t q = 0;
  bool formula = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

  [[nodiscard]] std::int64_t total() const {
    std::int64_t s = 0;
    for (auto [i, d] : entries) s += d;
    return s;
  }
};

inline GradedDimTable graded_table_direct(std::uint32_t q) {
  return GradedDimTable{q, false, f_table_direct(q)};
}

// ---- homogeneous bundle cohomology on P^2 ----

struct BundleCohomology {
  std::int64_t h0 = 0, h1 = 0, h2 = 0;
};

namespace detail {

inline std::int64_t binom2(std::int64_t m) { return m < 0 ? 0 : m * (m - 1) / 2; }

// monomial basis of Sym^b W, W = <e0, e1, e2>
inline std::vector<CohClass> sym_basis(std::int64_t b) {
  std::vector<CohClass> out;
  if (b < 0) return out;
  for (std::uint32_t i = 0; i <= b; ++i)
    for (std::uint32_t j = 0; i + j <= b; ++j)
      out.push_back({i, j, static_cast<std::uint32_t>(b) - i - j});
  return out;
}

struct EulerH2 {
  std::vector<CohClass> coh_basis;  // H^2(O(a-1)) classes
  std::vector<CohClass> sym;        // Sym^{b-1} W monomials
  Mat to_next;                      // H^2 Euler map into H^2(O(a)) x Sym^b W
};

// H^2 of the Euler resolution map Sym^{b-1}W (x) O(a-1) -> Sym^b W (x) O(a):
// (xi, mu) -> sum_i (x_i . xi) (x) (e_i mu).
inline EulerH2 euler_h2_map(std::int64_t a, std::int64_t b, const FieldPtr& K) {
  EulerH2 E{h_top_basis(2, a - 1), sym_basis(b - 1), Mat(K, 0, 0)};
  auto tgt_coh = h_top_basis(2, a);
  auto tgt_sym = sym_basis(b);
  std::map<CohClass, std::size_t> coh_index, sym_index;
  for (std::size_t i = 0; i < tgt_coh.size(); ++i) coh_index.emplace(tgt_coh[i], i);
  for (std::size_t i = 0; i < tgt_sym.size(); ++i) sym_index.emplace(tgt_sym[i], i);
  Mat M(K, tgt_coh.size() * tgt_sym.size(), E.coh_basis.size() * E.sym.size());
  for (std::size_t cx = 0; cx < E.coh_basis.size(); ++cx)
    for (std::size_t cs = 0; cs < E.sym.size(); ++cs) {
      std::size_t col = cx * E.sym.size() + cs;
      for (int i = 0; i < 3; ++i) {
        if (E.coh_basis[cx][i] <= 1) continue;  // x_i kills the class
        CohClass xi = E.coh_basis[cx];
        xi[i] -= 1;
        CohClass mu = E.sym[cs];
        mu[i] += 1;
        M.at(coh_index.at(xi) * tgt_sym.size() + sym_index.at(mu), col) = 1;
      }
    }
  E.to_next = std::move(M);
  return E;
}

}  // namespace detail

// (h0, h1, h2) of Sym^b(T_{P^2}(-1))(a) over the given field (only the
// characteristic matters).  h0 comes from the section count of the resolution;
// h1 and h2 are the kernel and cokernel of the H^2-level Euler map, whose
// 0/1 matrix has characteristic-dependent rank.
inline BundleCohomology homog_bundle_cohomology(std::int64_t a, std::int64_t b,
                                                const FieldPtr& field) {
  if (b < 0) throw std::invalid_argument("Sym^b needs b >= 0");
  using detail::binom2;
  BundleCohomology out;
  out.h0 = binom2(b + 2) * binom2(a + 2) - binom2(b + 1) * binom2(a + 1);
  detail::EulerH2 E = detail::euler_h2_map(a, b, field);
  std::size_t r = rank(E.to_next);
  out.h1 = static_cast<std::int64_t>(E.coh_basis.size() * E.sym.size() - r);
  out.h2 = static_cast<std::int64_t>(E.to_next.rows - r);
  return out;
}

// h^0 of the restriction of Sym^b(T(-1))(a) to the canonical curve with q = p,
// via 0 -> E(-p-1) -> E -> E|_C -> 0: the correction term is the kernel of
// multiplication by f from H^1(E(-p-1)) to H^1(E), computed on the H^2-level
// kernels of the Euler resolution.
inline std::int64_t curve_restriction_h0(std::int64_t a, std::int64_t b,
                                         std::uint32_t p) {
  if (b < 0) throw std::invalid_argument("Sym^b needs b >= 0");
  auto Fp = Field::make(p, 1);
  using detail::binom2;
  std::int64_t q1 = static_cast<std::int64_t>(p) + 1;
  std::int64_t h0_top = binom2(b + 2) * binom2(a + 2) - binom2(b + 1) * binom2(a + 1);
  std::int64_t h0_sub =
      binom2(b + 2) * binom2(a - q1 + 2) - binom2(b + 1) * binom2(a - q1 + 1);
  detail::EulerH2 Elow = detail::euler_h2_map(a - q1, b, Fp);
  Mat Klow = kernel_basis(Elow.to_next);  // rows: H^1(E(-p-1)) basis
  if (Klow.rows == 0) return h0_top - h0_sub;
  detail::EulerH2 Ehigh = detail::euler_h2_map(a, b, Fp);
  // multiplication by f on the component spaces: contract on the H^2 factor
  SparsePoly f = sparse_from_form(canonical_curve(p, Fp));
  Mat Cf = contract_map_matrix(f, Elow.coh_basis, Ehigh.coh_basis);
  std::size_t sdim = Elow.sym.size();
  Mat big(Fp, Ehigh.coh_basis.size() * sdim, Elow.coh_basis.size() * sdim);
  for (std::size_t r = 0; r < Cf.rows; ++r)
    for (std::size_t c = 0; c < Cf.cols; ++c) {
      if (Cf.at(r, c) == 0) continue;
      for (std::size_t s = 0; s < sdim; ++s)
        big.at(r * sdim + s, c * sdim + s) = Cf.at(r, c);
    }
  Mat images = mat_mul(Klow, transpose(big));  // rows: images of kernel basis
  // the image must again be killed by the Euler map at the higher level
  Mat check = mat_mul(images, transpose(Ehigh.to_next));
  for (auto v : check.a)
    if (v != 0) throw std::logic_error("multiplication by f left the H^1 subspace");
  std::int64_t ker = static_cast<std::int64_t>(Klow.rows - rank(images));
  return h0_top - h0_sub + ker;
}

}  // namespace qbic
