#pragma once

// Dense linear and semilinear algebra over the fields of gf.hpp: rank,
// kernels, solving, entrywise Frobenius twists, canonical subspaces, and
// fixed points of Frobenius-semilinear maps.

#include <optional>
#include <stdexcept>
#include <vector>

#include "qbic/gf.hpp"

namespace qbic {

struct Mat {
  FieldPtr F;
  std::size_t rows = 0, cols = 0;
  std::vector<Fel> a;

  Mat() = default;
  Mat(FieldPtr field, std::size_t r, std::size_t c)
      : F(std::move(field)), rows(r), cols(c), a(r * c, 0) {}

  [[nodiscard]] Fel& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  [[nodiscard]] Fel at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Mat identity(FieldPtr field, std::size_t n) {
    Mat m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a && x.F->same(*y.F);
  }
};

inline Mat mat_mul(const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw std::invalid_argument("dimension mismatch in mat_mul");
  const Field& F = *A.F;
  Mat C(A.F, A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      Fel v = A.at(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        C.at(i, j) = F.add(C.at(i, j), F.mul(v, B.at(k, j)));
    }
  return C;
}

inline std::vector<Fel> mat_vec(const Mat& A, const std::vector<Fel>& v) {
  if (A.cols != v.size()) throw std::invalid_argument("dimension mismatch in mat_vec");
  const Field& F = *A.F;
  std::vector<Fel> out(A.rows, 0);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j)
      out[i] = F.add(out[i], F.mul(A.at(i, j), v[j]));
  return out;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.F, A.cols, A.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
  return T;
}

// Entrywise x -> x^(p^k); k may be negative.
inline Mat twist(const Mat& A, long long k) {
  Mat T = A;
  for (auto& x : T.a) x = A.F->frob_pow(x, k);
  return T;
}

inline std::vector<Fel> twist_vec(const Field& F, const std::vector<Fel>& v, long long k) {
  std::vector<Fel> out = v;
  for (auto& x : out) x = F.frob_pow(x, k);
  return out;
}

// In-place reduction to reduced row echelon form; returns pivot columns.
inline std::vector<std::size_t> rref_in_place(Mat& M) {
  const Field& F = *M.F;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
    std::size_t sel = r;
    while (sel < M.rows && M.at(sel, c) == 0) ++sel;
    if (sel == M.rows) continue;
    for (std::size_t j = 0; j < M.cols; ++j) std::swap(M.at(r, j), M.at(sel, j));
    Fel inv = F.inv(M.at(r, c));
    for (std::size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), inv);
    for (std::size_t i = 0; i < M.rows; ++i) {
      if (i == r) continue;
      Fel f = M.at(i, c);
      if (f == 0) continue;
      for (std::size_t j = c; j < M.cols; ++j)
        M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat M) { return rref_in_place(M).size(); }

// Basis of {v : M v = 0}, rows in reduced echelon form (canonical).
inline Mat kernel_basis(Mat M) {
  const Field& F = *M.F;
  auto pivots = rref_in_place(M);
  std::vector<bool> is_pivot(M.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < M.cols; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat K(M.F, free_cols.size(), M.cols);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t fc = free_cols[k];
    K.at(k, fc) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      K.at(k, pivots[r]) = F.neg(M.at(r, fc));
  }
  rref_in_place(K);
  return K;
}

// Any one solution of M x = b, or nothing.
inline std::optional<std::vector<Fel>> solve(const Mat& M, const std::vector<Fel>& b) {
  if (b.size() != M.rows) throw std::invalid_argument("dimension mismatch in solve");
  Mat aug(M.F, M.rows, M.cols + 1);
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) aug.at(i, j) = M.at(i, j);
    aug.at(i, M.cols) = b[i];
  }
  auto pivots = rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == M.cols) return std::nullopt;
  std::vector<Fel> x(M.cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, M.cols);
  return x;
}

inline std::optional<Mat> inverse(const Mat& M) {
  if (M.rows != M.cols) throw std::invalid_argument("inverse of non-square matrix");
  Mat aug(M.F, M.rows, 2 * M.cols);
  for (std::size_t i = 0; i < M.rows; ++i) {
    for (std::size_t j = 0; j < M.cols; ++j) aug.at(i, j) = M.at(i, j);
    aug.at(i, M.cols + i) = 1;
  }
  auto pivots = rref_in_place(aug);
  if (pivots.size() != M.rows || pivots.back() != M.rows - 1) return std::nullopt;
  Mat inv(M.F, M.rows, M.cols);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j) inv.at(i, j) = aug.at(i, M.cols + j);
  return inv;
}

// A linear subspace of F^n held by its unique reduced-row-echelon basis, so
// equality of subspaces is equality of representations.
struct Subspace {
  FieldPtr F;
  std::size_t ambient = 0;
  Mat basis;  // basis.rows == dim, no zero rows

  [[nodiscard]] std::size_t dim() const { return basis.rows; }

  friend bool operator==(const Subspace& x, const Subspace& y) {
    return x.ambient == y.ambient && x.basis == y.basis;
  }
};

inline Subspace span_of_rows(Mat M) {
  auto pivots = rref_in_place(M);
  Mat b(M.F, pivots.size(), M.cols);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    for (std::size_t j = 0; j < M.cols; ++j) b.at(i, j) = M.at(i, j);
  return Subspace{M.F, M.cols, std::move(b)};
}

inline Subspace zero_subspace(FieldPtr F, std::size_t n) {
  return Subspace{F, n, Mat(F, 0, n)};
}

inline Subspace full_subspace(FieldPtr F, std::size_t n) {
  return Subspace{F, n, Mat::identity(F, n)};
}

inline Subspace kernel_subspace(const Mat& M) {
  Mat K = kernel_basis(M);
  return Subspace{M.F, M.cols, std::move(K)};
}

inline Subspace subspace_sum(const Subspace& U, const Subspace& W) {
  if (U.ambient != W.ambient) throw std::invalid_argument("ambient mismatch");
  Mat stack(U.F, U.dim() + W.dim(), U.ambient);
  for (std::size_t i = 0; i < U.dim(); ++i)
    for (std::size_t j = 0; j < U.ambient; ++j) stack.at(i, j) = U.basis.at(i, j);
  for (std::size_t i = 0; i < W.dim(); ++i)
    for (std::size_t j = 0; j < U.ambient; ++j) stack.at(U.dim() + i, j) = W.basis.at(i, j);
  return span_of_rows(std::move(stack));
}

// U cap W as the annihilator of the two row-space annihilators.
inline Subspace intersect(const Subspace& U, const Subspace& W) {
  if (U.ambient != W.ambient) throw std::invalid_argument("ambient mismatch");
  Mat ku = kernel_basis(U.basis);
  Mat kw = kernel_basis(W.basis);
  Mat stack(U.F, ku.rows + kw.rows, U.ambient);
  for (std::size_t i = 0; i < ku.rows; ++i)
    for (std::size_t j = 0; j < U.ambient; ++j) stack.at(i, j) = ku.at(i, j);
  for (std::size_t i = 0; i < kw.rows; ++i)
    for (std::size_t j = 0; j < U.ambient; ++j) stack.at(ku.rows + i, j) = kw.at(i, j);
  return kernel_subspace(stack);
}

inline bool subspace_contains(const Subspace& big, const Subspace& small) {
  return subspace_sum(big, small) == big;
}

inline bool subspace_member(const Subspace& U, const std::vector<Fel>& v) {
  Mat stack(U.F, U.dim() + 1, U.ambient);
  for (std::size_t i = 0; i < U.dim(); ++i)
    for (std::size_t j = 0; j < U.ambient; ++j) stack.at(i, j) = U.basis.at(i, j);
  for (std::size_t j = 0; j < U.ambient; ++j) stack.at(U.dim(), j) = v[j];
  return rank(std::move(stack)) == U.dim();
}

inline Subspace twist_subspace(const Subspace& U, long long k) {
  Mat b = twist(U.basis, k);
  return span_of_rows(std::move(b));
}

// Solutions of the Frobenius-semilinear equation A v^(p^k) = v inside K^n,
// where K is the field of A.  The solution set is closed under addition and
// under scalars fixed by p^k, so it is returned as a basis over the prime
// field; the full set is every GF(p)-combination of the basis.
struct SemilinearFixed {
  FieldPtr F;
  std::size_t n = 0;
  std::vector<std::vector<Fel>> basis;
};

inline SemilinearFixed semilinear_fixed_points(const Mat& A, long long k) {
  if (A.rows != A.cols) throw std::invalid_argument("semilinear solve needs a square matrix");
  const Field& K = *A.F;
  const std::size_t n = A.rows;
  const std::uint32_t E = K.e();
  auto Fp = Field::make(K.p(), 1);

  // Linearize over GF(p): unknowns are the E prime-field coordinates of each
  // entry of v.  Frobenius is GF(p)-linear, so row (i, alpha) of the system
  // reads off coordinate alpha of sum_j A[i][j] * sigma(v_j) - v_i.
  Mat B(Fp, n * E, n * E);
  for (std::size_t j = 0; j < n; ++j)
    for (std::uint32_t beta = 0; beta < E; ++beta) {
      std::vector<std::uint32_t> unit(E, 0);
      unit[beta] = 1;
      Fel sigma_basis = K.frob_pow(K.from_coeffs(unit), k);
      for (std::size_t i = 0; i < n; ++i) {
        Fel prod = K.mul(A.at(i, j), sigma_basis);
        auto c = K.coeffs(prod);
        for (std::uint32_t alpha = 0; alpha < E; ++alpha) {
          Fel v = c[alpha];
          if (i == j && alpha == beta) v = Fp->sub(v, 1);
          B.at(i * E + alpha, j * E + beta) = v;
        }
      }
    }

  Mat ker = kernel_basis(std::move(B));
  SemilinearFixed out{A.F, n, {}};
  for (std::size_t r = 0; r < ker.rows; ++r) {
    std::vector<Fel> v(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::uint32_t> c(E);
      for (std::uint32_t beta = 0; beta < E; ++beta) c[beta] = ker.at(r, j * E + beta);
      v[j] = K.from_coeffs(c);
    }
    out.basis.push_back(std::move(v));
  }
  return out;
}

// Expands the prime-field basis into the complete list of p^dim solutions.
inline std::vector<std::vector<Fel>> all_fixed_vectors(const SemilinearFixed& S) {
  const Field& K = *S.F;
  const std::uint32_t p = K.p();
  std::size_t dim = S.basis.size();
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    count *= p;
    if (count > (1u << 20)) throw std::invalid_argument("fixed-point set too large to enumerate");
  }
  std::vector<std::vector<Fel>> out;
  out.reserve(count);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::vector<Fel> v(S.n, 0);
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < dim; ++i) {
      std::uint32_t d = static_cast<std::uint32_t>(t % p);
      t /= p;
      if (d != 0) {
        Fel scalar = d;  // prime-subfield element
        for (std::size_t j = 0; j < S.n; ++j)
          v[j] = K.add(v[j], K.mul(scalar, S.basis[i][j]));
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qbic
