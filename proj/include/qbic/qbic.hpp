#pragma once

// q-bic forms over finite fields: evaluation, orthogonals, normal forms, type
// classification, Hermitian vectors and the canonical endomorphism phi.
//
// A q-bic form on V = k^(n+1) is a nonzero pairing beta(u^[1], v) = u^(q)T G v
// for a Gram matrix G; the associated hypersurface is X = { [v] : v^(q)T G v = 0 }.
// Equivalence of forms is G -> A^(q)T G A for invertible A.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbic/semilin.hpp"

namespace qbic {

// Classification symbol (a; b_m): a diagonal 1-blocks plus b_m Jordan blocks
// N_m (zero diagonal, ones on the superdiagonal).  N_1 is the 1x1 zero block,
// so b_1 counts the radical.
struct QbicType {
  std::uint32_t a = 0;
  std::map<std::uint32_t, std::uint32_t> b;  // m -> multiplicity > 0

  [[nodiscard]] std::uint32_t dim() const {
    std::uint32_t d = a;
    for (auto [m, c] : b) d += m * c;
    return d;
  }
  [[nodiscard]] std::uint32_t corank() const {
    std::uint32_t c = 0;
    for (auto [m, cnt] : b) c += cnt;
    return c;
  }
  [[nodiscard]] std::uint32_t b1() const {
    auto it = b.find(1);
    return it == b.end() ? 0 : it->second;
  }

  friend bool operator==(const QbicType& x, const QbicType& y) {
    return x.a == y.a && x.b == y.b;
  }
  friend bool operator<(const QbicType& x, const QbicType& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }

  // "1^3+N2", "N2+0^2", "1", ...
  [[nodiscard]] std::string to_string() const {
    std::ostringstream out;
    bool first = true;
    auto piece = [&](const std::string& base, std::uint32_t count) {
      if (count == 0) return;
      if (!first) out << "+";
      first = false;
      out << base;
      if (count > 1) out << "^" << count;
    };
    piece("1", a);
    for (auto it = b.rbegin(); it != b.rend(); ++it)
      if (it->first > 1) piece("N" + std::to_string(it->first), it->second);
    piece("0", b1());
    return out.str();
  }

  static QbicType parse(const std::string& s) {
    QbicType t;
    std::size_t pos = 0;
    while (pos < s.size()) {
      std::size_t plus = s.find('+', pos);
      std::string tok = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
      pos = plus == std::string::npos ? s.size() : plus + 1;
      if (tok.empty()) throw std::invalid_argument("empty token in type string");
      std::uint32_t count = 1;
      std::size_t caret = tok.find('^');
      std::string base = tok;
      if (caret != std::string::npos) {
        base = tok.substr(0, caret);
        count = static_cast<std::uint32_t>(std::stoul(tok.substr(caret + 1)));
      }
      if (count == 0) throw std::invalid_argument("zero multiplicity in type string");
      if (base == "1") {
        t.a += count;
      } else if (base == "0" || base == "N1") {
        t.b[1] += count;
      } else if (base.size() >= 2 && base[0] == 'N') {
        std::uint32_t m = static_cast<std::uint32_t>(std::stoul(base.substr(1)));
        if (m < 1) throw std::invalid_argument("bad block size");
        t.b[m] += count;
      } else {
        throw std::invalid_argument("bad token '" + tok + "' in type string");
      }
    }
    if (t.dim() == 0) throw std::invalid_argument("empty type");
    if (t.a == 0 && t.corank() == t.b1()) throw std::invalid_argument("type describes the zero form");
    return t;
  }
};

struct QbicForm {
  std::uint32_t p = 2, e = 1;  // q = p^e
  FieldPtr K;                  // working field, char p
  Mat gram;                    // (n+1) x (n+1)

  [[nodiscard]] std::uint32_t n() const { return static_cast<std::uint32_t>(gram.rows) - 1; }
  [[nodiscard]] std::uint64_t q() const {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < e; ++i) v *= p;
    return v;
  }
};

inline QbicForm make_form(std::uint32_t p, std::uint32_t e, FieldPtr K, Mat gram) {
  if (K->p() != p) throw std::invalid_argument("working field has wrong characteristic");
  if (gram.rows != gram.cols || gram.rows == 0) throw std::invalid_argument("gram must be square");
  bool nonzero = false;
  for (auto x : gram.a) nonzero |= (x != 0);
  if (!nonzero) throw std::invalid_argument("q-bic form must be nonzero");
  return QbicForm{p, e, std::move(K), std::move(gram)};
}

// beta(u^[1], v) = u^(q)T G v.
inline Fel beta_pair(const QbicForm& F, const std::vector<Fel>& u, const std::vector<Fel>& v) {
  const Field& K = *F.K;
  auto Gv = mat_vec(F.gram, v);
  Fel acc = 0;
  for (std::size_t i = 0; i < Gv.size(); ++i)
    acc = K.add(acc, K.mul(K.frob_pow(u[i], F.e), Gv[i]));
  return acc;
}

inline Fel evaluate(const QbicForm& F, const std::vector<Fel>& v) {
  if (v.size() != F.gram.rows) throw std::invalid_argument("point has wrong length");
  return beta_pair(F, v, v);
}

// Block-diagonal Gram for a type symbol: 1-blocks first, then N_m blocks in
// decreasing m.
inline QbicForm normal_form(const QbicType& t, std::uint32_t p, std::uint32_t e, FieldPtr K) {
  std::uint32_t d = t.dim();
  Mat G(K, d, d);
  std::uint32_t at = 0;
  for (std::uint32_t i = 0; i < t.a; ++i, ++at) G.at(at, at) = 1;
  for (auto it = t.b.rbegin(); it != t.b.rend(); ++it)
    for (std::uint32_t c = 0; c < it->second; ++c) {
      std::uint32_t m = it->first;
      for (std::uint32_t i = 0; i + 1 < m; ++i) G.at(at + i, at + i + 1) = 1;
      at += m;
    }
  return make_form(p, e, std::move(K), std::move(G));
}

// Right orthogonal V^[1],perp read in V: { v : beta(u^[1], v) = 0 for all u }.
inline Subspace right_orthogonal(const QbicForm& F) { return kernel_subspace(F.gram); }

// Left orthogonal with Frobenius descent, V^perp,[-1]:
// { v : beta(v^[1], u) = 0 for all u } = (ker G^T)^[-1].
inline Subspace left_orthogonal_descent(const QbicForm& F) {
  return twist_subspace(kernel_subspace(transpose(F.gram)), -static_cast<long long>(F.e));
}

inline Subspace radical(const QbicForm& F) {
  return intersect(right_orthogonal(F), left_orthogonal_descent(F));
}

inline bool is_nonsingular(const QbicForm& F) { return rank(F.gram) == F.gram.rows; }

// { w : x^(q)T G w = 0 }; a hyperplane through x when x is a smooth point.
inline Subspace tangent_space(const QbicForm& F, const std::vector<Fel>& x) {
  if (evaluate(F, x) != 0) throw std::invalid_argument("point not on the hypersurface");
  Mat row(F.K, 1, F.gram.cols);
  const Field& K = *F.K;
  for (std::size_t j = 0; j < F.gram.cols; ++j) {
    Fel acc = 0;
    for (std::size_t i = 0; i < F.gram.rows; ++i)
      acc = K.add(acc, K.mul(K.frob_pow(x[i], F.e), F.gram.at(i, j)));
    row.at(0, j) = acc;
  }
  return kernel_subspace(row);
}

// Gram of the restriction of beta to the subspace U (rows of U.basis).
inline QbicForm restrict_form(const QbicForm& F, const Subspace& U) {
  if (U.dim() == 0) throw std::invalid_argument("cannot restrict to the zero subspace");
  Mat G2 = mat_mul(mat_mul(twist(U.basis, F.e), F.gram), transpose(U.basis));
  return QbicForm{F.p, F.e, F.K, std::move(G2)};
}

// One-sided orthogonals of a subspace, the two primitives of the classifier.
inline Subspace right_orthogonal_of(const QbicForm& F, const Subspace& S) {
  if (S.dim() == 0) return full_subspace(F.K, F.gram.cols);
  return kernel_subspace(mat_mul(twist(S.basis, F.e), F.gram));
}

inline Subspace left_orthogonal_of(const QbicForm& F, const Subspace& S) {
  if (S.dim() == 0) return full_subspace(F.K, F.gram.cols);
  Subspace tw = kernel_subspace(mat_mul(S.basis, transpose(F.gram)));
  return twist_subspace(tw, -static_cast<long long>(F.e));
}

// Equivalence-invariant fingerprint: dimensions, in generation order, of the
// subspace lattice produced from {0, V} by one-sided orthogonals, meets and
// joins.  Both orthogonal operations commute with the substitution v -> A^-1 v
// induced by G -> A^(q)T G A, so the generated sequence is equivariant and its
// dimension sequence is an orbit invariant.
inline std::vector<std::uint32_t> fingerprint(const QbicForm& F,
                                              std::size_t max_rounds = 6,
                                              std::size_t cap = 64) {
  std::vector<Subspace> lattice{zero_subspace(F.K, F.gram.cols),
                                full_subspace(F.K, F.gram.cols)};
  std::vector<std::uint32_t> dims{0, static_cast<std::uint32_t>(F.gram.cols)};
  auto push = [&](const Subspace& S) {
    for (const auto& T : lattice)
      if (T == S) return;
    lattice.push_back(S);
    dims.push_back(static_cast<std::uint32_t>(S.dim()));
  };
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::size_t before = lattice.size();
    for (std::size_t i = 0; i < before; ++i) {
      push(right_orthogonal_of(F, lattice[i]));
      if (lattice.size() >= cap) return dims;
      push(left_orthogonal_of(F, lattice[i]));
      if (lattice.size() >= cap) return dims;
    }
    std::size_t mid = lattice.size();
    for (std::size_t i = 0; i < mid; ++i)
      for (std::size_t j = i + 1; j < mid; ++j) {
        push(intersect(lattice[i], lattice[j]));
        if (lattice.size() >= cap) return dims;
        push(subspace_sum(lattice[i], lattice[j]));
        if (lattice.size() >= cap) return dims;
      }
    if (lattice.size() == before) break;
  }
  return dims;
}

// All nonzero types in the given dimension, deterministically ordered.
inline std::vector<QbicType> all_types(std::uint32_t dim) {
  std::vector<QbicType> out;
  // Partitions of `rest` into parts >= 1, non-increasing.
  std::vector<std::uint32_t> parts;
  auto emit = [&](std::uint32_t a) {
    QbicType t;
    t.a = a;
    for (auto m : parts) t.b[m] += 1;
    if (t.a == 0 && t.corank() == t.b1()) return;  // zero form
    out.push_back(std::move(t));
  };
  std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> rec =
      [&](std::uint32_t a, std::uint32_t rest, std::uint32_t maxpart) {
        if (rest == 0) {
          emit(a);
          return;
        }
        for (std::uint32_t m = std::min(rest, maxpart); m >= 1; --m) {
          parts.push_back(m);
          rec(a, rest - m, m);
          parts.pop_back();
        }
      };
  for (std::uint32_t a = dim; a + 1 >= 1; --a) {
    rec(a, dim - a, dim);
    if (a == 0) break;
  }
  return out;
}

namespace detail {

struct FingerprintTable {
  std::vector<std::pair<QbicType, std::vector<std::uint32_t>>> entries;
};

// Reference fingerprints of all normal forms in one dimension.  Normal-form
// Gram matrices have prime-field entries and the generated lattice stays
// spanned by 0/1 vectors, so the reference is computed once over GF(p) per
// (p, e, dim) and matches fingerprints taken over any working field of
// characteristic p.
inline const FingerprintTable& reference_fingerprints(std::uint32_t p, std::uint32_t e,
                                                      std::uint32_t dim) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, FingerprintTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, e, dim);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto Fp = Field::make(p, 1);
  FingerprintTable table;
  for (const auto& t : all_types(dim))
    table.entries.emplace_back(t, fingerprint(normal_form(t, p, e, Fp)));
  for (std::size_t i = 0; i < table.entries.size(); ++i)
    for (std::size_t j = i + 1; j < table.entries.size(); ++j)
      if (table.entries[i].second == table.entries[j].second)
        throw std::logic_error("fingerprint fails to separate types " +
                               table.entries[i].first.to_string() + " and " +
                               table.entries[j].first.to_string());
  return cache.emplace(key, std::move(table)).first->second;
}

}  // namespace detail

inline QbicType classify(const QbicForm& F) {
  const auto& table = detail::reference_fingerprints(F.p, F.e, F.gram.rows);
  auto fp = fingerprint(F);
  for (const auto& [t, ref] : table.entries)
    if (ref == fp) return t;
  throw std::logic_error("no normal form matches the computed fingerprint");
}

// Direct Hermitian test, valid for singular forms as well:
// G v = G^(q)T v^(q^2).
inline bool is_hermitian_vector(const QbicForm& F, const std::vector<Fel>& v) {
  auto lhs = mat_vec(F.gram, v);
  auto rhs = mat_vec(twist(transpose(F.gram), F.e), twist_vec(*F.K, v, 2 * F.e));
  return lhs == rhs;
}

// sigma_beta = G^-1 G^(q)T; Hermitian vectors are its q^2-semilinear fixed set.
inline Mat hermitian_descent_matrix(const QbicForm& F) {
  auto inv = inverse(F.gram);
  if (!inv) throw std::invalid_argument("hermitian descent needs a nonsingular form");
  return mat_mul(*inv, twist(transpose(F.gram), F.e));
}

inline SemilinearFixed hermitian_vectors(const QbicForm& F) {
  return semilinear_fixed_points(hermitian_descent_matrix(F), 2 * F.e);
}

inline std::vector<Fel> normalize_point(const Field& K, std::vector<Fel> v) {
  for (auto x : v)
    if (x != 0) {
      Fel inv = K.inv(x);
      for (auto& y : v) y = K.mul(y, inv);
      return v;
    }
  throw std::invalid_argument("cannot normalize the zero vector");
}

// Isotropic Hermitian points; on a smooth q-bic curve there are q^3 + 1.
inline std::vector<std::vector<Fel>> hermitian_points(const QbicForm& F) {
  auto S = hermitian_vectors(F);
  std::vector<std::vector<Fel>> pts;
  for (auto& v : all_fixed_vectors(S)) {
    bool zero = true;
    for (auto x : v) zero &= (x == 0);
    if (zero || evaluate(F, v) != 0) continue;
    auto pt = normalize_point(*F.K, v);
    bool seen = false;
    for (const auto& other : pts) seen |= (other == pt);
    if (!seen) pts.push_back(std::move(pt));
  }
  return pts;
}

// phi(x) = [G^-1 G^(q)T x^(q^2)]; the q^2-power Frobenius in a Hermitian basis.
inline std::vector<Fel> phi(const QbicForm& F, const std::vector<Fel>& x) {
  if (evaluate(F, x) != 0) throw std::invalid_argument("point not on the hypersurface");
  auto A = hermitian_descent_matrix(F);
  return normalize_point(*F.K, mat_vec(A, twist_vec(*F.K, x, 2 * F.e)));
}

}  // namespace qbic
