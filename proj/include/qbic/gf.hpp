#pragma once

// Arithmetic in finite fields GF(p^e) of order at most 2^16.
//
// Elements are packed indices: the element with coefficient vector
// (c_0, ..., c_{e-1}) in the polynomial basis {1, t, ..., t^{e-1}} is stored
// as the integer c_0 + c_1 p + ... + c_{e-1} p^{e-1}.  A Field object owns
// the multiplication (log/antilog), Frobenius and negation tables for its
// order, so element operations are table lookups plus a little digit work.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbic {

using Fel = std::uint32_t;

[[nodiscard]] inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace detail {

// Polynomials over GF(p) as little-endian coefficient vectors, used only for
// modulus selection and table construction.
using Poly = std::vector<std::uint32_t>;

inline void poly_trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly poly_mod(Poly f, const Poly& mod, std::uint32_t p) {
  poly_trim(f);
  const std::size_t e = mod.size() - 1;
  while (f.size() > e) {
    std::size_t d = f.size() - 1;
    std::uint32_t lead = f[d];
    if (lead != 0) {
      // mod is monic, so subtracting lead * mod * x^(d-e) clears f[d].
      for (std::size_t i = 0; i <= e; ++i) {
        std::uint32_t sub = static_cast<std::uint32_t>(std::uint64_t(lead) * mod[i] % p);
        f[d - e + i] = (f[d - e + i] + p - sub) % p;
      }
    }
    poly_trim(f);
  }
  return f;
}

inline Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<std::uint32_t>((c[i + j] + std::uint64_t(a[i]) * b[j]) % p);
  }
  return poly_mod(std::move(c), mod, p);
}

// x^n modulo `mod` by binary exponentiation.
inline Poly poly_xpow_mod(std::uint64_t n, const Poly& mod, std::uint32_t p) {
  Poly result{1};
  Poly base{0, 1};
  base = poly_mod(base, mod, p);
  while (n > 0) {
    if (n & 1) result = poly_mul_mod(result, base, mod, p);
    base = poly_mul_mod(base, base, mod, p);
    n >>= 1;
  }
  return result;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // a mod b with b made monic on the fly.
    std::uint32_t lead = b.back();
    std::uint32_t inv = 1;
    for (std::uint32_t x = 1; x < p; ++x)
      if (x * std::uint64_t(lead) % p == 1) { inv = x; break; }
    Poly bm = b;
    for (auto& c : bm) c = static_cast<std::uint32_t>(std::uint64_t(c) * inv % p);
    Poly r = poly_mod(a, bm, p);
    a = b;
    b = r;
  }
  return a;
}

inline bool poly_is_one_or_constant(const Poly& f) { return f.size() <= 1; }

// Rabin's test: monic f of degree e is irreducible over GF(p) iff
// x^(p^e) = x (mod f) and gcd(x^(p^(e/r)) - x, f) = 1 for every prime r | e.
inline bool poly_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t e = f.size() - 1;
  if (e == 0) return false;
  std::uint64_t pe = 1;
  for (std::size_t i = 0; i < e; ++i) pe *= p;
  Poly xe = poly_xpow_mod(pe, f, p);
  Poly x{0, 1};
  x = poly_mod(x, f, p);
  if (xe != x) return false;
  std::vector<std::size_t> prime_factors;
  std::size_t m = e;
  for (std::size_t r = 2; r * r <= m; ++r)
    if (m % r == 0) {
      prime_factors.push_back(r);
      while (m % r == 0) m /= r;
    }
  if (m > 1) prime_factors.push_back(m);
  for (std::size_t r : prime_factors) {
    std::uint64_t pk = 1;
    for (std::size_t i = 0; i < e / r; ++i) pk *= p;
    Poly diff = poly_xpow_mod(pk, f, p);
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = static_cast<std::uint32_t>((diff[1] + p - 1) % p);
    poly_trim(diff);
    Poly g = poly_gcd(diff, f, p);
    if (!poly_is_one_or_constant(g)) return false;
  }
  return true;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// Immutable finite field GF(p^e).  Construct through Field::make; instances
// are shared read-only and all operations are const.
class Field {
 public:
  static constexpr std::uint32_t kMaxOrder = 1u << 16;

  // Canonical field: modulus is the lexicographically least monic irreducible
  // of degree e (coefficients compared from the x^{e-1} term down), so a given
  // (p, e) always receives identical element encodings.
  static FieldPtr make(std::uint32_t p, std::uint32_t e) {
    return FieldPtr(new Field(p, e, canonical_modulus(p, e)));
  }

  static FieldPtr make(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus) {
    return FieldPtr(new Field(p, e, std::move(modulus)));
  }

  [[nodiscard]] std::uint32_t p() const { return p_; }
  [[nodiscard]] std::uint32_t e() const { return e_; }
  [[nodiscard]] std::uint32_t order() const { return n_; }
  [[nodiscard]] const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  [[nodiscard]] bool same(const Field& other) const {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
  }

  [[nodiscard]] Fel add(Fel a, Fel b) const {
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[std::size_t(a) * n_ + b];
    Fel r = 0;
    for (std::uint32_t i = 0; i < e_; ++i) {
      std::uint32_t d = digit(a, i) + digit(b, i);
      if (d >= p_) d -= p_;
      r += d * p_pow_[i];
    }
    return r;
  }

  [[nodiscard]] Fel neg(Fel a) const { return neg_table_[a]; }
  [[nodiscard]] Fel sub(Fel a, Fel b) const { return add(a, neg_table_[b]); }

  [[nodiscard]] Fel mul(Fel a, Fel b) const {
    if (a == 0 || b == 0) return 0;
    return exp_table_[log_table_[a] + log_table_[b]];
  }

  [[nodiscard]] Fel inv(Fel a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    std::uint32_t l = log_table_[a];
    return exp_table_[l == 0 ? 0 : n_ - 1 - l];
  }

  [[nodiscard]] Fel div(Fel a, Fel b) const { return mul(a, inv(b)); }

  [[nodiscard]] Fel pow(Fel a, long long k) const {
    if (a == 0) {
      if (k < 0) throw std::domain_error("inverse of zero");
      return k == 0 ? 1 : 0;
    }
    long long m = n_ - 1;
    long long r = (std::int64_t(log_table_[a]) * (k % m)) % m;
    if (r < 0) r += m;
    return exp_table_[r];
  }

  // x -> x^(p^k) for any integer k; k = 1 is the absolute Frobenius,
  // negative k inverts it.  The Galois group is cyclic of order e.
  [[nodiscard]] Fel frob_pow(Fel a, long long k) const {
    long long r = k % e_;
    if (r < 0) r += e_;
    Fel x = a;
    for (long long i = 0; i < r; ++i) x = frob_table_[x];
    return x;
  }

  [[nodiscard]] Fel frob(Fel a) const { return frob_table_[a]; }
  [[nodiscard]] Fel inv_frob(Fel a) const { return frob_pow(a, e_ - 1); }

  [[nodiscard]] Fel from_int(long long v) const {
    long long r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Fel>(r);
  }

  [[nodiscard]] std::vector<std::uint32_t> coeffs(Fel a) const {
    std::vector<std::uint32_t> c(e_);
    for (std::uint32_t i = 0; i < e_; ++i) c[i] = digit(a, i);
    return c;
  }

  [[nodiscard]] Fel from_coeffs(const std::vector<std::uint32_t>& c) const {
    if (c.size() > e_) throw std::invalid_argument("coefficient vector too long");
    Fel v = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= p_) throw std::invalid_argument("coefficient not reduced mod p");
      v += c[i] * p_pow_[i];
    }
    return v;
  }

  // All elements, ordered lexicographically by coefficient vector
  // (c_0 compared first).
  [[nodiscard]] std::vector<Fel> elements() const {
    std::vector<Fel> out(n_);
    for (std::uint32_t k = 0; k < n_; ++k) {
      Fel v = 0;
      std::uint32_t t = k;
      for (std::uint32_t i = 0; i < e_; ++i) {
        std::uint32_t d = t % p_;
        t /= p_;
        // digit i of k (least significant first) becomes coefficient e-1-i.
        v += d * p_pow_[e_ - 1 - i];
      }
      out[k] = v;
    }
    return out;
  }

  [[nodiscard]] Fel generator() const { return generator_; }

  // True when a lies in the subfield GF(p^d); requires d | e.
  [[nodiscard]] bool in_subfield(Fel a, std::uint32_t d) const {
    return frob_pow(a, d) == a;
  }

  [[nodiscard]] std::string to_string(Fel a) const {
    if (a == 0) return "0";
    std::string s;
    for (std::uint32_t i = e_; i-- > 0;) {
      std::uint32_t c = digit(a, i);
      if (c == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0) {
        s += std::to_string(c);
      } else {
        if (c != 1) s += std::to_string(c);
        s += "t";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  Field(std::uint32_t p, std::uint32_t e, std::vector<std::uint32_t> modulus)
      : p_(p), e_(e), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw std::invalid_argument("p is not prime");
    if (e == 0) throw std::invalid_argument("exponent must be positive");
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      n *= p;
      if (n > kMaxOrder) throw std::invalid_argument("field order exceeds 2^16");
    }
    n_ = static_cast<std::uint32_t>(n);
    if (modulus_.size() != e + 1 || modulus_.back() != 1)
      throw std::invalid_argument("modulus must be monic of degree e");
    for (auto c : modulus_)
      if (c >= p) throw std::invalid_argument("modulus coefficients must be reduced mod p");
    if (!detail::poly_irreducible(modulus_, p))
      throw std::invalid_argument("modulus is reducible");
    p_pow_.resize(e_);
    p_pow_[0] = 1;
    for (std::uint32_t i = 1; i < e_; ++i) p_pow_[i] = p_pow_[i - 1] * p_;
    build_tables();
  }

  static std::vector<std::uint32_t> canonical_modulus(std::uint32_t p, std::uint32_t e) {
    if (!is_prime(p)) throw std::invalid_argument("p is not prime");
    if (e == 0) throw std::invalid_argument("exponent must be positive");
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      n *= p;
      if (n > kMaxOrder) throw std::invalid_argument("field order exceeds 2^16");
    }
    for (std::uint64_t k = 0; k < n; ++k) {
      std::vector<std::uint32_t> cand(e + 1, 0);
      cand[e] = 1;
      std::uint64_t t = k;
      for (std::uint32_t i = 0; i < e; ++i) {
        cand[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (detail::poly_irreducible(cand, p)) return cand;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
  }

  [[nodiscard]] std::uint32_t digit(Fel a, std::uint32_t i) const {
    return (a / p_pow_[i]) % p_;
  }

  [[nodiscard]] detail::Poly unpack(Fel a) const {
    detail::Poly f(e_);
    for (std::uint32_t i = 0; i < e_; ++i) f[i] = digit(a, i);
    detail::poly_trim(f);
    return f;
  }

  [[nodiscard]] Fel pack(const detail::Poly& f) const {
    Fel v = 0;
    for (std::size_t i = 0; i < f.size(); ++i) v += f[i] * p_pow_[i];
    return v;
  }

  void build_tables() {
    neg_table_.resize(n_);
    for (Fel a = 0; a < n_; ++a) {
      Fel r = 0;
      for (std::uint32_t i = 0; i < e_; ++i) {
        std::uint32_t d = digit(a, i);
        r += (d == 0 ? 0 : p_ - d) * p_pow_[i];
      }
      neg_table_[a] = r;
    }
    if (p_ != 2 && std::uint64_t(n_) * n_ <= (1u << 20)) {
      add_table_.resize(std::size_t(n_) * n_);
      for (Fel a = 0; a < n_; ++a)
        for (Fel b = 0; b < n_; ++b) {
          Fel r = 0;
          for (std::uint32_t i = 0; i < e_; ++i) {
            std::uint32_t d = digit(a, i) + digit(b, i);
            if (d >= p_) d -= p_;
            r += d * p_pow_[i];
          }
          add_table_[std::size_t(a) * n_ + b] = r;
        }
    }

    // Find the least generator of the multiplicative group and fill the
    // log/antilog tables from its power sequence.
    for (Fel cand = 1; cand < n_; ++cand) {
      if (n_ == 2) { generator_ = 1; break; }
      if (cand == 1) continue;
      detail::Poly c = unpack(cand);
      detail::Poly x{1};
      std::uint32_t ord = 0;
      do {
        x = detail::poly_mul_mod(x, c, modulus_, p_);
        ++ord;
      } while (!(x.size() == 1 && x[0] == 1) && ord <= n_);
      if (ord == n_ - 1) { generator_ = cand; break; }
    }

    exp_table_.assign(2 * (n_ - 1), 1);
    log_table_.assign(n_, 0);
    if (n_ > 2) {
      detail::Poly g = unpack(generator_);
      detail::Poly x{1};
      for (std::uint32_t i = 0; i < n_ - 1; ++i) {
        Fel v = pack(x);
        exp_table_[i] = v;
        exp_table_[i + n_ - 1] = v;
        log_table_[v] = i;
        x = detail::poly_mul_mod(x, g, modulus_, p_);
      }
    } else {
      exp_table_.assign(2, 1);
      log_table_ = {0, 0};
      generator_ = 1;
    }

    frob_table_.resize(n_);
    frob_table_[0] = 0;
    for (Fel a = 1; a < n_; ++a) {
      std::uint64_t l = std::uint64_t(log_table_[a]) * p_ % (n_ - 1);
      frob_table_[a] = exp_table_[l];
    }
  }

  std::uint32_t p_, e_, n_ = 0;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> p_pow_;
  std::vector<Fel> neg_table_;
  std::vector<Fel> add_table_;
  std::vector<Fel> exp_table_;
  std::vector<std::uint32_t> log_table_;
  std::vector<Fel> frob_table_;
  Fel generator_ = 1;
};

// Deterministic embedding GF(p^d) -> GF(p^e) for d | e: the image of t is the
// least root (in packed order) of the small modulus inside the big field.
class Embedding {
 public:
  Embedding(FieldPtr src, FieldPtr dst) : src_(std::move(src)), dst_(std::move(dst)) {
    if (src_->p() != dst_->p()) throw std::invalid_argument("different characteristics");
    if (dst_->e() % src_->e() != 0) throw std::invalid_argument("not a subfield pair");
    Fel root = 0;
    bool found = false;
    for (Fel r = 0; r < dst_->order(); ++r) {
      Fel v = 0;
      const auto& m = src_->modulus();
      for (std::size_t i = m.size(); i-- > 0;)
        v = dst_->add(dst_->mul(v, r), dst_->from_int(m[i]));
      if (v == 0) { root = r; found = true; break; }
    }
    if (!found) throw std::logic_error("modulus has no root in the big field");
    map_.resize(src_->order());
    for (Fel a = 0; a < src_->order(); ++a) {
      auto c = src_->coeffs(a);
      Fel v = 0;
      for (std::size_t i = c.size(); i-- > 0;)
        v = dst_->add(dst_->mul(v, root), dst_->from_int(c[i]));
      map_[a] = v;
    }
  }

  [[nodiscard]] Fel operator()(Fel a) const { return map_[a]; }
  [[nodiscard]] const Field& src() const { return *src_; }
  [[nodiscard]] const Field& dst() const { return *dst_; }

 private:
  FieldPtr src_, dst_;
  std::vector<Fel> map_;
};

}  // namespace qbic
