#pragma once

// Modular representation theory for SL_3 in characteristic p: weights in the
// fundamental-weight basis, Euler characters chi(lambda), the Jantzen sum
// formula, simple module dimensions for the restricted weights the sum
// formula triangularizes, reduced divided powers, and the assembled graded
// dimension tables for H^0(C, F) with their Lambda_1 / Lambda_2 split.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "qbic/cohom.hpp"

namespace qbic {

// a*varpi_1 + b*varpi_2; dominant iff a, b >= 0.  The simple roots are
// alpha_1 = (2,-1) and alpha_2 = (-1,2) in this basis, and pairing a weight
// (x, y) with the positive coroots alpha_1, alpha_2, alpha_1+alpha_2 gives
// x, y, x+y.
struct Weight {
  std::int64_t a = 0, b = 0;
  friend bool operator==(const Weight& l, const Weight& r) {
    return l.a == r.a && l.b == r.b;
  }
  friend bool operator<(const Weight& l, const Weight& r) {
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  }
};

// Formal sum of Euler characters chi(lambda), lambda dominant.
using FormalChar = std::map<Weight, std::int64_t>;

inline std::int64_t weyl_dim(std::int64_t a, std::int64_t b) {
  if (a < 0 || b < 0) throw std::invalid_argument("weyl_dim needs a dominant weight");
  return (a + 1) * (b + 1) * (a + b + 2) / 2;
}

// chi(lambda) = sign * ch Delta(mu) with mu dominant, or zero when
// lambda + rho lies on a wall.  Reduction by the finite Weyl group S_3 acting
// on lambda + rho; the sign is the parity of the word length.
struct ChiReduced {
  int sign = 0;  // -1, 0, +1
  Weight weight;
};

inline ChiReduced chi_dominant_reduce(Weight lambda) {
  std::int64_t x = lambda.a + 1, y = lambda.b + 1;
  int sign = 1;
  for (int guard = 0; guard < 8; ++guard) {
    if (x == 0 || y == 0 || x + y == 0) return {0, {0, 0}};
    if (x > 0 && y > 0) return {sign, {x - 1, y - 1}};
    if (x < 0) {
      std::int64_t nx = -x, ny = x + y;  // s_1
      x = nx; y = ny;
    } else {
      std::int64_t nx = x + y, ny = -y;  // s_2
      x = nx; y = ny;
    }
    sign = -sign;
  }
  throw std::logic_error("Weyl chamber reduction did not terminate");
}

namespace detail {

inline std::int64_t padic_val(std::int64_t m, std::int64_t p) {
  std::int64_t v = 0;
  while (m % p == 0) { m /= p; ++v; }
  return v;
}

inline bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

// Jantzen sum formula: sum over positive roots alpha and 0 < mp < <lambda+rho,
// alpha^vee> of nu_p(mp) chi(s_{alpha,mp} . lambda), reduced to dominant
// representatives with wall terms dropped.
inline FormalChar jantzen_sum(Weight lambda, std::uint32_t p) {
  if (lambda.a < 0 || lambda.b < 0)
    throw std::invalid_argument("jantzen_sum needs a dominant weight");
  std::int64_t x = lambda.a + 1, y = lambda.b + 1;
  struct Root {
    std::int64_t ax, ay;   // the root in the varpi basis
    std::int64_t pairing;  // <lambda+rho, alpha^vee>
  };
  const Root roots[3] = {{2, -1, x}, {-1, 2, y}, {1, 1, x + y}};
  FormalChar out;
  for (const Root& r : roots) {
    for (std::int64_t m = 1; m * p < r.pairing; ++m) {
      std::int64_t nu = 1 + detail::padic_val(m, p);
      std::int64_t drop = r.pairing - m * p;
      Weight refl{lambda.a - drop * r.ax, lambda.b - drop * r.ay};
      ChiReduced c = chi_dominant_reduce(refl);
      if (c.sign == 0) continue;
      std::int64_t& coef = out[c.weight];
      coef += c.sign * nu;
      if (coef == 0) out.erase(c.weight);
    }
  }
  return out;
}

struct SimpleDimResult {
  bool determined = false;
  std::int64_t dim = 0;
};

namespace detail {

struct WeightInfo {
  bool determined = false;
  std::int64_t dim = 0;
  std::map<Weight, std::int64_t> delta_decomp;  // Delta(lambda) in the ch L basis
};

// Resolve dim L(lambda) from the sum formula alone.  Since L(lambda) =
// Delta(lambda)/Delta(lambda)^1, an empty sum gives the Weyl dimension; and
// when the sum expands in the simple-character basis with every multiplicity
// equal to one, Delta^2 must vanish, so Delta^1 is the sum itself.  Anything
// else is reported as undetermined rather than guessed.
inline const WeightInfo& resolve_weight(std::uint32_t p, Weight lambda) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, std::int64_t, std::int64_t>, WeightInfo>
      cache;
  std::scoped_lock lock(mu);
  auto key = std::make_tuple(p, lambda.a, lambda.b);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::function<const WeightInfo&(Weight)> rec = [&](Weight l) -> const WeightInfo& {
    auto k = std::make_tuple(p, l.a, l.b);
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    WeightInfo info;
    FormalChar sum = jantzen_sum(l, p);
    if (sum.empty()) {
      info.determined = true;
      info.dim = weyl_dim(l.a, l.b);
      info.delta_decomp = {{l, 1}};
    } else {
      std::map<Weight, std::int64_t> total;
      bool ok = true;
      for (const auto& [muw, c] : sum) {
        const WeightInfo& sub = rec(muw);
        if (!sub.determined) { ok = false; break; }
        for (const auto& [nu, m] : sub.delta_decomp) {
          total[nu] += c * m;
          if (total[nu] == 0) total.erase(nu);
        }
      }
      for (const auto& [nu, m] : total)
        if (m != 1) { ok = false; break; }
      if (ok) {
        std::int64_t radical = 0;
        for (const auto& [nu, m] : total) radical += rec(nu).dim;
        info.determined = true;
        info.dim = weyl_dim(l.a, l.b) - radical;
        info.delta_decomp = total;
        info.delta_decomp[l] += 1;
      }
    }
    return cache.emplace(k, std::move(info)).first->second;
  };
  return rec(lambda);
}

}  // namespace detail

inline SimpleDimResult simple_dim(std::int64_t a, std::int64_t b, std::uint32_t p) {
  if (a < 0 || b < 0) throw std::invalid_argument("simple_dim needs a dominant weight");
  if (!detail::is_prime(p)) throw std::invalid_argument("p must be prime");
  const detail::WeightInfo& info = detail::resolve_weight(p, Weight{a, b});
  return SimpleDimResult{info.determined, info.dim};
}

// dim Sym^b_red(W) = dim Sym^b(W) / (W^[1] . Sym^{b-q}(W)) for dim W = 3.
// Closed form C(b+2,2) - 3 C(b-q+2,2) in the injectivity range b <= 2q-1;
// beyond it the image is counted directly: the multiplication matrix sends
// basis monomials to distinct monomials, so its rank is the number of
// distinct products x_i^q x^m.
inline std::int64_t div_red_dim(std::int64_t b, std::uint32_t q) {
  if (b < 0) throw std::invalid_argument("div_red_dim needs b >= 0");
  auto c2 = [](std::int64_t m) { return m < 2 ? std::int64_t{0} : m * (m - 1) / 2; };
  if (b < 2 * static_cast<std::int64_t>(q)) return c2(b + 2) - 3 * c2(b - q + 2);
  std::set<std::array<std::int64_t, 3>> images;
  for (std::int64_t i = 0; i <= b - q; ++i)
    for (std::int64_t j = 0; i + j <= b - q; ++j) {
      std::array<std::int64_t, 3> m{i, j, b - q - i - j};
      for (int v = 0; v < 3; ++v) {
        auto im = m;
        im[v] += q;
        images.insert(im);
      }
    }
  return c2(b + 2) - static_cast<std::int64_t>(images.size());
}

// Total dimension (p^2+1) C(p,2) + C(p,3) of the sum of the H^0(C, F_i);
// evaluated as a polynomial, so it is also the recorded value at q = 4.
inline std::int64_t theorem_total(std::int64_t q) {
  return (q * q + 1) * (q * (q - 1) / 2) + q * (q - 1) * (q - 2) / 6;
}

// The full graded table of Theorem dimensions for q = p: degree
// i = bp + p - 1 - a(p+1) carries div_red_dim(2p-3-b, p) for 0 <= b <= 2p-3,
// 0 <= a <= min(b, p-1), and every other degree in [0, 2p^2-p-2] is zero.
inline GradedDimTable theorem_dims(std::uint32_t p) {
  if (!detail::is_prime(p)) throw std::invalid_argument("theorem_dims needs p prime");
  std::int64_t P = p;
  std::int64_t delta = 2 * P * P - P - 2;
  std::vector<std::uint32_t> dims(delta + 1, 0);
  for (std::int64_t b = 0; b <= 2 * P - 3; ++b)
    for (std::int64_t a = 0; a <= std::min(b, P - 1); ++a) {
      std::int64_t i = b * P + P - 1 - a * (P + 1);
      if (i < 0 || i > delta || dims[i] != 0)
        throw std::logic_error("theorem degree bookkeeping failed");
      dims[i] = static_cast<std::uint32_t>(div_red_dim(2 * P - 3 - b, p));
    }
  GradedDimTable out{p, true, {}};
  for (std::int64_t i = 0; i <= delta; ++i)
    out.entries.emplace_back(static_cast<std::uint32_t>(i), dims[i]);
  return out;
}

// dim Lambda_1 = p sum_b C(p-b, 2) and
// dim Lambda_2 = sum_a div_red_dim(p+a-1, p) (p-1-a), summing to the total.
inline std::pair<std::int64_t, std::int64_t> lambda_split(std::uint32_t p) {
  if (!detail::is_prime(p)) throw std::invalid_argument("lambda_split needs p prime");
  std::int64_t P = p;
  auto c2 = [](std::int64_t m) { return m < 2 ? std::int64_t{0} : m * (m - 1) / 2; };
  std::int64_t l1 = 0, l2 = 0;
  for (std::int64_t b = 0; b <= P - 2; ++b) l1 += P * c2(P - b);
  for (std::int64_t a = 0; a <= P - 2; ++a)
    l2 += div_red_dim(P + a - 1, p) * (P - 1 - a);
  return {l1, l2};
}

}  // namespace qbic
