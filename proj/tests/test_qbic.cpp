#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <unordered_set>

#include "qbic/qbic.hpp"

using namespace qbic;

namespace {

Mat gram_from(FieldPtr K, std::size_t d, std::initializer_list<int> entries) {
  Mat G(K, d, d);
  std::size_t k = 0;
  for (int v : entries) G.a[k++] = K->from_int(static_cast<std::uint64_t>(v));
  return G;
}

Mat random_invertible(FieldPtr K, std::size_t d, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, K->order() - 1);
  for (;;) {
    Mat A(K, d, d);
    for (auto& x : A.a) x = K->from_int(dist(rng));
    if (rank(A) == d) return A;
  }
}

QbicForm conjugate_form(const QbicForm& F, const Mat& A) {
  Mat G2 = mat_mul(mat_mul(twist(transpose(A), F.e), F.gram), A);
  return QbicForm{F.p, F.e, F.K, std::move(G2)};
}

std::string gram_key(const Mat& G) {
  std::string s;
  for (auto x : G.a) s.push_back(static_cast<char>(x));
  return s;
}

// Walk every d x d matrix over K by base-|K| digits; visit invertible ones.
template <typename Fn>
void for_each_invertible(FieldPtr K, std::size_t d, Fn&& fn) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d * d; ++i) total *= K->order();
  std::vector<Fel> elems = K->elements();
  Mat A(K, d, d);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < d * d; ++i) {
      A.a[i] = elems[c % K->order()];
      c /= K->order();
    }
    if (rank(A) == d) fn(A);
  }
}

}  // namespace

TEST_CASE("type symbols parse and print") {
  QbicType t = QbicType::parse("1^3+N2");
  CHECK(t.a == 3);
  CHECK(t.b == std::map<std::uint32_t, std::uint32_t>{{2, 1}});
  CHECK(t.dim() == 5);
  CHECK(t.corank() == 1);
  CHECK(t.to_string() == "1^3+N2");

  CHECK(QbicType::parse("N2+0^2").to_string() == "N2+0^2");
  CHECK(QbicType::parse("0^2+N2") == QbicType::parse("N2+0^2"));
  CHECK(QbicType::parse("N1^2+N2") == QbicType::parse("N2+0^2"));
  CHECK(QbicType::parse("1").dim() == 1);
  CHECK(QbicType::parse("N3+N2^2+1^2").dim() == 9);

  CHECK_THROWS_AS(QbicType::parse("0^3"), std::invalid_argument);
  CHECK_THROWS_AS(QbicType::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(QbicType::parse("X2"), std::invalid_argument);
  CHECK_THROWS_AS(QbicType::parse("1^0"), std::invalid_argument);

  for (std::uint32_t d = 1; d <= 5; ++d)
    for (const auto& ty : all_types(d)) {
      CHECK(QbicType::parse(ty.to_string()) == ty);
      CHECK(ty.dim() == d);
    }
}

TEST_CASE("type enumeration counts") {
  // nonzero types per dimension: partitions with a 1-part marker,
  // minus the zero form; 1, 3, 6, 11, 18 for dims 1..5.
  CHECK(all_types(1).size() == 1);
  CHECK(all_types(2).size() == 3);
  CHECK(all_types(3).size() == 6);
  CHECK(all_types(4).size() == 11);
  CHECK(all_types(5).size() == 18);
}

TEST_CASE("normal forms have the expected rank data") {
  auto K = Field::make(2, 2);
  for (std::uint32_t d = 2; d <= 5; ++d)
    for (const auto& t : all_types(d)) {
      auto F = normal_form(t, 2, 1, K);
      CHECK(rank(F.gram) == d - t.corank());
      CHECK(right_orthogonal(F).dim() == t.corank());
      CHECK(left_orthogonal_descent(F).dim() == t.corank());
      CHECK(radical(F).dim() == t.b1());
      CHECK(is_nonsingular(F) == (t.corank() == 0));
    }
}

TEST_CASE("evaluate matches the defining polynomial") {
  auto K = Field::make(2, 2);
  // Fermat q-bic x0^3 + x1^3 + x2^3 over F_4, q = 2.
  auto F = normal_form(QbicType::parse("1^3"), 2, 1, K);
  for (auto x0 : K->elements())
    for (auto x1 : K->elements())
      for (auto x2 : K->elements()) {
        Fel direct = K->add(K->add(K->pow(x0, 3), K->pow(x1, 3)), K->pow(x2, 3));
        CHECK(evaluate(F, {x0, x1, x2}) == direct);
      }
  // N_2 block: x0^q x1.
  auto F2 = normal_form(QbicType::parse("N2"), 2, 1, K);
  for (auto x0 : K->elements())
    for (auto x1 : K->elements())
      CHECK(evaluate(F2, {x0, x1}) == K->mul(K->mul(x0, x0), x1));
}

TEST_CASE("classify recovers every normal form, dims 2 to 5") {
  for (auto [p, e] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}, {2, 2}}) {
    auto K = Field::make(p, 2 * e);  // work in F_{q^2}
    for (std::uint32_t d = 2; d <= 5; ++d)
      for (const auto& t : all_types(d))
        CHECK(classify(normal_form(t, p, e, K)) == t);
  }
}

TEST_CASE("pinned small examples") {
  auto K4 = Field::make(2, 2);
  CHECK(classify(make_form(2, 1, K4, gram_from(K4, 4,
        {1,0,0,0, 0,1,0,0, 0,0,1,0, 0,0,0,1}))).to_string() == "1^4");
  CHECK(classify(make_form(2, 1, K4, gram_from(K4, 2, {0,1, 0,0}))).to_string() == "N2");
  CHECK(classify(make_form(2, 1, K4, gram_from(K4, 2, {0,0, 0,1}))).to_string() == "1+0");
  CHECK(radical(make_form(2, 1, K4, gram_from(K4, 2, {0,0, 0,1}))).dim() == 1);
  CHECK_THROWS_AS(make_form(2, 1, K4, Mat(K4, 2, 2)), std::invalid_argument);
}

TEST_CASE("classification is invariant under random conjugation") {
  std::mt19937 rng(20260823);
  for (auto [p, e] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}}) {
    auto K = Field::make(p, 2 * e);
    for (std::uint32_t d = 2; d <= 4; ++d)
      for (const auto& t : all_types(d)) {
        auto F = normal_form(t, p, e, K);
        for (int trial = 0; trial < 40; ++trial) {
          auto A = random_invertible(K, d, rng);
          CHECK(classify(conjugate_form(F, A)) == t);
        }
      }
  }
  // A few dimension-5 spot checks over F_4.
  auto K = Field::make(2, 2);
  for (const auto& t : all_types(5)) {
    auto F = normal_form(t, 2, 1, K);
    for (int trial = 0; trial < 10; ++trial) {
      auto A = random_invertible(K, 5, rng);
      CHECK(classify(conjugate_form(F, A)) == t);
    }
  }
}

TEST_CASE("GL orbits of distinct types are disjoint and classify-constant") {
  // brute-force oracle: conjugate each normal form by the whole
  // general linear group of F_{q^2}.  Orbits of distinct types never meet,
  // and classify is constant on each orbit.  (The orbits do not tile all
  // nonzero matrices: over F_{q^2} a geometric equivalence class can split
  // into several rational orbits, e.g. most scalings c*G are only equivalent
  // to G over an extension.)
  struct Case { std::uint32_t p, e, d; };
  for (auto [p, e, d] : {Case{2, 1, 2}, Case{2, 1, 3}, Case{3, 1, 2}}) {
    auto K = Field::make(p, 2 * e);
    auto types = all_types(d);
    std::vector<std::unordered_set<std::string>> orbits(types.size());
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
      auto F = normal_form(types[ti], p, e, K);
      for_each_invertible(K, d, [&](const Mat& A) {
        orbits[ti].insert(gram_key(conjugate_form(F, A).gram));
      });
    }
    std::uint64_t total = 0;
    std::unordered_set<std::string> all;
    for (const auto& orb : orbits) {
      total += orb.size();
      for (const auto& s : orb) all.insert(s);
    }
    CHECK(total == all.size());  // pairwise disjoint
    for (std::size_t ti = 0; ti < types.size(); ++ti) {
      CHECK(orbits[ti].count(gram_key(normal_form(types[ti], p, e, K).gram)) == 1);
      // classify agrees on samples drawn from each orbit
      std::mt19937 rng(7);
      std::vector<std::string> sample(orbits[ti].begin(), orbits[ti].end());
      std::sort(sample.begin(), sample.end());
      std::shuffle(sample.begin(), sample.end(), rng);
      std::size_t count = std::min<std::size_t>(sample.size(), 25);
      for (std::size_t k = 0; k < count; ++k) {
        Mat G(K, d, d);
        for (std::size_t i = 0; i < d * d; ++i)
          G.a[i] = static_cast<Fel>(static_cast<unsigned char>(sample[k][i]));
        CHECK(classify(QbicForm{p, e, K, G}) == types[ti]);
      }
    }
  }
}

TEST_CASE("classify succeeds with consistent rank data on every small form") {
  // Exhaustive over all nonzero 2x2 Gram matrices: the fingerprint must match
  // exactly one reference type, whose corank and radical agree with the
  // matrix rank data.
  for (auto [p, e] : {std::pair<std::uint32_t, std::uint32_t>{2, 1}, {3, 1}}) {
    auto K = Field::make(p, 2 * e);
    auto elems = K->elements();
    std::uint64_t checked = 0;
    for (auto g0 : elems)
      for (auto g1 : elems)
        for (auto g2 : elems)
          for (auto g3 : elems) {
            if (g0 == 0 && g1 == 0 && g2 == 0 && g3 == 0) continue;
            Mat G(K, 2, 2);
            G.a = {g0, g1, g2, g3};
            QbicForm F{p, e, K, G};
            auto t = classify(F);
            REQUIRE(t.dim() == 2);
            REQUIRE(t.corank() == 2 - rank(G));
            REQUIRE(t.b1() == radical(F).dim());
            ++checked;
          }
    CHECK(checked == K->order() * K->order() * K->order() * K->order() - 1);
  }
  // Dimension 3 over F_4: random sample plus every scalar multiple of every
  // normal form (scalings are equivalent over the algebraic closure, so the
  // geometric type is unchanged).
  auto K = Field::make(2, 2);
  for (const auto& t : all_types(3)) {
    auto F = normal_form(t, 2, 1, K);
    for (auto c : K->elements()) {
      if (c == 0) continue;
      Mat G = F.gram;
      for (auto& x : G.a) x = K->mul(x, c);
      CHECK(classify(QbicForm{2, 1, K, G}) == t);
    }
  }
  std::mt19937 rng(31);
  std::uniform_int_distribution<std::uint64_t> dist(0, K->order() - 1);
  for (int trial = 0; trial < 4000; ++trial) {
    Mat G(K, 3, 3);
    bool nonzero = false;
    for (auto& x : G.a) {
      x = K->from_int(dist(rng));
      nonzero |= (x != 0);
    }
    if (!nonzero) continue;
    QbicForm F{2, 1, K, G};
    auto t = classify(F);
    CHECK(t.corank() == 3 - rank(G));
    CHECK(t.b1() == radical(F).dim());
  }
}

TEST_CASE("classification is stable under field extension") {
  auto K4 = Field::make(2, 2);
  auto K16 = Field::make(2, 4);
  Embedding emb(K4, K16);
  std::mt19937 rng(63);
  std::uniform_int_distribution<std::uint64_t> dist(0, K4->order() - 1);
  int done = 0;
  while (done < 25) {
    Mat G(K4, 3, 3);
    bool nonzero = false;
    for (auto& x : G.a) {
      x = K4->from_int(dist(rng));
      nonzero |= (x != 0);
    }
    if (!nonzero) continue;
    Mat G16(K16, 3, 3);
    for (std::size_t i = 0; i < 9; ++i) G16.a[i] = emb(G.a[i]);
    CHECK(classify(QbicForm{2, 1, K4, G}) == classify(QbicForm{2, 1, K16, G16}));
    ++done;
  }
}

TEST_CASE("orthogonals of the Jordan blocks") {
  auto K = Field::make(2, 2);
  auto F = normal_form(QbicType::parse("N3"), 2, 1, K);
  auto R = right_orthogonal(F);
  auto L = left_orthogonal_descent(F);
  REQUIRE(R.dim() == 1);
  REQUIRE(L.dim() == 1);
  CHECK(subspace_member(R, {1, 0, 0}));
  CHECK(subspace_member(L, {0, 0, 1}));
  CHECK(radical(F).dim() == 0);
}

TEST_CASE("tangent spaces at smooth points") {
  auto K = Field::make(2, 2);
  auto F = normal_form(QbicType::parse("1^3"), 2, 1, K);
  auto T = tangent_space(F, {0, 1, 1});
  CHECK(T.dim() == 2);
  CHECK(subspace_member(T, {1, 0, 0}));
  CHECK_THROWS_AS(tangent_space(F, {1, 1, 1}), std::invalid_argument);

  // Every F_16-point of the Fermat q-bic surface has a 3-dimensional tangent
  // space containing the point itself.
  auto K16 = Field::make(2, 4);
  auto S = normal_form(QbicType::parse("1^4"), 2, 1, K16);
  int checked = 0;
  for (auto x0 : K16->elements())
    for (auto x1 : K16->elements())
      for (auto x2 : K16->elements()) {
        std::vector<Fel> v{x0, x1, x2, 1};
        if (evaluate(S, v) != 0) continue;
        auto Tv = tangent_space(S, v);
        CHECK(Tv.dim() == 3);
        CHECK(subspace_member(Tv, v));
        ++checked;
      }
  CHECK(checked > 0);
}

TEST_CASE("restriction of forms to subspaces") {
  auto K = Field::make(2, 2);
  auto F5 = normal_form(QbicType::parse("1^5"), 2, 1, K);
  Mat B(K, 4, 5);
  for (std::size_t i = 0; i < 4; ++i) B.at(i, i) = 1;
  Subspace U{K, 5, B};
  CHECK(classify(restrict_form(F5, U)).to_string() == "1^4");

  auto F = normal_form(QbicType::parse("1^3+N2"), 2, 1, K);
  Mat C(K, 3, 5);
  for (std::size_t i = 0; i < 3; ++i) C.at(i, i) = 1;
  CHECK(classify(restrict_form(F, Subspace{K, 5, C})).to_string() == "1^3");

  // Both basis vectors of span(e0, e2) in N2+N2 pair to zero with everything.
  auto F22 = normal_form(QbicType::parse("N2^2"), 2, 1, K);
  Mat D(K, 2, 4);
  D.at(0, 0) = 1;
  D.at(1, 2) = 1;
  auto Z = restrict_form(F22, Subspace{K, 4, D});
  for (auto x : Z.gram.a) CHECK(x == 0);
}

TEST_CASE("beta pairing is q-power semilinear on the left") {
  auto K = Field::make(3, 2);
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::uint64_t> dist(0, K->order() - 1);
  auto F = normal_form(QbicType::parse("1^2+N2"), 3, 1, K);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Fel> u(4), v(4), w(4);
    for (auto* vec : {&u, &v, &w})
      for (auto& x : *vec) x = K->from_int(dist(rng));
    Fel c = K->from_int(dist(rng));
    // beta(u + c w, v) = beta(u, v) + c^q beta(w, v)
    std::vector<Fel> ucw(4);
    for (int i = 0; i < 4; ++i) ucw[i] = K->add(u[i], K->mul(c, w[i]));
    Fel lhs = beta_pair(F, ucw, v);
    Fel rhs = K->add(beta_pair(F, u, v),
                     K->mul(K->frob_pow(c, F.e), beta_pair(F, w, v)));
    CHECK(lhs == rhs);
    // beta(u, v + c w) = beta(u, v) + c beta(u, w)
    std::vector<Fel> vcw(4);
    for (int i = 0; i < 4; ++i) vcw[i] = K->add(v[i], K->mul(c, w[i]));
    Fel lhs2 = beta_pair(F, u, vcw);
    Fel rhs2 = K->add(beta_pair(F, u, v), K->mul(c, beta_pair(F, u, w)));
    CHECK(lhs2 == rhs2);
  }
}

TEST_CASE("hermitian points of smooth q-bic curves") {
  // a smooth q-bic curve carries q^3 + 1 Hermitian points.
  struct Case { std::uint32_t p, e; std::size_t expect; };
  for (auto [p, e, expect] : {Case{2, 1, 9}, Case{3, 1, 28}, Case{2, 2, 65}}) {
    auto K = Field::make(p, 2 * e);
    auto F = normal_form(QbicType::parse("1^3"), p, e, K);
    auto pts = hermitian_points(F);
    CHECK(pts.size() == expect);
    for (const auto& x : pts) {
      CHECK(evaluate(F, x) == 0);
      CHECK(is_hermitian_vector(F, x));
      CHECK(phi(F, x) == x);
    }
  }
}

TEST_CASE("hermitian point count is a conjugation invariant") {
  std::mt19937 rng(5);
  auto K = Field::make(2, 2);
  auto F = normal_form(QbicType::parse("1^3"), 2, 1, K);
  for (int trial = 0; trial < 5; ++trial) {
    auto A = random_invertible(K, 3, rng);
    CHECK(hermitian_points(conjugate_form(F, A)).size() == 9);
  }
}

TEST_CASE("phi is the q^2 power map on the Fermat model") {
  // Over F_64 with q = 2 the descent matrix of the Fermat form is the
  // identity, so phi raises coordinates to the 4th power; its fixed points
  // are exactly the 9 Hermitian points, all defined over F_4.
  auto K64 = Field::make(2, 6);
  auto F = normal_form(QbicType::parse("1^3"), 2, 1, K64);
  std::size_t on_curve = 0, fixed = 0;
  auto probe = [&](std::vector<Fel> v) {
    if (evaluate(F, v) != 0) return;
    ++on_curve;
    auto img = phi(F, v);
    CHECK(evaluate(F, img) == 0);
    std::vector<Fel> expect(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) expect[i] = K64->frob_pow(v[i], 2);
    CHECK(img == normalize_point(*K64, expect));
    if (img == normalize_point(*K64, v)) ++fixed;
  };
  for (auto x1 : K64->elements())
    for (auto x2 : K64->elements()) probe({1, x1, x2});
  for (auto x2 : K64->elements()) probe({0, 1, x2});
  probe({0, 0, 1});
  CHECK(fixed == 9);
  CHECK(on_curve == 81);
}

TEST_CASE("hermitian machinery rejects singular forms") {
  auto K = Field::make(2, 2);
  auto F = normal_form(QbicType::parse("N2"), 2, 1, K);
  CHECK_THROWS_AS(hermitian_descent_matrix(F), std::invalid_argument);
  // ... but the direct identity still works: e0 pairs to zero both ways.
  CHECK(is_hermitian_vector(F, {0, 0}));
  CHECK(is_hermitian_vector(F, {1, 0}) == false);
}
