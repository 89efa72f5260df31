// Command line front end.  Subcommands wrap the library one verb per concept:
//
//   classify          type symbol of a q-bic form (from a Gram file or a type spec)
//   normal-form       Gram matrix of a type symbol
//   invariants        closed-form numerical invariants of the Fano surface
//   lines             Fano lines of a hypersurface over an enumeration field
//   hermitian         Hermitian points of a form
//   divisor           intersection divisor of a line with a plane q-bic curve
//   f-table           graded dimension table of the curve sheaves F_i
//   reps table        simple dimensions, graded table and Lambda split at a prime
//   frobenius-action  matrix of the Frobenius pullback action on H^n(X, O)
//   reproduce         run the recorded-value checks and emit a JSON report
//
// All input and output is JSON.  Elements are little-endian coefficient
// arrays in the polynomial basis; fields are {p, e, modulus}; matrices are
// {field, rows, cols, entries}; forms are {q: {p, e}, field, gram}.
// Exit codes: 0 success, 1 reproduction mismatch, 2 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qbic/fano.hpp"
#include "qbic/invariants.hpp"

using json = nlohmann::ordered_json;
using namespace qbic;

namespace {

struct GlobalOpts {
  std::string out;
  unsigned threads = 1;
  std::uint32_t seed = 12345;
};

std::pair<std::uint32_t, std::uint32_t> pe_split(std::uint32_t order) {
  std::uint32_t p = detail::char_of_prime_power(order);
  std::uint32_t e = 0;
  for (std::uint32_t m = order; m > 1; m /= p) ++e;
  return {p, e};
}

// ---- JSON codecs ----

json field_json(const Field& K) {
  return json{{"p", K.p()}, {"e", K.e()}, {"modulus", K.modulus()}};
}

FieldPtr field_from_json(const json& j) {
  std::uint32_t p = j.at("p").get<std::uint32_t>();
  std::uint32_t e = j.at("e").get<std::uint32_t>();
  if (!j.contains("modulus")) return Field::make(p, e);
  auto mod = j.at("modulus").get<std::vector<std::uint32_t>>();
  if (mod.size() != e + 1 || !detail::poly_irreducible(mod, p))
    throw std::invalid_argument("field modulus is not an irreducible degree-e polynomial");
  return Field::make(p, e, std::move(mod));
}

json elem_json(const Field& K, Fel x) { return json(K.coeffs(x)); }

Fel elem_from_json(const Field& K, const json& j) {
  return K.from_coeffs(j.get<std::vector<std::uint32_t>>());
}

json mat_entries_json(const Mat& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.cols; ++j) row.push_back(elem_json(*M.F, M.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json mat_json(const Mat& M) {
  return json{{"field", field_json(*M.F)},
              {"rows", M.rows},
              {"cols", M.cols},
              {"entries", mat_entries_json(M)}};
}

Mat mat_entries_from_json(const FieldPtr& K, const json& entries) {
  if (!entries.is_array() || entries.empty())
    throw std::invalid_argument("matrix entries must be a nonempty array of rows");
  std::size_t rows = entries.size(), cols = entries.at(0).size();
  Mat M(K, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const json& row = entries.at(i);
    if (row.size() != cols) throw std::invalid_argument("ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) M.at(i, j) = elem_from_json(*K, row.at(j));
  }
  return M;
}

json form_json(const QbicForm& F) {
  return json{{"q", {{"p", F.p}, {"e", F.e}}},
              {"field", field_json(*F.K)},
              {"gram", mat_entries_json(F.gram)}};
}

QbicForm form_from_json(const json& j) {
  std::uint32_t p = j.at("q").at("p").get<std::uint32_t>();
  std::uint32_t e = j.at("q").at("e").get<std::uint32_t>();
  FieldPtr K = field_from_json(j.at("field"));
  Mat G = mat_entries_from_json(K, j.at("gram"));
  return make_form(p, e, std::move(K), std::move(G));
}

json point_json(const Field& K, const Point& x) {
  json out = json::array();
  for (Fel c : x) out.push_back(elem_json(K, c));
  return out;
}

Point point_from_json(const Field& K, const json& j) {
  Point x;
  for (const json& c : j) x.push_back(elem_from_json(K, c));
  return x;
}

json line_json(const Subspace& L) { return mat_entries_json(L.basis); }

json type_json(const QbicType& t) {
  json b = json::object();
  for (auto [m, mult] : t.b) b[std::to_string(m)] = mult;
  return json{{"type", t.to_string()}, {"a", t.a},          {"b", b},
              {"corank", t.corank()},  {"radical_dim", t.b1()},
              {"nonsingular", t.corank() == 0}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void emit(const json& j, const GlobalOpts& g) {
  std::string text = j.dump(2);
  text += '\n';
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw std::invalid_argument("cannot open " + g.out + " for writing");
  f << text;
}

// Working field of order `order` (default def_order), validated against char p.
FieldPtr working_field(std::uint32_t p, std::uint32_t order, std::uint32_t def_order) {
  if (order == 0) order = def_order;
  auto [fp, fe] = pe_split(order);
  if (fp != p) throw std::invalid_argument("--field order has the wrong characteristic");
  return Field::make(fp, fe);
}

QbicForm form_from_flags(const std::string& gram_file, const std::string& type_spec,
                         std::uint32_t q, std::uint32_t field_order,
                         std::uint32_t def_field_factor) {
  if (!gram_file.empty() && !type_spec.empty())
    throw std::invalid_argument("give either --gram or --type, not both");
  if (!gram_file.empty()) return form_from_json(load_json_file(gram_file));
  if (type_spec.empty()) throw std::invalid_argument("one of --gram or --type is required");
  if (q == 0) throw std::invalid_argument("--type needs --q");
  auto [p, e] = pe_split(q);
  std::uint64_t def_order = 1;
  for (std::uint32_t i = 0; i < def_field_factor * e; ++i) def_order *= p;
  if (def_order > Field::kMaxOrder)
    throw std::invalid_argument("default enumeration field exceeds the supported order");
  FieldPtr K = working_field(p, field_order, static_cast<std::uint32_t>(def_order));
  return normal_form(QbicType::parse(type_spec), p, e, std::move(K));
}

bool mat_is_zero(const Mat& M) {
  for (Fel x : M.a)
    if (x != 0) return false;
  return true;
}

QbicForm conjugate_form(const QbicForm& F, const Mat& A) {
  Mat G2 = mat_mul(mat_mul(twist(transpose(A), F.e), F.gram), A);
  return QbicForm{F.p, F.e, F.K, std::move(G2)};
}

Mat random_invertible(const FieldPtr& K, std::size_t d, std::mt19937& rng) {
  std::uniform_int_distribution<std::uint32_t> pick(0, K->order() - 1);
  for (;;) {
    Mat A(K, d, d);
    for (auto& x : A.a) x = pick(rng);
    if (rank(A) == d) return A;
  }
}

// ---- subcommand bodies ----

int cmd_classify(const GlobalOpts& g, const std::string& gram_file,
                 const std::string& type_spec, std::uint32_t q) {
  QbicForm F = form_from_flags(gram_file, type_spec, q, 0, 1);
  emit(type_json(classify(F)), g);
  return 0;
}

int cmd_normal_form(const GlobalOpts& g, const std::string& type_spec, std::uint32_t q,
                    std::uint32_t field_order) {
  if (type_spec.empty() || q == 0) throw std::invalid_argument("--type and --q are required");
  auto [p, e] = pe_split(q);
  FieldPtr K = working_field(p, field_order, q);
  emit(form_json(normal_form(QbicType::parse(type_spec), p, e, std::move(K))), g);
  return 0;
}

int cmd_invariants(const GlobalOpts& g, std::uint32_t q) {
  if (q == 0) throw std::invalid_argument("--q is required");
  SurfaceInvariants v = surface_invariants(q);
  auto opt = [](const std::optional<std::int64_t>& x) {
    return x ? json(*x) : json(nullptr);
  };
  emit(json{{"q", v.q},
            {"deg_plucker", v.deg_plucker},
            {"c1_sq", v.c1_sq},
            {"c2", v.c2},
            {"chi_O", v.chi_O},
            {"bmy_defect", v.bmy_defect},
            {"h1_smooth", opt(v.h1_smooth)},
            {"h2_smooth", opt(v.h2_smooth)},
            {"h1_nodal", opt(v.h1_nodal)},
            {"h2_nodal", opt(v.h2_nodal)},
            {"betti1_half", v.betti1_half},
            {"hermitian_blowup_count", v.hermitian_blowup_count},
            {"conductor_delta", v.conductor_delta}},
       g);
  return 0;
}

int cmd_lines(const GlobalOpts& g, const std::string& gram_file, const std::string& type_spec,
              std::uint32_t q, std::uint32_t field_order, bool full, bool allow_large) {
  QbicForm F = form_from_flags(gram_file, type_spec, q, field_order, 2);
  json out{{"q", F.q()},
           {"field_order", F.K->order()},
           {"ambient_n", F.n()},
           {"type", type_spec.empty() ? json(nullptr) : json(type_spec)}};
  if (full) {
    auto ls = fano_lines(F, allow_large);
    out["count"] = ls.size();
    json arr = json::array();
    for (const auto& L : ls) arr.push_back(line_json(L));
    out["lines"] = std::move(arr);
  } else {
    out["count"] = count_fano_lines(F, allow_large);
  }
  emit(out, g);
  return 0;
}

int cmd_hermitian(const GlobalOpts& g, const std::string& gram_file,
                  const std::string& type_spec, std::uint32_t q, std::uint32_t field_order,
                  bool full) {
  QbicForm F = form_from_flags(gram_file, type_spec, q, field_order, 2);
  auto pts = hermitian_points(F);
  json out{{"q", F.q()}, {"field_order", F.K->order()}, {"count", pts.size()}};
  if (full) {
    json arr = json::array();
    for (const auto& x : pts) arr.push_back(point_json(*F.K, x));
    out["points"] = std::move(arr);
  }
  emit(out, g);
  return 0;
}

int cmd_divisor(const GlobalOpts& g, const std::string& gram_file, bool canonical,
                std::uint32_t q, std::uint32_t field_order, const std::string& p1,
                const std::string& p2, const std::string& tangent_at) {
  QbicForm C = [&] {
    if (!gram_file.empty()) return form_from_json(load_json_file(gram_file));
    if (q == 0) throw std::invalid_argument("--q is required without --gram");
    auto [p, e] = pe_split(q);
    FieldPtr K = working_field(p, field_order, q * q);
    if (canonical) return canonical_curve(q, std::move(K));
    return normal_form(QbicType::parse("1^3"), p, e, std::move(K));
  }();
  if (C.gram.rows != 3) throw std::invalid_argument("divisor needs a plane curve (3x3 gram)");
  const Field& K = *C.K;

  Subspace L = [&] {
    if (!tangent_at.empty()) {
      if (!p1.empty() || !p2.empty())
        throw std::invalid_argument("give either --tangent-at or --p1/--p2");
      Point x = point_from_json(K, json::parse(tangent_at));
      if (x.size() != 3) throw std::invalid_argument("points must have 3 coordinates");
      if (evaluate(C, x) != 0) throw std::invalid_argument("point is not on the curve");
      Subspace T = tangent_space(C, x);
      if (T.dim() != 2) throw std::invalid_argument("no tangent line at a singular point");
      return T;
    }
    if (p1.empty() || p2.empty())
      throw std::invalid_argument("give --p1 and --p2, or --tangent-at");
    Point a = point_from_json(K, json::parse(p1));
    Point b = point_from_json(K, json::parse(p2));
    if (a.size() != 3 || b.size() != 3)
      throw std::invalid_argument("points must have 3 coordinates");
    Subspace J = line_through(C.K, a, b);
    if (J.dim() != 2) throw std::invalid_argument("the two points coincide");
    return J;
  }();

  DivisorOnLine D = line_curve_divisor(C, L);
  json pts = json::array();
  for (const auto& P : D.points)
    pts.push_back(json{{"param", point_json(K, P.param)},
                       {"point", point_json(K, P.point)},
                       {"mult", P.mult}});
  emit(json{{"q", C.q()},
            {"degree", C.q() + 1},
            {"line", line_json(L)},
            {"points", std::move(pts)},
            {"unsplit_degree", D.unsplit_degree}},
       g);
  return 0;
}

int cmd_f_table(const GlobalOpts& g, std::uint32_t q, std::string mode, bool allow_large) {
  if (q == 0) throw std::invalid_argument("--q is required");
  auto [p, e] = pe_split(q);
  if (mode == "auto") mode = (e == 1) ? "formula" : "direct";
  GradedDimTable t = [&] {
    if (mode == "formula") {
      if (e != 1)
        throw std::invalid_argument("formula mode needs prime q; use --mode direct");
      return theorem_dims(q);
    }
    if (mode != "direct") throw std::invalid_argument("--mode must be direct or formula");
    std::uint32_t cap = allow_large ? 11 : 9;
    if (q > cap)
      throw std::invalid_argument("direct mode at q = " + std::to_string(q) +
                                  " exceeds the runtime budget" +
                                  (allow_large ? "" : "; pass --allow-large for q <= 11"));
    return graded_table_direct(q);
  }();
  json entries = json::array();
  for (auto [i, d] : t.entries) entries.push_back(json::array({i, d}));
  emit(json{{"q", t.q}, {"mode", t.formula ? "formula" : "direct"}, {"entries", entries}}, g);
  return 0;
}

int cmd_reps_table(const GlobalOpts& g, std::uint32_t p) {
  if (p == 0) throw std::invalid_argument("--p is required");
  GradedDimTable t = theorem_dims(p);  // also validates primality
  json simples = json::array();
  for (std::int64_t a = 0; a < p; ++a)
    for (std::int64_t b = 0; b < p; ++b) {
      SimpleDimResult r = simple_dim(a, b, p);
      simples.push_back(json{{"a", a},
                             {"b", b},
                             {"dim", r.determined ? json(r.dim) : json(nullptr)},
                             {"status", r.determined ? "determined" : "undetermined"}});
    }
  json f_table = json::array();
  for (auto [i, d] : t.entries) f_table.push_back(json::array({i, d}));
  auto [l1, l2] = lambda_split(p);
  emit(json{{"p", p},
            {"simples", std::move(simples)},
            {"f_table", std::move(f_table)},
            {"lambda", json::array({l1, l2})},
            {"total", theorem_total(p)}},
       g);
  return 0;
}

int cmd_frobenius_action(const GlobalOpts& g, const std::string& gram_file,
                         const std::string& type_spec, std::uint32_t q, std::uint32_t n,
                         std::uint32_t field_order) {
  std::string spec = type_spec;
  if (gram_file.empty() && spec.empty()) spec = "1^" + std::to_string(n + 1);
  QbicForm F = form_from_flags(gram_file, spec, q, field_order, 1);
  Mat M = frobenius_action_on_X(F);
  emit(json{{"q", F.q()},
            {"n", F.n()},
            {"matrix", mat_json(M)},
            {"is_zero", mat_is_zero(M)}},
       g);
  return 0;
}

// ---- the reproduction harness ----

struct RCheck {
  std::string name;       // "<suite>/<check>"
  std::string paper_ref;  // the identity or recorded value being audited
  json paper_value;
  bool heavy = false;  // excluded under the small budget
  std::function<json()> compute;
};

json count_lines_check(std::uint32_t q) {
  auto [p, e] = pe_split(q);
  auto K = Field::make(p, 2 * e);
  return json(count_fano_lines(normal_form(QbicType::parse("1^4"), p, e, K)));
}

json hermitian_count_check(std::uint32_t q) {
  auto [p, e] = pe_split(q);
  auto K = Field::make(p, 2 * e);
  return json(hermitian_points(normal_form(QbicType::parse("1^3"), p, e, K)).size());
}

json nodal_square_check(std::uint32_t q) {
  auto [p, e] = pe_split(q);
  auto K = Field::make(p, 2 * e);
  NodalGeometry NG = make_nodal(p, e, K);
  std::uint64_t failures = 0, checked = 0;
  for_each_fano_line(NG.X0, [&](const Subspace& L) {
    if (subspace_member(L, NG.x_plus) || subspace_member(L, NG.x_minus)) return;
    ++checked;
    auto [tangency, residual] = nodal_phi(NG, L);
    if (residual != phi(NG.C, tangency)) ++failures;
  });
  if (checked == 0) return json("no lines checked");
  return json(failures);
}

json curve_phi_frobenius_check(std::uint32_t q) {
  auto [p, e] = pe_split(q);
  auto K = Field::make(p, 4 * e);
  QbicForm C = normal_form(QbicType::parse("1^3"), p, e, K);
  std::uint64_t failures = 0;
  for (const Point& y : enumerate_points(K, 2)) {
    if (evaluate(C, y) != 0) continue;
    if (phi(C, y) != twist_vec(*K, y, 2 * e)) ++failures;
  }
  return json(failures);
}

json classification_roundtrip_check(std::uint32_t seed, std::uint32_t samples) {
  std::mt19937 rng(seed);
  std::uint64_t failures = 0;
  for (std::uint32_t q : {2u, 3u, 4u}) {
    auto [p, e] = pe_split(q);
    auto K = Field::make(p, e);
    for (std::uint32_t dim = 2; dim <= 5; ++dim)
      for (const QbicType& t : all_types(dim)) {
        QbicForm F = normal_form(t, p, e, K);
        for (std::uint32_t s = 0; s < samples; ++s) {
          Mat A = random_invertible(K, dim, rng);
          if (!(classify(conjugate_form(F, A)) == t)) ++failures;
        }
      }
  }
  return json(failures);
}

json fingerprint_separation_check() {
  for (std::uint32_t q : {2u, 3u, 4u}) {
    auto [p, e] = pe_split(q);
    for (std::uint32_t dim = 2; dim <= 5; ++dim)
      detail::reference_fingerprints(p, e, dim);  // throws on any collision
  }
  return json("separated");
}

json frobenius_vanishing_check() {
  std::uint32_t nonzero = 0;
  for (std::uint32_t q : {2u, 3u, 4u}) {
    auto [p, e] = pe_split(q);
    auto K = Field::make(p, e);
    for (std::uint32_t n = 2; n <= 4; ++n) {
      QbicForm F = normal_form(QbicType::parse("1^" + std::to_string(n + 1)), p, e, K);
      if (!mat_is_zero(frobenius_action_on_X(F))) ++nonzero;
    }
  }
  return json(nonzero);
}

json f_table_cross_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto direct = f_table_direct(p);
    auto formula = theorem_dims(p);
    for (std::uint32_t i = 0; i < p; ++i)
      if (direct.at(i) != formula.entries.at(i)) ++failures;
  }
  return json(failures);
}

json figure_row_check(std::uint32_t q) {
  json row = json::array();
  for (auto [i, d] : f_table_direct(q)) {
    (void)i;
    row.push_back(d);
  }
  return row;
}

json nu_nonzero_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::uint32_t i = 2; i <= p; ++i)
      if (mat_is_zero(nu_matrix(p, i).matrix)) ++failures;
  return json(failures);
}

json bwb_window_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto Fp = Field::make(p, 1);
    for (std::int64_t b = 0; b < p; ++b)
      for (std::int64_t a = -b - 5; a <= 3; ++a) {
        BundleCohomology c = homog_bundle_cohomology(a, b, Fp);
        bool inside = a >= -b - 1 && a <= -2;
        std::int64_t want = inside ? (-a - 1) * (a + b + 2) * (b + 1) / 2 : 0;
        if (c.h1 != want) ++failures;
      }
  }
  return json(failures);
}

json curve_restriction_check() {
  return json::array({curve_restriction_h0(1, 1, 2), curve_restriction_h0(2, 1, 3),
                      curve_restriction_h0(1, 2, 3), curve_restriction_h0(2, 2, 3),
                      curve_restriction_h0(2, 3, 5), curve_restriction_h0(4, 4, 5)});
}

json steinberg_check() {
  json out = json::array();
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    SimpleDimResult r = simple_dim(p - 1, p - 1, p);
    out.push_back(r.determined ? json(r.dim) : json(nullptr));
  }
  return out;
}

json jantzen_empty_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {3u, 5u}) {
    for (std::int64_t a = 0; a + 2 <= p; ++a)
      for (std::int64_t b = 0; a + b + 2 <= p; ++b)
        if (!jantzen_sum({a, b}, p).empty()) ++failures;
    if (!jantzen_sum({0, p - 1}, p).empty()) ++failures;
  }
  return json(failures);
}

json jantzen_1_b_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {3u, 5u}) {
    FormalChar want{{Weight{0, p - 3}, 1}};
    if (jantzen_sum({1, p - 2}, p) != want) ++failures;
  }
  return json(failures);
}

json simple_dims_p5_check() {
  json out = json::array();
  for (auto [a, b] : {std::pair<int, int>{2, 2}, {3, 3}, {2, 3}, {1, 3}}) {
    SimpleDimResult r = simple_dim(a, b, 5);
    out.push_back(r.determined ? json(r.dim) : json(nullptr));
  }
  return out;
}

json theorem_totals_check() {
  return json::array({theorem_total(2), theorem_total(3), theorem_total(5),
                      theorem_total(7), theorem_total(4)});
}

json lambda_split_check() {
  std::uint64_t failures = 0;
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    auto [l1, l2] = lambda_split(p);
    if (l1 + l2 != theorem_total(p)) ++failures;
  }
  return json(failures);
}

std::vector<RCheck> build_checks(const std::string& suite, std::uint32_t seed,
                                 const std::string& budget) {
  std::uint32_t samples = budget == "large" ? 1000 : 10;
  std::vector<RCheck> all;
  auto add = [&](std::string name, std::string ref, json paper, bool heavy,
                 std::function<json()> fn) {
    all.push_back({std::move(name), std::move(ref), std::move(paper), heavy, std::move(fn)});
  };

  add("counts/lines-smooth-surface-q2", "a smooth q-bic surface has (q+1)(q^3+1) lines",
      27, false, [] { return count_lines_check(2); });
  add("counts/lines-smooth-surface-q3", "a smooth q-bic surface has (q+1)(q^3+1) lines",
      112, false, [] { return count_lines_check(3); });
  add("counts/hermitian-points-q2", "a smooth q-bic curve has q^3+1 Hermitian points",
      9, false, [] { return hermitian_count_check(2); });
  add("counts/hermitian-points-q3", "a smooth q-bic curve has q^3+1 Hermitian points",
      28, false, [] { return hermitian_count_check(3); });
  add("counts/hermitian-points-q4", "a smooth q-bic curve has q^3+1 Hermitian points",
      65, true, [] { return hermitian_count_check(4); });
  add("counts/nodal-square-q2", "phi_minus = phi_C o phi_plus on lines avoiding the cone points",
      0, false, [] { return nodal_square_check(2); });
  add("counts/nodal-square-q3", "phi_minus = phi_C o phi_plus on lines avoiding the cone points",
      0, false, [] { return nodal_square_check(3); });
  add("counts/curve-phi-frobenius-q2", "phi_C is the q^2-power map in Hermitian coordinates",
      0, false, [] { return curve_phi_frobenius_check(2); });
  add("counts/curve-phi-frobenius-q3", "phi_C is the q^2-power map in Hermitian coordinates",
      0, false, [] { return curve_phi_frobenius_check(3); });
  add("counts/classification-roundtrip", "classify(A^(q)T G A) = classify(G) for invertible A",
      0, false, [seed, samples] { return classification_roundtrip_check(seed, samples); });
  add("counts/fingerprint-separation", "normal forms in dimensions 2..5 have distinct fingerprints",
      "separated", false, [] { return fingerprint_separation_check(); });

  add("invariants/chern-numbers-q2", "(c1^2, c2, chi) = (45, 27, 6) at q = 2",
      json::array({45, 27, 6}), false, [] {
        SurfaceInvariants v = surface_invariants(2);
        return json::array({v.c1_sq, v.c2, v.chi_O});
      });
  add("invariants/chern-numbers-q3", "(c1^2, c2, chi) = (1440, 432, 156) at q = 3",
      json::array({1440, 432, 156}), false, [] {
        SurfaceInvariants v = surface_invariants(3);
        return json::array({v.c1_sq, v.c2, v.chi_O});
      });
  add("invariants/noether", "12 chi = c1^2 + c2 for prime powers 2 <= q <= 16", 0, false, [] {
    std::int64_t worst = 0;
    for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
      SurfaceInvariants v = surface_invariants(q);
      worst = std::max(worst, std::abs(12 * v.chi_O - v.c1_sq - v.c2));
    }
    return json(worst);
  });
  add("invariants/bmy-sign-change", "c1^2 - 3c2 = q^2(q+1)^2(q^2-3q+1) < 0 only at q = 2",
      json::array({true, true}), false, [] {
        bool neg_at_2 = surface_invariants(2).bmy_defect < 0;
        bool pos_after = true;
        for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u})
          pos_after = pos_after && surface_invariants(q).bmy_defect > 0;
        return json::array({neg_at_2, pos_after});
      });
  add("invariants/euler-chain", "1 - h1 + h2 = chi in both smooth and nodal variants", 0,
      false, [] {
        std::uint64_t failures = 0;
        for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
          SurfaceInvariants v = surface_invariants(p);
          if (1 - *v.h1_smooth + *v.h2_smooth != v.chi_O) ++failures;
          if (1 - *v.h1_nodal + *v.h2_nodal != v.chi_O) ++failures;
          if (*v.h1_smooth != v.betti1_half) ++failures;
        }
        return json(failures);
      });
  add("invariants/nodal-consistency", "h1_nodal = (p^2+1)C(p,2)+C(p,3), correction p(p-1)(p-2)/6",
      json::array({json::array({0, 1, 10, 35}), json::array({5, 31, 270, 1085})}), false, [] {
        json corr = json::array(), h1 = json::array();
        for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
          NodalConsistency r = nodal_consistency(p);
          corr.push_back(r.correction);
          h1.push_back(r.h1_nodal);
        }
        return json::array({corr, h1});
      });
  add("invariants/hermitian-blowup", "the normalization blows up q^3+1 points",
      json::array({9, 28, 65}), false, [] {
        json out = json::array();
        for (std::uint32_t q : {2u, 3u, 4u})
          out.push_back(surface_invariants(q).hermitian_blowup_count);
        return out;
      });
  add("invariants/conductor", "conductor degree delta = 2q^2 - q - 2", json::array({4, 13}),
      false, [] {
        return json::array({surface_invariants(2).conductor_delta,
                            surface_invariants(3).conductor_delta});
      });

  add("cohom/frobenius-vanishing", "Frobenius acts by zero on H^n(X, O_X) for smooth X", 0,
      false, [] { return frobenius_vanishing_check(); });
  add("cohom/f-table-direct-vs-formula", "nu-kernel dims match the closed-form table at i < p",
      0, false, [] { return f_table_cross_check(); });
  add("cohom/figure-row-q8", "recorded row (28,36,42,46,51,48,55,42) at q = 8",
      json::array({28, 36, 42, 46, 51, 48, 55, 42}), true, [] { return figure_row_check(8); });
  add("cohom/figure-row-q9", "recorded row (36,45,52,58,60,61,71,60,52) at q = 9",
      json::array({36, 45, 52, 58, 60, 61, 71, 60, 52}), true,
      [] { return figure_row_check(9); });
  add("cohom/nu-nonzero", "the nu matrix is nonzero for 2 <= i <= p", 0, false,
      [] { return nu_nonzero_check(); });
  add("cohom/bwb-window", "h^1(Sym^b(T(-1))(a)) is nonzero exactly for -b-1 <= a <= -2", 0,
      false, [] { return bwb_window_check(); });
  add("cohom/curve-restriction", "pinned h^0 values of Sym^b(T(-1))(a) restricted to C",
      json::array({9, 16, 18, 30, 48, 135}), false, [] { return curve_restriction_check(); });

  add("reps/steinberg", "dim L(p-1, p-1) = p^3", json::array({8, 27, 125, 343}), false,
      [] { return steinberg_check(); });
  add("reps/jantzen-empty", "the Jantzen sum vanishes for a+b <= p-2 and (0, p-1)", 0, false,
      [] { return jantzen_empty_check(); });
  add("reps/jantzen-1-b", "Jantzen sum at (1, p-2) equals ch L(0, p-3)", 0, false,
      [] { return jantzen_1_b_check(); });
  add("reps/simple-dims-p5", "dim L(2,2), L(3,3), L(2,3), L(1,3) at p = 5",
      json::array({19, 63, 39, 18}), false, [] { return simple_dims_p5_check(); });
  add("reps/theorem-totals", "total dim = (p^2+1)C(p,2)+C(p,3); 106 at q = 4",
      json::array({5, 31, 270, 1085, 106}), false, [] { return theorem_totals_check(); });
  add("reps/lambda-split", "dim Lambda_1 + dim Lambda_2 equals the total", 0, false,
      [] { return lambda_split_check(); });

  if (suite == "all") return all;
  std::vector<RCheck> picked;
  for (auto& c : all)
    if (c.name.rfind(suite + "/", 0) == 0) picked.push_back(std::move(c));
  if (picked.empty()) throw std::invalid_argument("unknown suite " + suite);
  return picked;
}

int cmd_reproduce(const GlobalOpts& g, const std::string& suite, const std::string& budget,
                  bool summary) {
  if (budget != "small" && budget != "large")
    throw std::invalid_argument("--budget must be small or large");
  std::vector<RCheck> checks = build_checks(suite, g.seed, budget);

  struct Slot {
    json computed;
    std::string status;
    std::int64_t ms = 0;
  };
  std::vector<Slot> results(checks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < checks.size();) {
      Slot& slot = results[i];
      if (checks[i].heavy && budget == "small") {
        slot.computed = nullptr;
        slot.status = "skipped";
        continue;
      }
      auto t0 = std::chrono::steady_clock::now();
      try {
        slot.computed = checks[i].compute();
        slot.status = slot.computed == checks[i].paper_value ? "match" : "mismatch";
      } catch (const std::exception& e) {
        slot.computed = std::string("error: ") + e.what();
        slot.status = "mismatch";
      }
      slot.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    }
  };
  unsigned nthreads = std::max(1u, g.threads);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  json arr = json::array();
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    if (results[i].status == "mismatch") ++mismatches;
    arr.push_back(json{{"name", checks[i].name},
                       {"paper_value", checks[i].paper_value},
                       {"computed_value", results[i].computed},
                       {"status", results[i].status},
                       {"runtime_ms", results[i].ms},
                       {"paper_ref", checks[i].paper_ref}});
  }
  emit(json{{"suite", suite}, {"budget", budget}, {"checks", std::move(arr)},
            {"mismatches", mismatches}},
       g);
  if (summary) {
    for (std::size_t i = 0; i < checks.size(); ++i) {
      std::string name = checks[i].name;
      if (name.size() < 40) name.resize(40, ' ');
      std::cerr << name << "  " << results[i].status << "  " << results[i].ms << " ms\n";
    }
    std::cerr << (mismatches == 0 ? "all checks passed" :
                  std::to_string(mismatches) + " mismatch(es)") << "\n";
  }
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations around q-bic forms, hypersurfaces, and their Fano schemes"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--out", g.out, "write JSON output to this file instead of stdout");
  app.add_option("--threads", g.threads, "worker threads for the reproduction harness");
  app.add_option("--seed", g.seed, "seed for randomized property checks");

  int rc = 0;
  auto guard = [&rc](std::function<int()> body) {
    return [&rc, body = std::move(body)] {
      try {
        rc = body();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 2;
      }
    };
  };

  // classify
  std::string cl_gram, cl_type;
  std::uint32_t cl_q = 0;
  auto* classify_cmd = app.add_subcommand("classify", "type symbol of a q-bic form");
  classify_cmd->fallthrough();
  classify_cmd->add_option("--gram", cl_gram, "JSON form descriptor file");
  classify_cmd->add_option("--type", cl_type, "type spec such as 1^3+N2 (needs --q)");
  classify_cmd->add_option("--q", cl_q, "q = p^e");
  classify_cmd->callback(guard([&] { return cmd_classify(g, cl_gram, cl_type, cl_q); }));

  // normal-form
  std::string nf_type;
  std::uint32_t nf_q = 0, nf_field = 0;
  auto* nf_cmd = app.add_subcommand("normal-form", "Gram matrix of a type symbol");
  nf_cmd->fallthrough();
  nf_cmd->add_option("--type", nf_type, "type spec such as 1^3+N2")->required();
  nf_cmd->add_option("--q", nf_q, "q = p^e")->required();
  nf_cmd->add_option("--field", nf_field, "working field order (default q)");
  nf_cmd->callback(guard([&] { return cmd_normal_form(g, nf_type, nf_q, nf_field); }));

  // invariants
  std::uint32_t inv_q = 0;
  auto* inv_cmd = app.add_subcommand("invariants", "numerical invariants of the Fano surface");
  inv_cmd->fallthrough();
  inv_cmd->add_option("--q", inv_q, "q = p^e")->required();
  inv_cmd->callback(guard([&] { return cmd_invariants(g, inv_q); }));

  // lines
  std::string ln_gram, ln_type;
  std::uint32_t ln_q = 0, ln_field = 0;
  bool ln_full = false, ln_large = false;
  auto* ln_cmd = app.add_subcommand("lines", "Fano lines of a q-bic hypersurface");
  ln_cmd->fallthrough();
  ln_cmd->add_option("--gram", ln_gram, "JSON form descriptor file");
  ln_cmd->add_option("--type", ln_type, "type spec (default 1^4, a smooth surface)");
  ln_cmd->add_option("--q", ln_q, "q = p^e");
  ln_cmd->add_option("--field", ln_field, "enumeration field order (default q^2)");
  ln_cmd->add_flag("--full", ln_full, "list the lines, not just the count");
  ln_cmd->add_flag("--allow-large", ln_large, "raise the enumeration budget");
  ln_cmd->callback(guard([&] {
    if (ln_gram.empty() && ln_type.empty()) ln_type = "1^4";
    return cmd_lines(g, ln_gram, ln_type, ln_q, ln_field, ln_full, ln_large);
  }));

  // hermitian
  std::string hm_gram, hm_type;
  std::uint32_t hm_q = 0, hm_field = 0;
  bool hm_full = false;
  auto* hm_cmd = app.add_subcommand("hermitian", "Hermitian points of a nonsingular form");
  hm_cmd->fallthrough();
  hm_cmd->add_option("--gram", hm_gram, "JSON form descriptor file");
  hm_cmd->add_option("--type", hm_type, "type spec (default 1^3, a smooth curve)");
  hm_cmd->add_option("--q", hm_q, "q = p^e");
  hm_cmd->add_option("--field", hm_field, "working field order (default q^2)");
  hm_cmd->add_flag("--full", hm_full, "list the points, not just the count");
  hm_cmd->callback(guard([&] {
    if (hm_gram.empty() && hm_type.empty()) hm_type = "1^3";
    return cmd_hermitian(g, hm_gram, hm_type, hm_q, hm_field, hm_full);
  }));

  // divisor
  std::string dv_gram, dv_p1, dv_p2, dv_tangent;
  std::uint32_t dv_q = 0, dv_field = 0;
  bool dv_canonical = false;
  auto* dv_cmd = app.add_subcommand("divisor", "divisor cut on a line by a plane q-bic curve");
  dv_cmd->fallthrough();
  dv_cmd->add_option("--gram", dv_gram, "JSON form descriptor file for the curve");
  dv_cmd->add_flag("--canonical", dv_canonical,
                   "use the curve x^q y + x y^q - z^(q+1) instead of the Fermat model");
  dv_cmd->add_option("--q", dv_q, "q = p^e");
  dv_cmd->add_option("--field", dv_field, "working field order (default q^2)");
  dv_cmd->add_option("--p1", dv_p1, "first point of the line, JSON coefficient lists");
  dv_cmd->add_option("--p2", dv_p2, "second point of the line");
  dv_cmd->add_option("--tangent-at", dv_tangent, "use the tangent line at this curve point");
  dv_cmd->callback(guard([&] {
    return cmd_divisor(g, dv_gram, dv_canonical, dv_q, dv_field, dv_p1, dv_p2, dv_tangent);
  }));

  // f-table
  std::uint32_t ft_q = 0;
  std::string ft_mode = "auto";
  bool ft_large = false;
  auto* ft_cmd = app.add_subcommand("f-table", "graded dimensions of the curve sheaves F_i");
  ft_cmd->fallthrough();
  ft_cmd->add_option("--q", ft_q, "q = p^e")->required();
  ft_cmd->add_option("--mode", ft_mode, "direct | formula (default: formula for prime q)");
  ft_cmd->add_flag("--allow-large", ft_large, "allow direct mode up to q = 11");
  ft_cmd->callback(guard([&] { return cmd_f_table(g, ft_q, ft_mode, ft_large); }));

  // reps table
  auto* reps_cmd = app.add_subcommand("reps", "modular representation tables");
  reps_cmd->require_subcommand(1);
  std::uint32_t rp_p = 0;
  auto* rt_cmd = reps_cmd->add_subcommand("table", "simple dimensions and the graded table");
  rt_cmd->fallthrough();
  rt_cmd->add_option("--p", rp_p, "prime p")->required();
  rt_cmd->callback(guard([&] { return cmd_reps_table(g, rp_p); }));

  // frobenius-action
  std::string fa_gram, fa_type;
  std::uint32_t fa_q = 0, fa_n = 3, fa_field = 0;
  auto* fa_cmd = app.add_subcommand("frobenius-action",
                                    "matrix of Frobenius pullback on H^n(X, O_X)");
  fa_cmd->fallthrough();
  fa_cmd->add_option("--gram", fa_gram, "JSON form descriptor file");
  fa_cmd->add_option("--type", fa_type, "type spec (default the smooth form 1^(n+1))");
  fa_cmd->add_option("--q", fa_q, "q = p^e");
  fa_cmd->add_option("--n", fa_n, "ambient projective dimension (default 3)");
  fa_cmd->add_option("--field", fa_field, "working field order (default q)");
  fa_cmd->callback(guard([&] {
    return cmd_frobenius_action(g, fa_gram, fa_type, fa_q, fa_n, fa_field);
  }));

  // reproduce
  std::string rp_suite = "all", rp_budget = "small";
  bool rp_summary = false;
  auto* rp_cmd = app.add_subcommand("reproduce", "compare computed values against recorded ones");
  rp_cmd->fallthrough();
  rp_cmd->add_option("--suite", rp_suite, "counts | invariants | cohomology | reps | all")
      ->check(CLI::IsMember({"counts", "invariants", "cohom", "cohomology", "reps", "all"}));
  rp_cmd->add_option("--budget", rp_budget, "small | large (large adds q = 8, 9 rows and F_16)");
  rp_cmd->add_flag("--summary", rp_summary, "print a plain-text table to stderr");
  rp_cmd->callback(guard([&] {
    std::string s = rp_suite == "cohomology" ? "cohom" : rp_suite;
    return cmd_reproduce(g, s, rp_budget, rp_summary);
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return rc;
}
