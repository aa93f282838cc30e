#include "btlab/verify.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

#include "btlab/bttree.hpp"
#include "btlab/cochains.hpp"
#include "btlab/errors.hpp"
#include "btlab/groups.hpp"
#include "btlab/random.hpp"
#include "btlab/vdput.hpp"

namespace btlab {

using nlohmann::json;

// ------------------------------------------------------------------ plumbing

json RunParams::to_json() const { return {{"field", field.to_json()}, {"n", n}, {"seed", seed}}; }

RunParams RunParams::from_json(const json& j) {
  RunParams P;
  P.field = FieldConfig::from_json(j.at("field"));
  P.n = j.at("n").get<int>();
  P.seed = j.at("seed").get<std::uint64_t>();
  return P;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

namespace {

json unsigned_body(const json& cert) {
  json body = cert;
  body.erase("checksum");
  return body;
}

}  // namespace

json Certificate::to_json() const {
  json j = {{"name", name},
            {"anchor", anchor},
            {"config", config},
            {"status", passed ? "pass" : "fail"},
            {"payload", payload}};
  j["checksum"] = sha256_hex(j.dump());
  return j;
}

std::string Certificate::checksum() const { return to_json().at("checksum").get<std::string>(); }

std::string Certificate::file_name() const {
  int q = FieldConfig::from_json(config.at("field")).q();
  return name + "_q" + std::to_string(q) + "_n" + std::to_string(config.at("n").get<int>()) + ".json";
}

// -------------------------------------------------------------------- claims

namespace {

bool is_zero_matrix(const IntMatrix& M) {
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M(i, j) != 0) return false;
  return true;
}

json snf_json(const SmithDecomposition& S) {
  return {{"U", S.U.to_json()}, {"D", S.D.to_json()}, {"V", S.V.to_json()}};
}

// Rebuilds a decomposition of A from a claim and re-checks it.
std::optional<SmithDecomposition> checked_snf(const IntMatrix& A, const json& c) {
  SmithDecomposition S;
  S.U = IntMatrix::from_json(c.at("U"));
  S.D = IntMatrix::from_json(c.at("D"));
  S.V = IntMatrix::from_json(c.at("V"));
  S.has_u = true;
  std::size_t k = std::min(S.D.rows(), S.D.cols());
  while (S.rank < k && S.D(S.rank, S.rank) != 0) ++S.rank;
  if (!verify_snf(A, S)) return std::nullopt;
  return S;
}

// Order of v in Z^r / col(A) read off a decomposition; nullopt if infinite.
std::optional<mpz_class> order_from_snf(const SmithDecomposition& S, const IntVec& v) {
  IntVec w = S.U * v;
  mpz_class order = 1;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i >= S.rank) {
      if (w[i] != 0) return std::nullopt;
      continue;
    }
    mpz_class d = S.D(i, i), g;
    mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), w[i].get_mpz_t());
    mpz_class k = d / g;
    mpz_lcm(order.get_mpz_t(), order.get_mpz_t(), k.get_mpz_t());
  }
  return order;
}

// Value of x as a multiple of the generator's class in a cyclic cokernel.
mpz_class value_from_snf(const SmithDecomposition& S, const IntVec& x, const IntVec& gen) {
  std::size_t r = S.D.rows();
  if (r == 0 || S.rank != r) throw Error("class value: cokernel is not finite");
  for (std::size_t i = 0; i + 1 < r; ++i)
    if (S.D(i, i) != 1) throw Error("class value: cokernel is not cyclic");
  mpz_class m = S.D(r - 1, r - 1);
  if (m == 1) return 0;
  IntVec w = S.U * x, u = S.U * gen;
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), u[r - 1].get_mpz_t(), m.get_mpz_t()) == 0)
    throw Error("class value: generator does not generate");
  mpz_class val = w[r - 1] * inv;
  mpz_fdiv_r(val.get_mpz_t(), val.get_mpz_t(), m.get_mpz_t());
  return val;
}

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

constexpr long kMaxCrtScan = 100000;

bool eval_claim(const json& c) {
  const std::string kind = c.at("kind").get<std::string>();
  if (kind == "snf") {
    IntMatrix A = IntMatrix::from_json(c.at("A"));
    auto S = checked_snf(A, c);
    return S && quotient_from_snf(*S).to_json() == c.at("expected") && c.at("cokernel") == c.at("expected");
  }
  if (kind == "matmul") {
    IntMatrix A = IntMatrix::from_json(c.at("A"));
    if (c.at("x").is_object()) {
      IntMatrix X = IntMatrix::from_json(c.at("x")), B = IntMatrix::from_json(c.at("b"));
      return A.cols() == X.rows() && A * X == B;
    }
    IntVec x = vec_from_json(c.at("x"));
    return A.cols() == x.size() && A * x == vec_from_json(c.at("b"));
  }
  if (kind == "equal") return c.at("a") == c.at("b");
  if (kind == "kernel") {
    IntMatrix A = IntMatrix::from_json(c.at("A")), K = IntMatrix::from_json(c.at("K"));
    if (K.rows() != A.cols() || !is_zero_matrix(A * K)) return false;
    if (K.cols() != A.cols() - snf(A, false).rank) return false;
    if (K.cols() == 0) return true;
    SmithDecomposition SK = snf(K, false);
    if (SK.rank != K.cols()) return false;
    for (std::size_t i = 0; i < SK.rank; ++i)
      if (SK.D(i, i) != 1) return false;
    return true;
  }
  if (kind == "class_order") {
    IntMatrix A = IntMatrix::from_json(c.at("A"));
    auto S = checked_snf(A, c);
    if (!S) return false;
    auto k = order_from_snf(*S, vec_from_json(c.at("v")));
    return k && *k == mpz_from_json(c.at("order"));
  }
  if (kind == "class_value") {
    IntMatrix A = IntMatrix::from_json(c.at("A"));
    auto S = checked_snf(A, c);
    if (!S) return false;
    mpz_class m = mpz_from_json(c.at("modulus"));
    if (S->D.rows() == 0 || S->D(S->D.rows() - 1, S->D.rows() - 1) != m) return false;
    mpz_class v = value_from_snf(*S, vec_from_json(c.at("x")), vec_from_json(c.at("generator")));
    return mod(v - mpz_from_json(c.at("value")), m) == 0;
  }
  if (kind == "modeq") {
    mpz_class m = mpz_from_json(c.at("modulus"));
    return m != 0 && mod(mpz_from_json(c.at("a")) - mpz_from_json(c.at("b")), m) == 0;
  }
  if (kind == "unimodular") {
    IntMatrix M = IntMatrix::from_json(c.at("M"));
    if (M.rows() != M.cols()) return false;
    mpz_class d = determinant(M);
    return d == 1 || d == -1;
  }
  if (kind == "bezout") {
    return mpz_from_json(c.at("a")) * mpz_from_json(c.at("x")) + mpz_from_json(c.at("b")) * mpz_from_json(c.at("y")) ==
           1;
  }
  if (kind == "crt_scan") {
    mpz_class m1 = mpz_from_json(c.at("m1")), m2 = mpz_from_json(c.at("m2"));
    if (m1 <= 0 || m2 <= 0 || m1 * m2 > kMaxCrtScan) return false;
    long a1 = m1.get_si(), a2 = m2.get_si();
    std::vector<bool> hit(static_cast<std::size_t>(a1 * a2), false);
    for (long a = 0; a < a1 * a2; ++a) {
      auto key = static_cast<std::size_t>((a % a1) * a2 + a % a2);
      if (hit[key]) return false;
      hit[key] = true;
    }
    return true;
  }
  return false;
}

}  // namespace

bool evaluate_claim(const json& claim) {
  try {
    return eval_claim(claim);
  } catch (const std::exception&) {
    return false;
  }
}

mpz_class class_value(const IntMatrix& A, const IntVec& x, const IntVec& generator) {
  return value_from_snf(snf(A), x, generator);
}

void ClaimList::push(json claim) {
  bool ok = evaluate_claim(claim);
  claim["ok"] = ok;
  ok_ = ok_ && ok;
  checks_.push_back(std::move(claim));
}

void ClaimList::add_snf(const std::string& label, const IntMatrix& A, const QuotientStructure& expected) {
  SmithDecomposition S = snf(A);
  json c = snf_json(S);
  c.update({{"kind", "snf"},
            {"label", label},
            {"A", A.to_json()},
            {"cokernel", quotient_from_snf(S).to_json()},
            {"expected", expected.to_json()}});
  push(std::move(c));
}

void ClaimList::add_matmul(const std::string& label, const IntMatrix& A, const IntVec& x, const IntVec& b) {
  push({{"kind", "matmul"}, {"label", label}, {"A", A.to_json()}, {"x", vec_json(x)}, {"b", vec_json(b)}});
}

void ClaimList::add_matmul(const std::string& label, const IntMatrix& A, const IntMatrix& X, const IntMatrix& B) {
  push({{"kind", "matmul"}, {"label", label}, {"A", A.to_json()}, {"x", X.to_json()}, {"b", B.to_json()}});
}

void ClaimList::add_equal(const std::string& label, const json& a, const json& b) {
  push({{"kind", "equal"}, {"label", label}, {"a", a}, {"b", b}});
}

void ClaimList::add_kernel(const std::string& label, const IntMatrix& A, const IntMatrix& K) {
  push({{"kind", "kernel"}, {"label", label}, {"A", A.to_json()}, {"K", K.to_json()}});
}

void ClaimList::add_class_order(const std::string& label, const IntMatrix& A, const IntVec& v,
                                const mpz_class& order) {
  json c = snf_json(snf(A));
  c.update({{"kind", "class_order"}, {"label", label}, {"A", A.to_json()}, {"v", vec_json(v)}, {"order", mpz_json(order)}});
  push(std::move(c));
}

void ClaimList::add_class_value(const std::string& label, const IntMatrix& A, const IntVec& x,
                                const IntVec& generator, const mpz_class& modulus, const mpz_class& value) {
  json c = snf_json(snf(A));
  c.update({{"kind", "class_value"},
            {"label", label},
            {"A", A.to_json()},
            {"x", vec_json(x)},
            {"generator", vec_json(generator)},
            {"modulus", mpz_json(modulus)},
            {"value", mpz_json(value)}});
  push(std::move(c));
}

void ClaimList::add_modeq(const std::string& label, const mpz_class& a, const mpz_class& b, const mpz_class& m) {
  push({{"kind", "modeq"}, {"label", label}, {"a", mpz_json(a)}, {"b", mpz_json(b)}, {"modulus", mpz_json(m)}});
}

void ClaimList::add_unimodular(const std::string& label, const IntMatrix& M) {
  push({{"kind", "unimodular"}, {"label", label}, {"M", M.to_json()}});
}

void ClaimList::add_bezout(const std::string& label, const mpz_class& a, const mpz_class& b) {
  mpz_class g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  push({{"kind", "bezout"},
        {"label", label},
        {"a", mpz_json(a)},
        {"b", mpz_json(b)},
        {"x", mpz_json(x)},
        {"y", mpz_json(y)}});
}

void ClaimList::add_crt_scan(const std::string& label, const mpz_class& m1, const mpz_class& m2) {
  push({{"kind", "crt_scan"}, {"label", label}, {"m1", mpz_json(m1)}, {"m2", mpz_json(m2)}});
}

// ------------------------------------------------------------ verification

const std::vector<std::string>& certificate_names() {
  static const std::vector<std::string> names{"sigma_closed_forms", "coker_g0",        "iwahori",
                                              "g0_global",          "crt_and_diagram", "pstar_j"};
  return names;
}

VerifyReport verify_certificate(const json& cert) {
  VerifyReport R;
  auto fail = [&](std::string why) {
    R.ok = false;
    R.problems.push_back(std::move(why));
  };
  for (const char* key : {"name", "anchor", "config", "status", "payload", "checksum"})
    if (!cert.contains(key)) fail(std::string("missing field ") + key);
  if (!R.ok) return R;
  if (cert.size() != 6) fail("unexpected fields");
  if (!cert.at("checksum").is_string() || cert.at("checksum").get<std::string>() != sha256_hex(unsigned_body(cert).dump()))
    fail("checksum mismatch");
  const auto& names = certificate_names();
  if (!cert.at("name").is_string() ||
      std::find(names.begin(), names.end(), cert.at("name").get<std::string>()) == names.end())
    fail("unknown certificate name");
  const json& payload = cert.at("payload");
  if (!payload.is_object() || !payload.contains("data") || !payload.contains("checks") ||
      !payload.at("checks").is_array()) {
    fail("malformed payload");
    return R;
  }
  bool all = !payload.at("checks").empty();
  for (const auto& claim : payload.at("checks")) {
    bool ok = evaluate_claim(claim);
    std::string label = claim.value("label", std::string("?"));
    if (!claim.contains("ok") || claim.at("ok") != ok) fail("claim outcome differs from record: " + label);
    if (!ok) all = false;
  }
  const json& status = cert.at("status");
  if (status != (all ? "pass" : "fail")) fail("status does not match the claims");
  if (!all) fail("certificate records a failed claim");
  return R;
}

// ------------------------------------------------------------- closed forms

namespace {

mpz_class pow_q(int q, long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(e));
  return r;
}

mpz_class geometric(int q, long top) {
  mpz_class s = 0;
  for (long j = 0; j <= top; ++j) s += pow_q(q, j);
  return s;
}

IntVec unit(std::size_t size, std::size_t i) {
  IntVec e(size, 0);
  e[i] = 1;
  return e;
}

json index_json(const std::vector<long>& v) { return json(v); }

std::vector<long> range(long lo, long hi) {
  std::vector<long> r;
  for (long i = lo; i <= hi; ++i) r.push_back(i);
  return r;
}

}  // namespace

IntMatrix g0_sigma_closed_form(int q, int n) {
  auto m = static_cast<std::size_t>(n + 1);
  IntMatrix M(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    M(j, j) = j == 0 ? q + 1 : q;
    if (j + 1 < m) M(j + 1, j) = 1;
  }
  return M;
}

IntMatrix iwahori_sigma_closed_form(int q, int n) {
  // Rows v_{-n}..v_{n+1}, columns e_{-(n+1)}..e_{n+1}, e_i = {v_i, v_{i+1}}.
  IntMatrix M(static_cast<std::size_t>(2 * n + 2), static_cast<std::size_t>(2 * n + 3));
  auto set = [&](long vertex, long edge, long value) {
    if (vertex < -n || vertex > n + 1) return;
    M(static_cast<std::size_t>(vertex + n), static_cast<std::size_t>(edge + n + 1)) = value;
  };
  for (long i = -(n + 1); i <= n + 1; ++i) {
    if (i == 0) {
      set(0, 0, 1);
      set(1, 0, 1);
    } else if (i > 0) {
      set(i, i, q);
      set(i + 1, i, 1);
    } else {
      set(i + 1, i, q);
      set(i, i, 1);
    }
  }
  return M;
}

IntVec psi_coordinates(int q, int n) {
  IntVec v;
  for (long i = -(n + 1); i <= n + 1; ++i) {
    long a = i < 0 ? -i : i;
    mpz_class c = pow_q(q, n + 1 - a);
    v.push_back(a % 2 == 0 ? c : mpz_class(-c));
  }
  return v;
}

mpz_class b_closed(int q, int n) { return geometric(q, 2 * (n / 2)); }

mpz_class c_closed(int q, int n) {
  // n = 0 uses -(1 + q); any choice with c_0 = 0 mod (q+1) gives the same class.
  if (n == 0) return -geometric(q, 1);
  return -geometric(q, 2 * ((n - 1) / 2) + 1);
}

// -------------------------------------------------------------- certificates

namespace {

struct Context {
  RunParams P;
  Tree T;
  int q;
  Certificate cert;
  ClaimList claims;
  json data = json::object();

  static RunParams checked(RunParams P) {
    P.field.validate();
    if (P.n < 0 || P.n > RunParams::kMaxN)
      throw InvalidConfig("n must lie in [0, " + std::to_string(RunParams::kMaxN) + "]");
    return P;
  }

  Context(const RunParams& params, std::string name, std::string anchor)
      : P(checked(params)), T(P.field), q(T.q()) {
    cert.name = std::move(name);
    cert.anchor = std::move(anchor);
    cert.config = P.to_json();
  }

  Certificate finish() {
    cert.passed = claims.all_ok();
    cert.payload = {{"data", data}, {"checks", claims.checks()}};
    return cert;
  }
};

mpz_class q_n_q1(int q, int n) { return pow_q(q, n) * (q + 1); }

std::vector<std::int64_t> parity_values(const Tree& T, const SubtreeWindow& w, std::int64_t even, std::int64_t odd) {
  std::vector<std::int64_t> v;
  for (const auto& x : w.vertices) v.push_back(T.parity(x) == Parity::Even ? even : odd);
  return v;
}

IntVec scaled(const IntVec& v, const mpz_class& k) {
  IntVec r = v;
  for (auto& x : r) x *= k;
  return r;
}

/// Sigma on G^0-invariants (rows: even, odd vertices; one edge orbit), the
/// integral isomorphism T and the twisted s-action S on the vertex orbits.
struct GlobalG0 {
  IntMatrix A, T, Tinv, S, C;
};

GlobalG0 global_g0(const Tree& T, int n, ClaimList* claims) {
  int q = T.q();
  // V_0 has no odd vertex.
  n = std::max(n, 1);
  auto V = T.window(WindowKind::Tn, n);
  auto E = T.window(WindowKind::Tn, n + 1);
  std::vector<std::int64_t> ones(E->edges.size(), 1);
  CochainVector all{E, Domain::Edges, ones};
  CochainVector s = sigma(all, V);
  if (claims) claims->add_equal("Sigma(1_E) = q+1 on V_n", s.values, std::vector<std::int64_t>(s.size(), q + 1));

  GlobalG0 G;
  // Value at v0 (even) and v1 (odd).
  G.A = IntMatrix(2, 1);
  G.A(0, 0) = s.values[static_cast<std::size_t>(V->vertex_index(T.v0()))];
  G.A(1, 0) = s.values[static_cast<std::size_t>(V->vertex_index(T.apartment_vertex(1)))];
  G.T = IntMatrix::from_rows({{-1, 1}, {1, 0}});
  G.Tinv = IntMatrix::from_rows({{0, 1}, {1, 1}});
  // (s f)(x) = -f(s^{-1} x): the indicator of a parity class goes to minus the
  // indicator of its image.
  G.S = IntMatrix(2, 2);
  Mat2 sm = T.s();
  const VertexLabel base[2] = {T.v0(), T.apartment_vertex(1)};
  for (std::size_t j = 0; j < 2; ++j) {
    std::size_t image = T.parity(T.act(sm, base[j])) == Parity::Even ? 0 : 1;
    G.S(image, j) = -1;
  }
  G.C = G.T * G.S * G.Tinv;
  return G;
}

}  // namespace

Certificate cert_sigma_closed_forms(const RunParams& P) {
  Context X(P, "sigma_closed_forms", "Sigma on invariant indicators: G0 and Iwahori closed forms");
  int n = X.P.n, q = X.q;
  auto G = invariant_sigma(X.T, SubgroupTag::max_compact(), n);
  auto I = invariant_sigma(X.T, SubgroupTag::iwahori(), n);
  X.claims.add_equal("G0 vertex orbits v_0..v_n", index_json(G.vertices.apartment_index), index_json(range(0, n)));
  X.claims.add_equal("G0 edge orbits e_0..e_n", index_json(G.edges.apartment_index), index_json(range(0, n)));
  X.claims.add_equal("G0 matrix", G.matrix.to_json(), g0_sigma_closed_form(q, n).to_json());
  X.claims.add_equal("Iwahori vertex orbits v_-n..v_n+1", index_json(I.vertices.apartment_index),
                     index_json(range(-n, n + 1)));
  X.claims.add_equal("Iwahori edge orbits e_-(n+1)..e_n+1", index_json(I.edges.apartment_index),
                     index_json(range(-(n + 1), n + 1)));
  X.claims.add_equal("Iwahori matrix", I.matrix.to_json(), iwahori_sigma_closed_form(q, n).to_json());
  X.data = {{"g0", G.matrix.to_json()}, {"iwahori", I.matrix.to_json()}};
  return X.finish();
}

Certificate cert_coker_g0(const RunParams& P) {
  Context X(P, "coker_g0", "H1(G0, F(E_{n+1})) = Z/q^n(q+1), generated by the class of 1_{G0 v0}");
  int n = X.P.n, q = X.q;
  auto G = invariant_sigma(X.T, SubgroupTag::max_compact(), n);
  const IntMatrix& A = G.matrix;
  mpz_class m = q_n_q1(q, n);
  QuotientStructure expected;
  expected.torsion = {m};
  X.claims.add_snf("cokernel Z/q^n(q+1)", A, expected);
  std::size_t r = A.rows();
  X.claims.add_class_order("order of 1_{v0}", A, unit(r, 0), m);

  json relations = json::array();
  for (int i = 1; i <= n; ++i) {
    mpz_class coef = pow_q(q, i - 1) * (q + 1);
    if (i % 2 == 1) coef = -coef;
    IntVec b = unit(r, static_cast<std::size_t>(i));
    b[0] -= coef;
    std::string label = "1_{v" + std::to_string(i) + "} = " + coef.get_str() + " 1_{v0} mod image";
    SolveResult sol = solve_integer(A, b);
    if (sol.solvable)
      X.claims.add_matmul(label, A, sol.x, b);
    else
      X.claims.add_equal(label, "no integral solution", "solvable");
    relations.push_back({{"i", i}, {"coefficient", mpz_json(coef)}});
  }
  X.data = {{"matrix", A.to_json()},
            {"invariant_factors", vec_json(snf(A, false).nonzero_diagonal())},
            {"cokernel", cokernel_structure(A).str()},
            {"class_order_v0", mpz_json(m)},
            {"relations", relations}};
  return X.finish();
}

Certificate cert_iwahori(const RunParams& P) {
  Context X(P, "iwahori", "Iwahori: invariant currents Z psi_n, s psi_n = -psi_n, cokernel Z/q^{n+1}");
  int n = X.P.n, q = X.q;
  auto I = invariant_sigma(X.T, SubgroupTag::iwahori(), n);
  const IntMatrix& A = I.matrix;
  IntVec psi = psi_coordinates(q, n);
  X.claims.add_equal("edge orbits e_-(n+1)..e_n+1", index_json(I.edges.apartment_index),
                     index_json(range(-(n + 1), n + 1)));
  X.claims.add_kernel("kernel = Z psi_n", A, IntMatrix::from_columns({psi}, psi.size()));

  CochainVector c = I.edges.combination(psi);
  IntVec s_image = I.edges.coordinates(s_twisted_act(X.T, c));
  X.claims.add_equal("s psi_n = -psi_n", vec_json(s_image), vec_json(scaled(psi, -1)));

  auto I1 = invariant_sigma(X.T, SubgroupTag::iwahori(), n + 1);
  CochainVector c1 = I1.edges.combination(psi_coordinates(q, n + 1));
  IntVec restricted = I.edges.coordinates(c1.restrict_to(I.edges.window));
  X.claims.add_equal("psi_{n+1} restricts to q psi_n", vec_json(restricted), vec_json(scaled(psi, q)));

  QuotientStructure expected;
  expected.torsion = {pow_q(q, n + 1)};
  X.claims.add_snf("cokernel Z/q^{n+1}", A, expected);
  X.data = {{"matrix", A.to_json()},
            {"psi", vec_json(psi)},
            {"cokernel", cokernel_structure(A).str()},
            {"edge_orbits", index_json(I.edges.apartment_index)}};
  return X.finish();
}

Certificate cert_g0_global(const RunParams& P) {
  Context X(P, "g0_global", "G^0: cokernel Z + Z/(q+1) with integral isomorphism and s-action");
  int q = X.q;
  GlobalG0 G = global_g0(X.T, X.P.n, &X.claims);
  QuotientStructure expected;
  expected.torsion = {q + 1};
  expected.free_rank = 1;
  X.claims.add_snf("cokernel Z + Z/(q+1)", G.A, expected);
  X.claims.add_unimodular("T unimodular", G.T);
  IntMatrix image(2, 1);
  image(1, 0) = q + 1;
  X.claims.add_matmul("T maps the image onto 0 + (q+1)Z", G.T, G.A, image);
  X.claims.add_matmul("T Tinv = 1", G.T, G.Tinv, IntMatrix::identity(2));
  X.claims.add_matmul("s preserves the image", G.S, G.A, IntMatrix::from_rows({{-(q + 1)}, {-(q + 1)}}));
  X.claims.add_equal("T S T^-1", G.C.to_json(), IntMatrix::from_rows({{1, 0}, {-1, -1}}).to_json());
  X.claims.add_matmul("(T S T^-1)^2 = 1", G.C, G.C, IntMatrix::identity(2));
  X.data = {{"matrix", G.A.to_json()},
            {"cokernel", cokernel_structure(G.A).str()},
            {"T", G.T.to_json()},
            {"S", G.S.to_json()},
            {"TST^-1", G.C.to_json()},
            {"scale", q - 1}};
  return X.finish();
}

Certificate cert_crt_and_diagram(const RunParams& P) {
  Context X(P, "crt_and_diagram", "Z/q^n(q+1) = Z/q^n x Z/(q+1); b_n, c_n and the transition maps");
  int n = X.P.n, q = X.q;
  mpz_class qn = pow_q(q, n), m = q_n_q1(q, n), m1 = q_n_q1(q, n + 1);
  auto G = invariant_sigma(X.T, SubgroupTag::max_compact(), n);
  auto G1 = invariant_sigma(X.T, SubgroupTag::max_compact(), n + 1);
  const IntMatrix &A = G.matrix, &A1 = G1.matrix;
  IntVec e0 = unit(A.rows(), 0), e0_1 = unit(A1.rows(), 0);

  // Parity invariants restricted to V_n, in orbit coordinates.
  const auto& Vn = *G.vertices.window;
  auto parity_coords = [&](std::int64_t even, std::int64_t odd) {
    return G.vertices.coordinates(CochainVector{G.vertices.window, Domain::Vertices, parity_values(X.T, Vn, even, odd)});
  };
  IntVec x_even = parity_coords(1, 0), x_odd = parity_coords(0, 1);
  mpz_class b = class_value(A, x_even, e0), c = class_value(A, x_odd, e0);
  X.claims.add_class_value("b_n from 1_even", A, x_even, e0, m, b);
  X.claims.add_class_value("c_n from 1_odd", A, x_odd, e0, m, c);
  mpz_class bc = b_closed(q, n), cc = c_closed(q, n);
  X.claims.add_modeq("b_n closed form", b, bc, m);
  X.claims.add_modeq("c_n closed form", c, cc, m);
  X.claims.add_modeq("b_n = 1 mod q+1", bc, 1, q + 1);
  X.claims.add_modeq("c_n = 0 mod q+1", cc, 0, q + 1);
  X.claims.add_modeq("b_n + q c_n = 1", b + q * c, 1, m);

  X.claims.add_bezout("gcd(q^n, q+1) = 1", qn, q + 1);
  if (m <= kMaxCrtScan) X.claims.add_crt_scan("a -> (a mod q^n, a mod q+1) injective", qn, q + 1);
  mpz_class geo = 0;
  for (int j = 0; j < n; ++j) geo += pow_q(q, j);
  X.claims.add_equal("(q-1) sum_{j<n} q^j = q^n - 1", mpz_json((q - 1) * geo), mpz_json(qn - 1));

  // Z/q^{n+1}(q+1) -> Z/q^n(q+1) against restriction V_{n+1} -> V_n.
  std::vector<std::pair<std::string, IntVec>> sources;
  for (std::size_t i = 0; i < A1.rows(); ++i) sources.emplace_back("1_{v" + std::to_string(i) + "}", unit(A1.rows(), i));
  const auto& Vn1 = *G1.vertices.window;
  sources.emplace_back("1_even", G1.vertices.coordinates(CochainVector{G1.vertices.window, Domain::Vertices,
                                                                       parity_values(X.T, Vn1, 1, 0)}));
  sources.emplace_back("1_odd", G1.vertices.coordinates(CochainVector{G1.vertices.window, Domain::Vertices,
                                                                      parity_values(X.T, Vn1, 0, 1)}));
  for (const auto& [label, x1] : sources) {
    IntVec x0 = G.vertices.coordinates(G1.vertices.combination(x1).restrict_to(G.vertices.window));
    mpz_class v1 = class_value(A1, x1, e0_1), v0 = class_value(A, x0, e0);
    X.claims.add_class_value("level n+1 value of " + label, A1, x1, e0_1, m1, v1);
    X.claims.add_class_value("level n value of restricted " + label, A, x0, e0, m, v0);
    X.claims.add_modeq("transition commutes for " + label, v1, v0, m);
  }
  X.data = {{"modulus", mpz_json(m)},
            {"b_n", mpz_json(b)},
            {"c_n", mpz_json(c)},
            {"b_closed", mpz_json(bc)},
            {"c_closed", mpz_json(cc)},
            {"crt_b", {mpz_json(mod(b, qn)), mpz_json(mod(b, q + 1))}},
            {"crt_c", {mpz_json(mod(c, qn)), mpz_json(mod(c, q + 1))}}};
  return X.finish();
}

Certificate cert_pstar_j(const RunParams& P) {
  Context X(P, "pstar_j", "class of j: 1 mod q^n(q+1) on G0, (1, 1 mod q+1) on G^0");
  int n = X.P.n, q = X.q;
  const Tree& T = X.T;
  const LocalField& K = T.field();
  End U = base_line(T);
  auto V = T.window(WindowKind::Tn, n);
  auto E = T.window(WindowKind::Tn, n + 1);
  CochainVector phi = flow_phi(T, U, n), psi = path_psi(T, U, n);
  CochainVector sphi = sigma(phi, V), spsi = sigma(psi, V);
  X.claims.add_equal("Sigma(flow) = 1_even + q 1_odd", sphi.values, parity_values(T, *V, 1, q));
  X.claims.add_equal("Sigma(path) = 1_{v0}", spsi.values, CochainVector::indicator(V, Domain::Vertices, {0}).values);

  Rng rng(X.P.seed * 0x9e3779b97f4a7c15ULL + 17);
  const int samples = 8;
  for (int t = 0; t < samples; ++t) {
    auto k = random_element(K, SubgroupTag::max_compact(), rng);
    auto jk = j_cocycle(T, U, k.matrix()).on_edges(T, E);
    X.claims.add_equal("k psi - psi = j(k), sample " + std::to_string(t), (act_cochain(T, k.matrix(), psi) - psi).values,
                       jk.values);
    // Elements of G^0 can leave the window, so pull the flow back pointwise.
    auto g = random_element(K, SubgroupTag::g0det(), rng, 2);
    Mat2 gi = g.inverse().matrix();
    CochainVector gphi = CochainVector::zero(E, Domain::Edges);
    for (std::size_t e = 0; e < E->edges.size(); ++e) {
      VertexLabel a = E->vertices[static_cast<std::size_t>(E->parent[e + 1])], b = E->vertices[e + 1];
      if (T.parity(a) != Parity::Even) std::swap(a, b);
      gphi.values[e] = flow_value(T, U, T.act(gi, a), T.act(gi, b));
    }
    X.claims.add_equal("g phi - phi = j(g), sample " + std::to_string(t), (gphi - phi).values,
                       j_cocycle(T, U, g.matrix()).on_edges(T, E).values);
  }

  auto G = invariant_sigma(T, SubgroupTag::max_compact(), n);
  const IntMatrix& A = G.matrix;
  mpz_class m = q_n_q1(q, n);
  IntVec e0 = unit(A.rows(), 0);
  IntVec flow_coords = G.vertices.coordinates(sphi);
  X.claims.add_class_value("class of j via the flow", A, flow_coords, e0, m, 1);
  X.claims.add_class_value("class of j via the path", A, G.vertices.coordinates(spsi), e0, m, 1);
  X.claims.add_class_order("generator order", A, e0, m);

  GlobalG0 GG = global_g0(T, n, nullptr);
  IntVec pair = GG.T * IntVec{1, q};
  X.claims.add_matmul("G^0 class of j, scaled by q-1", GG.T, IntVec{1, q}, IntVec{q - 1, 1});
  X.claims.add_matmul("s on (0,1)", GG.C, IntVec{0, 1}, IntVec{0, -1});
  X.data = {{"modulus", mpz_json(m)},
            {"class", 1},
            {"class_order", mpz_json(m)},
            {"g0_pair_scaled", vec_json(pair)},
            {"samples", samples}};
  return X.finish();
}

Certificate make_certificate(const std::string& name, const RunParams& P) {
  if (name == "sigma_closed_forms") return cert_sigma_closed_forms(P);
  if (name == "coker_g0") return cert_coker_g0(P);
  if (name == "iwahori") return cert_iwahori(P);
  if (name == "g0_global") return cert_g0_global(P);
  if (name == "crt_and_diagram") return cert_crt_and_diagram(P);
  if (name == "pstar_j") return cert_pstar_j(P);
  throw InvalidConfig("unknown certificate: " + name);
}

}  // namespace btlab
