// btlab: runs the certificate suite and exports trees, orbits and currents.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "btlab/bttree.hpp"
#include "btlab/cochains.hpp"
#include "btlab/errors.hpp"
#include "btlab/groups.hpp"
#include "btlab/oracle.hpp"
#include "btlab/vdput.hpp"
#include "btlab/verify.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace btlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  int p = 2;
  int f = 1;
  std::string modulus;
  std::string backend = "rational";
  int n = 2;
  std::uint64_t seed = 0;
  std::string out = "out";
  unsigned jobs = 1;
  std::string kind;
  bool dot = false;
  // vdp
  std::string what = "j";
  std::string g;
  std::string unit;
  // cohom
  std::string cert;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

long parse_long(const std::string& s) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used != s.size()) throw UsageError("not an integer: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw UsageError("not an integer: " + s);
  }
}

FieldConfig field_config(const Options& o) {
  FieldConfig c;
  try {
    c.backend = parse_backend(o.backend);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  c.p = o.p;
  c.f = o.f;
  for (const auto& t : split(o.modulus, ',')) c.modulus.push_back(static_cast<int>(parse_long(t)));
  c.validate();
  return c;
}

RunParams run_params(const Options& o, int n) {
  RunParams P;
  P.field = field_config(o);
  P.n = n;
  P.seed = o.seed;
  if (n < 0 || n > RunParams::kMaxN) throw InvalidConfig("--n must lie in [0, " + std::to_string(RunParams::kMaxN) + "]");
  return P;
}

// Integer, "pi", "pi^k", "3pi^2", "-pi".
LocalScalar parse_scalar(const LocalField& K, const std::string& tok) {
  auto at = tok.find("pi");
  if (at == std::string::npos) return K.from_int(parse_long(tok));
  std::string coef = tok.substr(0, at), rest = tok.substr(at + 2);
  long c = coef.empty() || coef == "+" ? 1 : coef == "-" ? -1 : parse_long(coef);
  long e = 1;
  if (!rest.empty()) {
    if (rest[0] != '^') throw UsageError("bad scalar: " + tok);
    e = parse_long(rest.substr(1));
  }
  return K.from_int(c) * K.pi_pow(e);
}

Mat2 parse_matrix(const LocalField& K, const std::string& s) {
  auto t = split(s, ',');
  if (t.size() != 4) throw UsageError("--g expects four comma-separated entries a,b,c,d");
  Mat2 m{parse_scalar(K, t[0]), parse_scalar(K, t[1]), parse_scalar(K, t[2]), parse_scalar(K, t[3])};
  if (m.det().is_zero()) throw UsageError("--g is singular");
  return m;
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot write " + tmp.string());
    os << text;
    if (!os) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

fs::path run_directory(const Options& o, const RunParams& top) {
  return fs::path(o.out) / sha256_hex(top.to_json().dump()).substr(0, 16);
}

// Runs tasks on up to `jobs` threads; results land in task order.
std::vector<Certificate> run_certificates(const std::vector<std::pair<std::string, RunParams>>& tasks, unsigned jobs) {
  std::vector<Certificate> out(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = make_certificate(tasks[i].first, tasks[i].second);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  unsigned k = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < tasks.size(); ++i)
    if (!errors[i].empty()) throw Error(tasks[i].first + ": " + errors[i]);
  return out;
}

json certificate_row(const Certificate& c, const std::string& file) {
  return {{"file", file}, {"name", c.name}, {"n", c.config.at("n")}, {"anchor", c.anchor},
          {"status", c.passed ? "pass" : "fail"}, {"checksum", c.checksum()}};
}

// Re-reads a certificate file and re-verifies it.
VerifyReport verify_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  json j = json::parse(is, nullptr, false);
  if (j.is_discarded()) return {false, {"not valid JSON"}};
  return verify_certificate(j);
}

// ------------------------------------------------------------- subcommands

int cmd_tree(const Options& o) {
  Tree T(field_config(o));
  WindowKind kind = o.kind.empty() || o.kind == "t" ? WindowKind::Tn
                    : o.kind == "tprime"              ? WindowKind::TnPrime
                                                      : throw UsageError("--kind must be t or tprime");
  auto w = T.window(kind, o.n);
  std::cout << (o.dot ? w->to_dot() : w->to_json().dump(2) + "\n");
  return kExitPass;
}

SubgroupTag tag_option(const Options& o) {
  if (o.kind.empty() || o.kind == "g0") return SubgroupTag::max_compact();
  if (o.kind == "iwahori") return SubgroupTag::iwahori();
  throw UsageError("--kind must be g0 or iwahori");
}

int cmd_orbits(const Options& o) {
  Tree T(field_config(o));
  SubgroupTag tag = tag_option(o);
  auto IS = invariant_sigma(T, tag, o.n);
  auto table = [&](const OrbitBasis& B) {
    json rows = json::array();
    for (std::size_t k = 0; k < B.size(); ++k)
      rows.push_back({{"apartment_index", B.apartment_index[k]}, {"size", B.orbits[k].size()}, {"members", B.orbits[k]}});
    return rows;
  };
  json j = {{"tag", tag.name()},
            {"n", o.n},
            {"vertex_orbits", table(IS.vertices)},
            {"edge_orbits", table(IS.edges)}};
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_sigma(const Options& o) {
  Tree T(field_config(o));
  json j = json::object();
  for (SubgroupTag tag : {SubgroupTag::max_compact(), SubgroupTag::iwahori()}) {
    IntMatrix A = sigma_matrix_on_invariants(T, tag, o.n);
    SmithDecomposition S = snf(A);
    j[tag.name()] = {{"matrix", A.to_json()},
                     {"invariant_factors", vec_json(S.nonzero_diagonal())},
                     {"cokernel", quotient_from_snf(S).str()},
                     {"snf_verified", verify_snf(A, S)}};
  }
  std::cout << j.dump(2) << "\n";
  return kExitPass;
}

int cmd_cohom(const Options& o) {
  RunParams P = run_params(o, o.n);
  std::vector<std::string> names;
  if (o.cert.empty()) {
    for (const auto& name : certificate_names())
      if (name != "sigma_closed_forms") names.push_back(name);
  } else {
    const auto& all = certificate_names();
    if (std::find(all.begin(), all.end(), o.cert) == all.end()) throw UsageError("unknown certificate: " + o.cert);
    names.push_back(o.cert);
  }
  std::vector<std::pair<std::string, RunParams>> tasks;
  for (const auto& name : names) tasks.emplace_back(name, P);
  auto certs = run_certificates(tasks, o.jobs);
  fs::path dir = run_directory(o, P);
  bool ok = true;
  json report = json::array();
  for (const auto& c : certs) {
    write_atomic(dir / c.file_name(), c.to_json().dump(2) + "\n");
    ok = ok && c.passed;
    json row = certificate_row(c, (dir / c.file_name()).string());
    row["data"] = c.payload.at("data");
    report.push_back(row);
  }
  std::cout << report.dump(2) << "\n";
  return ok ? kExitPass : kExitFail;
}

int cmd_vdp(const Options& o) {
  Tree T(field_config(o));
  const LocalField& K = T.field();
  Mat2 g = o.g.empty() ? T.s() : parse_matrix(K, o.g);
  auto E = T.window(WindowKind::Tn, o.n + 1);
  auto W = T.window(WindowKind::Tn, o.n);
  json j = {{"what", o.what}, {"n", o.n}};
  bool ok = true;
  LineCurrent current;
  if (o.what == "j") {
    current = j_cocycle(T, base_line(T), g);
  } else if (o.what == "theta") {
    current = theta_cocycle(T, g);
    ok = theta_identity(T, g, W);
    j["theta_identity"] = ok;
  } else if (o.what == "beta") {
    GroupElement ge(K, g);
    if (!member(K, ge, SubgroupTag::max_compact())) throw UsageError("beta needs --g in GL2(O)");
    current = beta_current(T, g, o.n);
    ok = beta_vanishing(T, o.n, ge, W);
    j["vanishes_on_A_n"] = ok;
  } else if (o.what == "unit") {
    // "x:y^e,x:y^e,...": kernels [x:y] with exponents e (default 1, -1).
    FormalUnit u;
    auto factors = split(o.unit, ',');
    for (std::size_t i = 0; i < factors.size(); ++i) {
      auto hat = factors[i].find('^');
      std::string line = factors[i].substr(0, hat);
      long e = hat == std::string::npos ? (i == 0 ? 1 : -1) : parse_long(factors[i].substr(hat + 1));
      auto xy = split(line, ':');
      if (xy.size() != 2) throw UsageError("--unit factors look like x:y^e");
      u.factors.emplace_back(T.make_end(parse_scalar(K, xy[0]), parse_scalar(K, xy[1])), e);
    }
    try {
      u.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    current = transform(u);
  } else {
    throw UsageError("--what must be j, theta, beta or unit");
  }
  CochainVector values = current.on_edges(T, E);
  j["current"] = current.to_json();
  j["edges"] = values.to_json();
  j["harmonic"] = is_harmonic(T, values);
  if (o.dot)
    std::cout << E->to_dot(&values.values);
  else
    std::cout << j.dump(2) << "\n";
  return ok ? kExitPass : kExitFail;
}

// H1 and the delta class order, or a reason it was not computed.
json oracle_row(const Tree& T, SubgroupTag tag, int n) {
  CurrentBasis CB(T, window_kind_for(tag), n);
  int level = oracle_level(tag, n);
  std::uint64_t order = FiniteQuotient::expected_order(T.q(), tag, level);
  json row = {{"tag", tag.name()}, {"n", n}, {"level", level}, {"group_order", order}, {"rank", CB.rank()}};
  if (order > FiniteGroupAction::kMaxPairWork || order * order * CB.rank() > FiniteGroupAction::kMaxPairWork) {
    row["status"] = "skipped";
    return row;
  }
  try {
    auto A = current_action(CB, tag, level);
    auto h = h1_data(A);
    row["h0_rank"] = h0(A).free_rank;
    row["h1"] = h.group.str();
    mpz_class qn = 1;
    for (int i = 0; i < n; ++i) qn *= T.q();
    QuotientStructure expect;
    if (tag == SubgroupTag::max_compact()) {
      expect.torsion = {qn * (T.q() + 1)};
      auto z = delta_cocycle(A, CB, CochainVector::indicator(T.window(WindowKind::Tn, n), Domain::Vertices, {0}));
      auto k = class_order_in_h1(A, z);
      row["delta_class_order"] = k ? mpz_json(*k) : json(nullptr);
      row["status"] = h.group == expect && k && *k == expect.torsion[0] ? "pass" : "fail";
    } else {
      expect.torsion = {qn * T.q()};
      row["status"] = h.group == expect ? "pass" : "fail";
    }
    row["expected"] = expect.str();
  } catch (const TooLarge&) {
    row["status"] = "skipped";
  }
  return row;
}

int cmd_oracle(const Options& o) {
  Tree T(field_config(o));
  SubgroupTag tag = tag_option(o);
  json row = oracle_row(T, tag, o.n);
  std::cout << row.dump(2) << "\n";
  if (row.contains("h1")) std::cout << "H1 = " << row["h1"].get<std::string>() << "\n";
  if (row["status"] == "skipped") {
    std::cerr << json({{"error", "TooLarge"}, {"detail", "quotient exceeds the oracle budget"}}).dump() << "\n";
    return kExitFail;
  }
  return row["status"] == "pass" ? kExitPass : kExitFail;
}

int cmd_all(const Options& o) {
  RunParams top = run_params(o, o.n);
  std::vector<std::pair<std::string, RunParams>> tasks;
  for (int n = 0; n <= o.n; ++n)
    for (const auto& name : certificate_names()) tasks.emplace_back(name, run_params(o, n));
  auto certs = run_certificates(tasks, o.jobs);

  fs::path dir = run_directory(o, top);
  json rows = json::array();
  bool ok = true;
  for (const auto& c : certs) {
    write_atomic(dir / c.file_name(), c.to_json().dump(2) + "\n");
    rows.push_back(certificate_row(c, c.file_name()));
    ok = ok && c.passed;
  }
  // Re-verify every stored certificate from disk.
  std::vector<std::string> stored;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" && entry.path().filename() != "summary.json")
      stored.push_back(entry.path().filename().string());
  std::sort(stored.begin(), stored.end());
  json reverified = json::object();
  for (const auto& file : stored) {
    VerifyReport R = verify_file(dir / file);
    reverified[file] = R.ok ? "ok" : "failed";
    if (!R.ok) {
      ok = false;
      for (const auto& why : R.problems) std::cerr << json({{"file", file}, {"error", why}}).dump() << "\n";
    }
  }

  Tree T(top.field);
  json oracle = json::array();
  for (int n = 0; n <= std::min(o.n, 1); ++n) oracle.push_back(oracle_row(T, SubgroupTag::max_compact(), n));
  oracle.push_back(oracle_row(T, SubgroupTag::iwahori(), 0));
  for (const auto& r : oracle) ok = ok && r["status"] != "fail";

  json summary = {{"config", top.to_json()},
                  {"certificates", rows},
                  {"reverified", reverified},
                  {"oracle", oracle},
                  {"all_pass", ok}};
  write_atomic(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "results in " << dir.string() << "\n";
  for (const auto& r : rows)
    std::cout << (r["status"] == "pass" ? "PASS " : "FAIL ") << r["name"].get<std::string>() << " n=" << r["n"]
              << "  " << r["anchor"].get<std::string>() << "\n";
  for (const auto& r : oracle) {
    std::cout << (r["status"] == "pass" ? "PASS " : r["status"] == "fail" ? "FAIL " : "SKIP ") << "oracle "
              << r["tag"].get<std::string>() << " n=" << r["n"];
    if (r.contains("h1")) std::cout << "  H1 = " << r["h1"].get<std::string>();
    std::cout << "\n";
  }
  return ok ? kExitPass : kExitFail;
}

void common_options(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "residue characteristic")->check(CLI::PositiveNumber);
  sub->add_option("--f", o.f, "residue degree (laurent backend)")->check(CLI::PositiveNumber);
  sub->add_option("--modulus", o.modulus, "F_q modulus coefficients over F_p, lowest first, comma-separated");
  sub->add_option("--backend", o.backend, "rational (Q_p) or laurent (F_q((t)))");
  sub->add_option("--n", o.n, "radius / level")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", o.seed, "seed for sampled checks");
  sub->add_option("--out", o.out, "output root");
  sub->add_option("--jobs", o.jobs, "certificates run concurrently")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-level certificates on the Bruhat-Tits tree of GL2"};
  app.require_subcommand(1);
  Options o;
  auto* tree = app.add_subcommand("tree", "export the window T_n or T'_n");
  auto* orbits = app.add_subcommand("orbits", "orbit tables of G0 or the Iwahori subgroup");
  auto* sigma = app.add_subcommand("sigma", "Sigma on invariants with Smith forms");
  auto* cohom = app.add_subcommand("cohom", "cohomology certificates at one n");
  auto* vdp = app.add_subcommand("vdp", "evaluate a line current or cocycle on a window");
  auto* oracle = app.add_subcommand("oracle", "brute-force H0/H1 and the delta class order");
  auto* all = app.add_subcommand("all", "full certificate suite for 0..n with a summary");
  for (auto* sub : {tree, orbits, sigma, cohom, vdp, oracle, all}) common_options(sub, o);
  tree->add_option("--kind", o.kind, "t or tprime");
  tree->add_flag("--dot", o.dot, "Graphviz output");
  orbits->add_option("--kind", o.kind, "g0 or iwahori");
  oracle->add_option("--kind", o.kind, "g0 or iwahori");
  cohom->add_option("--cert", o.cert, "run a single certificate");
  vdp->add_option("--what", o.what, "j, theta, beta or unit");
  vdp->add_option("--g", o.g, "group element a,b,c,d (integers, pi, k pi^e); default s");
  vdp->add_option("--unit", o.unit, "formal unit x:y^e,...");
  vdp->add_flag("--dot", o.dot, "Graphviz output with edge values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*tree) return cmd_tree(o);
    if (*orbits) return cmd_orbits(o);
    if (*sigma) return cmd_sigma(o);
    if (*cohom) return cmd_cohom(o);
    if (*vdp) return cmd_vdp(o);
    if (*oracle) return cmd_oracle(o);
    if (*all) return cmd_all(o);
  } catch (const UsageError& e) {
    std::cerr << json({{"error", "usage"}, {"detail", e.what()}}).dump() << "\n";
    return kExitUsage;
  } catch (const InvalidConfig& e) {
    std::cerr << json({{"error", "InvalidConfig"}, {"detail", e.what()}}).dump() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << json({{"error", "failure"}, {"detail", e.what()}}).dump() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
