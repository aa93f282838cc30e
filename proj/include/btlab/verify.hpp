#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "btlab/intlin.hpp"
#include "btlab/localfield.hpp"
#include "json.hpp"

namespace btlab {

/// What a certificate is computed for.  The seed only feeds sampled checks.
struct RunParams {
  FieldConfig field;
  int n = 0;
  std::uint64_t seed = 0;

  // Largest n accepted by the certificate functions.
  static constexpr int kMaxN = 10;

  nlohmann::json to_json() const;
  static RunParams from_json(const nlohmann::json& j);
};

/// Self-verifying record of a finite-level computation.
///
/// The payload holds `data` (the headline values) and `checks`, a list of
/// claims each carrying every input needed to re-check it without the tree:
///   snf          A, U, D, V, cokernel, expected
///   matmul       A, x, b            (A x == b; x may be a vector or matrix)
///   equal        a, b
///   kernel       A, K               (columns of K are a Z-basis of ker A)
///   class_order  A, U, D, V, v, order
///   class_value  A, U, D, V, x, generator, modulus, value
///   modeq        a, b, modulus
///   unimodular   M
///   bezout       a, b, x, y         (a x + b y == 1)
///   crt_scan     m1, m2             (exhaustive injectivity, small moduli)
/// Every claim also records its own outcome in "ok".
struct Certificate {
  std::string name;
  std::string anchor;
  nlohmann::json config;
  bool passed = false;
  nlohmann::json payload;

  // Canonical JSON including the checksum.
  nlohmann::json to_json() const;
  std::string checksum() const;
  // <name>_q<q>_n<n>.json
  std::string file_name() const;
};

std::string sha256_hex(const std::string& bytes);

// Incrementally builds the checks list; each add_* evaluates its claim.
class ClaimList {
 public:
  void add_snf(const std::string& label, const IntMatrix& A, const QuotientStructure& expected);
  void add_matmul(const std::string& label, const IntMatrix& A, const IntVec& x, const IntVec& b);
  void add_matmul(const std::string& label, const IntMatrix& A, const IntMatrix& X, const IntMatrix& B);
  void add_equal(const std::string& label, const nlohmann::json& a, const nlohmann::json& b);
  void add_kernel(const std::string& label, const IntMatrix& A, const IntMatrix& K);
  void add_class_order(const std::string& label, const IntMatrix& A, const IntVec& v, const mpz_class& order);
  void add_class_value(const std::string& label, const IntMatrix& A, const IntVec& x, const IntVec& generator,
                       const mpz_class& modulus, const mpz_class& value);
  void add_modeq(const std::string& label, const mpz_class& a, const mpz_class& b, const mpz_class& modulus);
  void add_unimodular(const std::string& label, const IntMatrix& M);
  void add_bezout(const std::string& label, const mpz_class& a, const mpz_class& b);
  void add_crt_scan(const std::string& label, const mpz_class& m1, const mpz_class& m2);

  bool all_ok() const { return ok_; }
  const nlohmann::json& checks() const { return checks_; }

 private:
  void push(nlohmann::json claim);
  nlohmann::json checks_ = nlohmann::json::array();
  bool ok_ = true;
};

// Re-evaluates one claim from its stored inputs.  Unknown kinds are false.
bool evaluate_claim(const nlohmann::json& claim);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> problems;
};

// Checksum, shape, every claim, and status == all claims pass.
VerifyReport verify_certificate(const nlohmann::json& cert);

// Class of x in Z^r / col(A) as a multiple of the class of `generator`, when
// the cokernel is cyclic and generated by it.  Throws otherwise.
mpz_class class_value(const IntMatrix& A, const IntVec& x, const IntVec& generator);

// Closed forms used by the certificates.
IntMatrix g0_sigma_closed_form(int q, int n);
IntMatrix iwahori_sigma_closed_form(int q, int n);
IntVec psi_coordinates(int q, int n);  // over e_{-(n+1)}, ..., e_{n+1}
mpz_class b_closed(int q, int n);
mpz_class c_closed(int q, int n);

Certificate cert_sigma_closed_forms(const RunParams& P);
Certificate cert_coker_g0(const RunParams& P);
Certificate cert_iwahori(const RunParams& P);
Certificate cert_g0_global(const RunParams& P);
Certificate cert_crt_and_diagram(const RunParams& P);
Certificate cert_pstar_j(const RunParams& P);

// Names accepted by make_certificate, in suite order.
const std::vector<std::string>& certificate_names();
Certificate make_certificate(const std::string& name, const RunParams& P);

}  // namespace btlab
