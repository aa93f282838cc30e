#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "btlab/random.hpp"
#include "json.hpp"

namespace btlab {

enum class Backend { RationalP, LaurentQ };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& s);

/// Parameters of the local field F.  For LaurentQ the field is F_q((t)) with
/// F_q = F_p[x]/(modulus); for RationalP it is Q with the p-adic valuation.
struct FieldConfig {
  Backend backend = Backend::RationalP;
  int p = 2;
  int f = 1;
  // Coefficients over F_p, lowest degree first; monic of degree f.
  std::vector<int> modulus;

  int q() const;

  static FieldConfig rational(int p);
  // Empty modulus selects the documented default for (p, f).
  static FieldConfig laurent(int p, int f, std::vector<int> modulus = {});

  // Fills in the default modulus and checks every invariant.
  // Throws InvalidConfig.
  void validate();

  nlohmann::json to_json() const;
  static FieldConfig from_json(const nlohmann::json& j);

  bool operator==(const FieldConfig&) const = default;
};

// Default modulus for F_{p^f}, or the lexicographically first monic
// irreducible polynomial when no default is listed.
std::vector<int> default_modulus(int p, int f);
bool is_irreducible_mod_p(const std::vector<int>& poly, int p);

using Residue = std::uint8_t;

/// The residue field F_q, elements coded as integers 0..q-1 through the
/// base-p digits of their coefficient vector in the basis 1, x, ..., x^{f-1}.
class ResidueField {
 public:
  ResidueField(int p, int f, std::vector<int> modulus);

  int p() const { return p_; }
  int f() const { return f_; }
  int q() const { return q_; }

  Residue add(Residue a, Residue b) const { return add_[a * q_ + b]; }
  Residue mul(Residue a, Residue b) const { return mul_[a * q_ + b]; }
  Residue neg(Residue a) const { return neg_[a]; }
  Residue sub(Residue a, Residue b) const { return add(a, neg(b)); }
  Residue inv(Residue a) const;
  Residue pow(Residue a, long e) const;
  Residue from_int(long n) const;

  std::vector<int> coeffs(Residue a) const;
  Residue from_coeffs(const std::vector<int>& c) const;

 private:
  int p_, f_, q_;
  std::vector<int> modulus_;
  std::vector<Residue> add_, mul_, neg_, inv_;
};

/// Polynomial over F_q, lowest degree first, no trailing zeros.
struct FqPoly {
  std::vector<Residue> c;

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  // Index of the lowest nonzero coefficient; poly must be nonzero.
  int order() const;
  bool operator==(const FqPoly&) const = default;
};

namespace fqpoly {
void trim(FqPoly& a);
FqPoly add(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly sub(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly mul(const ResidueField& F, const FqPoly& a, const FqPoly& b);
FqPoly scale(const ResidueField& F, const FqPoly& a, Residue s);
FqPoly shift_down(const FqPoly& a, int k);
// Long division; b nonzero.
void divmod(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem);
// Monic gcd.
FqPoly gcd(const ResidueField& F, FqPoly a, FqPoly b);
}  // namespace fqpoly

/// Valuation value, possibly +infinity.
class Valuation {
 public:
  static Valuation infinity() { return Valuation(kInf); }
  explicit Valuation(long v) : v_(v) {}

  bool is_infinite() const { return v_ == kInf; }
  long value() const;

  Valuation operator+(Valuation o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    return Valuation(v_ + o.v_);
  }
  auto operator<=>(const Valuation&) const = default;
  std::string str() const;

 private:
  static constexpr long kInf = std::numeric_limits<long>::max();
  long v_;
};

/// Exact element of F.  RationalP: an mpq_class.  LaurentQ: t^k * num/den
/// with num(0) != 0, den(0) = 1 and gcd(num, den) = 1, or zero.
class LocalScalar {
 public:
  struct Laurent {
    std::shared_ptr<const ResidueField> field;
    long k = 0;
    FqPoly num, den;
  };

  LocalScalar() : v_(mpq_class(0)) {}
  explicit LocalScalar(mpq_class r);
  // Canonicalizes t^k * num/den.  Throws DivisionByZero when den = 0.
  LocalScalar(std::shared_ptr<const ResidueField> field, long k, FqPoly num, FqPoly den);

  bool is_laurent() const { return std::holds_alternative<Laurent>(v_); }
  bool is_zero() const;
  const mpq_class& rational() const { return std::get<mpq_class>(v_); }
  const Laurent& laurent() const { return std::get<Laurent>(v_); }

  LocalScalar operator+(const LocalScalar& o) const;
  LocalScalar operator-(const LocalScalar& o) const;
  LocalScalar operator*(const LocalScalar& o) const;
  LocalScalar operator/(const LocalScalar& o) const;
  LocalScalar operator-() const;
  LocalScalar& operator+=(const LocalScalar& o) { return *this = *this + o; }
  LocalScalar& operator-=(const LocalScalar& o) { return *this = *this - o; }
  LocalScalar& operator*=(const LocalScalar& o) { return *this = *this * o; }

  bool operator==(const LocalScalar& o) const;

  std::string str() const;

 private:
  // Zero of the same backend (and residue field) as *this.
  LocalScalar zero_like() const;
  std::variant<mpq_class, Laurent> v_;
};

/// Element of O/pi^N as its pi-adic digits, lowest first.
struct QuotientElement {
  std::vector<Residue> digits;

  // sum digit_i q^i
  std::uint64_t index(int q) const;
  bool operator==(const QuotientElement&) const = default;
};

/// The field context: constructs scalars and knows valuation and reduction.
class LocalField {
 public:
  explicit LocalField(FieldConfig cfg);

  const FieldConfig& config() const { return cfg_; }
  Backend backend() const { return cfg_.backend; }
  int p() const { return cfg_.p; }
  int q() const { return q_; }
  const std::shared_ptr<const ResidueField>& residue_field() const { return F_; }

  LocalScalar zero() const;
  LocalScalar one() const { return from_int(1); }
  LocalScalar from_int(long n) const;
  LocalScalar from_mpz(const mpz_class& n) const;
  LocalScalar pi() const { return pi_pow(1); }
  LocalScalar pi_pow(long k) const;
  // Fixed lift of a residue: the integer code for RationalP, the constant
  // polynomial for LaurentQ.
  LocalScalar digit(Residue r) const;
  LocalScalar lift(const QuotientElement& x) const;
  LocalScalar lift_index(std::uint64_t index, int N) const;

  Valuation valuation(const LocalScalar& x) const;
  // Valuation of a nonzero element; throws DivisionByZero on zero.
  long val(const LocalScalar& x) const;
  // pi^{-v(x)} x, a unit.  x nonzero.
  LocalScalar unit_part(const LocalScalar& x) const;
  QuotientElement reduce(const LocalScalar& x, int N) const;
  // Image in F_q of an element with valuation >= 0.
  Residue residue(const LocalScalar& x) const;

  std::vector<LocalScalar> unit_representatives() const;
  // Additive generators of O/pi^N as lifts.
  std::vector<LocalScalar> additive_generators(int N) const;

  // Random element with valuation in [vlo, vhi]; "height" bounds the size of
  // numerators/denominators (RationalP) or polynomial degrees (LaurentQ).
  LocalScalar random_nonzero(Rng& rng, long vlo, long vhi, int height = 3) const;
  LocalScalar random_unit(Rng& rng, int height = 3) const { return random_nonzero(rng, 0, 0, height); }
  // Valuation >= 0, zero allowed with small probability.
  LocalScalar random_integral(Rng& rng, int height = 3) const;

 private:
  FieldConfig cfg_;
  int q_;
  std::shared_ptr<const ResidueField> F_;
};

/// Arithmetic on O/pi^N with elements coded by index = sum digit_i q^i.
class QuotientRing {
 public:
  QuotientRing(const LocalField& K, int N);

  int N() const { return N_; }
  std::uint64_t size() const { return size_; }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const;
  bool is_unit(std::uint32_t a) const { return N_ == 0 ? false : (a % q_) != 0; }
  // Digit 0 of a.
  Residue low_digit(std::uint32_t a) const { return static_cast<Residue>(a % q_); }
  std::uint32_t inverse(std::uint32_t a) const;

 private:
  std::vector<Residue> digits(std::uint32_t a) const;
  std::uint32_t pack(const std::vector<Residue>& d) const;

  std::shared_ptr<const ResidueField> F_;
  bool rational_;
  int q_, N_;
  std::uint64_t size_;
};

}  // namespace btlab
