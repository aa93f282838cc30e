#include "btlab/localfield.hpp"

#include <algorithm>
#include <sstream>

#include "btlab/errors.hpp"

namespace btlab {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

FqPoly shift_up(const FqPoly& a, long k) {
  if (a.is_zero() || k == 0) return a;
  FqPoly r;
  r.c.assign(static_cast<std::size_t>(k), 0);
  r.c.insert(r.c.end(), a.c.begin(), a.c.end());
  return r;
}

FqPoly constant(Residue r) {
  FqPoly p;
  if (r != 0) p.c.push_back(r);
  return p;
}

mpz_class random_coprime(Rng& rng, int p, long bound) {
  for (;;) {
    long v = rng.uniform(1, bound);
    if (v % p != 0) return mpz_class(v);
  }
}

}  // namespace

std::string backend_name(Backend b) { return b == Backend::RationalP ? "rational" : "laurent"; }

Backend parse_backend(const std::string& s) {
  if (s == "rational") return Backend::RationalP;
  if (s == "laurent") return Backend::LaurentQ;
  throw InvalidConfig("unknown backend '" + s + "' (expected rational or laurent)");
}

// ---------------------------------------------------------------- config

int FieldConfig::q() const { return static_cast<int>(ipow(p, f)); }

FieldConfig FieldConfig::rational(int p) {
  FieldConfig c;
  c.backend = Backend::RationalP;
  c.p = p;
  c.f = 1;
  c.validate();
  return c;
}

FieldConfig FieldConfig::laurent(int p, int f, std::vector<int> modulus) {
  FieldConfig c;
  c.backend = Backend::LaurentQ;
  c.p = p;
  c.f = f;
  c.modulus = std::move(modulus);
  c.validate();
  return c;
}

void FieldConfig::validate() {
  if (!is_prime(p)) throw InvalidConfig("p = " + std::to_string(p) + " is not prime");
  if (f < 1) throw InvalidConfig("residue degree f must be positive");
  if (backend == Backend::RationalP && f != 1) throw InvalidConfig("the rational backend requires f = 1");
  if (ipow(p, f) > 256) throw InvalidConfig("q = p^f must not exceed 256");
  if (modulus.empty()) modulus = default_modulus(p, f);
  if (static_cast<int>(modulus.size()) != f + 1 || modulus.back() != 1)
    throw InvalidConfig("modulus must be monic of degree f");
  for (int c : modulus)
    if (c < 0 || c >= p) throw InvalidConfig("modulus coefficients must lie in [0, p)");
  if (!is_irreducible_mod_p(modulus, p)) throw InvalidConfig("modulus is reducible over F_p");
}

nlohmann::json FieldConfig::to_json() const {
  return {{"backend", backend_name(backend)}, {"p", p}, {"f", f}, {"modulus", modulus}};
}

FieldConfig FieldConfig::from_json(const nlohmann::json& j) {
  FieldConfig c;
  try {
    c.backend = parse_backend(j.at("backend").get<std::string>());
    c.p = j.at("p").get<int>();
    c.f = j.value("f", 1);
    if (j.contains("modulus")) c.modulus = j.at("modulus").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed field config: ") + e.what());
  }
  c.validate();
  return c;
}

std::vector<int> default_modulus(int p, int f) {
  if (f == 1) return {0, 1};
  if (p == 2 && f == 2) return {1, 1, 1};
  if (p == 2 && f == 3) return {1, 1, 0, 1};
  if (p == 3 && f == 2) return {1, 0, 1};
  long count = ipow(p, f);
  for (long code = 0; code < count; ++code) {
    std::vector<int> poly(f + 1, 0);
    long r = code;
    for (int i = 0; i < f; ++i) {
      poly[i] = static_cast<int>(r % p);
      r /= p;
    }
    poly[f] = 1;
    if (is_irreducible_mod_p(poly, p)) return poly;
  }
  throw InvalidConfig("no irreducible polynomial found");
}

bool is_irreducible_mod_p(const std::vector<int>& poly, int p) {
  ResidueField Fp(p, 1, {0, 1});
  FqPoly a;
  for (int c : poly) a.c.push_back(Fp.from_int(c));
  fqpoly::trim(a);
  int d = a.degree();
  if (d < 1) return false;
  for (int e = 1; 2 * e <= d; ++e) {
    long count = ipow(p, e);
    for (long code = 0; code < count; ++code) {
      FqPoly b;
      long r = code;
      for (int i = 0; i < e; ++i) {
        b.c.push_back(static_cast<Residue>(r % p));
        r /= p;
      }
      b.c.push_back(1);
      FqPoly quot, rem;
      fqpoly::divmod(Fp, a, b, quot, rem);
      if (rem.is_zero()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------- residue field

ResidueField::ResidueField(int p, int f, std::vector<int> modulus)
    : p_(p), f_(f), q_(static_cast<int>(ipow(p, f))), modulus_(std::move(modulus)) {
  if (q_ > 256) throw InvalidConfig("residue field too large");
  std::size_t n = static_cast<std::size_t>(q_);
  add_.resize(n * n);
  mul_.resize(n * n);
  neg_.resize(n);
  inv_.assign(n, 0);
  std::vector<std::vector<int>> cs(n);
  for (int a = 0; a < q_; ++a) cs[a] = coeffs(static_cast<Residue>(a));
  for (int a = 0; a < q_; ++a) {
    std::vector<int> ng(f_);
    for (int i = 0; i < f_; ++i) ng[i] = (p_ - cs[a][i]) % p_;
    neg_[a] = from_coeffs(ng);
    for (int b = 0; b < q_; ++b) {
      std::vector<int> s(f_);
      for (int i = 0; i < f_; ++i) s[i] = (cs[a][i] + cs[b][i]) % p_;
      add_[a * q_ + b] = from_coeffs(s);
      std::vector<int> pr(2 * f_ - 1, 0);
      for (int i = 0; i < f_; ++i)
        for (int j = 0; j < f_; ++j) pr[i + j] = (pr[i + j] + cs[a][i] * cs[b][j]) % p_;
      for (int k = 2 * f_ - 2; k >= f_; --k) {
        int lead = pr[k];
        if (lead == 0) continue;
        for (int i = 0; i <= f_; ++i) {
          int idx = k - f_ + i;
          pr[idx] = ((pr[idx] - lead * modulus_[i]) % p_ + p_) % p_;
        }
      }
      pr.resize(f_);
      mul_[a * q_ + b] = from_coeffs(pr);
    }
  }
  for (int a = 1; a < q_; ++a)
    for (int b = 1; b < q_; ++b)
      if (mul_[a * q_ + b] == 1) inv_[a] = static_cast<Residue>(b);
}

Residue ResidueField::inv(Residue a) const {
  if (a == 0) throw DivisionByZero();
  return inv_[a];
}

Residue ResidueField::pow(Residue a, long e) const {
  if (e < 0) return pow(inv(a), -e);
  Residue r = 1;
  while (e-- > 0) r = mul(r, a);
  return r;
}

Residue ResidueField::from_int(long n) const { return static_cast<Residue>(((n % p_) + p_) % p_); }

std::vector<int> ResidueField::coeffs(Residue a) const {
  std::vector<int> c(f_);
  int r = a;
  for (int i = 0; i < f_; ++i) {
    c[i] = r % p_;
    r /= p_;
  }
  return c;
}

Residue ResidueField::from_coeffs(const std::vector<int>& c) const {
  int r = 0;
  for (int i = f_ - 1; i >= 0; --i) r = r * p_ + c[i];
  return static_cast<Residue>(r);
}

// ------------------------------------------------------------ polynomials

int FqPoly::order() const {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != 0) return static_cast<int>(i);
  throw DivisionByZero();
}

namespace fqpoly {

void trim(FqPoly& a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

FqPoly add(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
  FqPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    Residue x = i < a.c.size() ? a.c[i] : 0;
    Residue y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = F.add(x, y);
  }
  trim(r);
  return r;
}

FqPoly sub(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
  FqPoly nb = b;
  for (auto& x : nb.c) x = F.neg(x);
  return add(F, a, nb);
}

FqPoly mul(const ResidueField& F, const FqPoly& a, const FqPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  FqPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] = F.add(r.c[i + j], F.mul(a.c[i], b.c[j]));
  }
  trim(r);
  return r;
}

FqPoly scale(const ResidueField& F, const FqPoly& a, Residue s) {
  FqPoly r = a;
  for (auto& x : r.c) x = F.mul(x, s);
  trim(r);
  return r;
}

FqPoly shift_down(const FqPoly& a, int k) {
  FqPoly r;
  if (static_cast<int>(a.c.size()) > k) r.c.assign(a.c.begin() + k, a.c.end());
  return r;
}

void divmod(const ResidueField& F, const FqPoly& a, const FqPoly& b, FqPoly& quot, FqPoly& rem) {
  if (b.is_zero()) throw DivisionByZero();
  rem = a;
  quot.c.clear();
  int db = b.degree();
  if (rem.degree() < db) return;
  quot.c.assign(static_cast<std::size_t>(rem.degree() - db + 1), 0);
  Residue lead_inv = F.inv(b.c.back());
  while (!rem.is_zero() && rem.degree() >= db) {
    int shift = rem.degree() - db;
    Residue coef = F.mul(rem.c.back(), lead_inv);
    quot.c[shift] = coef;
    for (int i = 0; i <= db; ++i) rem.c[shift + i] = F.sub(rem.c[shift + i], F.mul(coef, b.c[i]));
    trim(rem);
  }
  trim(quot);
}

FqPoly gcd(const ResidueField& F, FqPoly a, FqPoly b) {
  while (!b.is_zero()) {
    FqPoly quot, rem;
    divmod(F, a, b, quot, rem);
    a = std::move(b);
    b = std::move(rem);
  }
  if (a.is_zero()) return a;
  return scale(F, a, F.inv(a.c.back()));
}

}  // namespace fqpoly

// -------------------------------------------------------------- valuation

long Valuation::value() const {
  if (is_infinite()) throw DivisionByZero();
  return v_;
}

std::string Valuation::str() const { return is_infinite() ? "+inf" : std::to_string(v_); }

// ----------------------------------------------------------------- scalar

LocalScalar::LocalScalar(mpq_class r) : v_(std::move(r)) { std::get<mpq_class>(v_).canonicalize(); }

LocalScalar::LocalScalar(std::shared_ptr<const ResidueField> field, long k, FqPoly num, FqPoly den) {
  const ResidueField& F = *field;
  fqpoly::trim(num);
  fqpoly::trim(den);
  if (den.is_zero()) throw DivisionByZero();
  Laurent L;
  L.field = std::move(field);
  if (num.is_zero()) {
    L.k = 0;
    L.den.c = {1};
    v_ = std::move(L);
    return;
  }
  int kn = num.order(), kd = den.order();
  num = fqpoly::shift_down(num, kn);
  den = fqpoly::shift_down(den, kd);
  FqPoly g = fqpoly::gcd(F, num, den);
  if (g.degree() > 0) {
    FqPoly q1, r1, q2, r2;
    fqpoly::divmod(F, num, g, q1, r1);
    fqpoly::divmod(F, den, g, q2, r2);
    num = std::move(q1);
    den = std::move(q2);
  }
  Residue s = F.inv(den.c[0]);
  L.num = fqpoly::scale(F, num, s);
  L.den = fqpoly::scale(F, den, s);
  L.k = k + kn - kd;
  v_ = std::move(L);
}

bool LocalScalar::is_zero() const {
  if (is_laurent()) return laurent().num.is_zero();
  return rational() == 0;
}

LocalScalar LocalScalar::zero_like() const {
  if (is_laurent()) return LocalScalar(laurent().field, 0, {}, FqPoly{{1}});
  return LocalScalar();
}

namespace {

// Brings a rational integer into the Laurent backend of `like`.
LocalScalar coerce(const LocalScalar& x, const LocalScalar& like) {
  if (x.is_laurent() == like.is_laurent()) return x;
  if (!like.is_laurent()) throw InvalidConfig("mixing scalars of different backends");
  const mpq_class& r = x.rational();
  if (r.get_den() != 1) throw InvalidConfig("mixing scalars of different backends");
  const auto& F = like.laurent().field;
  mpz_class m = r.get_num() % F->p();
  return LocalScalar(F, 0, constant(F->from_int(m.get_si())), FqPoly{{1}});
}

}  // namespace

LocalScalar LocalScalar::operator+(const LocalScalar& o_in) const {
  if (is_laurent() != o_in.is_laurent()) {
    if (is_laurent()) return *this + coerce(o_in, *this);
    return coerce(*this, o_in) + o_in;
  }
  if (!is_laurent()) return LocalScalar(mpq_class(rational() + o_in.rational()));
  const Laurent& a = laurent();
  const Laurent& b = o_in.laurent();
  if (a.num.is_zero()) return o_in;
  if (b.num.is_zero()) return *this;
  const ResidueField& F = *a.field;
  long m = std::min(a.k, b.k);
  FqPoly left = shift_up(fqpoly::mul(F, a.num, b.den), a.k - m);
  FqPoly right = shift_up(fqpoly::mul(F, b.num, a.den), b.k - m);
  return LocalScalar(a.field, m, fqpoly::add(F, left, right), fqpoly::mul(F, a.den, b.den));
}

LocalScalar LocalScalar::operator-() const {
  if (!is_laurent()) return LocalScalar(mpq_class(-rational()));
  const Laurent& a = laurent();
  FqPoly n = a.num;
  for (auto& x : n.c) x = a.field->neg(x);
  return LocalScalar(a.field, a.k, n, a.den);
}

LocalScalar LocalScalar::operator-(const LocalScalar& o) const { return *this + (-o); }

LocalScalar LocalScalar::operator*(const LocalScalar& o_in) const {
  if (is_laurent() != o_in.is_laurent()) {
    if (is_laurent()) return *this * coerce(o_in, *this);
    return coerce(*this, o_in) * o_in;
  }
  if (!is_laurent()) return LocalScalar(mpq_class(rational() * o_in.rational()));
  const Laurent& a = laurent();
  const Laurent& b = o_in.laurent();
  const ResidueField& F = *a.field;
  if (a.num.is_zero() || b.num.is_zero()) return zero_like();
  return LocalScalar(a.field, a.k + b.k, fqpoly::mul(F, a.num, b.num), fqpoly::mul(F, a.den, b.den));
}

LocalScalar LocalScalar::operator/(const LocalScalar& o_in) const {
  if (is_laurent() != o_in.is_laurent()) {
    if (is_laurent()) return *this / coerce(o_in, *this);
    return coerce(*this, o_in) / o_in;
  }
  if (o_in.is_zero()) throw DivisionByZero();
  if (!is_laurent()) return LocalScalar(mpq_class(rational() / o_in.rational()));
  const Laurent& a = laurent();
  const Laurent& b = o_in.laurent();
  const ResidueField& F = *a.field;
  if (a.num.is_zero()) return *this;
  return LocalScalar(a.field, a.k - b.k, fqpoly::mul(F, a.num, b.den), fqpoly::mul(F, a.den, b.num));
}

bool LocalScalar::operator==(const LocalScalar& o) const {
  if (is_laurent() != o.is_laurent()) {
    if (is_zero() && o.is_zero()) return true;
    if (is_laurent()) return *this == coerce(o, *this);
    return coerce(*this, o) == o;
  }
  if (!is_laurent()) return rational() == o.rational();
  const Laurent& a = laurent();
  const Laurent& b = o.laurent();
  return a.k == b.k && a.num == b.num && a.den == b.den;
}

std::string LocalScalar::str() const {
  if (!is_laurent()) return rational().get_str();
  const Laurent& a = laurent();
  if (a.num.is_zero()) return "0";
  auto poly = [](const FqPoly& p) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < p.c.size(); ++i) os << (i ? "," : "") << int(p.c[i]);
    os << "]";
    return os.str();
  };
  return "t^" + std::to_string(a.k) + "*" + poly(a.num) + "/" + poly(a.den);
}

std::uint64_t QuotientElement::index(int q) const {
  std::uint64_t r = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) r = r * static_cast<std::uint64_t>(q) + *it;
  return r;
}

// ------------------------------------------------------------ local field

LocalField::LocalField(FieldConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  q_ = cfg_.q();
  F_ = std::make_shared<const ResidueField>(cfg_.p, cfg_.f, cfg_.modulus);
}

LocalScalar LocalField::zero() const { return from_int(0); }

LocalScalar LocalField::from_int(long n) const { return from_mpz(mpz_class(n)); }

LocalScalar LocalField::from_mpz(const mpz_class& n) const {
  if (backend() == Backend::RationalP) return LocalScalar(mpq_class(n));
  mpz_class m = n % cfg_.p;
  return LocalScalar(F_, 0, constant(F_->from_int(m.get_si())), FqPoly{{1}});
}

LocalScalar LocalField::pi_pow(long k) const {
  if (backend() == Backend::LaurentQ) return LocalScalar(F_, k, FqPoly{{1}}, FqPoly{{1}});
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(cfg_.p), static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return LocalScalar(mpq_class(pk));
  return LocalScalar(mpq_class(mpz_class(1), pk));
}

LocalScalar LocalField::digit(Residue r) const {
  if (backend() == Backend::RationalP) return LocalScalar(mpq_class(static_cast<unsigned long>(r)));
  return LocalScalar(F_, 0, constant(r), FqPoly{{1}});
}

LocalScalar LocalField::lift(const QuotientElement& x) const {
  if (backend() == Backend::RationalP) {
    mpz_class v = 0;
    for (auto it = x.digits.rbegin(); it != x.digits.rend(); ++it) v = v * cfg_.p + *it;
    return LocalScalar(mpq_class(v));
  }
  FqPoly num;
  num.c = x.digits;
  fqpoly::trim(num);
  return LocalScalar(F_, 0, num, FqPoly{{1}});
}

LocalScalar LocalField::lift_index(std::uint64_t index, int N) const {
  QuotientElement x;
  for (int i = 0; i < N; ++i) {
    x.digits.push_back(static_cast<Residue>(index % static_cast<std::uint64_t>(q_)));
    index /= static_cast<std::uint64_t>(q_);
  }
  return lift(x);
}

Valuation LocalField::valuation(const LocalScalar& x) const {
  if (x.is_zero()) return Valuation::infinity();
  if (x.is_laurent()) return Valuation(x.laurent().k);
  mpz_class pp(cfg_.p), rest;
  long vn = static_cast<long>(mpz_remove(rest.get_mpz_t(), x.rational().get_num_mpz_t(), pp.get_mpz_t()));
  long vd = static_cast<long>(mpz_remove(rest.get_mpz_t(), x.rational().get_den_mpz_t(), pp.get_mpz_t()));
  return Valuation(vn - vd);
}

long LocalField::val(const LocalScalar& x) const { return valuation(x).value(); }

LocalScalar LocalField::unit_part(const LocalScalar& x) const { return x * pi_pow(-val(x)); }

QuotientElement LocalField::reduce(const LocalScalar& x, int N) const {
  QuotientElement out;
  out.digits.assign(static_cast<std::size_t>(std::max(N, 0)), 0);
  if (x.is_zero()) return out;
  long v = val(x);
  if (v < 0) throw NegativeValuation();
  if (x.is_laurent()) {
    const auto& L = x.laurent();
    const ResidueField& F = *L.field;
    long terms = N - L.k;
    std::vector<Residue> s;
    for (long i = 0; i < terms; ++i) {
      Residue acc = i < static_cast<long>(L.num.c.size()) ? L.num.c[i] : 0;
      for (long j = 1; j <= i && j < static_cast<long>(L.den.c.size()); ++j)
        acc = F.sub(acc, F.mul(L.den.c[j], s[i - j]));
      s.push_back(acc);  // den(0) = 1
      out.digits[L.k + i] = acc;
    }
    return out;
  }
  mpz_class mod;
  mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(cfg_.p), static_cast<unsigned long>(N));
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), x.rational().get_den_mpz_t(), mod.get_mpz_t());
  mpz_class r = x.rational().get_num() * inv;
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  for (int i = 0; i < N; ++i) {
    mpz_class d = r % cfg_.p;
    out.digits[i] = static_cast<Residue>(d.get_ui());
    r /= cfg_.p;
  }
  return out;
}

Residue LocalField::residue(const LocalScalar& x) const { return reduce(x, 1).digits[0]; }

std::vector<LocalScalar> LocalField::unit_representatives() const {
  std::vector<LocalScalar> out;
  for (int r = 1; r < q_; ++r) out.push_back(digit(static_cast<Residue>(r)));
  return out;
}

std::vector<LocalScalar> LocalField::additive_generators(int N) const {
  std::vector<LocalScalar> out;
  if (backend() == Backend::RationalP) {
    if (N >= 1) out.push_back(one());
    return out;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < cfg_.f; ++j) out.push_back(digit(static_cast<Residue>(ipow(cfg_.p, j))) * pi_pow(i));
  return out;
}

LocalScalar LocalField::random_nonzero(Rng& rng, long vlo, long vhi, int height) const {
  long v = rng.uniform(vlo, vhi);
  if (backend() == Backend::RationalP) {
    long bound = ipow(cfg_.p, std::max(height, 1)) + 1;
    mpq_class u(random_coprime(rng, cfg_.p, bound), random_coprime(rng, cfg_.p, bound));
    if (rng.coin()) u = -u;
    return LocalScalar(u) * pi_pow(v);
  }
  auto rand_poly = [&]() {
    FqPoly p;
    int deg = static_cast<int>(rng.uniform(0, height));
    p.c.push_back(static_cast<Residue>(rng.uniform(1, q_ - 1)));
    for (int i = 1; i <= deg; ++i) p.c.push_back(static_cast<Residue>(rng.uniform(0, q_ - 1)));
    fqpoly::trim(p);
    return p;
  };
  FqPoly num = rand_poly();
  FqPoly den = rand_poly();
  return LocalScalar(F_, v, num, den);
}

LocalScalar LocalField::random_integral(Rng& rng, int height) const {
  if (rng.uniform(0, 15) == 0) return zero();
  return random_nonzero(rng, 0, 3, height);
}

// ---------------------------------------------------------- quotient ring

QuotientRing::QuotientRing(const LocalField& K, int N)
    : F_(K.residue_field()), rational_(K.backend() == Backend::RationalP), q_(K.q()), N_(N) {
  if (N < 0) throw InvalidConfig("quotient level must be nonnegative");
  size_ = 1;
  for (int i = 0; i < N; ++i) {
    size_ *= static_cast<std::uint64_t>(q_);
    if (size_ > (1ULL << 31)) throw TooLarge("O/pi^N too large");
  }
}

std::vector<Residue> QuotientRing::digits(std::uint32_t a) const {
  std::vector<Residue> d(static_cast<std::size_t>(N_));
  for (int i = 0; i < N_; ++i) {
    d[i] = static_cast<Residue>(a % q_);
    a /= q_;
  }
  return d;
}

std::uint32_t QuotientRing::pack(const std::vector<Residue>& d) const {
  std::uint32_t r = 0;
  for (int i = N_ - 1; i >= 0; --i) r = r * q_ + d[i];
  return r;
}

std::uint32_t QuotientRing::add(std::uint32_t a, std::uint32_t b) const {
  if (rational_) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) + b) % size_);
  auto x = digits(a), y = digits(b);
  for (int i = 0; i < N_; ++i) x[i] = F_->add(x[i], y[i]);
  return pack(x);
}

std::uint32_t QuotientRing::neg(std::uint32_t a) const {
  if (rational_) return static_cast<std::uint32_t>((size_ - a) % size_);
  auto x = digits(a);
  for (auto& d : x) d = F_->neg(d);
  return pack(x);
}

std::uint32_t QuotientRing::sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }

std::uint32_t QuotientRing::mul(std::uint32_t a, std::uint32_t b) const {
  if (rational_) return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % size_);
  auto x = digits(a), y = digits(b);
  std::vector<Residue> r(static_cast<std::size_t>(N_), 0);
  for (int i = 0; i < N_; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; i + j < N_; ++j) r[i + j] = F_->add(r[i + j], F_->mul(x[i], y[j]));
  }
  return pack(r);
}

std::uint32_t QuotientRing::inverse(std::uint32_t a) const {
  if (!is_unit(a)) throw DivisionByZero();
  if (rational_) {
    mpz_class inv, aa(a), mm(static_cast<unsigned long>(size_));
    mpz_invert(inv.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t());
    return static_cast<std::uint32_t>(inv.get_ui());
  }
  auto x = digits(a);
  std::vector<Residue> s(static_cast<std::size_t>(N_), 0);
  Residue inv0 = F_->inv(x[0]);
  for (int i = 0; i < N_; ++i) {
    Residue acc = i == 0 ? 1 : 0;
    for (int j = 1; j <= i; ++j) acc = F_->sub(acc, F_->mul(x[j], s[i - j]));
    s[i] = F_->mul(acc, inv0);
  }
  return pack(s);
}

}  // namespace btlab
