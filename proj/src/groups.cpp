#include "btlab/groups.hpp"

#include <algorithm>
#include <deque>

#include "btlab/errors.hpp"

namespace btlab {

namespace {

bool integral(const LocalField& K, const LocalScalar& x) { return K.valuation(x) >= Valuation(0); }

bool all_integral(const LocalField& K, const Mat2& m) {
  return integral(K, m.a) && integral(K, m.b) && integral(K, m.c) && integral(K, m.d);
}

Mat2 e12(const LocalField& K, const LocalScalar& r) { return {K.one(), r, K.zero(), K.one()}; }
Mat2 e21(const LocalField& K, const LocalScalar& r) { return {K.one(), K.zero(), r, K.one()}; }

Mat2 random_gl2o(const LocalField& K, Rng& rng, int size_bound) {
  Mat2 g = Mat2::diag(K.random_unit(rng), K.random_unit(rng), K);
  for (int i = 0; i < std::max(size_bound, 1) + 1; ++i) {
    LocalScalar r = K.random_integral(rng, size_bound);
    g = g * (rng.coin() ? e12(K, r) : e21(K, r));
  }
  return g;
}

}  // namespace

GroupElement::GroupElement(const LocalField& K, Mat2 m) : m_(std::move(m)) {
  LocalScalar D = m_.det();
  if (D.is_zero()) throw SingularMatrix();
  det_val_ = K.val(D);
}

GroupElement make_element(const LocalField& K, const Mat2& m) { return GroupElement(K, m); }

GroupElement s_element(const LocalField& K) { return GroupElement(K, {K.zero(), K.one(), K.pi(), K.zero()}); }

std::string SubgroupTag::name() const {
  switch (kind) {
    case SubgroupKind::FullG: return "G";
    case SubgroupKind::G0det: return "G^0";
    case SubgroupKind::MaxCompact: return "G_0";
    case SubgroupKind::ConjMaxCompact: return "sG_0";
    case SubgroupKind::Iwahori: return "I";
    case SubgroupKind::Congruence: return "G_" + std::to_string(n);
    case SubgroupKind::UpperBorel: return "B_0";
  }
  return "?";
}

bool member(const LocalField& K, const GroupElement& g, SubgroupTag tag) {
  const Mat2& m = g.matrix();
  bool compact = g.det_valuation() == 0 && all_integral(K, m);
  switch (tag.kind) {
    case SubgroupKind::FullG: return true;
    case SubgroupKind::G0det: return g.det_valuation() == 0;
    case SubgroupKind::MaxCompact: return compact;
    case SubgroupKind::ConjMaxCompact: {
      GroupElement s = s_element(K);
      return member(K, s.inverse() * g * s, SubgroupTag::max_compact());
    }
    case SubgroupKind::Iwahori: return compact && K.valuation(m.c) >= Valuation(1);
    case SubgroupKind::Congruence: {
      if (tag.n <= 0) return compact;
      Valuation need(tag.n);
      return K.valuation(m.a - K.one()) >= need && K.valuation(m.b) >= need && K.valuation(m.c) >= need &&
             K.valuation(m.d - K.one()) >= need;
    }
    case SubgroupKind::UpperBorel: return compact && m.c.is_zero();
  }
  return false;
}

// ------------------------------------------------------------ quotient

std::uint64_t FiniteQuotient::expected_order(int q, SubgroupTag tag, int N) {
  if (N < 1) throw InvalidConfig("quotient level must be at least 1");
  long double order = static_cast<long double>(q * q - 1) * static_cast<long double>(q * q - q);
  for (int i = 0; i < 4 * (N - 1); ++i) order *= q;
  if (tag.kind == SubgroupKind::Iwahori) order /= (q + 1);
  if (order > 1e18L) return static_cast<std::uint64_t>(1e18);
  return static_cast<std::uint64_t>(order);
}

FiniteQuotient::FiniteQuotient(const LocalField& K, SubgroupTag tag, int N)
    : K_(K), tag_(tag), N_(N), R_(K, N) {
  if (tag.kind != SubgroupKind::MaxCompact && tag.kind != SubgroupKind::Iwahori)
    throw InvalidConfig("finite quotients exist for G_0 and I only");
  std::uint64_t expect = expected_order(K.q(), tag, N);
  if (expect > kMaxOrder) throw TooLarge("quotient of order " + std::to_string(expect) + " exceeds the guard");
  auto R = static_cast<std::uint32_t>(R_.size());
  bool iwahori = tag.kind == SubgroupKind::Iwahori;
  for (std::uint32_t a = 0; a < R; ++a)
    for (std::uint32_t b = 0; b < R; ++b)
      for (std::uint32_t c = 0; c < R; ++c) {
        if (iwahori && R_.low_digit(c) != 0) continue;
        for (std::uint32_t d = 0; d < R; ++d) {
          if (!R_.is_unit(R_.sub(R_.mul(a, d), R_.mul(b, c)))) continue;
          Elem e{a, b, c, d};
          index_.emplace(pack(e), static_cast<std::uint32_t>(elems_.size()));
          elems_.push_back(e);
        }
      }
  if (elems_.size() != expect) throw Error("quotient enumeration disagrees with the closed-form order");
  identity_ = index_of({1 % R, 0, 0, 1 % R});
}

std::uint64_t FiniteQuotient::pack(const Elem& e) const {
  std::uint64_t R = R_.size();
  return ((static_cast<std::uint64_t>(e[0]) * R + e[1]) * R + e[2]) * R + e[3];
}

std::size_t FiniteQuotient::index_of(const Elem& e) const {
  auto it = index_.find(pack(e));
  if (it == index_.end()) throw Error("matrix does not lie in the quotient");
  return it->second;
}

FiniteQuotient::Elem FiniteQuotient::mul_elems(const Elem& x, const Elem& y) const {
  return {R_.add(R_.mul(x[0], y[0]), R_.mul(x[1], y[2])), R_.add(R_.mul(x[0], y[1]), R_.mul(x[1], y[3])),
          R_.add(R_.mul(x[2], y[0]), R_.mul(x[3], y[2])), R_.add(R_.mul(x[2], y[1]), R_.mul(x[3], y[3]))};
}

std::size_t FiniteQuotient::mul(std::size_t i, std::size_t j) const { return index_of(mul_elems(elems_[i], elems_[j])); }

std::size_t FiniteQuotient::inverse(std::size_t i) const {
  const Elem& x = elems_[i];
  std::uint32_t dinv = R_.inverse(R_.sub(R_.mul(x[0], x[3]), R_.mul(x[1], x[2])));
  return index_of({R_.mul(x[3], dinv), R_.mul(R_.neg(x[1]), dinv), R_.mul(R_.neg(x[2]), dinv), R_.mul(x[0], dinv)});
}

FiniteQuotient::Elem FiniteQuotient::reduce(const GroupElement& g) const {
  const Mat2& m = g.matrix();
  auto r = [&](const LocalScalar& x) { return static_cast<std::uint32_t>(K_.reduce(x, N_).index(K_.q())); };
  return {r(m.a), r(m.b), r(m.c), r(m.d)};
}

GroupElement FiniteQuotient::lift(std::size_t i) const {
  const Elem& e = elems_[i];
  return GroupElement(K_, {K_.lift_index(e[0], N_), K_.lift_index(e[1], N_), K_.lift_index(e[2], N_),
                           K_.lift_index(e[3], N_)});
}

std::vector<std::size_t> FiniteQuotient::closure(const std::vector<Elem>& gens) const {
  std::vector<std::size_t> gi;
  for (const auto& g : gens) gi.push_back(index_of(g));
  std::vector<char> seen(elems_.size(), 0);
  std::vector<std::size_t> out{identity_};
  seen[identity_] = 1;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (auto g : gi) {
      std::size_t y = mul(out[k], g);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  return out;
}

// --------------------------------------------------------------- cosets

std::vector<GroupElement> coset_reps_G0_mod_GnB0(const LocalField& K, int n) {
  if (n < 0) throw InvalidConfig("n must be nonnegative");
  QuotientRing R(K, n + 1);
  std::vector<GroupElement> out;
  for (std::uint64_t y = 0; y < R.size(); ++y) out.emplace_back(K, e21(K, K.lift_index(y, n + 1)));
  for (std::uint64_t x = 0; x < R.size(); ++x) {
    if (x % static_cast<std::uint64_t>(K.q()) != 0) continue;  // x in pi O
    out.emplace_back(K, Mat2{K.lift_index(x, n + 1), K.one(), K.one(), K.zero()});
  }
  return out;
}

bool equivalent_mod_GnB0(const LocalField& K, const GroupElement& g, const GroupElement& h, int n) {
  GroupElement x = g.inverse() * h;
  return member(K, x, SubgroupTag::max_compact()) && K.valuation(x.matrix().c) >= Valuation(n + 1);
}

// ----------------------------------------------------------- generators

std::vector<GroupElement> generators(const LocalField& K, SubgroupTag tag, int N) {
  if (tag.kind != SubgroupKind::MaxCompact && tag.kind != SubgroupKind::Iwahori)
    throw InvalidConfig("generators exist for G_0 and I only");
  if (N < 1) throw InvalidConfig("generator level must be at least 1");
  int eps = tag.kind == SubgroupKind::Iwahori ? 1 : 0;
  std::vector<GroupElement> out;
  auto adds = K.additive_generators(N);
  for (const auto& r : adds) out.emplace_back(K, e12(K, r));
  for (const auto& r : adds) {
    LocalScalar low = r * K.pi_pow(eps);
    if (K.valuation(low) >= Valuation(N)) continue;
    out.emplace_back(K, e21(K, low));
  }
  QuotientRing R(K, N);
  std::vector<char> reached(R.size(), 0);
  std::vector<std::uint32_t> chosen, group{1 % static_cast<std::uint32_t>(R.size())};
  reached[group[0]] = 1;
  for (std::uint32_t u = 0; u < R.size(); ++u) {
    if (!R.is_unit(u) || reached[u]) continue;
    chosen.push_back(u);
    for (std::size_t k = 0; k < group.size(); ++k)
      for (auto c : chosen) {
        std::uint32_t y = R.mul(group[k], c);
        if (!reached[y]) {
          reached[y] = 1;
          group.push_back(y);
        }
      }
  }
  for (auto u : chosen) {
    LocalScalar lu = K.lift_index(u, N);
    out.emplace_back(K, Mat2::diag(lu, K.one(), K));
    out.emplace_back(K, Mat2::diag(K.one(), lu, K));
  }
  return out;
}

// --------------------------------------------------------------- random

GroupElement random_element(const LocalField& K, SubgroupTag tag, Rng& rng, int size_bound) {
  auto integ = [&]() { return K.random_integral(rng, size_bound); };
  auto unit = [&]() { return K.random_unit(rng, size_bound); };
  switch (tag.kind) {
    case SubgroupKind::MaxCompact: return GroupElement(K, random_gl2o(K, rng, size_bound));
    case SubgroupKind::FullG: {
      long m1 = rng.uniform(-size_bound, size_bound), m2 = rng.uniform(-size_bound, size_bound);
      Mat2 d = Mat2::diag(K.pi_pow(m1), K.pi_pow(m2), K);
      return GroupElement(K, random_gl2o(K, rng, size_bound) * d * random_gl2o(K, rng, size_bound));
    }
    case SubgroupKind::G0det: {
      long m = rng.uniform(-size_bound, size_bound);
      Mat2 d = Mat2::diag(K.pi_pow(m), K.pi_pow(-m), K);
      return GroupElement(K, random_gl2o(K, rng, size_bound) * d * random_gl2o(K, rng, size_bound));
    }
    case SubgroupKind::ConjMaxCompact: {
      GroupElement s = s_element(K);
      return s * GroupElement(K, random_gl2o(K, rng, size_bound)) * s.inverse();
    }
    case SubgroupKind::Iwahori: return GroupElement(K, {unit(), integ(), K.pi() * integ(), unit()});
    case SubgroupKind::UpperBorel: return GroupElement(K, {unit(), integ(), K.zero(), unit()});
    case SubgroupKind::Congruence: {
      if (tag.n <= 0) return GroupElement(K, random_gl2o(K, rng, size_bound));
      LocalScalar pn = K.pi_pow(tag.n);
      return GroupElement(K, {K.one() + pn * integ(), pn * integ(), pn * integ(), K.one() + pn * integ()});
    }
  }
  throw InvalidConfig("unknown subgroup");
}

GroupElement random_element(const LocalField& K, SubgroupTag tag, std::uint64_t seed, int size_bound) {
  Rng rng(seed);
  return random_element(K, tag, rng, size_bound);
}

}  // namespace btlab
