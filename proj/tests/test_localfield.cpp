#include "doctest.h"

#include "btlab/errors.hpp"
#include "btlab/localfield.hpp"

using namespace btlab;

namespace {

// The test-side view of O/p^N for the rational backend: plain integers.
long digits_value(const QuotientElement& x, int p) {
  long v = 0;
  for (auto it = x.digits.rbegin(); it != x.digits.rend(); ++it) v = v * p + *it;
  return v;
}

std::vector<FieldConfig> sample_configs() {
  return {FieldConfig::rational(2), FieldConfig::rational(3), FieldConfig::rational(5),
          FieldConfig::laurent(2, 1), FieldConfig::laurent(3, 1), FieldConfig::laurent(2, 2),
          FieldConfig::laurent(3, 2)};
}

}  // namespace

TEST_CASE("field config validation and json") {
  CHECK_THROWS_AS(FieldConfig::rational(4), InvalidConfig);
  CHECK_THROWS_AS(FieldConfig::laurent(2, 2, {0, 0, 1}), InvalidConfig);  // x^2 reducible
  FieldConfig bad;
  bad.backend = Backend::RationalP;
  bad.f = 2;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);

  auto c = FieldConfig::laurent(2, 2);
  CHECK(c.modulus == std::vector<int>{1, 1, 1});
  CHECK(c.q() == 4);
  CHECK(FieldConfig::from_json(c.to_json()) == c);
  CHECK(FieldConfig::laurent(2, 3).modulus == std::vector<int>{1, 1, 0, 1});
  CHECK(FieldConfig::laurent(3, 2).modulus == std::vector<int>{1, 0, 1});
  // No listed default: first irreducible by coefficient code.  Over F_5,
  // x^2 and x^2 + 1 have roots, x^2 + 2 does not (3 is not a square).
  CHECK(default_modulus(5, 2) == std::vector<int>{2, 0, 1});
}

TEST_CASE("residue field axioms") {
  for (auto cfg : sample_configs()) {
    ResidueField F(cfg.p, cfg.f, cfg.modulus);
    int q = F.q();
    for (int a = 0; a < q; ++a) {
      auto ra = static_cast<Residue>(a);
      CHECK(F.add(ra, F.neg(ra)) == 0);
      CHECK(F.pow(ra, q) == ra);  // Frobenius fixes F_q
      if (a != 0) CHECK(F.mul(ra, F.inv(ra)) == 1);
      for (int b = 0; b < q; ++b) {
        auto rb = static_cast<Residue>(b);
        CHECK(F.mul(ra, rb) == F.mul(rb, ra));
        for (int c = 0; c < q; c += 2) {
          auto rc = static_cast<Residue>(c);
          CHECK(F.mul(ra, F.add(rb, rc)) == F.add(F.mul(ra, rb), F.mul(ra, rc)));
        }
      }
    }
  }
}

TEST_CASE("valuation examples") {
  LocalField Q2(FieldConfig::rational(2));
  CHECK(Q2.valuation(Q2.from_int(12)) == Valuation(2));
  CHECK(Q2.valuation(Q2.zero()).is_infinite());
  CHECK(Q2.valuation(LocalScalar(mpq_class(3, 8))) == Valuation(-3));

  LocalField F4(FieldConfig::laurent(2, 2));
  auto t = F4.pi();
  auto x = t * t * t / (F4.one() + t);
  CHECK(F4.valuation(x) == Valuation(3));
  CHECK(F4.valuation(F4.zero()).is_infinite());
}

TEST_CASE("reduce examples") {
  LocalField Q2(FieldConfig::rational(2));
  auto r = Q2.reduce(Q2.from_int(7), 2);
  CHECK(r.digits == std::vector<Residue>{1, 1});
  // Oracle: brute-force the inverse of 3 modulo 4.
  long inv3 = -1;
  for (long y = 0; y < 4; ++y)
    if ((3 * y) % 4 == 1) inv3 = y;
  CHECK(digits_value(Q2.reduce(LocalScalar(mpq_class(1, 3)), 2), 2) == inv3);
  CHECK_THROWS_AS(Q2.reduce(LocalScalar(mpq_class(1, 2)), 2), NegativeValuation);

  LocalField F3(FieldConfig::laurent(3, 1));
  auto t = F3.pi();
  CHECK(F3.reduce(F3.one() + t * t, 2).digits == std::vector<Residue>{1, 0});
  // 1/(1-t) = 1 + t + t^2 + ...
  CHECK(F3.reduce(F3.one() / (F3.one() - t), 4).digits == std::vector<Residue>{1, 1, 1, 1});
}

TEST_CASE("unit representatives") {
  LocalField Q2(FieldConfig::rational(2));
  REQUIRE(Q2.unit_representatives().size() == 1);
  CHECK(Q2.unit_representatives()[0] == Q2.one());
  LocalField Q3(FieldConfig::rational(3));
  auto u3 = Q3.unit_representatives();
  REQUIRE(u3.size() == 2);
  CHECK(u3[0] == Q3.from_int(1));
  CHECK(u3[1] == Q3.from_int(2));

  for (auto cfg : {FieldConfig::laurent(2, 2), FieldConfig::laurent(3, 1), FieldConfig::laurent(5, 1),
                   FieldConfig::laurent(3, 2)}) {
    LocalField K(cfg);
    auto us = K.unit_representatives();
    REQUIRE(static_cast<int>(us.size()) == K.q() - 1);
    std::vector<int> seen(K.q(), 0);
    for (const auto& u : us) {
      CHECK(K.valuation(u) == Valuation(0));
      seen[K.residue(u)]++;
      LocalScalar pw = K.one();
      for (int i = 0; i < K.q() - 1; ++i) pw *= u;
      CHECK(pw == K.one());  // genuine roots of unity
    }
    CHECK(seen[0] == 0);
    for (int r = 1; r < K.q(); ++r) CHECK(seen[r] == 1);
  }
}

TEST_CASE("valuation is multiplicative and ultrametric") {
  for (auto cfg : sample_configs()) {
    LocalField K(cfg);
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
      auto x = K.random_nonzero(rng, -3, 3);
      auto y = K.random_nonzero(rng, -3, 3);
      auto vx = K.valuation(x), vy = K.valuation(y);
      CHECK(K.valuation(x * y) == vx + vy);
      auto vs = K.valuation(x + y);
      CHECK(vs >= std::min(vx, vy));
      if (vx != vy) CHECK(vs == std::min(vx, vy));
      CHECK((x / y) * y == x);
      CHECK((x + y) - y == x);
    }
  }
}

TEST_CASE("reduce is a ring homomorphism and truncates") {
  for (auto cfg : sample_configs()) {
    LocalField K(cfg);
    Rng rng(5);
    for (int i = 0; i < 500; ++i) {
      int N = static_cast<int>(rng.uniform(1, 5));
      QuotientRing R(K, N);
      auto x = K.random_integral(rng);
      auto y = K.random_integral(rng);
      auto rx = K.reduce(x, N).index(K.q());
      auto ry = K.reduce(y, N).index(K.q());
      auto rx32 = static_cast<std::uint32_t>(rx), ry32 = static_cast<std::uint32_t>(ry);
      CHECK(K.reduce(x + y, N).index(K.q()) == R.add(rx32, ry32));
      CHECK(K.reduce(x * y, N).index(K.q()) == R.mul(rx32, ry32));
      CHECK(K.reduce(x - y, N).index(K.q()) == R.sub(rx32, ry32));
      auto full = K.reduce(x, N).digits;
      auto shorter = K.reduce(x, N - 1).digits;
      CHECK(std::equal(shorter.begin(), shorter.end(), full.begin()));
      CHECK(K.reduce(K.lift(K.reduce(x, N)), N) == K.reduce(x, N));
      if (R.is_unit(rx32)) CHECK(R.mul(rx32, R.inverse(rx32)) == 1);
    }
  }
}

TEST_CASE("additive generators span O/pi^N") {
  for (auto cfg : {FieldConfig::rational(3), FieldConfig::laurent(2, 2)}) {
    LocalField K(cfg);
    int N = 2;
    QuotientRing R(K, N);
    std::vector<char> seen(R.size(), 0);
    std::vector<std::uint32_t> frontier{0};
    seen[0] = 1;
    std::vector<std::uint32_t> gens;
    for (const auto& g : K.additive_generators(N)) gens.push_back(static_cast<std::uint32_t>(K.reduce(g, N).index(K.q())));
    while (!frontier.empty()) {
      auto a = frontier.back();
      frontier.pop_back();
      for (auto g : gens) {
        auto b = R.add(a, g);
        if (!seen[b]) {
          seen[b] = 1;
          frontier.push_back(b);
        }
      }
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(R.size()));
  }
}
