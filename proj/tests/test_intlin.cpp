#include "doctest.h"

#include <functional>

#include "btlab/intlin.hpp"
#include "btlab/random.hpp"

using namespace btlab;

namespace {

IntMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c, long lo, long hi) {
  IntMatrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) M(i, j) = rng.uniform(lo, hi);
  return M;
}

// Oracle: the k-th determinantal divisor is the gcd of all k x k minors,
// computed by cofactor expansion over explicit index subsets.
mpz_class minor_det(const IntMatrix& A, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return A(rows[0], cols[0]);
  mpz_class s = 0;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    std::vector<std::size_t> sub_r(rows.begin() + 1, rows.end());
    std::vector<std::size_t> sub_c;
    for (std::size_t t = 0; t < cols.size(); ++t)
      if (t != k) sub_c.push_back(cols[t]);
    mpz_class m = A(rows[0], cols[k]) * minor_det(A, sub_r, sub_c);
    s += (k % 2 == 0) ? m : mpz_class(-m);
  }
  return s;
}

void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (cur.size() == k) {
      f(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

IntVec invariant_factors_by_minors(const IntMatrix& A) {
  IntVec out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(A.rows(), A.cols()); ++k) {
    mpz_class g = 0;
    subsets(A.rows(), k, [&](const std::vector<std::size_t>& rs) {
      subsets(A.cols(), k, [&](const std::vector<std::size_t>& cs) { g = gcd(g, minor_det(A, rs, cs)); });
    });
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntMatrix random_unimodular(Rng& rng, std::size_t n) {
  IntMatrix U = IntMatrix::identity(n);
  for (int t = 0; t < 8; ++t) {
    auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
    auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(n) - 1));
    if (i == j) continue;
    long f = rng.uniform(-2, 2);
    for (std::size_t k = 0; k < n; ++k) U(i, k) += f * U(j, k);
  }
  return U;
}

}  // namespace

TEST_CASE("smith normal form of small fixed matrices") {
  auto S = snf(IntMatrix::from_rows({{3, 0}, {1, 2}}));
  CHECK(S.rank == 2);
  CHECK(S.nonzero_diagonal() == IntVec{1, 6});
  CHECK(verify_snf(IntMatrix::from_rows({{3, 0}, {1, 2}}), S));

  auto Q = cokernel_structure(IntMatrix::from_rows({{2, 1, 0}, {0, 1, 2}}));
  CHECK(Q.torsion == IntVec{2});
  CHECK(Q.free_rank == 0);
  CHECK(Q.str() == "Z/2");

  for (long q : {2, 3, 4, 5, 7}) {
    auto C = cokernel_structure(IntMatrix::from_rows({{q + 1}, {q + 1}}));
    CHECK(C.free_rank == 1);
    CHECK(C.torsion == IntVec{q + 1});
  }
  CHECK(cokernel_structure(IntMatrix(2, 0)).free_rank == 2);
  CHECK(cokernel_structure(IntMatrix::from_rows({{0, 0}, {0, 0}})).free_rank == 2);
  CHECK(cokernel_structure(IntMatrix::identity(3)).str() == "0");
}

TEST_CASE("determinant") {
  CHECK(determinant(IntMatrix::from_rows({{3, 0}, {1, 2}})) == 6);
  CHECK(determinant(IntMatrix::from_rows({{0, 1}, {1, 0}})) == -1);
  CHECK(determinant(IntMatrix::from_rows({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}})) == 0);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    auto A = random_matrix(rng, 4, 4, -5, 5);
    std::vector<std::size_t> all{0, 1, 2, 3};
    CHECK(determinant(A) == minor_det(A, all, all));
  }
}

TEST_CASE("smith normal form matches determinantal divisors") {
  Rng rng(11);
  for (int t = 0; t < 150; ++t) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 4));
    std::size_t c = static_cast<std::size_t>(rng.uniform(1, 4));
    auto A = random_matrix(rng, r, c, -6, 6);
    if (t % 5 == 0) A = A * IntMatrix::from_rows(std::vector<std::vector<long>>(c, std::vector<long>(c, 2)));
    auto S = snf(A);
    CHECK(verify_snf(A, S));
    CHECK(S.nonzero_diagonal() == invariant_factors_by_minors(A));
    // Without U the diagonal and V still agree.
    auto S2 = snf(A, false);
    CHECK(S2.D == S.D);
    CHECK(S2.rank == S.rank);
  }
}

TEST_CASE("invariance under permutations and unimodular changes") {
  Rng rng(12);
  for (int t = 0; t < 60; ++t) {
    auto A = random_matrix(rng, 4, 3, -4, 4);
    auto base = cokernel_structure(A);
    auto P = random_unimodular(rng, 4);
    auto R = random_unimodular(rng, 3);
    CHECK(abs(determinant(P)) == 1);
    CHECK(cokernel_structure(P * A * R) == base);
    IntMatrix B = A;
    B.swap_rows(0, 3);
    B.swap_cols(0, 2);
    CHECK(cokernel_structure(B) == base);
  }
}

TEST_CASE("solve_integer returns solutions or certificates") {
  auto r = solve_integer(IntMatrix::from_rows({{2}}), IntVec{3});
  CHECK_FALSE(r.solvable);
  CHECK(check_solve(IntMatrix::from_rows({{2}}), IntVec{3}, r));

  auto A = IntMatrix::from_rows({{3, 0}, {1, 2}});
  auto s = solve_integer(A, IntVec{6, 2});
  REQUIRE(s.solvable);
  CHECK(s.x == IntVec{2, 0});

  // A x = b outside the rational span.
  auto Z = IntMatrix::from_rows({{1}, {1}});
  auto z = solve_integer(Z, IntVec{1, 2});
  CHECK_FALSE(z.solvable);
  CHECK(check_solve(Z, IntVec{1, 2}, z));

  Rng rng(21);
  for (int t = 0; t < 100; ++t) {
    auto M = random_matrix(rng, 4, 3, -5, 5);
    IntVec x(3);
    for (auto& e : x) e = rng.uniform(-9, 9);
    IntVec b = M * x;
    auto res = solve_integer(M, b);
    REQUIRE(res.solvable);
    CHECK(M * res.x == b);
    // Perturb b; either way the answer must be checkable.
    b[static_cast<std::size_t>(rng.uniform(0, 3))] += 1;
    auto res2 = solve_integer(M, b);
    CHECK(check_solve(M, b, res2));
  }
}

TEST_CASE("class orders") {
  auto A = IntMatrix::from_rows({{3, 0}, {1, 2}});
  CHECK(class_order(IntVec{1, 0}, A) == mpz_class(6));
  CHECK(class_order(IntVec{3, 1}, A) == mpz_class(1));
  CHECK_FALSE(class_order(IntVec{1, 0}, IntMatrix::from_rows({{1}, {1}})).has_value());
  CHECK(class_order(IntVec{1, -1}, IntMatrix::from_rows({{1}, {1}})) == std::nullopt);
  CHECK(class_order(IntVec{2, 2}, IntMatrix::from_rows({{1}, {1}})) == mpz_class(1));

  Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    auto M = random_matrix(rng, 3, 3, -4, 4);
    IntVec v(3);
    for (auto& e : v) e = rng.uniform(-5, 5);
    auto k = class_order(v, M);
    auto S = snf(M);
    if (S.rank < 3) continue;
    REQUIRE(k.has_value());
    mpz_class prod = 1;
    for (const auto& d : S.nonzero_diagonal()) prod *= d;
    CHECK(prod % *k == 0);
    // Oracle: smallest k by direct search.
    mpz_class m = 1;
    for (;; ++m) {
      IntVec w = v;
      for (auto& e : w) e *= m;
      if (solve_integer(M, w).solvable) break;
    }
    CHECK(m == *k);
  }
}

TEST_CASE("kernel basis and json round trip") {
  auto A = IntMatrix::from_rows({{1, 1, 1}, {0, 2, 4}});
  auto K = kernel_basis(A);
  CHECK(K.cols() == 1);
  auto prod = A * K;
  for (std::size_t i = 0; i < prod.rows(); ++i) CHECK(prod(i, 0) == 0);
  CHECK(abs(K(0, 0)) == 1);

  IntMatrix big(1, 2);
  big(0, 0) = mpz_class("123456789012345678901234567890");
  big(0, 1) = -4;
  CHECK(IntMatrix::from_json(big.to_json()) == big);
}
