#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace btlab {

using IntVec = std::vector<mpz_class>;

/// Dense matrix of arbitrary-precision integers, row-major.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
  // Columns given as vectors of equal length.
  static IntMatrix from_columns(const std::vector<IntVec>& cols, std::size_t rows);

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  IntVec operator*(const IntVec& v) const;
  bool operator==(const IntMatrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  IntMatrix transpose() const;
  IntVec column(std::size_t j) const;
  IntVec row(std::size_t i) const;
  // Stacks o below *this.
  IntMatrix vstack(const IntMatrix& o) const;

  void swap_rows(std::size_t i, std::size_t k);
  void swap_cols(std::size_t j, std::size_t k);

  nlohmann::json to_json() const;
  static IntMatrix from_json(const nlohmann::json& j);

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<mpz_class> a_;
};

mpz_class determinant(const IntMatrix& A);

/// D = U A V with U, V unimodular and D diagonal, d_1 | d_2 | ... and the
/// nonzero entries first.  U is only formed when requested.
struct SmithDecomposition {
  IntMatrix U, D, V;
  std::size_t rank = 0;
  bool has_u = false;

  // d_1, ..., d_rank
  IntVec nonzero_diagonal() const;
};

SmithDecomposition snf(const IntMatrix& A, bool with_u = true);

// Re-checks every claim of a decomposition of A (requires U).
bool verify_snf(const IntMatrix& A, const SmithDecomposition& S);

/// Z^rows / (column span of A): invariant factors > 1 and free rank.
struct QuotientStructure {
  IntVec torsion;
  std::size_t free_rank = 0;

  bool operator==(const QuotientStructure&) const = default;
  std::string str() const;
  nlohmann::json to_json() const;
};

QuotientStructure cokernel_structure(const IntMatrix& A);
QuotientStructure quotient_from_snf(const SmithDecomposition& S);

// Z-basis of {x : A x = 0} as columns.
IntMatrix kernel_basis(const IntMatrix& A);

/// Either x with A x = b, or a rational row functional w with w A integral
/// and w b not integral.
struct SolveResult {
  bool solvable = false;
  IntVec x;
  std::vector<mpq_class> certificate;
};

SolveResult solve_integer(const IntMatrix& A, const IntVec& b);
bool check_solve(const IntMatrix& A, const IntVec& b, const SolveResult& r);

// Least k >= 1 with k v in the column span of A; nullopt when infinite.
std::optional<mpz_class> class_order(const IntVec& v, const IntMatrix& A);

nlohmann::json mpz_json(const mpz_class& z);
mpz_class mpz_from_json(const nlohmann::json& j);
nlohmann::json vec_json(const IntVec& v);
IntVec vec_from_json(const nlohmann::json& j);

}  // namespace btlab
