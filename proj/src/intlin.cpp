#include "btlab/intlin.hpp"

#include <algorithm>
#include <sstream>

#include "btlab/errors.hpp"

namespace btlab {

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows[0].size();
  IntMatrix M(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != c) throw Error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) M(i, j) = rows[i][j];
  }
  return M;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVec>& cols, std::size_t rows) {
  IntMatrix M(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw Error("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) M(i, j) = cols[j][i];
  }
  return M;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (c_ != o.r_) throw Error("matrix shape mismatch");
  IntMatrix out(r_, o.c_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k) {
      const mpz_class& x = (*this)(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < o.c_; ++j)
        if (o(k, j) != 0) out(i, j) += x * o(k, j);
    }
  return out;
}

IntVec IntMatrix::operator*(const IntVec& v) const {
  if (c_ != v.size()) throw Error("vector length mismatch");
  IntVec out(r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t k = 0; k < c_; ++k)
      if ((*this)(i, k) != 0 && v[k] != 0) out[i] += (*this)(i, k) * v[k];
  return out;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(c_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntVec IntMatrix::column(std::size_t j) const {
  IntVec v(r_);
  for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntVec IntMatrix::row(std::size_t i) const { return IntVec(a_.begin() + static_cast<long>(i * c_), a_.begin() + static_cast<long>((i + 1) * c_)); }

IntMatrix IntMatrix::vstack(const IntMatrix& o) const {
  if (r_ != 0 && o.c_ != c_) throw Error("matrix shape mismatch");
  IntMatrix out(r_ + o.r_, r_ == 0 ? o.c_ : c_);
  std::copy(a_.begin(), a_.end(), out.a_.begin());
  std::copy(o.a_.begin(), o.a_.end(), out.a_.begin() + static_cast<long>(a_.size()));
  return out;
}

void IntMatrix::swap_rows(std::size_t i, std::size_t k) {
  if (i == k) return;
  for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(i, j), (*this)(k, j));
}

void IntMatrix::swap_cols(std::size_t j, std::size_t k) {
  if (j == k) return;
  for (std::size_t i = 0; i < r_; ++i) std::swap((*this)(i, j), (*this)(i, k));
}

nlohmann::json mpz_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class mpz_from_json(const nlohmann::json& j) {
  if (j.is_string()) return mpz_class(j.get<std::string>());
  return mpz_class(j.get<long>());
}

nlohmann::json vec_json(const IntVec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& z : v) out.push_back(mpz_json(z));
  return out;
}

IntVec vec_from_json(const nlohmann::json& j) {
  IntVec v;
  for (const auto& e : j) v.push_back(mpz_from_json(e));
  return v;
}

nlohmann::json IntMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < r_; ++i) rows.push_back(vec_json(row(i)));
  return {{"rows", r_}, {"cols", c_}, {"data", rows}};
}

IntMatrix IntMatrix::from_json(const nlohmann::json& j) {
  IntMatrix M(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& data = j.at("data");
  if (data.size() != M.rows()) throw Error("matrix json: row count mismatch");
  for (std::size_t i = 0; i < M.rows(); ++i) {
    if (data[i].size() != M.cols()) throw Error("matrix json: column count mismatch");
    for (std::size_t k = 0; k < M.cols(); ++k) M(i, k) = mpz_from_json(data[i][k]);
  }
  return M;
}

// Bareiss fraction-free elimination.
mpz_class determinant(const IntMatrix& A_in) {
  if (A_in.rows() != A_in.cols()) throw Error("determinant of a non-square matrix");
  std::size_t n = A_in.rows();
  if (n == 0) return 1;
  IntMatrix A = A_in;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (A(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && A(p, k) == 0) ++p;
      if (p == n) return 0;
      A.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = A(i, j) * A(k, k) - A(i, k) * A(k, j);
        mpz_divexact(A(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = A(k, k);
  }
  return sign * A(n - 1, n - 1);
}

// ---------------------------------------------------------------- smith

IntVec SmithDecomposition::nonzero_diagonal() const {
  IntVec d;
  for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
  return d;
}

namespace {

int cmpabs(const mpz_class& a, const mpz_class& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }

class SmithWorker {
 public:
  SmithWorker(const IntMatrix& A, bool with_u)
      : M(A), U(with_u ? IntMatrix::identity(A.rows()) : IntMatrix()), V(IntMatrix::identity(A.cols())),
        with_u_(with_u) {}

  // row_i -= f * row_k
  void row_sub(std::size_t i, std::size_t k, const mpz_class& f, std::size_t from) {
    for (std::size_t j = from; j < M.cols(); ++j)
      if (M(k, j) != 0) M(i, j) -= f * M(k, j);
    if (with_u_)
      for (std::size_t j = 0; j < U.cols(); ++j)
        if (U(k, j) != 0) U(i, j) -= f * U(k, j);
  }

  // col_j -= f * col_k
  void col_sub(std::size_t j, std::size_t k, const mpz_class& f, std::size_t from) {
    for (std::size_t i = from; i < M.rows(); ++i)
      if (M(i, k) != 0) M(i, j) -= f * M(i, k);
    for (std::size_t i = 0; i < V.rows(); ++i)
      if (V(i, k) != 0) V(i, j) -= f * V(i, k);
  }

  void swap_rows(std::size_t i, std::size_t k) {
    M.swap_rows(i, k);
    if (with_u_) U.swap_rows(i, k);
  }
  void swap_cols(std::size_t j, std::size_t k) {
    M.swap_cols(j, k);
    V.swap_cols(j, k);
  }

  // Smallest |entry| in the trailing block, row-major tie-break.
  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    for (std::size_t i = t; i < M.rows(); ++i)
      for (std::size_t j = t; j < M.cols(); ++j) {
        if (M(i, j) == 0) continue;
        if (!found || cmpabs(M(i, j), M(pi, pj)) < 0) {
          pi = i;
          pj = j;
          found = true;
          if (abs(M(i, j)) == 1) return true;
        }
      }
    return found;
  }

  std::size_t run() {
    std::size_t t = 0;
    std::size_t lim = std::min(M.rows(), M.cols());
    for (; t < lim; ++t) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < M.rows(); ++i) {
          if (M(i, t) == 0) continue;
          mpz_class f = M(i, t) / M(t, t);
          if (f != 0) row_sub(i, t, f, t);
          if (M(i, t) != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < M.cols(); ++j) {
          if (M(t, j) == 0) continue;
          mpz_class f = M(t, j) / M(t, t);
          if (f != 0) col_sub(j, t, f, t);
          if (M(t, j) != 0) clean = false;
        }
        if (!clean) {
          // Move the smallest remainder in row t / column t into the pivot.
          std::size_t bi = t, bj = t;
          for (std::size_t i = t + 1; i < M.rows(); ++i)
            if (M(i, t) != 0 && cmpabs(M(i, t), M(bi, bj)) < 0) {
              bi = i;
              bj = t;
            }
          for (std::size_t j = t + 1; j < M.cols(); ++j)
            if (M(t, j) != 0 && cmpabs(M(t, j), M(bi, bj)) < 0) {
              bi = t;
              bj = j;
            }
          swap_rows(t, bi);
          swap_cols(t, bj);
          continue;
        }
        if (abs(M(t, t)) == 1) break;
        bool fixed = false;
        for (std::size_t i = t + 1; i < M.rows() && !fixed; ++i)
          for (std::size_t j = t + 1; j < M.cols(); ++j)
            if (M(i, j) != 0 && !mpz_divisible_p(M(i, j).get_mpz_t(), M(t, t).get_mpz_t())) {
              row_sub(t, i, -1, t);  // row_t += row_i
              fixed = true;
              break;
            }
        if (!fixed) break;
      }
      if (M(t, t) < 0) {
        for (std::size_t j = t; j < M.cols(); ++j) M(t, j) = -M(t, j);
        if (with_u_)
          for (std::size_t j = 0; j < U.cols(); ++j) U(t, j) = -U(t, j);
      }
    }
    return t;
  }

  IntMatrix M, U, V;

 private:
  bool with_u_;
};

}  // namespace

SmithDecomposition snf(const IntMatrix& A, bool with_u) {
  SmithWorker w(A, with_u);
  SmithDecomposition S;
  S.rank = w.run();
  S.D = std::move(w.M);
  S.U = std::move(w.U);
  S.V = std::move(w.V);
  S.has_u = with_u;
  for (std::size_t i = 0; i < S.D.rows(); ++i)
    for (std::size_t j = 0; j < S.D.cols(); ++j)
      if (i != j && S.D(i, j) != 0) throw Error("snf: off-diagonal residue");
  for (std::size_t i = 0; i + 1 < S.rank; ++i)
    if (!mpz_divisible_p(S.D(i + 1, i + 1).get_mpz_t(), S.D(i, i).get_mpz_t())) throw Error("snf: divisibility chain broken");
  if (with_u) {
    if (!(S.U * A * S.V == S.D)) throw Error("snf: D != U A V");
  } else {
    IntMatrix AV = A * S.V;
    for (std::size_t i = 0; i < AV.rows(); ++i)
      for (std::size_t j = S.rank; j < AV.cols(); ++j)
        if (AV(i, j) != 0) throw Error("snf: kernel columns not annihilated");
  }
  return S;
}

bool verify_snf(const IntMatrix& A, const SmithDecomposition& S) {
  if (!S.has_u) return false;
  if (S.U.rows() != A.rows() || S.V.rows() != A.cols()) return false;
  if (abs(determinant(S.U)) != 1 || abs(determinant(S.V)) != 1) return false;
  if (!(S.U * A * S.V == S.D)) return false;
  for (std::size_t i = 0; i < S.D.rows(); ++i)
    for (std::size_t j = 0; j < S.D.cols(); ++j) {
      if (i != j && S.D(i, j) != 0) return false;
      if (i == j && S.D(i, j) < 0) return false;
    }
  for (std::size_t i = 0; i + 1 < std::min(S.D.rows(), S.D.cols()); ++i) {
    const mpz_class& a = S.D(i, i);
    const mpz_class& b = S.D(i + 1, i + 1);
    if (a == 0 && b != 0) return false;
    if (a != 0 && !mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) return false;
  }
  return true;
}

// ------------------------------------------------------------- quotients

std::string QuotientStructure::str() const {
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& t : torsion) {
    os << (first ? "" : " + ") << "Z/" << t.get_str();
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json QuotientStructure::to_json() const { return {{"torsion", vec_json(torsion)}, {"free_rank", free_rank}}; }

QuotientStructure quotient_from_snf(const SmithDecomposition& S) {
  QuotientStructure Q;
  for (std::size_t i = 0; i < S.rank; ++i)
    if (S.D(i, i) > 1) Q.torsion.push_back(S.D(i, i));
  Q.free_rank = S.D.rows() - S.rank;
  return Q;
}

QuotientStructure cokernel_structure(const IntMatrix& A) { return quotient_from_snf(snf(A, false)); }

IntMatrix kernel_basis(const IntMatrix& A) {
  SmithDecomposition S = snf(A, false);
  IntMatrix K(A.cols(), A.cols() - S.rank);
  for (std::size_t i = 0; i < A.cols(); ++i)
    for (std::size_t j = S.rank; j < A.cols(); ++j) K(i, j - S.rank) = S.V(i, j);
  return K;
}

SolveResult solve_integer(const IntMatrix& A, const IntVec& b) {
  if (b.size() != A.rows()) throw Error("solve_integer: length mismatch");
  SmithDecomposition S = snf(A, true);
  IntVec c = S.U * b;
  SolveResult r;
  auto functional = [&](std::size_t i, const mpz_class& den) {
    std::vector<mpq_class> w(A.rows());
    for (std::size_t k = 0; k < A.rows(); ++k) {
      w[k] = mpq_class(S.U(i, k), den);
      w[k].canonicalize();
    }
    return w;
  };
  IntVec y(A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    if (i < S.rank) {
      const mpz_class& d = S.D(i, i);
      if (!mpz_divisible_p(c[i].get_mpz_t(), d.get_mpz_t())) {
        r.certificate = functional(i, d);
        return r;
      }
      y[i] = c[i] / d;
    } else if (c[i] != 0) {
      r.certificate = functional(i, 2 * c[i]);
      return r;
    }
  }
  r.solvable = true;
  r.x = S.V * y;
  return r;
}

bool check_solve(const IntMatrix& A, const IntVec& b, const SolveResult& r) {
  if (r.solvable) return A * r.x == b;
  if (r.certificate.size() != A.rows()) return false;
  for (std::size_t j = 0; j < A.cols(); ++j) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < A.rows(); ++i) s += r.certificate[i] * A(i, j);
    if (s.get_den() != 1) return false;
  }
  mpq_class s = 0;
  for (std::size_t i = 0; i < A.rows(); ++i) s += r.certificate[i] * b[i];
  return s.get_den() != 1;
}

std::optional<mpz_class> class_order(const IntVec& v, const IntMatrix& A) {
  if (v.size() != A.rows()) throw Error("class_order: length mismatch");
  SmithDecomposition S = snf(A, true);
  IntVec c = S.U * v;
  mpz_class k = 1;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i >= S.rank) {
      if (c[i] != 0) return std::nullopt;
      continue;
    }
    mpz_class g = gcd(S.D(i, i), c[i]);
    mpz_class part = S.D(i, i) / g;
    k = lcm(k, part);
  }
  return k;
}

}  // namespace btlab
