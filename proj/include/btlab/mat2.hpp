#pragma once

#include <string>

#include "btlab/errors.hpp"
#include "btlab/localfield.hpp"

namespace btlab {

/// 2x2 matrix [[a, b], [c, d]] over F.
struct Mat2 {
  LocalScalar a, b, c, d;

  LocalScalar det() const { return a * d - b * c; }

  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }

  Mat2 scaled(const LocalScalar& s) const { return {a * s, b * s, c * s, d * s}; }

  Mat2 inverse() const {
    LocalScalar D = det();
    if (D.is_zero()) throw SingularMatrix();
    return {d / D, -b / D, -c / D, a / D};
  }

  // det(g) g^{-1}
  Mat2 adjunct() const { return {d, -b, -c, a}; }

  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }

  std::string str() const {
    return "[[" + a.str() + "," + b.str() + "],[" + c.str() + "," + d.str() + "]]";
  }

  static Mat2 identity(const LocalField& K) { return {K.one(), K.zero(), K.zero(), K.one()}; }
  static Mat2 diag(const LocalScalar& x, const LocalScalar& y, const LocalField& K) {
    return {x, K.zero(), K.zero(), y};
  }
};

}  // namespace btlab
