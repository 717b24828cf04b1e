#pragma once

#include "cell24/exact/polynomial.hpp"

#include <cmath>
#include <string>

namespace cell24::exact {

/// a + b sqrt(7) with rational a, b.
struct Q7 {
  BigRat a = 0, b = 0;

  friend Q7 operator+(const Q7& x, const Q7& y) { return {x.a + y.a, x.b + y.b}; }
  friend Q7 operator-(const Q7& x, const Q7& y) { return {x.a - y.a, x.b - y.b}; }
  friend Q7 operator*(const Q7& x, const Q7& y) {
    return {x.a * y.a + 7 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend Q7 operator*(const BigRat& s, const Q7& x) { return {s * x.a, s * x.b}; }

  [[nodiscard]] Q7 pow(int n) const {
    Q7 result{1, 0}, base = *this;
    while (n > 0) {
      if (n & 1)
        result = result * base;
      n >>= 1;
      if (n)
        base = base * base;
    }
    return result;
  }

  /// Exact sign without square roots: compare a^2 with 7 b^2 when the
  /// signs of a and b disagree.
  [[nodiscard]] int sign() const {
    const int sa = sgn(a), sb = sgn(b);
    if (sa >= 0 && sb >= 0)
      return (sa > 0 || sb > 0) ? 1 : 0;
    if (sa <= 0 && sb <= 0)
      return -1;
    const BigRat lhs = a * a, rhs = 7 * b * b;
    if (lhs == rhs)
      return 0;
    // |a| vs |b| sqrt 7 decides which term wins.
    return (lhs > rhs) ? sa : sb;
  }

  [[nodiscard]] double approx() const { return a.get_d() + b.get_d() * std::sqrt(7.0); }
};

} // namespace cell24::exact
