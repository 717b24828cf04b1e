#pragma once

// Univariate polynomials and rational functions over Q with GMP
// coefficients. Heavy operations (gcd, Sturm chains) run on primitive
// integer polynomials to keep coefficient growth in check.

#include <gmpxx.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cell24::exact {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(long num, long den = 1) {
  BigRat q(num, den);
  q.canonicalize();
  return q;
}

/// Polynomial with rational coefficients, lowest degree first. The leading
/// coefficient is nonzero unless the polynomial is zero.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) {
    for (auto& x : c_)
      x.canonicalize();
    trim();
  }
  RatPoly(std::initializer_list<long> coeffs) {
    for (long x : coeffs)
      c_.emplace_back(x);
    trim();
  }

  static RatPoly constant(const BigRat& c) { return RatPoly(std::vector<BigRat>{c}); }
  static RatPoly monomial(const BigRat& c, int degree) {
    std::vector<BigRat> v(static_cast<std::size_t>(degree) + 1, BigRat(0));
    v.back() = c;
    return RatPoly(std::move(v));
  }
  static RatPoly x() { return monomial(1, 1); }

  [[nodiscard]] int degree() const { return static_cast<int>(c_.size()) - 1; }
  [[nodiscard]] bool is_zero() const { return c_.empty(); }
  [[nodiscard]] const std::vector<BigRat>& coeffs() const { return c_; }
  [[nodiscard]] BigRat coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : BigRat(0);
  }
  [[nodiscard]] const BigRat& leading() const {
    if (c_.empty())
      throw std::domain_error("leading coefficient of the zero polynomial");
    return c_.back();
  }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<BigRat> r(std::max(a.c_.size(), b.c_.size()), BigRat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i)
      r[i] += b.c_[i];
    return RatPoly(std::move(r));
  }
  friend RatPoly operator-(const RatPoly& a) {
    std::vector<BigRat> r = a.c_;
    for (auto& x : r)
      x = -x;
    return RatPoly(std::move(r));
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero())
      return {};
    std::vector<BigRat> r(a.c_.size() + b.c_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0)
        continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        r[i + j] += a.c_[i] * b.c_[j];
    }
    return RatPoly(std::move(r));
  }
  friend RatPoly operator*(const BigRat& s, const RatPoly& a) {
    std::vector<BigRat> r = a.c_;
    for (auto& x : r)
      x *= s;
    return RatPoly(std::move(r));
  }
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }

  [[nodiscard]] RatPoly pow(int n) const {
    if (n < 0)
      throw std::invalid_argument("RatPoly::pow: negative exponent");
    RatPoly result = constant(1), base = *this;
    while (n > 0) {
      if (n & 1)
        result = result * base;
      n >>= 1;
      if (n)
        base = base * base;
    }
    return result;
  }

  [[nodiscard]] RatPoly derivative() const {
    if (c_.size() <= 1)
      return {};
    std::vector<BigRat> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      r[i - 1] = c_[i] * static_cast<long>(i);
    return RatPoly(std::move(r));
  }

  [[nodiscard]] RatPoly monic() const {
    if (is_zero())
      return {};
    return BigRat(1 / leading()) * *this;
  }

  [[nodiscard]] BigRat eval(const BigRat& x) const {
    BigRat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  [[nodiscard]] double eval(double x) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * x + it->get_d();
    return acc;
  }

  /// Coefficients as decimal strings ("p" or "p/q"), lowest degree first.
  [[nodiscard]] std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    out.reserve(c_.size());
    for (const auto& x : c_)
      out.push_back(x.get_str());
    return out;
  }

  [[nodiscard]] std::string to_string(const char* var = "u") const {
    if (is_zero())
      return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const BigRat& c = c_[i];
      if (c == 0)
        continue;
      if (!first)
        os << (c < 0 ? " - " : " + ");
      else if (c < 0)
        os << "-";
      const BigRat a = abs(c);
      if (a != 1 || i == 0)
        os << a.get_str();
      if (i > 0)
        os << (a != 1 ? "*" : "") << var << (i > 1 ? "^" + std::to_string(i) : "");
      first = false;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0)
      c_.pop_back();
  }
  std::vector<BigRat> c_;
};

/// Quotient and remainder with deg(remainder) < deg(divisor).
inline std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero())
    throw std::domain_error("polynomial division by zero");
  std::vector<BigRat> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db)
    return {RatPoly{}, a};
  std::vector<BigRat> quo(static_cast<std::size_t>(a.degree() - db) + 1, BigRat(0));
  const BigRat inv_lead = 1 / b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (rem[i] == 0)
      continue;
    const BigRat q = rem[i] * inv_lead;
    quo[i - db] = q;
    for (int j = 0; j <= db; ++j)
      rem[i - db + j] -= q * b.coeffs()[j];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {RatPoly(std::move(quo)), RatPoly(std::move(rem))};
}

// ---------------------------------------------------------------------------
// Integer polynomials

/// Integer coefficients, lowest first, trimmed.
using ZPoly = std::vector<BigInt>;

namespace detail {

inline void trim(ZPoly& p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

inline int degree(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }

inline BigInt content(const ZPoly& p) {
  BigInt g = 0;
  for (const auto& c : p) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1)
      break;
  }
  return g;
}

/// Divides by the (positive) content; the sign is preserved.
inline void make_primitive(ZPoly& p) {
  const BigInt g = content(p);
  if (g > 1)
    for (auto& c : p)
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

/// A positive rational multiple of p with coprime integer coefficients.
inline ZPoly primitive_integer(const RatPoly& p) {
  BigInt l = 1;
  for (const auto& c : p.coeffs())
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  ZPoly z;
  z.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    BigInt v = c.get_num() * (l / c.get_den());
    z.push_back(std::move(v));
  }
  make_primitive(z);
  return z;
}

inline RatPoly to_ratpoly(const ZPoly& z) {
  std::vector<BigRat> c;
  c.reserve(z.size());
  for (const auto& x : z)
    c.emplace_back(x);
  return RatPoly(std::move(c));
}

inline ZPoly derivative(const ZPoly& p) {
  ZPoly d;
  for (std::size_t i = 1; i < p.size(); ++i)
    d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

/// Pseudo-remainder: returns r with r = lc(b)^steps * a mod b and reports
/// steps, so the sign relation between r and the true remainder is known.
inline ZPoly pseudo_remainder(ZPoly a, const ZPoly& b, int& steps) {
  const int db = degree(b);
  const BigInt& lb = b.back();
  steps = 0;
  while (!a.empty() && degree(a) >= db) {
    const int shift = degree(a) - db;
    const BigInt la = a.back();
    for (auto& c : a)
      c *= lb;
    for (int j = 0; j <= db; ++j)
      a[shift + j] -= la * b[j];
    trim(a);
    ++steps;
  }
  return a;
}

/// Exact quotient a / b over Z up to a positive-or-negative scalar, made
/// primitive. Requires b | a over Q.
inline ZPoly exact_quotient(const ZPoly& a, const ZPoly& b) {
  const int db = degree(b);
  ZPoly rem = a;
  ZPoly quo(static_cast<std::size_t>(degree(a) - db + 1), BigInt(0));
  const BigInt& lb = b.back();
  while (!rem.empty() && degree(rem) >= db) {
    const int shift = degree(rem) - db;
    const BigInt la = rem.back();
    for (auto& c : rem)
      c *= lb;
    for (auto& c : quo)
      c *= lb;
    quo[shift] += la;
    for (int j = 0; j <= db; ++j)
      rem[shift + j] -= la * b[j];
    trim(rem);
  }
  if (!rem.empty())
    throw std::logic_error("exact_quotient: divisor does not divide");
  trim(quo);
  make_primitive(quo);
  if (!quo.empty() && ((quo.back() > 0) != ((a.back() > 0) == (b.back() > 0))))
    for (auto& c : quo)
      c = -c;
  return quo;
}

/// Primitive gcd of two integer polynomials (primitive PRS).
inline ZPoly gcd(ZPoly a, ZPoly b) {
  make_primitive(a);
  make_primitive(b);
  if (degree(a) < degree(b))
    std::swap(a, b);
  while (!b.empty()) {
    int steps = 0;
    ZPoly r = pseudo_remainder(a, b, steps);
    make_primitive(r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() < 0)
    for (auto& c : a)
      c = -c;
  return a;
}

} // namespace detail

/// Monic gcd. gcd(0, 0) = 0.
inline RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero())
    return b.monic();
  if (b.is_zero())
    return a.monic();
  return detail::to_ratpoly(detail::gcd(detail::primitive_integer(a), detail::primitive_integer(b)))
      .monic();
}

/// p / gcd(p, p'), a positive multiple of the product of the distinct
/// irreducible factors; same roots as p, each simple.
inline RatPoly square_free_part(const RatPoly& p) {
  if (p.degree() <= 0)
    return p;
  const ZPoly z = detail::primitive_integer(p);
  const ZPoly g = detail::gcd(z, detail::derivative(z));
  if (detail::degree(g) == 0)
    return detail::to_ratpoly(z);
  return detail::to_ratpoly(detail::exact_quotient(z, g));
}

// ---------------------------------------------------------------------------

/// num / den with the common factor removed.
class RatFn {
 public:
  RatFn() : num_(), den_(RatPoly::constant(1)) {}
  RatFn(RatPoly num, RatPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
      throw std::domain_error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = RatPoly::constant(1);
      return;
    }
    const RatPoly g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = divmod(num_, g).first;
      den_ = divmod(den_, g).first;
    }
    normalize_leading();
  }

  /// Skips the gcd reduction; the caller guarantees coprimality.
  static RatFn reduced(RatPoly num, RatPoly den) {
    RatFn f;
    f.num_ = std::move(num);
    f.den_ = std::move(den);
    if (f.den_.is_zero())
      throw std::domain_error("rational function with zero denominator");
    if (f.num_.is_zero())
      f.den_ = RatPoly::constant(1);
    f.normalize_leading();
    return f;
  }

  [[nodiscard]] const RatPoly& num() const { return num_; }
  [[nodiscard]] const RatPoly& den() const { return den_; }
  [[nodiscard]] bool is_zero() const { return num_.is_zero(); }

  [[nodiscard]] BigRat eval(const BigRat& x) const {
    const BigRat d = den_.eval(x);
    if (d == 0)
      throw std::domain_error("rational function pole");
    return num_.eval(x) / d;
  }
  [[nodiscard]] double eval(double x) const { return num_.eval(x) / den_.eval(x); }

  /// Equality as functions: a/b == c/d iff a d == c b.
  friend bool operator==(const RatFn& f, const RatFn& g) {
    return f.num_ * g.den_ == g.num_ * f.den_;
  }

 private:
  void normalize_leading() {
    const BigRat l = den_.leading();
    if (l != 1) {
      const BigRat inv = 1 / l;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }
  RatPoly num_;
  RatPoly den_;
};

} // namespace cell24::exact
