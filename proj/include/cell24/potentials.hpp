#pragma once

// Potential functions f(t) of the inner product t, with closed-form first and
// second derivatives.

#include <gmpxx.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace cell24 {

/// f(t) = (1 + t)^k
struct PowPlus {
  int k = 0;
};

/// f(t) = (1 - t)^(-s), defined on [-1, 1)
struct Riesz {
  double s = 1.0;
};

/// f(t) = exp(c t)
struct Exp {
  double c = 1.0;
};

/// f(t) = sum_j coeffs[j] t^j with exact rational coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
    for (auto& c : coeffs_)
      c.canonicalize();
    approx_.reserve(coeffs_.size());
    for (const auto& c : coeffs_)
      approx_.push_back(c.get_d());
  }

  [[nodiscard]] const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  [[nodiscard]] int degree() const {
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j)
      if (coeffs_[j] != 0)
        return j;
    return -1;
  }

  [[nodiscard]] double eval(double t, int order) const {
    double acc = 0.0;
    for (int j = static_cast<int>(approx_.size()) - 1; j >= order; --j) {
      double c = approx_[j];
      for (int m = 0; m < order; ++m)
        c *= static_cast<double>(j - m);
      acc = acc * t + c;
    }
    return acc;
  }

 private:
  std::vector<mpq_class> coeffs_;
  std::vector<double> approx_;
};

using Potential = std::variant<PowPlus, Riesz, Exp, Poly>;

/// x^n by repeated squaring.
inline double ipow(double x, int n) {
  if (n < 0)
    return 1.0 / ipow(x, -n);
  double result = 1.0;
  while (n > 0) {
    if (n & 1)
      result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

/// f(t), f'(t) or f''(t) for order 0, 1, 2.
inline double eval(const Potential& f, double t, int order = 0) {
  if (order < 0 || order > 2)
    throw std::invalid_argument("potential derivative order must be 0, 1 or 2");
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PowPlus>) {
          const int k = p.k;
          if (order > k)
            return 0.0;
          double coef = 1.0;
          for (int m = 0; m < order; ++m)
            coef *= static_cast<double>(k - m);
          return coef * ipow(1.0 + t, k - order);
        } else if constexpr (std::is_same_v<P, Riesz>) {
          if (!(t < 1.0))
            throw std::domain_error("Riesz potential evaluated at t >= 1");
          const double s = p.s;
          double coef = 1.0;
          for (int m = 0; m < order; ++m)
            coef *= s + m;
          return coef * std::pow(1.0 - t, -(s + order));
        } else if constexpr (std::is_same_v<P, Exp>) {
          return ipow(p.c, order) * std::exp(p.c * t);
        } else {
          return p.eval(t, order);
        }
      },
      f);
}

/// Exact rational from "p", "p/q" or a plain decimal such as "-1.25".
inline mpq_class parse_rational(std::string text) {
  if (!text.empty() && text.front() == '+')
    text.erase(0, 1);
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    mpq_class q(text, 10);
    q.canonicalize();
    return q;
  }
  const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  const auto scale = text.size() - dot - 1;
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
  mpq_class q(mpz_class(digits.empty() || digits == "-" ? "0" : digits, 10), den);
  q.canonicalize();
  return q;
}

/// Short text form, the inverse of parse_potential.
inline std::string to_string(const Potential& f) {
  return std::visit(
      [](const auto& p) -> std::string {
        using P = std::decay_t<decltype(p)>;
        std::ostringstream os;
        os.precision(17);
        if constexpr (std::is_same_v<P, PowPlus>) {
          os << "pow1:" << p.k;
        } else if constexpr (std::is_same_v<P, Riesz>) {
          os << "riesz:" << p.s;
        } else if constexpr (std::is_same_v<P, Exp>) {
          os << "exp:" << p.c;
        } else {
          os << "poly:";
          for (std::size_t j = 0; j < p.coeffs().size(); ++j)
            os << (j ? "," : "") << p.coeffs()[j].get_str();
        }
        return os.str();
      },
      f);
}

/// Parses "pow1:<k>", "riesz:<s>", "exp:<c>" or "poly:<c0>,<c1>,...".
/// Polynomial coefficients accept integers, fractions ("3/4") and decimals.
inline Potential parse_potential(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("potential spec must look like family:args, got '" + spec + "'");
  const std::string family = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument("bad number '" + s + "' in potential spec");
    return v;
  };
  try {
    if (family == "pow1") {
      std::size_t used = 0;
      const int k = std::stoi(args, &used);
      if (used != args.size() || k < 0)
        throw std::invalid_argument("pow1 exponent must be a nonnegative integer");
      return PowPlus{k};
    }
    if (family == "riesz") {
      const double s = to_double(args);
      if (!(s > 0))
        throw std::invalid_argument("riesz exponent must be positive");
      return Riesz{s};
    }
    if (family == "exp")
      return Exp{to_double(args)};
    if (family == "poly") {
      std::vector<mpq_class> coeffs;
      std::stringstream ss(args);
      std::string item;
      while (std::getline(ss, item, ',')) {
        coeffs.push_back(parse_rational(item));
      }
      if (coeffs.empty())
        throw std::invalid_argument("poly needs at least one coefficient");
      return Poly(std::move(coeffs));
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument("bad potential spec '" + spec + "': " + e.what());
  }
  throw std::invalid_argument("unknown potential family '" + family + "'");
}

} // namespace cell24
