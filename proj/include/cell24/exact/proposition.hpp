#pragma once

// Exact comparison of E_f(D4) and E_f(C_theta) for f(t) = (1 + t)^k.
//
// With sin t = 2u/(1+u^2) and cos t = (1-u^2)/(1+u^2), every inner product
// of C_theta becomes T(u)/(1+u^2)^2, so E_f(D4) - E_f(C_theta) is a
// polynomial in u over (1+u^2)^(2k). The substitution covers every theta
// except theta = pi, which is a degenerate member of the family.

#include "cell24/exact/polynomial.hpp"
#include "cell24/exact/q7.hpp"
#include "cell24/exact/sturm.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

namespace cell24::exact {

/// E_f(D4) = 24 f(-1) + 192 (f(1/2) + f(-1/2)) + 144 f(0) for f = (1+t)^k.
inline BigRat energy_d4_pow(int k) {
  auto p = [](const BigRat& base, int n) {
    BigRat r = 1;
    for (int i = 0; i < n; ++i)
      r *= base;
    return r;
  };
  const BigRat f_m1 = k == 0 ? BigRat(1) : BigRat(0);
  return 24 * f_m1 + 192 * (p(make_rat(3, 2), k) + p(make_rat(1, 2), k)) + 144;
}

struct ThetaTerm {
  RatPoly numerator; // inner product = numerator / (1+u^2)^2
  int multiplicity;
};

/// The 11 inner products of C_theta under the rational parametrization,
/// each written over (1+u^2)^2 from S = 2u, C = 1-u^2, Q = 1+u^2.
inline std::array<ThetaTerm, 11> theta_terms() {
  const RatPoly S{0, 2};
  const RatPoly C{1, 0, -1};
  const RatPoly Q{1, 0, 1};
  const BigRat half = make_rat(1, 2);
  const BigRat neg_half = make_rat(-1, 2);
  return {{
      {RatPoly{}, 18},                          // 0
      {BigRat(2) * (S * C), 18},                // sin 2t
      {S * Q, 36},                              // sin t
      {C * Q, 36},                              // cos t
      {S * S - half * (C * C), 36},             // sin^2 - cos^2 / 2
      {C * C - half * (S * S), 36},             // cos^2 - sin^2 / 2
      {neg_half * (S * Q), 72},                 // -sin t / 2
      {neg_half * (C * Q), 72},                 // -cos t / 2
      {half * (S * C), 72},                     // sin 2t / 4
      {BigRat(-1) * (S * C), 72},               // -sin 2t / 2
      {neg_half * (Q * Q), 84},                 // -1/2
  }};
}

/// E_f(D4) - E_f(C_theta) for f = (1+t)^k as an exact rational function of
/// u = tan(theta/2), reduced; the denominator is a power of 1+u^2.
inline RatFn energy_diff_rational(int k) {
  if (k < 0)
    throw std::invalid_argument("energy_diff_rational: k must be nonnegative");
  const RatPoly Q{1, 0, 1};
  const RatPoly D = Q * Q;
  RatPoly num = energy_d4_pow(k) * D.pow(k);
  for (const auto& term : theta_terms())
    num = num - BigRat(term.multiplicity) * (D + term.numerator).pow(k);
  // 1+u^2 is irreducible over Q, so the gcd with (1+u^2)^(2k) is a power of it.
  int den_power = 2 * k;
  while (den_power > 0 && !num.is_zero()) {
    auto [q, r] = divmod(num, Q);
    if (!r.is_zero())
      break;
    num = std::move(q);
    --den_power;
  }
  RatPoly den = Q.pow(num.is_zero() ? 0 : den_power);
  return RatFn::reduced(std::move(num), std::move(den));
}

/// True when some real u (hence some valid theta) has E_f(C_theta) < E_f(D4).
inline bool proposition_check(int k) {
  return attains_positive(energy_diff_rational(k).num());
}

struct PropositionRow {
  int k;
  bool attains_positive;
  double wall_time_ms;
  int numerator_degree;
};

inline PropositionRow proposition_row(int k) {
  const auto start = std::chrono::steady_clock::now();
  const RatFn diff = energy_diff_rational(k);
  const bool pos = attains_positive(diff.num());
  const auto stop = std::chrono::steady_clock::now();
  return {k, pos, std::chrono::duration<double, std::milli>(stop - start).count(),
          diff.num().degree()};
}

// ---------------------------------------------------------------------------
// Large-k criterion

/// 18 f((sqrt 7 - 1)/3) > 24 f(-1) + 192 (f(1/2) + f(-1/2)) + 144 f(0) for
/// f = (1+t)^k, decided in Q(sqrt 7). When it holds, every C_theta has
/// strictly larger energy than D4, because t_max(C_theta) >= (sqrt 7 - 1)/3.
inline bool tail_criterion(int k) {
  if (k < 1)
    throw std::invalid_argument("tail_criterion: k must be positive");
  // 1 + (sqrt 7 - 1)/3 = (2 + sqrt 7)/3
  const Q7 base{make_rat(2, 3), make_rat(1, 3)};
  const Q7 lhs = BigRat(18) * base.pow(k);
  const Q7 diff = lhs - Q7{energy_d4_pow(k), 0};
  return diff.sign() > 0;
}

/// Induction step for k beyond any finite check: (2 + sqrt 7)/3 > 3/2, so
/// the left side grows by a larger factor than each right-side term
/// ((3/2)^k by 3/2, (1/2)^k by 1/2, the constant by 1).
inline bool tail_induction_step_holds() {
  const Q7 ratio{make_rat(2, 3) - make_rat(3, 2), make_rat(1, 3)};
  return ratio.sign() > 0;
}

/// Smallest k in [1, k_max] from which tail_criterion holds through k_max,
/// or -1.
inline int first_tail_k(int k_max) {
  int first = -1;
  for (int k = k_max; k >= 1; --k) {
    if (!tail_criterion(k))
      break;
    first = k;
  }
  return first;
}

// ---------------------------------------------------------------------------
// k = 3

/// u^6 - 6u^4 - 12u^3 + 3u^2 - 2
inline RatPoly k3_sextic() { return RatPoly{-2, 0, 3, -12, -6, 0, 1}; }

/// Checks E_f(D4) - E_f(C_theta) = -18 sextic^2 / (u^2+1)^6 for f = (1+t)^3.
inline bool verify_k3_identity(const RatPoly& sextic = k3_sextic()) {
  const RatPoly Q{1, 0, 1};
  const RatFn expected(BigRat(-18) * (sextic * sextic), Q.pow(6));
  return energy_diff_rational(3) == expected;
}

struct SexticRoot {
  double u;
  double sin_theta, cos_theta;
  double theta; // 2 atan(u), in (-pi, pi)
  double cube_sum; // sin^3 + cos^3
};

struct ThreeDesignRoots {
  int real_root_count = 0;
  std::vector<SexticRoot> roots;
  bool same_code = false; // the roots give the two orderings of one {sin, cos}
  double cubic_root = 0.0; // root of 3y^3 - 9y - 2 in [-1, 0]
};

inline ThreeDesignRoots three_design_roots(double tol = 1e-14) {
  ThreeDesignRoots out;
  const RatPoly sextic = k3_sextic();
  const auto iso = sturm_real_roots(sextic);
  out.real_root_count = iso.count;
  for (const auto& iv : iso.intervals) {
    SexticRoot r;
    r.u = refine_root(sextic, iv, tol);
    r.sin_theta = 2 * r.u / (1 + r.u * r.u);
    r.cos_theta = (1 - r.u * r.u) / (1 + r.u * r.u);
    r.theta = 2 * std::atan(r.u);
    r.cube_sum = std::pow(r.sin_theta, 3) + std::pow(r.cos_theta, 3);
    out.roots.push_back(r);
  }
  if (out.roots.size() == 2) {
    const auto& a = out.roots[0];
    const auto& b = out.roots[1];
    out.same_code = std::abs(a.sin_theta - b.cos_theta) < 1e-9 &&
                    std::abs(a.cos_theta - b.sin_theta) < 1e-9;
  }
  const RatPoly cubic{-2, -9, 0, 3};
  out.cubic_root = refine_root(cubic, {BigRat(-1), BigRat(0)}, tol);
  return out;
}

} // namespace cell24::exact
