#pragma once

// Real-root counting and isolation with Sturm chains, exact sign decisions
// for polynomials over Q.

#include "cell24/exact/polynomial.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace cell24::exact {

/// Open-closed interval (lo, hi] with rational endpoints.
struct RationalInterval {
  BigRat lo, hi;
};

struct RootIsolation {
  int count = 0;
  std::vector<RationalInterval> intervals; // sorted, disjoint, one root each
};

namespace detail {

inline int sign(const BigInt& x) { return sgn(x); }

/// Sign of p(n/d) for d > 0, evaluated as the integer sum c_i n^i d^(deg-i).
inline int sign_at(const ZPoly& p, const BigInt& n, const BigInt& d) {
  if (p.empty())
    return 0;
  BigInt acc = p.back();
  BigInt dpow = 1;
  for (int i = degree(p) - 1; i >= 0; --i) {
    dpow *= d;
    acc = acc * n + p[i] * dpow;
  }
  return sign(acc);
}

inline int sign_at(const ZPoly& p, const BigRat& x) { return sign_at(p, x.get_num(), x.get_den()); }

/// Sturm chain p, p', -rem(...), ... over Z, built from the subresultant
/// PRS so that no coefficient contents need to be computed. Each returned
/// entry is a positive multiple of the classical chain element, so the
/// sign sequences agree; the sign relating the subresultant r_i to the Sturm
/// element is tracked explicitly:
///   rem(r_{i-1}, r_i) = beta_i r_{i+1} / lc(r_i)^(d_i + 1)
/// and the Sturm element is -rem of its two predecessors.
inline std::vector<ZPoly> sturm_chain(const ZPoly& p) {
  std::vector<ZPoly> chain{p};
  ZPoly d = derivative(p);
  if (d.empty())
    return chain;
  chain.push_back(d);
  std::vector<int> sigma{1, 1};
  // Subresultant PRS state: the last three raw elements r_{i-2}, r_{i-1}, r_i.
  ZPoly r_older, r_prev = p, r_cur = std::move(d);
  BigInt psi = -1;
  for (std::size_t i = 1;; ++i) {
    const ZPoly& a = r_prev;
    const ZPoly& b = r_cur;
    const int delta = degree(a) - degree(b);
    const BigInt& gamma = b.back();
    BigInt beta;
    if (i == 1) {
      beta = (delta % 2 == 0) ? -1 : 1; // (-1)^(delta+1)
    } else {
      const int prev_delta = degree(r_older) - degree(a);
      const BigInt& prev_gamma = a.back();
      // psi_i = (-gamma_{i-1})^{d_{i-1}} / psi_{i-1}^{d_{i-1} - 1}
      BigInt num, den;
      mpz_pow_ui(num.get_mpz_t(), BigInt(-prev_gamma).get_mpz_t(), prev_delta);
      mpz_pow_ui(den.get_mpz_t(), psi.get_mpz_t(), prev_delta - 1);
      mpz_divexact(psi.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
      BigInt psi_pow;
      mpz_pow_ui(psi_pow.get_mpz_t(), psi.get_mpz_t(), delta);
      beta = -prev_gamma * psi_pow;
    }
    int steps = 0;
    ZPoly rem = pseudo_remainder(a, b, steps);
    if (rem.empty())
      break;
    // Complete the pseudo-remainder to exactly delta + 1 multiplications.
    if (steps < delta + 1) {
      BigInt pad;
      mpz_pow_ui(pad.get_mpz_t(), gamma.get_mpz_t(), delta + 1 - steps);
      for (auto& c : rem)
        c *= pad;
    }
    for (auto& c : rem)
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), beta.get_mpz_t());
    const int gamma_sign = (sgn(gamma) < 0 && (delta + 1) % 2 == 1) ? -1 : 1;
    const int s = -sigma[i - 1] * sgn(beta) * gamma_sign;
    sigma.push_back(s);
    ZPoly element = rem;
    if (s < 0)
      for (auto& c : element)
        c = -c;
    chain.push_back(std::move(element));
    r_older = std::move(r_prev);
    r_prev = std::move(r_cur);
    r_cur = std::move(rem);
  }
  return chain;
}

inline int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0)
      continue;
    if (last != 0 && s != last)
      ++v;
    last = s;
  }
  return v;
}

inline int variations_at(const std::vector<ZPoly>& chain, const BigRat& x) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain)
    s.push_back(sign_at(q, x));
  return variations(s);
}

inline int variations_at_infinity(const std::vector<ZPoly>& chain, bool positive) {
  std::vector<int> s;
  s.reserve(chain.size());
  for (const auto& q : chain) {
    int v = sign(q.back());
    if (!positive && degree(q) % 2 == 1)
      v = -v;
    s.push_back(v);
  }
  return variations(s);
}

/// Integer B with every real root strictly inside (-B, B):
/// 1 + ceil(max |c_i / c_n|).
inline BigInt cauchy_bound(const ZPoly& p) {
  BigInt best = 0;
  const BigInt lead = abs(p.back());
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), BigInt(abs(p[i])).get_mpz_t(), lead.get_mpz_t());
    if (q > best)
      best = q;
  }
  return best + 1;
}

/// Square-free primitive integer form of a nonzero polynomial.
inline ZPoly square_free_integer(const RatPoly& p) {
  const ZPoly z = primitive_integer(p);
  if (degree(z) <= 0)
    return z;
  const ZPoly g = gcd(z, derivative(z));
  if (degree(g) == 0)
    return z;
  return exact_quotient(z, g);
}

} // namespace detail

/// Counts the distinct real roots of p and isolates each in a rational
/// interval (lo, hi] whose endpoints are not roots.
inline RootIsolation sturm_real_roots(const RatPoly& p) {
  if (p.is_zero())
    throw std::invalid_argument("sturm_real_roots: zero polynomial");
  RootIsolation out;
  if (p.degree() == 0)
    return out;
  ZPoly sf = detail::primitive_integer(p);
  auto chain = detail::sturm_chain(sf);
  if (detail::degree(chain.back()) > 0) {
    // The last element is gcd(p, p'); restart on the square-free part.
    sf = detail::exact_quotient(sf, chain.back());
    chain = detail::sturm_chain(sf);
  }
  out.count = detail::variations_at_infinity(chain, false) - detail::variations_at_infinity(chain, true);
  if (out.count == 0)
    return out;

  const BigRat bound(detail::cauchy_bound(sf));
  // A point of (lo, hi) that is not a root; tries the midpoint first.
  auto split_point = [&sf](const BigRat& lo, const BigRat& hi) {
    for (long denom = 2;; ++denom)
      for (long num = 1; num < denom; ++num) {
        BigRat mid = lo + (hi - lo) * BigRat(num, denom);
        mid.canonicalize();
        if (detail::sign_at(sf, mid) != 0)
          return mid;
      }
  };
  struct Pending {
    BigRat lo, hi;
    int vlo, vhi;
  };
  std::vector<Pending> stack{{-bound, bound, detail::variations_at(chain, -bound),
                              detail::variations_at(chain, bound)}};
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    const int roots = cur.vlo - cur.vhi;
    if (roots <= 0)
      continue;
    if (roots == 1) {
      out.intervals.push_back({cur.lo, cur.hi});
      continue;
    }
    const BigRat mid = split_point(cur.lo, cur.hi);
    const int vmid = detail::variations_at(chain, mid);
    stack.push_back({mid, cur.hi, vmid, cur.vhi});
    stack.push_back({cur.lo, mid, cur.vlo, vmid});
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const auto& a, const auto& b) { return a.lo < b.lo; });
  return out;
}

/// Bisects an interval on which p changes sign until it is shorter than
/// tol, returning the exact bracket.
inline RationalInterval refine_root_interval(const RatPoly& p, RationalInterval iv,
                                             const BigRat& tol) {
  const ZPoly z = detail::primitive_integer(p);
  int slo = detail::sign_at(z, iv.lo);
  const int shi = detail::sign_at(z, iv.hi);
  if (slo == 0)
    return {iv.lo, iv.lo};
  if (shi == 0)
    return {iv.hi, iv.hi};
  if (slo == shi)
    throw std::invalid_argument("refine_root: no sign change on interval");
  while (iv.hi - iv.lo > tol) {
    BigRat mid = (iv.lo + iv.hi) / 2;
    const int sm = detail::sign_at(z, mid);
    if (sm == 0)
      return {mid, mid};
    if (sm == slo)
      iv.lo = mid;
    else
      iv.hi = mid;
  }
  return iv;
}

inline double refine_root(const RatPoly& p, const RationalInterval& iv, double tol) {
  if (!(tol > 0))
    throw std::invalid_argument("refine_root: tol must be positive");
  const auto r = refine_root_interval(p, iv, BigRat(tol));
  return BigRat((r.lo + r.hi) / 2).get_d();
}

/// True iff p(u) > 0 for some real u, decided in exact arithmetic.
inline bool attains_positive(const RatPoly& p) {
  if (p.is_zero())
    return false;
  if (p.degree() == 0)
    return p.leading() > 0;
  if (p.leading() > 0 || p.degree() % 2 == 1)
    return true; // +infinity at one end
  const ZPoly z = detail::primitive_integer(p);
  const auto iso = sturm_real_roots(p);
  std::vector<BigRat> samples;
  if (iso.intervals.empty()) {
    samples.emplace_back(0);
  } else {
    samples.push_back(iso.intervals.front().lo);
    for (const auto& iv : iso.intervals)
      samples.push_back(iv.hi);
  }
  for (const auto& x : samples)
    if (detail::sign_at(z, x) > 0)
      return true;
  return false;
}

} // namespace cell24::exact
