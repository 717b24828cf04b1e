#pragma once

// Spherical design tests on S^3 through Gegenbauer kernel sums.

#include "cell24/constructions.hpp"
#include "cell24/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cell24 {

/// Degree-k Gegenbauer polynomial for S^3 (Chebyshev of the second kind).
inline double gegenbauer_s3(int k, double t) {
  if (k < 0)
    throw std::invalid_argument("gegenbauer_s3: degree must be nonnegative");
  double prev = 1.0, cur = 2.0 * t;
  if (k == 0)
    return prev;
  for (int j = 1; j < k; ++j) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// (1/N^2) sum over all ordered pairs (x, y), diagonal included, of
/// U_k(<x, y>). This is the squared norm of the degree-k harmonic component
/// of the code's counting measure, so it is nonnegative and vanishes exactly
/// when every degree-k harmonic averages to zero on the code.
inline double design_defect(const Code& code, int k) {
  if (code.empty())
    throw std::invalid_argument("design_defect: empty code");
  const double n = static_cast<double>(code.size());
  double s = n * gegenbauer_s3(k, 1.0);
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j)
      s += 2.0 * gegenbauer_s3(k, code[i].dot(code[j]));
  return s / (n * n);
}

struct DesignDefect {
  int k;
  double defect;
};

struct DesignReport {
  std::vector<DesignDefect> defects; // k = 1..k_max
  int strength = 0;                  // largest t with defects 1..t all <= tol
  double tol = 1e-8;
};

inline DesignReport design_strength(const Code& code, int k_max = 8, double tol = 1e-8) {
  if (k_max < 1)
    throw std::invalid_argument("design_strength: k_max must be at least 1");
  if (!(tol > 0))
    throw std::invalid_argument("design_strength: tol must be positive");
  DesignReport rep;
  rep.tol = tol;
  bool intact = true;
  for (int k = 1; k <= k_max; ++k) {
    const double d = design_defect(code, k);
    rep.defects.push_back({k, d});
    if (intact && d <= tol)
      rep.strength = k;
    else
      intact = false;
  }
  return rep;
}

/// Sum over C_theta of the invariant cubic Re(w1^3) + Re(w2^3):
/// 6 + 18 (sin^3 theta + cos^3 theta). C_theta is a 3-design exactly when
/// this vanishes.
inline double c_theta_cubic_invariant(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  return 6.0 + 18.0 * (s * s * s + c * c * c);
}

} // namespace cell24
