#pragma once

// Potential energy of codes: brute-force pair sums, closed forms for D4,
// C_theta and the hexagon family, theta scans, and the six-term hexagon sum
// with its generating-function identity.

#include "cell24/constructions.hpp"
#include "cell24/geometry.hpp"
#include "cell24/parallel.hpp"
#include "cell24/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cell24 {

/// E_f(C): sum of f(<c, c'>) over ordered pairs c != c'.
inline double energy(const Code& code, const Potential& f) {
  double e = 0.0;
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j)
      e += eval(f, code[i].dot(code[j]));
  return 2.0 * e;
}

inline double energy_d4_closed(const Potential& f) {
  return 24 * eval(f, -1.0) + 192 * (eval(f, 0.5) + eval(f, -0.5)) + 144 * eval(f, 0.0);
}

/// Closed-form E_f(C_theta) and its first two theta-derivatives.
inline double energy_theta_closed(double theta, const Potential& f, int order = 0) {
  double e = 0.0;
  for (const auto& ip : c_theta_inner_products(theta)) {
    switch (order) {
      case 0:
        e += ip.multiplicity * eval(f, ip.value);
        break;
      case 1:
        if (ip.d1 != 0.0)
          e += ip.multiplicity * eval(f, ip.value, 1) * ip.d1;
        break;
      case 2:
        if (ip.d1 != 0.0 || ip.d2 != 0.0)
          e += ip.multiplicity *
               (eval(f, ip.value, 2) * ip.d1 * ip.d1 + eval(f, ip.value, 1) * ip.d2);
        break;
      default:
        throw std::invalid_argument("energy_theta_closed: order must be 0, 1 or 2");
    }
  }
  return e;
}

/// Golden-section minimization of a unimodal function on [lo, hi].
inline double golden_section(const std::function<double(double)>& fn, double lo, double hi,
                             double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bisection for a sign change of fn on [lo, hi]; returns the midpoint of
/// the final bracket, or nullopt if fn(lo) and fn(hi) share a sign.
inline std::optional<double> bisect_sign_change(const std::function<double(double)>& fn,
                                                double lo, double hi, double tol) {
  double flo = fn(lo), fhi = fn(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0) == (fhi > 0))
    return std::nullopt;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ThetaSample {
  double theta;
  double energy;
};

struct ThetaScanResult {
  std::vector<ThetaSample> samples; // valid grid points only
  std::vector<ThetaSample> minima;  // refined local minima, theta in [0, 2 pi)

  /// Refined minimum with the lowest energy. theta and pi/2 - theta give
  /// the same code, so ties within rounding go to the angle in [pi/4, 5pi/4).
  [[nodiscard]] ThetaSample global_min() const {
    if (minima.empty())
      throw std::runtime_error("theta scan found no local minimum");
    const auto lowest = std::min_element(minima.begin(), minima.end(),
                                         [](const auto& a, const auto& b) { return a.energy < b.energy; });
    const double slack = 1e-12 * std::max(1.0, std::abs(lowest->energy));
    for (const auto& m : minima)
      if (m.energy <= lowest->energy + slack && m.theta >= kPi / 4 && m.theta < 5 * kPi / 4)
        return m;
    return *lowest;
  }
};

/// Refines a local minimum of E_f(C_theta) bracketed by [lo, hi]: golden
/// section to tol, then bisection on the analytic dE/dtheta when it changes
/// sign nearby, which resolves the minimizer below the energy's rounding
/// floor.
inline double refine_theta_minimum(const Potential& f, double lo, double hi, double tol) {
  auto e = [&](double t) { return energy_theta_closed(t, f); };
  const double g = golden_section(e, lo, hi, tol);
  auto de = [&](double t) { return energy_theta_closed(t, f, 1); };
  const double h = std::max(10 * tol, 1e-7);
  const double a = std::max(lo, g - h), b = std::min(hi, g + h);
  if (theta_valid(a) && theta_valid(b))
    if (auto root = bisect_sign_change(de, a, b, 1e-13); root && de(a) < 0)
      return *root;
  return g;
}

/// Evaluates E_f(C_theta) on grid_points uniform angles in [0, 2 pi),
/// skipping degenerate angles, and refines every grid-local minimum.
inline ThetaScanResult scan_theta(const Potential& f, int grid_points = 10000,
                                  double refine_tol = 1e-9) {
  if (grid_points < 100)
    throw std::invalid_argument("scan_theta: grid_points must be at least 100");
  if (!(refine_tol > 0))
    throw std::invalid_argument("scan_theta: refine_tol must be positive");
  const double step = 2.0 * kPi / grid_points;
  std::vector<double> energies(grid_points, std::numeric_limits<double>::quiet_NaN());
  parallel_for(static_cast<std::size_t>(grid_points), [&](std::size_t i) {
    const double t = step * static_cast<double>(i);
    if (theta_valid(t))
      energies[i] = energy_theta_closed(t, f);
  });
  ThetaScanResult res;
  for (int i = 0; i < grid_points; ++i)
    if (!std::isnan(energies[i]))
      res.samples.push_back({step * i, energies[i]});
  for (int i = 0; i < grid_points; ++i) {
    const int prev = (i + grid_points - 1) % grid_points, next = (i + 1) % grid_points;
    const double e = energies[i], ep = energies[prev], en = energies[next];
    if (std::isnan(e) || std::isnan(ep) || std::isnan(en))
      continue;
    if (!(e <= ep && e < en))
      continue;
    const double lo = step * i - step, hi = step * i + step;
    const double t = refine_theta_minimum(f, lo, hi, refine_tol);
    res.minima.push_back({wrap_angle(t), energy_theta_closed(t, f)});
  }
  return res;
}

struct BestTheta {
  double theta;
  double energy;
  double margin; // E_f(D4) - min_theta E_f(C_theta); positive beats D4
};

inline BestTheta best_theta_vs_d4(const Potential& f, int grid_points = 10000) {
  const auto best = scan_theta(f, grid_points, 1e-9).global_min();
  return {best.theta, best.energy, energy_d4_closed(f) - best.energy};
}

// ---------------------------------------------------------------------------
// Hexagon family

inline double hexagon_cross_sum(double delta, const Potential& f) {
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  double s = 0.0;
  for (int j = 0; j < 6; ++j)
    s += eval(f, inv_sqrt3 * std::cos(delta + j * kPi / 3.0));
  return s;
}

/// Ordered-pair energy between hexagons m and mprime of hex_design(a).
/// Each of the six inner products occurs 6 times per direction.
inline double hexpair_energy(int m, int mprime, const HexFamilyAngles& a, const Potential& f) {
  if (m < 0 || m > 3 || mprime < 0 || mprime > 3)
    throw std::invalid_argument("hexpair_energy: hexagon index must be in 0..3");
  if (m == mprime)
    throw std::invalid_argument("hexpair_energy: use within_hexagon_energy for m == mprime");
  if (m > mprime)
    std::swap(m, mprime);
  const auto ang = a.as_array();
  double delta;
  if (m == 0)
    delta = ang[mprime - 1];
  else
    delta = 1.5 * kPi + ang[m - 1] - ang[mprime - 1];
  return 12.0 * hexagon_cross_sum(delta, f);
}

/// Ordered-pair energy inside one hexagon: 6 (2 f(1/2) + 2 f(-1/2) + f(-1)).
inline double within_hexagon_energy(const Potential& f) {
  return 6.0 * (2 * eval(f, 0.5) + 2 * eval(f, -0.5) + eval(f, -1.0));
}

/// Total energy of hex_design(a) assembled from the hexagon decomposition.
inline double hex_design_energy(const HexFamilyAngles& a, const Potential& f) {
  double e = 4.0 * within_hexagon_energy(f);
  for (int m = 0; m < 4; ++m)
    for (int mp = m + 1; mp < 4; ++mp)
      e += hexpair_energy(m, mp, a, f);
  return e;
}

/// sum_{j=0}^{5} (1 + cos(theta + j pi/3)/sqrt 3)^k
inline double lemma_sum(int k, double theta) {
  return hexagon_cross_sum(theta, PowPlus{k});
}

/// d/dtheta of lemma_sum.
inline double lemma_sum_derivative(int k, double theta) {
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  double s = 0.0;
  for (int j = 0; j < 6; ++j) {
    const double x = theta + j * kPi / 3.0;
    s += -k * ipow(1.0 + inv_sqrt3 * std::cos(x), k - 1) * inv_sqrt3 * std::sin(x);
  }
  return s;
}

struct LemmaMinimum {
  double argmin;
  double value;
  int grid_local_minima; // local minima seen on the grid over [0, pi/3]
  double runner_up_gap;  // second-smallest grid value minus the smallest
};

/// Minimizer of lemma_sum(k, .) over [0, pi/3] by grid search and bisection
/// on the analytic derivative.
inline LemmaMinimum lemma_minimum(int k, int grid_points = 1000) {
  const double step = (kPi / 3.0) / grid_points;
  std::vector<double> v(grid_points + 1);
  for (int i = 0; i <= grid_points; ++i)
    v[i] = lemma_sum(k, step * i);
  int best = 0, minima = 0;
  for (int i = 0; i <= grid_points; ++i) {
    if (v[i] < v[best])
      best = i;
    const bool left = i == 0 || v[i] < v[i - 1];
    const bool right = i == grid_points || v[i] < v[i + 1];
    if (left && right)
      ++minima;
  }
  double second = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid_points; ++i)
    if (i != best)
      second = std::min(second, v[i]);
  const double lo = std::max(0.0, step * (best - 1)), hi = std::min(kPi / 3.0, step * (best + 1));
  auto d = [k](double t) { return lemma_sum_derivative(k, t); };
  double arg = step * best;
  if (auto root = bisect_sign_change(d, lo, hi, 1e-14))
    arg = *root;
  return {arg, lemma_sum(k, arg), minima, second - v[best]};
}

/// Power-series check of the identity
///   sum_k (lemma_sum(k, theta) - lemma_sum(k, pi/6)) y^k
///     = y^6 cos^2(theta) (4 cos^2(theta) - 3)^2 / 216
///       * (1/(1-y) + 2/(2-y) + 2/(2-3y)) * prod_j 1/(1 - lambda_j y),
/// lambda_j = 1 + cos(theta + j pi/3)/sqrt 3. Returns the largest absolute
/// coefficient discrepancy through y^max_order.
inline double lemma_genfun_check(double theta, int max_order) {
  if (max_order < 6)
    throw std::invalid_argument("lemma_genfun_check: max_order must be at least 6");
  using LD = long double;
  const auto n = static_cast<std::size_t>(max_order + 1);
  const LD pi = std::numbers::pi_v<long double>;
  const LD inv_sqrt3 = 1.0L / std::sqrt(3.0L);
  std::vector<LD> lam(6), mu(6);
  for (int j = 0; j < 6; ++j) {
    lam[j] = 1.0L + inv_sqrt3 * std::cos(static_cast<LD>(theta) + j * pi / 3.0L);
    mu[j] = 1.0L + inv_sqrt3 * std::cos(pi / 6.0L + j * pi / 3.0L);
  }
  std::vector<LD> lhs(n, 0.0L);
  for (std::size_t k = 0; k < n; ++k)
    for (int j = 0; j < 6; ++j)
      lhs[k] += std::pow(lam[j], static_cast<LD>(k)) - std::pow(mu[j], static_cast<LD>(k));

  // prod_j 1/(1 - lambda_j y): multiply by each geometric series in turn.
  std::vector<LD> prod(n, 0.0L);
  prod[0] = 1.0L;
  for (int j = 0; j < 6; ++j)
    for (std::size_t m = 1; m < n; ++m)
      prod[m] += lam[j] * prod[m - 1];
  std::vector<LD> rhs(n, 0.0L);
  const LD c2 = std::cos(static_cast<LD>(theta)) * std::cos(static_cast<LD>(theta));
  const LD pref = c2 * (4 * c2 - 3) * (4 * c2 - 3) / 216.0L;
  for (std::size_t m = 6; m < n; ++m) {
    LD acc = 0.0L;
    for (std::size_t a = 0; a <= m - 6; ++a) {
      const LD geo = 1.0L + std::pow(0.5L, static_cast<LD>(a)) + std::pow(1.5L, static_cast<LD>(a));
      acc += geo * prod[m - 6 - a];
    }
    rhs[m] = pref * acc;
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    worst = std::max(worst, static_cast<double>(std::abs(lhs[k] - rhs[k])));
  return worst;
}

} // namespace cell24
