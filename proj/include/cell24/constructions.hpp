#pragma once

// Builders for the 24-point codes: the D4 root system, the C_theta family,
// the four hexagons H0..H3, the rotating-hexagon designs D(a0, a1, a2, a3),
// and the symmetry and hexagon combinatorics of D4.

#include "cell24/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cell24 {

inline constexpr double kPi = std::numbers::pi;

/// Reduces an angle to [0, period).
inline double wrap_angle(double x, double period = 2.0 * kPi) {
  double r = std::fmod(x, period);
  if (r < 0)
    r += period;
  if (r >= period)
    r -= period;
  return r;
}

// ---------------------------------------------------------------------------
// C_theta

/// Mixing angle of the C_theta family. The value is kept mod 2 pi.
struct ThetaParam {
  double theta = 0.0;
  explicit ThetaParam(double t) : theta(wrap_angle(t)) {}
};

/// The 24 points (z, 0), (0, w), (z sin t, w cos t), (z cos t, w sin t) with
/// z^3 = w^3 = 1, in that order. No validity check.
inline Code c_theta_points(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  std::array<Complex, 3> cube;
  for (int a = 0; a < 3; ++a)
    cube[a] = std::polar(1.0, 2.0 * kPi * a / 3.0);
  std::vector<Vec4> pts;
  pts.reserve(24);
  for (const auto& z : cube)
    pts.push_back(from_complex(z, 0.0));
  for (const auto& w : cube)
    pts.push_back(from_complex(0.0, w));
  for (const auto& z : cube)
    for (const auto& w : cube)
      pts.push_back(from_complex(z * s, w * c));
  for (const auto& z : cube)
    for (const auto& w : cube)
      pts.push_back(from_complex(z * c, w * s));
  return Code(std::move(pts), "ctheta:" + std::to_string(theta));
}

/// The 11 distinct inner products of C_theta with their ordered-pair
/// multiplicities. The largest of them reaches 1 exactly at the degenerate
/// angles (sin 2t = 0 or sin t = cos t).
struct ThetaInnerProduct {
  double value;
  double d1; // d value / d theta
  double d2; // d^2 value / d theta^2
  int multiplicity;
};

inline std::array<ThetaInnerProduct, 11> c_theta_inner_products(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  const double s2 = std::sin(2 * theta), c2 = std::cos(2 * theta);
  return {{
      {0.0, 0.0, 0.0, 18},
      {s2, 2 * c2, -4 * s2, 18},
      {s, c, -s, 36},
      {c, -s, -c, 36},
      {s * s - 0.5 * c * c, 3 * s * c, 3 * c2, 36},
      {c * c - 0.5 * s * s, -3 * s * c, -3 * c2, 36},
      {-s / 2, -c / 2, s / 2, 72},
      {-c / 2, s / 2, c / 2, 72},
      {s2 / 4, c2 / 2, -s2, 72},
      {-s2 / 2, -c2, 2 * s2, 72},
      {-0.5, 0.0, 0.0, 84},
  }};
}

/// Largest inner product of C_theta, from the closed-form list.
inline double c_theta_t_max(double theta) {
  double best = -1.0;
  for (const auto& ip : c_theta_inner_products(theta))
    best = std::max(best, ip.value);
  return best;
}

inline bool theta_valid(double theta, double tol = kCollisionTolerance) {
  return c_theta_t_max(theta) < 1.0 - tol;
}

/// Angles where C_theta degenerates: sin 2t = 0 or sin t = cos t.
inline std::array<double, 6> degenerate_thetas() {
  return {0.0, kPi / 4, kPi / 2, kPi, 5 * kPi / 4, 3 * kPi / 2};
}

inline Code c_theta(ThetaParam p) {
  if (!theta_valid(p.theta))
    throw std::invalid_argument("degenerate theta");
  Code code = c_theta_points(p.theta);
  if (!code.is_valid())
    throw std::invalid_argument("degenerate theta");
  return code;
}

/// d/dtheta of every point of C_theta, in the order of c_theta_points.
inline std::vector<Vec4> c_theta_velocity(double theta) {
  const double s = std::sin(theta), c = std::cos(theta);
  std::vector<Vec4> v(6, Vec4::Zero());
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Complex z = std::polar(1.0, 2.0 * kPi * a / 3.0);
      const Complex w = std::polar(1.0, 2.0 * kPi * b / 3.0);
      v.push_back(from_complex(z * c, -w * s));
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const Complex z = std::polar(1.0, 2.0 * kPi * a / 3.0);
      const Complex w = std::polar(1.0, 2.0 * kPi * b / 3.0);
      v.push_back(from_complex(-z * s, w * c));
    }
  return v;
}

// ---------------------------------------------------------------------------
// Hexagons and the rotating-hexagon family

struct Hexagon {
  std::array<Vec4, 6> points;
};

/// Sixth roots of unity e^{i pi j / 3}.
inline Complex mu6(int j) { return std::polar(1.0, kPi * j / 3.0); }

/// H0 = {(w, 0)}, H1 = {(u i w, t i w)}, H2 = {(u i w, r t i w)},
/// H3 = {(u i w, conj(r) t i w)} for w in mu6, u = sqrt(1/3), t = sqrt(2/3),
/// r = e^{2 pi i / 3}.
inline std::array<Hexagon, 4> hexagons() {
  const double u = std::sqrt(1.0 / 3.0), t = std::sqrt(2.0 / 3.0);
  const Complex i(0.0, 1.0);
  const Complex r = std::polar(1.0, 2.0 * kPi / 3.0);
  const std::array<Complex, 4> second = {0.0, 1.0, r, std::conj(r)};
  std::array<Hexagon, 4> hex;
  for (int j = 0; j < 6; ++j) {
    const Complex w = mu6(j);
    hex[0].points[j] = from_complex(w, 0.0);
    for (int m = 1; m < 4; ++m)
      hex[m].points[j] = from_complex(u * i * w, second[m] * t * i * w);
  }
  return hex;
}

/// D(a0, a1, a2, a3) = a0 H0 u a1 H1 u a2 H2 u a3 H3, where a_m multiplies
/// both complex coordinates. Points are ordered hexagon by hexagon.
inline Code hex_design_units(Complex a0, Complex a1, Complex a2, Complex a3) {
  const std::array<Complex, 4> a = {a0, a1, a2, a3};
  for (const auto& am : a)
    if (std::abs(std::abs(am) - 1.0) > kUnitTolerance)
      throw std::invalid_argument("hex_design_units: rotation factors must have modulus 1");
  const auto hex = hexagons();
  std::vector<Vec4> pts;
  pts.reserve(24);
  for (int m = 0; m < 4; ++m)
    for (const auto& p : hex[m].points)
      pts.push_back(from_complex(a[m] * w1(p), a[m] * w2(p)));
  return Code(std::move(pts), "hex");
}

/// Angles (theta, phi, psi) of the hexagon family with a0 = 1,
/// a1 = i e^{i theta}, a2 = i e^{i phi}, a3 = i e^{i psi}. Each angle only
/// matters mod pi/3; the stored value is the representative in [0, pi/3).
struct HexFamilyAngles {
  double theta = 0.0, phi = 0.0, psi = 0.0;

  HexFamilyAngles() = default;
  HexFamilyAngles(double t, double p, double q)
      : theta(wrap_angle(t, kPi / 3)), phi(wrap_angle(p, kPi / 3)), psi(wrap_angle(q, kPi / 3)) {}

  [[nodiscard]] std::array<double, 3> as_array() const { return {theta, phi, psi}; }
};

inline Code hex_design(const HexFamilyAngles& a) {
  const Complex i(0.0, 1.0);
  Code code = hex_design_units(1.0, i * std::polar(1.0, a.theta), i * std::polar(1.0, a.phi),
                               i * std::polar(1.0, a.psi));
  code.set_label("hex:" + std::to_string(a.theta) + "," + std::to_string(a.phi) + "," +
                 std::to_string(a.psi));
  return code;
}

/// The 24-cell, realized as D(1, 1, 1, 1) so that the hexagon bookkeeping is
/// exact: points 6m..6m+5 form H_m.
inline Code d4() {
  Code code = hex_design_units(1.0, 1.0, 1.0, 1.0);
  code.set_label("d4");
  return code;
}

/// The conventional unit-quaternion 24-cell {+-e_i} u {(+-1, +-1, +-1, +-1)/2}.
inline Code d4_standard() {
  std::vector<Vec4> pts;
  for (int i = 0; i < 4; ++i)
    for (double sgn : {1.0, -1.0}) {
      Vec4 v = Vec4::Zero();
      v[i] = sgn;
      pts.push_back(v);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 v;
    for (int i = 0; i < 4; ++i)
      v[i] = (mask >> i & 1) ? -0.5 : 0.5;
    pts.push_back(v);
  }
  return Code(std::move(pts), "d4-standard");
}

// ---------------------------------------------------------------------------
// Automorphisms

struct Automorphism {
  std::vector<int> perm; // point i maps to point perm[i]
  Mat4 matrix;
};

namespace detail {

/// Greedy choice of four points spanning R^4, maximizing the residual after
/// projecting out the previously chosen points.
inline std::array<int, 4> spanning_subset(const Code& code) {
  std::array<int, 4> chosen{};
  std::vector<Vec4> basis;
  for (int step = 0; step < 4; ++step) {
    double best = -1.0;
    int best_i = -1;
    for (std::size_t i = 0; i < code.size(); ++i) {
      Vec4 r = code[i];
      for (const auto& b : basis)
        r -= r.dot(b) * b;
      if (r.norm() > best) {
        best = r.norm();
        best_i = static_cast<int>(i);
      }
    }
    if (best < 1e-6)
      throw std::invalid_argument("degenerate span");
    Vec4 r = code[best_i];
    for (const auto& b : basis)
      r -= r.dot(b) * b;
    basis.push_back(r.normalized());
    chosen[step] = best_i;
  }
  return chosen;
}

} // namespace detail

/// Every orthogonal map sending the code onto itself. Candidate maps are
/// seeded from Gram-compatible images of a spanning 4-subset, then verified
/// on all points.
inline std::vector<Automorphism> automorphisms(const Code& code, double tol = 1e-9) {
  const auto seed = detail::spanning_subset(code);
  const auto gram = gram_matrix(code);
  const int n = static_cast<int>(code.size());
  Mat4 basis;
  for (int a = 0; a < 4; ++a)
    basis.col(a) = code[seed[a]];
  const Mat4 basis_inv = basis.inverse();

  std::vector<Automorphism> out;
  std::array<int, 4> image{};
  auto compatible = [&](int depth, int candidate) {
    if (std::abs(gram(candidate, candidate) - gram(seed[depth], seed[depth])) > tol)
      return false;
    for (int b = 0; b < depth; ++b)
      if (std::abs(gram(candidate, image[b]) - gram(seed[depth], seed[b])) > tol)
        return false;
    return true;
  };
  auto finish = [&] {
    Mat4 target;
    for (int a = 0; a < 4; ++a)
      target.col(a) = code[image[a]];
    const Mat4 m = target * basis_inv;
    if ((m.transpose() * m - Mat4::Identity()).cwiseAbs().maxCoeff() > tol)
      return;
    std::vector<int> perm(n, -1);
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
      const int j = find_point(code, m * code[i], tol);
      if (j < 0 || used[j])
        return;
      perm[i] = j;
      used[j] = 1;
    }
    out.push_back({std::move(perm), m});
  };
  // Depth-first over images of the four seed points.
  auto search = [&](auto&& self, int depth) -> void {
    if (depth == 4) {
      finish();
      return;
    }
    for (int c = 0; c < n; ++c)
      if (compatible(depth, c)) {
        image[depth] = c;
        self(self, depth + 1);
      }
  };
  search(search, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Hexagons inside a code, and Eisenstein partitions of D4

/// Sorted point indices of a hexagon inside a code.
using HexIndices = std::array<int, 6>;

struct HexPartition {
  std::array<HexIndices, 4> hexagons; // each sorted; sorted lexicographically

  auto operator<=>(const HexPartition&) const = default;

  [[nodiscard]] bool contains(const HexIndices& h) const {
    return std::find(hexagons.begin(), hexagons.end(), h) != hexagons.end();
  }
};

/// All regular hexagons centered at the origin inside the code: for each
/// pair at inner product 1/2, the plane they span must contain the six
/// points x, y, y - x, -x, -y, x - y of the code.
inline std::vector<HexIndices> enumerate_hexagons(const Code& code, double tol = 1e-9) {
  std::set<HexIndices> found;
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = 0; j < code.size(); ++j) {
      if (i == j || std::abs(code[i].dot(code[j]) - 0.5) > tol)
        continue;
      const Vec4& x = code[i];
      const Vec4& y = code[j];
      const std::array<Vec4, 6> want = {x, y, y - x, -x, -y, x - y};
      HexIndices idx{};
      bool ok = true;
      for (int a = 0; a < 6 && ok; ++a) {
        idx[a] = find_point(code, want[a], tol);
        ok = idx[a] >= 0;
      }
      if (!ok)
        continue;
      std::sort(idx.begin(), idx.end());
      found.insert(idx);
    }
  return {found.begin(), found.end()};
}

/// Index of -x_i in the code for each i, or -1.
inline std::vector<int> antipode_map(const Code& code) {
  std::vector<int> anti(code.size());
  for (std::size_t i = 0; i < code.size(); ++i)
    anti[i] = find_point(code, -code[i]);
  return anti;
}

inline bool is_identity(const std::vector<int>& perm) {
  for (std::size_t i = 0; i < perm.size(); ++i)
    if (perm[i] != static_cast<int>(i))
      return false;
  return true;
}

inline std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner) {
  std::vector<int> r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i)
    r[i] = outer[inner[i]];
  return r;
}

/// Order-3 automorphisms of D4 without nonzero fixed vectors
/// (det(M - I) != 0); each one, together with -I, partitions the 24 points
/// into four hexagon orbits. Returns the distinct partitions.
inline std::vector<HexPartition> eisenstein_partitions(const Code& code,
                                                       const std::vector<Automorphism>& auts) {
  const auto anti = antipode_map(code);
  std::set<HexPartition> parts;
  for (const auto& g : auts) {
    if (is_identity(g.perm))
      continue;
    const auto g2 = compose(g.perm, g.perm);
    if (!is_identity(compose(g.perm, g2)))
      continue;
    if (std::abs((g.matrix - Mat4::Identity()).determinant()) < 1e-9)
      continue;
    std::vector<char> seen(code.size(), 0);
    std::vector<HexIndices> orbits;
    bool ok = true;
    for (std::size_t i = 0; i < code.size() && ok; ++i) {
      if (seen[i])
        continue;
      const int a = static_cast<int>(i), b = g.perm[a], c = g2[a];
      HexIndices h = {a, b, c, anti[a], anti[b], anti[c]};
      std::sort(h.begin(), h.end());
      if (std::adjacent_find(h.begin(), h.end()) != h.end() || h[0] < 0) {
        ok = false;
        break;
      }
      for (int p : h)
        seen[p] = 1;
      orbits.push_back(h);
    }
    if (!ok || orbits.size() != 4)
      continue;
    std::sort(orbits.begin(), orbits.end());
    HexPartition part;
    std::copy(orbits.begin(), orbits.end(), part.hexagons.begin());
    parts.insert(part);
  }
  return {parts.begin(), parts.end()};
}

inline std::vector<HexPartition> eisenstein_partitions() {
  const Code code = d4();
  return eisenstein_partitions(code, automorphisms(code));
}

/// The partition {H0, H1, H2, H3} of d4() by construction.
inline HexPartition standard_partition() {
  HexPartition p;
  for (int m = 0; m < 4; ++m)
    for (int j = 0; j < 6; ++j)
      p.hexagons[m][j] = 6 * m + j;
  return p;
}

struct DisjointPairWitness {
  HexIndices first, second;
  int partition = -1; // index into partitions, -1 when no witness exists
};

struct HexagonClaimReport {
  bool holds = false;
  std::vector<HexIndices> hexagons;
  std::vector<HexPartition> partitions;
  std::vector<DisjointPairWitness> pairs;
};

inline bool disjoint(const HexIndices& a, const HexIndices& b) {
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) != b.end())
      return false;
  return true;
}

/// Checks that every pair of disjoint hexagons of D4 lies in a common
/// Eisenstein partition.
inline HexagonClaimReport disjoint_hexagon_claim() {
  const Code code = d4();
  HexagonClaimReport rep;
  rep.hexagons = enumerate_hexagons(code);
  rep.partitions = eisenstein_partitions(code, automorphisms(code));
  rep.holds = true;
  for (std::size_t a = 0; a < rep.hexagons.size(); ++a)
    for (std::size_t b = a + 1; b < rep.hexagons.size(); ++b) {
      if (!disjoint(rep.hexagons[a], rep.hexagons[b]))
        continue;
      DisjointPairWitness w{rep.hexagons[a], rep.hexagons[b], -1};
      for (std::size_t p = 0; p < rep.partitions.size(); ++p)
        if (rep.partitions[p].contains(w.first) && rep.partitions[p].contains(w.second)) {
          w.partition = static_cast<int>(p);
          break;
        }
      if (w.partition < 0)
        rep.holds = false;
      rep.pairs.push_back(w);
    }
  return rep;
}

} // namespace cell24
