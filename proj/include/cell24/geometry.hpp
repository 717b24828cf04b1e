#pragma once

// Points on S^3, codes, Gram data and the Hopf projection.
//
// R^4 is identified with C^2 through (x0, x1, x2, x3) <-> (x0 + i x1, x2 + i x3).
// Every other module relies on this convention.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cell24 {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;
using Complex = std::complex<double>;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kCollisionTolerance = 1e-9;
inline constexpr double kClusterTolerance = 1e-9;

inline Vec4 from_complex(Complex w1, Complex w2) {
  return Vec4(w1.real(), w1.imag(), w2.real(), w2.imag());
}
inline Complex w1(const Vec4& x) { return {x[0], x[1]}; }
inline Complex w2(const Vec4& x) { return {x[2], x[3]}; }

inline Vec4 normalized(const Vec4& x) {
  const double n = x.norm();
  if (!(n > 0.0))
    throw std::invalid_argument("cannot normalize the zero vector");
  // Leaves already-normalized input bit-identical, so stored codes round-trip.
  if (std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon())
    return x;
  return x / n;
}

/// An ordered list of points on S^3. Points are normalized on construction,
/// so every stored point has unit norm to rounding.
class Code {
 public:
  Code() = default;
  explicit Code(std::vector<Vec4> points, std::string label = {})
      : points_(std::move(points)), label_(std::move(label)) {
    for (auto& p : points_)
      p = normalized(p);
  }

  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const Vec4& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] const std::vector<Vec4>& points() const { return points_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }

  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  /// True when every point has unit norm within tol.
  [[nodiscard]] bool is_unit(double tol = kUnitTolerance) const {
    return std::all_of(points_.begin(), points_.end(),
                       [tol](const Vec4& p) { return std::abs(p.norm() - 1.0) <= tol; });
  }

  /// True when no two distinct points have inner product >= 1 - tol.
  [[nodiscard]] bool is_valid(double tol = kCollisionTolerance) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i].dot(points_[j]) >= 1.0 - tol)
          return false;
    return true;
  }

  /// Applies x -> m x to every point.
  [[nodiscard]] Code transformed(const Mat4& m) const {
    std::vector<Vec4> out;
    out.reserve(points_.size());
    for (const auto& p : points_)
      out.push_back(m * p);
    return Code(std::move(out), label_);
  }

 private:
  std::vector<Vec4> points_;
  std::string label_;
};

inline Eigen::MatrixXd gram_matrix(const Code& code) {
  if (code.empty())
    throw std::invalid_argument("gram_matrix: empty code");
  const auto n = static_cast<Eigen::Index>(code.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j)
      g(i, j) = g(j, i) = code[i].dot(code[j]);
  }
  return g;
}

/// Largest inner product between distinct points: the cosine of the minimal
/// angular distance.
inline double t_max(const Code& code) {
  if (code.size() < 2)
    throw std::invalid_argument("degenerate code");
  double best = -2.0;
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j)
      best = std::max(best, code[i].dot(code[j]));
  return best;
}

/// All N(N-1) off-diagonal inner products (ordered pairs), sorted.
inline std::vector<double> sorted_inner_products(const Code& code) {
  std::vector<double> out;
  out.reserve(code.size() * (code.size() > 0 ? code.size() - 1 : 0));
  for (std::size_t i = 0; i < code.size(); ++i)
    for (std::size_t j = i + 1; j < code.size(); ++j) {
      const double t = code[i].dot(code[j]);
      out.push_back(t);
      out.push_back(t);
    }
  std::sort(out.begin(), out.end());
  return out;
}

struct GramCluster {
  double value;
  int multiplicity;
};

struct GramSpectrum {
  std::vector<GramCluster> entries; // sorted by value
  double cluster_tol = kClusterTolerance;
  bool ambiguous = false; // two cluster means closer than 2 * cluster_tol

  [[nodiscard]] int total() const {
    int s = 0;
    for (const auto& e : entries)
      s += e.multiplicity;
    return s;
  }
};

/// Clusters a sorted list of values by single linkage: consecutive values
/// within tol share a cluster. Cluster value is the mean.
inline GramSpectrum cluster_sorted(const std::vector<double>& sorted, double tol) {
  if (!(tol > 0.0))
    throw std::invalid_argument("cluster tolerance must be positive");
  GramSpectrum spec;
  spec.cluster_tol = tol;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i == sorted.size() || sorted[i] - sorted[i - 1] > tol) {
      double sum = 0.0;
      for (std::size_t j = start; j < i; ++j)
        sum += sorted[j];
      const auto count = static_cast<int>(i - start);
      if (count > 0)
        spec.entries.push_back({sum / count, count});
      start = i;
    }
  }
  for (std::size_t i = 1; i < spec.entries.size(); ++i)
    if (spec.entries[i].value - spec.entries[i - 1].value < 2.0 * tol)
      spec.ambiguous = true;
  return spec;
}

inline GramSpectrum inner_product_multiset(const Code& code,
                                           double cluster_tol = kClusterTolerance) {
  return cluster_sorted(sorted_inner_products(code), cluster_tol);
}

struct SpherePoint3 {
  double y0, y1, y2;

  [[nodiscard]] double dot(const SpherePoint3& o) const {
    return y0 * o.y0 + y1 * o.y1 + y2 * o.y2;
  }
};

/// Hopf map S^3 -> S^2: (w1, w2) -> w1 / w2 in C u {inf}, followed by
/// stereographic projection onto the unit sphere with inf at (0, 0, 1).
/// Written in the homogeneous form (2 w1 conj(w2), |w1|^2 - |w2|^2) so that
/// w2 = 0 needs no special case.
inline SpherePoint3 hopf_point(const Vec4& x) {
  const Complex a = w1(x), b = w2(x);
  const Complex cross = a * std::conj(b);
  const double na = std::norm(a), nb = std::norm(b);
  const double s = na + nb;
  return {2.0 * cross.real() / s, 2.0 * cross.imag() / s, (na - nb) / s};
}

inline std::vector<SpherePoint3> hopf_project(const Code& code) {
  std::vector<SpherePoint3> out;
  out.reserve(code.size());
  for (const auto& p : code)
    out.push_back(hopf_point(p));
  return out;
}

/// n independent uniform points on S^3 (normalized Gaussian 4-vectors).
inline Code random_code(std::size_t n, std::uint64_t seed) {
  if (n == 0)
    throw std::invalid_argument("random_code: n must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vec4> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    Vec4 v(normal(rng), normal(rng), normal(rng), normal(rng));
    if (v.norm() > 1e-8)
      pts.push_back(v);
  }
  return Code(std::move(pts), "random:" + std::to_string(n) + ":" + std::to_string(seed));
}

/// Haar-random element of O(4).
inline Mat4 random_orthogonal(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      a(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  const Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 4; ++j)
    if (r(j, j) < 0)
      q.col(j) = -q.col(j);
  return q;
}

/// L-infinity distance between the sorted off-diagonal inner product lists.
/// Rotation invariant; zero for isometric codes.
inline double spectrum_distance(const Code& a, const Code& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("spectrum_distance: codes differ in size");
  const auto sa = sorted_inner_products(a);
  const auto sb = sorted_inner_products(b);
  double d = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i)
    d = std::max(d, std::abs(sa[i] - sb[i]));
  return d;
}

/// Index of the point of code equal to x (inner product >= 1 - tol), or -1.
inline int find_point(const Code& code, const Vec4& x, double tol = 1e-9) {
  for (std::size_t i = 0; i < code.size(); ++i)
    if (code[i].dot(x) >= 1.0 - tol)
      return static_cast<int>(i);
  return -1;
}

} // namespace cell24
