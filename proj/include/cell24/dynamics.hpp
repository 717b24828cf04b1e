#pragma once

// Gradients, Hessians and descent for energies on (S^3)^N.

#include "cell24/constructions.hpp"
#include "cell24/energy.hpp"
#include "cell24/geometry.hpp"
#include "cell24/linalg.hpp"
#include "cell24/parallel.hpp"
#include "cell24/potentials.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cell24 {

using TangentVectors = std::vector<Vec4>;

// ---------------------------------------------------------------------------
// Tangent coordinates

/// Three orthonormal tangent vectors at each point of a code.
class TangentBasis {
 public:
  explicit TangentBasis(const Code& code) {
    frames_.reserve(code.size());
    for (const auto& x : code)
      frames_.push_back(frame_at(x));
  }

  [[nodiscard]] std::size_t size() const { return frames_.size(); }
  [[nodiscard]] const Vec4& operator()(std::size_t i, int a) const { return frames_[i][a]; }

  /// Gram-Schmidt of the three standard basis vectors with the largest
  /// residual against x; ties go to the lower index.
  static std::array<Vec4, 3> frame_at(const Vec4& x) {
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(x[a]) < std::abs(x[b]); });
    std::array<Vec4, 3> frame;
    for (int k = 0; k < 3; ++k) {
      Vec4 v = Vec4::Unit(order[k]);
      v -= x.dot(v) * x;
      for (int j = 0; j < k; ++j)
        v -= frame[j].dot(v) * frame[j];
      v -= x.dot(v) * x;
      frame[k] = v.normalized();
    }
    return frame;
  }

  /// Largest deviation from orthonormality or tangency.
  [[nodiscard]] double defect(const Code& code) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < frames_.size(); ++i)
      for (int a = 0; a < 3; ++a) {
        worst = std::max(worst, std::abs(frames_[i][a].dot(code[i])));
        for (int b = 0; b < 3; ++b)
          worst = std::max(worst, std::abs(frames_[i][a].dot(frames_[i][b]) - (a == b ? 1.0 : 0.0)));
      }
    return worst;
  }

  /// Ambient tangent vectors from 3N coordinates.
  [[nodiscard]] TangentVectors lift(const Eigen::VectorXd& coords) const {
    TangentVectors out(frames_.size(), Vec4::Zero());
    for (std::size_t i = 0; i < frames_.size(); ++i)
      for (int a = 0; a < 3; ++a)
        out[i] += coords[static_cast<Eigen::Index>(3 * i + a)] * frames_[i][a];
    return out;
  }

  [[nodiscard]] Eigen::VectorXd coordinates(const TangentVectors& v) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(3 * frames_.size()));
    for (std::size_t i = 0; i < frames_.size(); ++i)
      for (int a = 0; a < 3; ++a)
        out[static_cast<Eigen::Index>(3 * i + a)] = frames_[i][a].dot(v[i]);
    return out;
  }

 private:
  std::vector<std::array<Vec4, 3>> frames_;
};

// ---------------------------------------------------------------------------
// Gradient and Hessian

inline TangentVectors riemannian_gradient(const Code& code, const Potential& f) {
  const std::size_t n = code.size();
  TangentVectors g(n, Vec4::Zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = 2.0 * eval(f, code[i].dot(code[j]), 1);
      g[i] += d * code[j];
      g[j] += d * code[i];
    }
  for (std::size_t i = 0; i < n; ++i)
    g[i] -= code[i].dot(g[i]) * code[i];
  return g;
}

inline double norm(const TangentVectors& v) {
  double s = 0.0;
  for (const auto& x : v)
    s += x.squaredNorm();
  return std::sqrt(s);
}

inline double gradient_norm(const Code& code, const Potential& f) {
  return norm(riemannian_gradient(code, f));
}

/// Hessian of E_f along geodesics, in the coordinates of basis; row 3i + a
/// belongs to tangent vector a at point i.
inline Eigen::MatrixXd riemannian_hessian(const Code& code, const Potential& f,
                                          const TangentBasis& basis) {
  const std::size_t n = code.size();
  if (basis.size() != n)
    throw std::invalid_argument("riemannian_hessian: basis does not match code");
  const auto dim = static_cast<Eigen::Index>(3 * n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double t = code[i].dot(code[j]);
      const double d1 = eval(f, t, 1), d2 = eval(f, t, 2);
      std::array<double, 3> ei_xj, ej_xi;
      for (int a = 0; a < 3; ++a) {
        ei_xj[a] = basis(i, a).dot(code[j]);
        ej_xi[a] = basis(j, a).dot(code[i]);
      }
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double off = 2.0 * (d2 * ei_xj[a] * ej_xi[b] + d1 * basis(i, a).dot(basis(j, b)));
          const auto r = static_cast<Eigen::Index>(3 * i + a), c = static_cast<Eigen::Index>(3 * j + b);
          h(r, c) += off;
          h(c, r) += off;
          const double diag_i = 2.0 * (d2 * (ei_xj[a] * ei_xj[b]) - (a == b ? t * d1 : 0.0));
          const double diag_j = 2.0 * (d2 * (ej_xi[a] * ej_xi[b]) - (a == b ? t * d1 : 0.0));
          h(static_cast<Eigen::Index>(3 * i + a), static_cast<Eigen::Index>(3 * i + b)) += diag_i;
          h(static_cast<Eigen::Index>(3 * j + a), static_cast<Eigen::Index>(3 * j + b)) += diag_j;
        }
    }
  return h;
}

struct EigenCluster {
  double value;
  int multiplicity;
};

struct HessianSpectrum {
  std::vector<double> eigenvalues; // ascending
  double spectral_radius = 0.0;
  double zero_tol = 0.0; // absolute
  int negative_count = 0;
  int zero_count = 0;
  int positive_count = 0;

  /// Groups consecutive eigenvalues within rel_tol * spectral radius.
  [[nodiscard]] std::vector<EigenCluster> clusters(double rel_tol = 1e-6) const {
    std::vector<EigenCluster> out;
    const double tol = rel_tol * std::max(spectral_radius, 1e-300);
    for (double v : eigenvalues) {
      if (!out.empty() && std::abs(v - out.back().value) <= tol) {
        auto& c = out.back();
        c.value = (c.value * c.multiplicity + v) / (c.multiplicity + 1);
        ++c.multiplicity;
      } else {
        out.push_back({v, 1});
      }
    }
    return out;
  }
};

/// Counts eigenvalues as zero when |lambda| < zero_rel * spectral radius.
inline HessianSpectrum spectrum_of(const Eigen::MatrixXd& h, double zero_rel = 1e-6) {
  const auto eig = jacobi_eigen(h);
  HessianSpectrum s;
  s.eigenvalues.assign(eig.values.data(), eig.values.data() + eig.values.size());
  for (double v : s.eigenvalues)
    s.spectral_radius = std::max(s.spectral_radius, std::abs(v));
  s.zero_tol = zero_rel * s.spectral_radius;
  for (double v : s.eigenvalues) {
    if (std::abs(v) < s.zero_tol)
      ++s.zero_count;
    else if (v < 0)
      ++s.negative_count;
    else
      ++s.positive_count;
  }
  return s;
}

inline HessianSpectrum hessian_spectrum(const Code& code, const Potential& f, double zero_rel = 1e-6) {
  return spectrum_of(riemannian_hessian(code, f, TangentBasis(code)), zero_rel);
}

struct ClosedFormEigenvalue {
  double value;
  int multiplicity;
};

/// Hessian eigenvalues of E_f at the 24-cell, from f' and f'' at the four
/// inner products that occur.
inline std::vector<ClosedFormEigenvalue> d4_hessian_closed_form(const Potential& f) {
  const double a1 = eval(f, 0.5, 1), b1 = eval(f, 0.0, 1), c1 = eval(f, -0.5, 1), d1 = eval(f, -1.0, 1);
  const double a2 = eval(f, 0.5, 2), b2 = eval(f, 0.0, 2), c2 = eval(f, -0.5, 2);
  return {
      {0.0, 6},
      {2 * a2 + 8 * b2 + 2 * c2 - 12 * a1 + 12 * c1, 9},
      {2 * a2 + 4 * b2 + 6 * c2 - 8 * a1 - 4 * b1 + 8 * c1 + 4 * d1, 16},
      {5 * a2 + 4 * b2 + 3 * c2 - 14 * a1 + 8 * b1 + 2 * c1 + 4 * d1, 8},
      {6 * a2 + 6 * c2 - 12 * a1 + 12 * c1, 12},
      {2 * a2 + 4 * b2 + 6 * c2 + 4 * a1 + 8 * b1 + 20 * c1 + 4 * d1, 4},
      {6 * a2 + 8 * b2 + 6 * c2 - 4 * a1 + 4 * c1, 9},
      {8 * a2 + 4 * b2 - 8 * a1 - 4 * b1 + 8 * c1 + 4 * d1, 8},
  };
}

/// Closed-form eigenvalues expanded to a sorted list of length 72.
inline std::vector<double> expand(const std::vector<ClosedFormEigenvalue>& table) {
  std::vector<double> out;
  for (const auto& e : table)
    out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.value);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Descent

struct DescentOptions {
  double initial_step = 1e-3;
  double backtrack = 0.5;
  double armijo = 1e-4;
  double gradient_tol = 1e-10;
  int max_iterations = 100000;
  double min_step = 1e-30;
  double max_step = 1e6;
  bool record_energies = false;
};

struct DescentResult {
  Code code;
  double energy = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  std::string label;
  bool converged = false;
  bool stalled = false;
  std::vector<double> energies; // accepted iterates, when recorded
};

namespace detail {

inline Code retract(const Code& code, const TangentVectors& step, double alpha) {
  std::vector<Vec4> pts;
  pts.reserve(code.size());
  for (std::size_t i = 0; i < code.size(); ++i)
    pts.push_back(code[i] + alpha * step[i]);
  return Code(std::move(pts), code.label());
}

inline std::optional<double> try_energy(const Code& code, const Potential& f) {
  try {
    const double e = energy(code, f);
    if (std::isfinite(e))
      return e;
  } catch (const std::domain_error&) {
  }
  return std::nullopt;
}

} // namespace detail

/// Projected gradient descent with normalization as retraction. Trial steps
/// follow the Barzilai-Borwein length and are cut back until the Armijo
/// condition holds. Once the predicted decrease falls below the rounding
/// level of the energy, a step is also accepted when the energy does not
/// rise beyond that level and the gradient shrinks.
inline DescentResult descend(const Code& start, const Potential& f, const DescentOptions& opts = {}) {
  if (!(opts.backtrack > 0 && opts.backtrack < 1) || !(opts.initial_step > 0) ||
      !(opts.max_step >= opts.initial_step))
    throw std::invalid_argument("descend: bad step control");
  DescentResult res;
  res.code = start;
  auto e0 = detail::try_energy(start, f);
  if (!e0)
    throw std::domain_error("descend: energy undefined at start");
  res.energy = *e0;
  TangentVectors g = riemannian_gradient(res.code, f);
  double gnorm = norm(g);
  double alpha = opts.initial_step;
  if (opts.record_energies)
    res.energies.push_back(res.energy);
  const double eps = std::numeric_limits<double>::epsilon();
  while (gnorm >= opts.gradient_tol && res.iterations < opts.max_iterations) {
    const double g2 = gnorm * gnorm;
    const double floor = 64 * eps * std::max(1.0, std::abs(res.energy));
    TangentVectors dir(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      dir[i] = -g[i];
    bool accepted = false;
    Code next;
    double e_next = 0.0;
    TangentVectors g_next;
    while (alpha >= opts.min_step) {
      next = detail::retract(res.code, dir, alpha);
      if (auto e = detail::try_energy(next, f)) {
        e_next = *e;
        if (e_next <= res.energy - opts.armijo * alpha * g2) {
          accepted = true;
        } else if (opts.armijo * alpha * g2 < floor && e_next <= res.energy + floor) {
          g_next = riemannian_gradient(next, f);
          accepted = norm(g_next) < gnorm;
        }
        if (accepted)
          break;
      }
      alpha *= opts.backtrack;
    }
    if (!accepted) {
      res.stalled = true;
      break;
    }
    if (g_next.empty())
      g_next = riemannian_gradient(next, f);
    // Barzilai-Borwein length from the ambient displacement and gradient change.
    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec4 s = next[i] - res.code[i];
      ss += s.squaredNorm();
      sy += s.dot(g_next[i] - g[i]);
    }
    alpha = std::min(sy > 0 ? std::clamp(ss / sy, 1e-12, 1e6) : 2.0 * alpha, opts.max_step);
    res.code = std::move(next);
    res.energy = e_next;
    g = std::move(g_next);
    gnorm = norm(g);
    ++res.iterations;
    if (opts.record_energies)
      res.energies.push_back(res.energy);
  }
  res.gradient_norm = gnorm;
  res.converged = gnorm < opts.gradient_tol;
  return res;
}

struct LabeledCode {
  std::string label;
  Code code;
};

/// Label of the first reference within tol in spectrum_distance, else "other".
inline std::string classify(const Code& code, const std::vector<LabeledCode>& refs, double tol = 1e-3) {
  if (refs.empty())
    throw std::invalid_argument("classify: no reference codes");
  for (const auto& r : refs)
    if (r.code.size() == code.size() && spectrum_distance(code, r.code) < tol)
      return r.label;
  return "other";
}

/// Seed for one trial, independent of scheduling (splitmix64 finalizer).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct BasinTrial {
  std::uint64_t seed;
  std::string label;
  double energy;
  int iterations;
  double gradient_norm;
  bool converged;
};

struct BasinStats {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<LabeledCode> references;
  std::map<std::string, int> counts;
  std::map<double, int> energy_histogram; // final energy rounded to 1e-3
  std::vector<BasinTrial> runs;

  [[nodiscard]] double fraction(const std::string& label) const {
    const auto it = counts.find(label);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / trials;
  }
};

/// Reference codes for classification: the 24-cell and the lowest-energy
/// member of the C_theta family for f.
inline std::vector<LabeledCode> basin_references(const Potential& f) {
  const double theta = scan_theta(f).global_min().theta;
  return {{"D4", d4()}, {"C_theta", c_theta(ThetaParam{theta})}};
}

inline BasinStats basin_experiment(const Potential& f, int trials, std::uint64_t seed,
                                   const DescentOptions& opts = {}) {
  if (trials < 1)
    throw std::invalid_argument("basin_experiment: trials must be positive");
  BasinStats stats;
  stats.seed = seed;
  stats.trials = trials;
  stats.references = basin_references(f);
  stats.runs.resize(static_cast<std::size_t>(trials));
  parallel_for(stats.runs.size(), [&](std::size_t t) {
    const std::uint64_t s = trial_seed(seed, t);
    const auto r = descend(random_code(24, s), f, opts);
    stats.runs[t] = {s, classify(r.code, stats.references), r.energy, r.iterations, r.gradient_norm,
                     r.converged};
  });
  for (const auto& r : stats.runs) {
    ++stats.counts[r.label];
    ++stats.energy_histogram[std::round(r.energy * 1e3) / 1e3];
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Critical points of the C_theta family

/// Share of the full gradient at C_theta that is not explained by moving
/// theta or by an infinitesimal rotation; 0 when the gradient is below 1e-6.
inline double family_gradient_residual(double theta, const Potential& f) {
  const Code code = c_theta(ThetaParam{theta});
  const auto g = riemannian_gradient(code, f);
  const double gn = norm(g);
  if (gn < 1e-6)
    return 0.0;
  const std::size_t n = code.size();
  const auto dim = static_cast<Eigen::Index>(4 * n);
  Eigen::MatrixXd fields(dim, 7);
  const auto vel = c_theta_velocity(theta);
  int col = 0;
  for (std::size_t i = 0; i < n; ++i)
    fields.block<4, 1>(static_cast<Eigen::Index>(4 * i), col) = vel[i];
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      ++col;
      Mat4 gen = Mat4::Zero();
      gen(a, b) = 1.0;
      gen(b, a) = -1.0;
      for (std::size_t i = 0; i < n; ++i)
        fields.block<4, 1>(static_cast<Eigen::Index>(4 * i), col) = gen * code[i];
    }
  Eigen::VectorXd gv(dim);
  for (std::size_t i = 0; i < n; ++i)
    gv.segment<4>(static_cast<Eigen::Index>(4 * i)) = g[i];
  const Eigen::VectorXd coeffs = fields.colPivHouseholderQr().solve(gv);
  return (gv - fields * coeffs).norm() / gn;
}

struct ThetaCriticalPoint {
  double theta;
  double energy;
  double family_curvature; // d^2 E / d theta^2
  bool family_minimum;
  int negative_count;
  int zero_count;
  double gradient_norm;
  HessianSpectrum spectrum;
};

/// Zeros of dE/dtheta on [0, 2 pi) from sign changes on a uniform grid,
/// refined by bisection; brackets touching a degenerate angle are skipped.
inline std::vector<ThetaCriticalPoint> theta_critical_points(const Potential& f, int samples = 10000,
                                                             double tol = 1e-10) {
  if (samples < 100)
    throw std::invalid_argument("theta_critical_points: samples must be at least 100");
  const double step = 2.0 * kPi / samples;
  const double margin = 1e-6;
  auto near_degenerate = [&](double lo, double hi) {
    for (double d : degenerate_thetas())
      for (double shift : {-2.0 * kPi, 0.0, 2.0 * kPi})
        if (d + shift >= lo - margin && d + shift <= hi + margin)
          return true;
    return false;
  };
  auto de = [&](double t) { return energy_theta_closed(t, f, 1); };
  std::vector<double> roots;
  for (int i = 0; i < samples; ++i) {
    const double lo = step * i, hi = step * (i + 1);
    if (near_degenerate(lo, hi))
      continue;
    if (auto r = bisect_sign_change(de, lo, hi, tol))
      if (roots.empty() || std::abs(*r - roots.back()) > 10 * tol)
        roots.push_back(wrap_angle(*r));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<ThetaCriticalPoint> out(roots.size());
  parallel_for(roots.size(), [&](std::size_t k) {
    const double t = roots[k];
    const Code code = c_theta(ThetaParam{t});
    ThetaCriticalPoint& p = out[k];
    p.theta = t;
    p.energy = energy_theta_closed(t, f);
    p.family_curvature = energy_theta_closed(t, f, 2);
    p.family_minimum = p.family_curvature > 0;
    p.spectrum = hessian_spectrum(code, f);
    p.negative_count = p.spectrum.negative_count;
    p.zero_count = p.spectrum.zero_count;
    p.gradient_norm = gradient_norm(code, f);
  });
  return out;
}

} // namespace cell24
