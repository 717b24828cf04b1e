#include "cell24/constructions.hpp"
#include "cell24/dynamics.hpp"
#include "cell24/energy.hpp"
#include "cell24/io.hpp"
#include "cell24/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <random>

using namespace cell24;

namespace {

std::vector<Potential> families() {
  return {PowPlus{6}, Riesz{1.0}, Exp{3.0}, Poly({mpq_class(1), mpq_class(-1, 2), mpq_class(3, 4), mpq_class(2)})};
}

TangentVectors random_tangent(const Code& code, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  TangentVectors v(code.size());
  for (std::size_t i = 0; i < code.size(); ++i) {
    Vec4 w(n(rng), n(rng), n(rng), n(rng));
    v[i] = w - code[i].dot(w) * code[i];
  }
  return v;
}

double inner(const TangentVectors& a, const TangentVectors& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].dot(b[i]);
  return s;
}

// Moves every point along its great circle with initial velocity v_i.
Code geodesic(const Code& code, const TangentVectors& v, double s) {
  std::vector<Vec4> pts;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const double len = v[i].norm();
    pts.push_back(len == 0 ? code[i] : Vec4(std::cos(s * len) * code[i] + std::sin(s * len) * v[i] / len));
  }
  return Code(std::move(pts));
}

// Family member nearest in spectrum, by a coarse scan and golden refinement.
double distance_to_family(const Code& code) {
  auto d = [&](double t) { return spectrum_distance(code, c_theta(ThetaParam{t})); };
  double best = 0.0, best_d = 1e300;
  for (int i = 0; i < 2000; ++i) {
    const double t = 2 * kPi * (i + 0.5) / 2000;
    const double v = d(t);
    if (v < best_d)
      best_d = v, best = t;
  }
  const double step = 2 * kPi / 2000;
  return std::min(best_d, d(golden_section(d, best - step, best + step, 1e-12)));
}

} // namespace

TEST(TangentBasis, IsOrthonormalAndTangent) {
  for (const Code& c : {d4(), random_code(24, 5), c_theta(ThetaParam{1.0}), Code({Vec4::Unit(2)})}) {
    const TangentBasis b(c);
    EXPECT_LT(b.defect(c), 1e-12);
    const auto v = random_tangent(c, 3);
    const auto back = b.lift(b.coordinates(v));
    for (std::size_t i = 0; i < c.size(); ++i)
      EXPECT_LT((back[i] - v[i]).norm(), 1e-12);
  }
}

TEST(Gradient, VanishesAtD4) {
  for (const auto& f : families())
    EXPECT_LT(gradient_norm(d4(), f), 1e-10) << to_string(f);
}

TEST(Gradient, VanishesAtTheFamilyCriticalPoint) {
  const double t = refine_theta_minimum(Riesz{1}, 2.52, 2.55, 1e-12);
  EXPECT_NEAR(t, 2.5371, 1e-3);
  EXPECT_LT(gradient_norm(c_theta(ThetaParam{t}), Riesz{1}), 1e-6);
}

TEST(Gradient, MatchesCentralDifferences) {
  const double h = 1e-6;
  for (const auto& f : families())
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Code c = random_code(24, 100 + s);
      const auto v = random_tangent(c, 200 + s);
      const double fd = (energy(geodesic(c, v, h), f) - energy(geodesic(c, v, -h), f)) / (2 * h);
      const double an = inner(riemannian_gradient(c, f), v);
      EXPECT_NEAR(an, fd, 1e-5 * std::max(1.0, std::abs(fd))) << to_string(f);
    }
}

TEST(Gradient, IsTangent) {
  const Code c = random_code(24, 9);
  const auto g = riemannian_gradient(c, Riesz{1});
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_LT(std::abs(g[i].dot(c[i])), 1e-12 * std::max(1.0, g[i].norm()));
}

TEST(Hessian, MatchesSecondDifferencesAlongGeodesics) {
  const double h = 1e-4;
  for (const auto& f : families())
    for (std::uint64_t s = 0; s < 3; ++s) {
      const Code c = random_code(24, 300 + s);
      const TangentBasis b(c);
      const auto H = riemannian_hessian(c, f, b);
      const auto v = random_tangent(c, 400 + s);
      const Eigen::VectorXd x = b.coordinates(v);
      const double quad = x.dot(H * x);
      const double fd =
          (energy(geodesic(c, v, h), f) - 2 * energy(c, f) + energy(geodesic(c, v, -h), f)) / (h * h);
      EXPECT_NEAR(quad, fd, 1e-4 * std::max(1.0, std::abs(fd))) << to_string(f);
    }
}

TEST(Hessian, IsExactlySymmetric) {
  const Code c = random_code(24, 7);
  const auto H = riemannian_hessian(c, Riesz{1}, TangentBasis(c));
  EXPECT_EQ((H - H.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hessian, ZeroModesAtD4) {
  for (const auto& f : families()) {
    const auto s = hessian_spectrum(d4(), f, 1e-8);
    EXPECT_GE(s.zero_count, 6) << to_string(f);
    EXPECT_EQ(s.negative_count + s.zero_count + s.positive_count, 72);
  }
  EXPECT_GT(hessian_spectrum(d4(), PowPlus{5}).zero_count, 6);
  EXPECT_EQ(hessian_spectrum(d4(), PowPlus{6}).zero_count, 6);
}

TEST(Hessian, ClosedFormTableMatchesSpectrum) {
  for (const Potential& f : {Potential{PowPlus{6}}, Potential{Riesz{1}}, Potential{Exp{6}}}) {
    const auto table = d4_hessian_closed_form(f);
    ASSERT_EQ(table.size(), 8u);
    int total = 0;
    for (const auto& e : table)
      total += e.multiplicity;
    EXPECT_EQ(total, 72);
    EXPECT_EQ(table[0].value, 0.0);
    EXPECT_EQ(table[0].multiplicity, 6);
    const auto expected = expand(table);
    const auto s = hessian_spectrum(d4(), f);
    ASSERT_EQ(s.eigenvalues.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (expected[i] == 0.0) {
        EXPECT_LT(std::abs(s.eigenvalues[i]), 1e-8 * s.spectral_radius) << to_string(f);
      } else {
        EXPECT_NEAR(s.eigenvalues[i], expected[i], 1e-6 * std::abs(expected[i])) << to_string(f) << " i=" << i;
      }
    }
  }
}

TEST(Hessian, ClosedFormMultiplicities) {
  const auto table = d4_hessian_closed_form(PowPlus{6});
  const int mult[] = {6, 9, 16, 8, 12, 4, 9, 8};
  for (int i = 0; i < 8; ++i)
    EXPECT_EQ(table[i].multiplicity, mult[i]);
  // First nonzero expression written out by hand.
  const PowPlus f{6};
  const double first = 2 * eval(f, 0.5, 2) + 8 * eval(f, 0.0, 2) + 2 * eval(f, -0.5, 2) - 12 * eval(f, 0.5, 1) +
                       12 * eval(f, -0.5, 1);
  EXPECT_NEAR(table[1].value, first, 1e-12 * std::abs(first));
}

TEST(Hessian, PositiveForLargeDegree) {
  for (int k = 6; k <= 100; ++k)
    for (std::size_t i = 1; i < 8; ++i)
      EXPECT_GT(d4_hessian_closed_form(PowPlus{k})[i].value, 0.0) << "k=" << k << " i=" << i;
  bool some_zero = false;
  for (std::size_t i = 1; i < 8; ++i)
    some_zero = some_zero || std::abs(d4_hessian_closed_form(PowPlus{5})[i].value) < 1e-9;
  EXPECT_TRUE(some_zero);
}

TEST(Hessian, RotationInvariance) {
  const Code c = random_code(24, 17);
  const Code r = c.transformed(random_orthogonal(18));
  for (const auto& f : families()) {
    EXPECT_NEAR(energy(c, f), energy(r, f), 1e-8 * std::abs(energy(c, f)));
    EXPECT_NEAR(gradient_norm(c, f), gradient_norm(r, f), 1e-8 * std::max(1.0, gradient_norm(c, f)));
    const auto a = hessian_spectrum(c, f), b = hessian_spectrum(r, f);
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i)
      EXPECT_NEAR(a.eigenvalues[i], b.eigenvalues[i], 1e-8 * a.spectral_radius);
  }
}

TEST(Hessian, EigenspacesDoNotDependOnThePotential) {
  const Code d = d4();
  const TangentBasis b(d);
  const auto h1 = riemannian_hessian(d, PowPlus{6}, b);
  const auto h2 = riemannian_hessian(d, Riesz{1}, b);
  const auto eig = jacobi_eigen(h1);
  const double radius = eig.values.cwiseAbs().maxCoeff();
  Eigen::Index start = 0;
  while (start < eig.values.size()) {
    Eigen::Index end = start + 1;
    while (end < eig.values.size() && eig.values[end] - eig.values[end - 1] <= 1e-6 * radius)
      ++end;
    const Eigen::MatrixXd v = eig.vectors.middleCols(start, end - start);
    const Eigen::MatrixXd p = v * v.transpose();
    EXPECT_LT((p * h2 - h2 * p).norm(), 1e-6 * h2.norm()) << "cluster at " << eig.values[start];
    start = end;
  }
}

TEST(Jacobi, AgreesWithEigen) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  Eigen::MatrixXd a(30, 30);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j <= i; ++j)
      a(i, j) = a(j, i) = n(rng);
  const auto mine = jacobi_eigen(a);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
  for (int i = 0; i < 30; ++i)
    EXPECT_NEAR(mine.values[i], ref.eigenvalues()[i], 1e-12 * a.norm());
  EXPECT_LT((a * mine.vectors - mine.vectors * mine.values.asDiagonal()).norm(), 1e-11 * a.norm());
}

TEST(Descend, PerturbedD4ReturnsToD4) {
  const Code d = d4();
  const auto noise = random_tangent(d, 11);
  TangentVectors small(noise.size());
  for (std::size_t i = 0; i < noise.size(); ++i)
    small[i] = 1e-3 * noise[i] / noise[i].norm();
  const auto r = descend(detail::retract(d, small, 1.0), Riesz{1});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.energy, 668.0, 1e-6);
}

TEST(Descend, BeatsD4ForDegreeEight) {
  const auto r = descend(c_theta(ThetaParam{2.5}), PowPlus{8});
  EXPECT_LE(r.energy, 5064.96);
  EXPECT_LT(r.energy, 5065.5);
}

TEST(Descend, EnergyIsNonIncreasingUpToRounding) {
  DescentOptions opts;
  opts.record_energies = true;
  const auto r = descend(random_code(24, 21), Riesz{1}, opts);
  ASSERT_EQ(static_cast<int>(r.energies.size()), r.iterations + 1);
  const double floor = 64 * std::numeric_limits<double>::epsilon() * r.energies.front();
  for (std::size_t i = 1; i < r.energies.size(); ++i)
    EXPECT_LE(r.energies[i], r.energies[i - 1] + floor) << i;
  EXPECT_LT(r.energies.back(), r.energies.front());
}

TEST(Descend, RejectsBadOptions) {
  DescentOptions opts;
  opts.backtrack = 1.0;
  EXPECT_THROW(descend(d4(), Riesz{1}, opts), std::invalid_argument);
  const Code collide({Vec4::Unit(0), Vec4::Unit(0)});
  EXPECT_THROW(descend(collide, Riesz{1}), std::domain_error);
}

TEST(Descend, IterationCapIsFlagged) {
  DescentOptions opts;
  opts.max_iterations = 3;
  const auto r = descend(random_code(24, 1), Riesz{1}, opts);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_GE(r.gradient_norm, opts.gradient_tol);
}

TEST(Descend, StaysNearTheFamily) {
  DescentOptions opts;
  opts.initial_step = 1e-4;
  opts.max_step = 1e-4;
  opts.max_iterations = 100;
  const auto r = descend(c_theta(ThetaParam{1.0}), Riesz{1}, opts);
  EXPECT_EQ(r.iterations, 100);
  EXPECT_LT(distance_to_family(r.code), 1e-4);
}

TEST(Classify, Cases) {
  const auto refs = basin_references(Riesz{1});
  ASSERT_EQ(refs.size(), 2u);
  EXPECT_EQ(classify(d4(), refs), "D4");
  EXPECT_EQ(classify(d4().transformed(random_orthogonal(3)), refs), "D4");
  EXPECT_EQ(classify(c_theta(ThetaParam{2.537174}), refs), "C_theta");
  EXPECT_EQ(classify(random_code(24, 8), refs), "other");
}

TEST(Basin, CountsPartitionTrialsAndAreReproducible) {
  const auto a = basin_experiment(Riesz{1}, 12, 5);
  const auto b = basin_experiment(Riesz{1}, 12, 5);
  int total = 0;
  for (const auto& [label, n] : a.counts)
    total += n;
  EXPECT_EQ(total, 12);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
    EXPECT_EQ(a.runs[i].label, b.runs[i].label);
    EXPECT_EQ(a.runs[i].energy, b.runs[i].energy);
  }
  EXPECT_GT(a.fraction("C_theta"), 0.5);
  EXPECT_EQ(a.fraction("nothing"), 0.0);
  const Json j = to_json(a);
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["trials"], 12);
}

TEST(Basin, TrialSeedsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t)
    seen.insert(trial_seed(1, t));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(trial_seed(1, 0), trial_seed(2, 0));
}

TEST(CriticalPoints, RieszIndices) {
  const auto pts = theta_critical_points(Riesz{1});
  ASSERT_EQ(pts.size(), 6u);
  std::map<long, int> negatives; // by energy in units of 1e-3
  for (const auto& p : pts) {
    EXPECT_LT(p.gradient_norm, 1e-6) << p.theta;
    EXPECT_EQ(p.zero_count, 6) << p.theta;
    negatives[std::lround(p.energy * 1000)] = p.negative_count;
  }
  ASSERT_EQ(negatives.size(), 3u);
  EXPECT_EQ(negatives.at(668192), 0);
  EXPECT_EQ(negatives.at(721780), 22);
  EXPECT_EQ(negatives.at(926322), 36);
}

TEST(FamilyResidual, GradientIsTangentToTheFamilyOrbit) {
  EXPECT_LT(family_gradient_residual(1.0, Riesz{1}), 1e-8);
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 2 * kPi);
  for (const Potential& f : {Potential{PowPlus{8}}, Potential{Exp{6}}})
    for (int i = 0; i < 10; ++i) {
      double t = u(rng);
      while (!theta_valid(t))
        t = u(rng);
      EXPECT_LT(family_gradient_residual(t, f), 1e-8) << to_string(f) << " theta=" << t;
    }
  const double star = refine_theta_minimum(Riesz{1}, 2.52, 2.55, 1e-12);
  EXPECT_EQ(family_gradient_residual(star, Riesz{1}), 0.0);
}

TEST(Io, SpectrumCsv) {
  const auto csv = to_csv(hessian_spectrum(d4(), Riesz{1}));
  EXPECT_EQ(csv.substr(0, 11), "eigenvalue\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 73);
}
