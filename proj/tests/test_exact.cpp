#include "cell24/constructions.hpp"
#include "cell24/energy.hpp"
#include "cell24/exact/proposition.hpp"
#include "cell24/exact/q7.hpp"
#include "cell24/exact/sturm.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace cell24;
using namespace cell24::exact;

namespace {

RatPoly linear(long num, long den) { return RatPoly{-num, den}; } // den u - num

} // namespace

TEST(RatPoly, Arithmetic) {
  const RatPoly a{1, 1}; // 1 + u
  const RatPoly b{-1, 1};
  EXPECT_EQ(a * b, (RatPoly{-1, 0, 1}));
  EXPECT_EQ(a - a, RatPoly{});
  EXPECT_TRUE((a - a).is_zero());
  EXPECT_EQ(a.pow(3), (RatPoly{1, 3, 3, 1}));
  EXPECT_EQ(a.pow(0), (RatPoly{1}));
  EXPECT_EQ(k3_sextic().derivative(), (RatPoly{0, 6, -36, -24, 0, 6}));
  EXPECT_EQ(k3_sextic().to_string(), "u^6 - 6*u^4 - 12*u^3 + 3*u^2 - 2");
}

TEST(RatPoly, DivmodAndGcd) {
  const RatPoly u2m1{-1, 0, 1}, sq{1, -2, 1};
  EXPECT_EQ(gcd(u2m1, sq), (RatPoly{-1, 1}));
  const auto [q, r] = divmod(RatPoly{1, 0, 0, 2}, RatPoly{1, 1});
  EXPECT_EQ((q * RatPoly{1, 1} + r), (RatPoly{1, 0, 0, 2}));
  EXPECT_LT(r.degree(), 1);
  EXPECT_THROW(divmod(u2m1, RatPoly{}), std::domain_error);
}

TEST(RatPoly, SquareFreePart) {
  const RatPoly p = RatPoly{-2, 1}.pow(3) * RatPoly{1, 1};
  EXPECT_EQ(square_free_part(p).monic(), (RatPoly{-2, -1, 1}));
}

TEST(RatPoly, EvalRationalAndDouble) {
  const RatPoly s = k3_sextic();
  EXPECT_EQ(s.eval(BigRat(2)), BigRat(64 - 96 - 96 + 12 - 2));
  EXPECT_DOUBLE_EQ(s.eval(2.0), -118.0);
  EXPECT_EQ(s.eval(make_rat(1, 2)), BigRat(1, 64) - BigRat(6, 16) - BigRat(12, 8) + BigRat(3, 4) - 2);
}

TEST(Sturm, SexticHasTwoRealRoots) {
  const auto iso = sturm_real_roots(k3_sextic());
  ASSERT_EQ(iso.count, 2);
  ASSERT_EQ(iso.intervals.size(), 2u);
  const double expected[] = {-0.5117111968, 3.09593664};
  for (int i = 0; i < 2; ++i) {
    const double r = refine_root(k3_sextic(), iso.intervals[i], 1e-14);
    EXPECT_NEAR(r, expected[i], 1e-8);
    EXPECT_LT(iso.intervals[i].lo, BigRat(expected[i]));
    EXPECT_GE(iso.intervals[i].hi, BigRat(expected[i]));
  }
}

TEST(Sturm, EdgeCases) {
  EXPECT_EQ(sturm_real_roots(RatPoly{1, 0, 1}).count, 0);
  EXPECT_EQ(sturm_real_roots(RatPoly{5}).count, 0);
  EXPECT_EQ(sturm_real_roots(RatPoly{-1, 0, 1}.pow(4)).count, 2);
  EXPECT_THROW(sturm_real_roots(RatPoly{}), std::invalid_argument);
}

// Products of linear factors with known rational roots (some repeated) and
// positive-definite quadratics: the distinct root count is known exactly.
TEST(Sturm, MatchesConstructedRootSets) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4), nlin(0, 4), nquad(0, 2), mult(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    RatPoly p{static_cast<long>(den(rng)) * (trial % 2 ? -1 : 1)};
    std::set<BigRat> roots;
    const int lin = nlin(rng);
    for (int i = 0; i < lin; ++i) {
      const long n = num(rng), d = den(rng);
      BigRat r(n, d);
      r.canonicalize();
      roots.insert(r);
      p = p * linear(n, d).pow(mult(rng));
    }
    const int quads = nquad(rng);
    for (int i = 0; i < quads; ++i) {
      const long b = num(rng);
      const long c = b * b / 4 + 1 + den(rng); // b^2 - 4c < 0
      p = p * RatPoly{c, b, 1};
    }
    if (p.degree() > 8)
      continue;
    const auto iso = sturm_real_roots(p);
    ASSERT_EQ(iso.count, static_cast<int>(roots.size())) << p.to_string();
    ASSERT_EQ(iso.intervals.size(), roots.size());
    auto it = roots.begin();
    for (const auto& iv : iso.intervals) {
      EXPECT_LT(iv.lo, *it) << p.to_string();
      EXPECT_GE(iv.hi, *it) << p.to_string();
      ++it;
    }
  }
}

// Random integer polynomials against a dense double-precision sign scan.
TEST(Sturm, MatchesNumericSignChangesOnRandomPolynomials) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coeff(-5, 5), deg(1, 8);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = deg(rng);
    std::vector<BigRat> c(d + 1);
    for (auto& x : c)
      x = coeff(rng);
    if (c.back() == 0)
      c.back() = 1;
    const RatPoly p(c);
    // Roots lie within 1 + max|c_i| / |c_d| <= 6.
    const int n = 400000;
    int changes = 0, last = 0;
    double min_abs = 1e300;
    for (int i = 0; i <= n; ++i) {
      const double x = -6.5 + 13.0 * i / n;
      const double v = p.eval(x);
      min_abs = std::min(min_abs, std::abs(v));
      const int s = (v > 0) - (v < 0);
      if (s != 0) {
        changes += last != 0 && s != last;
        last = s;
      }
    }
    // Repeated or near-tangent roots are invisible to a sign scan; the
    // constructed-root test covers them.
    if (gcd(p, p.derivative()).degree() > 0)
      continue;
    const auto iso = sturm_real_roots(p);
    const auto sf = sturm_real_roots(p * p); // squaring keeps the distinct roots
    EXPECT_EQ(iso.count, sf.count);
    if (iso.count == changes) {
      ++compared;
    } else {
      EXPECT_LT(min_abs, 1e-3) << p.to_string() << " sturm=" << iso.count << " scan=" << changes;
    }
  }
  EXPECT_GT(compared, 80);
}

TEST(Sturm, RefineRoot) {
  EXPECT_NEAR(refine_root(RatPoly{-1, 2}, {BigRat(0), BigRat(1)}, 1e-12), 0.5, 1e-15);
  EXPECT_NEAR(refine_root(RatPoly{-2, 0, 1}, {BigRat(1), BigRat(2)}, 1e-14), std::sqrt(2.0), 1e-13);
  EXPECT_THROW(refine_root(RatPoly{1, 0, 1}, {BigRat(-1), BigRat(1)}, 1e-12), std::invalid_argument);
  EXPECT_THROW(refine_root(RatPoly{-1, 2}, {BigRat(0), BigRat(1)}, 0.0), std::invalid_argument);
  const auto iv = refine_root_interval(RatPoly{-2, 0, 1}, {BigRat(1), BigRat(2)}, BigRat(1, 1 << 20));
  EXPECT_LT(iv.lo * iv.lo, 2);
  EXPECT_GT(iv.hi * iv.hi, 2);
}

TEST(AttainsPositive, Cases) {
  const RatPoly q{1, 0, 1};
  EXPECT_TRUE(attains_positive(q));
  EXPECT_FALSE(attains_positive(-q));
  EXPECT_FALSE(attains_positive(BigRat(-18) * (k3_sextic() * k3_sextic())));
  EXPECT_FALSE(attains_positive(RatPoly{}));
  EXPECT_TRUE(attains_positive(RatPoly{0, 0, 0, -1}));
  // -(u^2 - 1)^2 + tiny bump: positive only near the roots' midpoint.
  const RatPoly bump = -(RatPoly{-1, 0, 1} * RatPoly{-1, 0, 1}) + RatPoly(std::vector<BigRat>{make_rat(1, 100)});
  EXPECT_TRUE(attains_positive(bump));
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> coeff(-4, 4);
  for (int i = 0; i < 20; ++i) {
    const RatPoly p{coeff(rng), coeff(rng), coeff(rng), coeff(rng), coeff(rng)};
    if (p.is_zero())
      continue;
    EXPECT_EQ(attains_positive(p), attains_positive(BigRat(3, 7) * p));
    // Sign flips only change the answer for definite polynomials.
    if (!attains_positive(p)) {
      EXPECT_TRUE(attains_positive(-p));
    }
  }
}

TEST(Q7, SignAndArithmetic) {
  EXPECT_EQ((Q7{3, -1}).sign(), 1);  // 3 > sqrt 7
  EXPECT_EQ((Q7{2, -1}).sign(), -1); // 2 < sqrt 7
  EXPECT_EQ((Q7{-3, 1}).sign(), -1);
  EXPECT_EQ((Q7{-2, 1}).sign(), 1);
  EXPECT_EQ((Q7{0, 0}).sign(), 0);
  EXPECT_EQ((Q7{-1, 0}).sign(), -1);
  const Q7 x{make_rat(2, 3), make_rat(1, 3)};
  EXPECT_NEAR(x.pow(5).approx(), std::pow((2 + std::sqrt(7.0)) / 3, 5), 1e-12);
  const Q7 y = x * Q7{make_rat(2, 3), make_rat(-1, 3)};
  EXPECT_EQ(y.a, BigRat(-1, 3));
  EXPECT_EQ(y.b, 0);
}

TEST(EnergyDifference, VanishesForSmallDegrees) {
  for (int k = 0; k <= 2; ++k)
    EXPECT_TRUE(energy_diff_rational(k).is_zero()) << k;
}

TEST(EnergyDifference, MatchesFloatingPointClosedForms) {
  for (int k : {3, 4, 8, 13})
    for (double theta : {0.3, 1.1, 2.2, 4.0, 5.5}) {
      const double u = std::tan(theta / 2);
      // Positive when C_theta has lower energy than D4.
      const double expected = energy(d4(), PowPlus{k}) - energy_theta_closed(theta, PowPlus{k});
      EXPECT_NEAR(energy_diff_rational(k).eval(u), expected, 1e-9 * std::max(1.0, std::abs(expected)))
          << "k=" << k << " theta=" << theta;
    }
}

TEST(EnergyDifference, D4ExactEnergy) {
  EXPECT_EQ(energy_d4_pow(0), BigRat(552));
  EXPECT_EQ(energy_d4_pow(6), BigRat(24 * 0 + 192) * (BigRat(729, 64) + BigRat(1, 64)) + 144);
  for (int k = 0; k <= 12; ++k)
    EXPECT_NEAR(energy_d4_pow(k).get_d(), energy(d4(), PowPlus{k}), 1e-9 * energy_d4_pow(k).get_d());
}

TEST(Proposition, SmallDegrees) {
  for (int k = 0; k <= 20; ++k)
    EXPECT_EQ(proposition_check(k), k >= 8 && k <= 13) << k;
  EXPECT_FALSE(proposition_check(40));
}

TEST(Proposition, RowRecordsDegree) {
  const auto row = proposition_row(8);
  EXPECT_TRUE(row.attains_positive);
  EXPECT_GT(row.numerator_degree, 0);
  EXPECT_LE(row.numerator_degree, 4 * 8);
  EXPECT_GE(row.wall_time_ms, 0.0);
}

TEST(TailCriterion, Threshold) {
  EXPECT_TRUE(tail_criterion(75));
  EXPECT_FALSE(tail_criterion(74));
  EXPECT_FALSE(tail_criterion(10));
  for (int k = 75; k <= 200; ++k)
    EXPECT_TRUE(tail_criterion(k)) << k;
  EXPECT_TRUE(tail_induction_step_holds());
  EXPECT_EQ(first_tail_k(200), 75);
}

TEST(TailCriterion, FloatingPointAgreement) {
  for (int k : {20, 60, 74, 75, 90}) {
    const double lhs = 18 * std::pow((2 + std::sqrt(7.0)) / 3, k);
    const double rhs = energy_d4_pow(k).get_d();
    EXPECT_EQ(tail_criterion(k), lhs > rhs) << k;
  }
}

TEST(K3Identity, HoldsExactly) {
  EXPECT_TRUE(verify_k3_identity());
  EXPECT_FALSE(verify_k3_identity(k3_sextic() + RatPoly(std::vector<BigRat>{make_rat(1, 1000)})));
  const RatFn d = energy_diff_rational(3);
  const BigRat s = k3_sextic().eval(BigRat(2));
  EXPECT_EQ(d.eval(BigRat(2)), BigRat(-18) * s * s / BigRat(5 * 5 * 5 * 5 * 5 * 5));
}

TEST(ThreeDesign, SexticRoots) {
  const auto r = three_design_roots();
  ASSERT_EQ(r.real_root_count, 2);
  ASSERT_EQ(r.roots.size(), 2u);
  EXPECT_NEAR(r.roots[0].u, -0.5117111968, 1e-9);
  EXPECT_NEAR(r.roots[1].u, 3.09593664, 1e-7);
  EXPECT_NEAR(r.roots[0].sin_theta, -0.81105023, 1e-7);
  EXPECT_NEAR(r.roots[0].cos_theta, 0.5849765162, 1e-9);
  for (const auto& x : r.roots)
    EXPECT_NEAR(x.cube_sum, -1.0 / 3.0, 1e-12);
  EXPECT_TRUE(r.same_code);
  EXPECT_NEAR(r.cubic_root, -0.226073713789, 1e-11);
  EXPECT_NEAR(3 * std::pow(r.cubic_root, 3) - 9 * r.cubic_root - 2, 0.0, 1e-13);
}
