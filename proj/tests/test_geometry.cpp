#include "cell24/constructions.hpp"
#include "cell24/geometry.hpp"
#include "cell24/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cell24;

namespace {

Code pair_code(const Vec4& a, const Vec4& b) { return Code({a, b}); }

} // namespace

TEST(Geometry, PointsAreNormalizedOnConstruction) {
  const Code c({Vec4(3, 0, 0, 4), Vec4(1, 1, 1, 1)});
  EXPECT_TRUE(c.is_unit());
  EXPECT_NEAR(c[0][0], 0.6, 1e-15);
  EXPECT_NEAR(c[1][2], 0.5, 1e-15);
}

TEST(Geometry, ValidityRejectsCoincidentPoints) {
  EXPECT_FALSE(pair_code(Vec4::Unit(0), Vec4::Unit(0)).is_valid());
  EXPECT_TRUE(pair_code(Vec4::Unit(0), Vec4::Unit(1)).is_valid());
}

TEST(Geometry, GramMatrixOfD4) {
  const auto g = gram_matrix(d4());
  ASSERT_EQ(g.rows(), 24);
  for (int i = 0; i < 24; ++i) {
    EXPECT_NEAR(g(i, i), 1.0, 1e-15);
    for (int j = 0; j < 24; ++j) {
      EXPECT_EQ(g(i, j), g(j, i));
      if (i == j)
        continue;
      const double v = g(i, j);
      const double nearest = std::round(2 * v) / 2;
      EXPECT_NEAR(v, nearest, 1e-12);
      EXPECT_GE(nearest, -1.0);
      EXPECT_LE(nearest, 0.5);
    }
  }
}

TEST(Geometry, GramMatrixOfOrthogonalPair) {
  const auto g = gram_matrix(pair_code(Vec4::Unit(0), Vec4::Unit(1)));
  EXPECT_EQ(g(0, 1), 0.0);
  EXPECT_EQ(g(1, 0), 0.0);
}

TEST(Geometry, TMax) {
  EXPECT_NEAR(t_max(d4()), 0.5, 1e-12);
  EXPECT_NEAR(t_max(c_theta(ThetaParam{2.56092})), 0.54858, 1e-4);
  EXPECT_DOUBLE_EQ(t_max(pair_code(Vec4::Unit(0), -Vec4::Unit(0))), -1.0);
  EXPECT_THROW(t_max(Code({Vec4::Unit(0)})), std::invalid_argument);
}

TEST(Geometry, InnerProductMultisetOfD4) {
  const auto s = inner_product_multiset(d4());
  ASSERT_EQ(s.entries.size(), 4u);
  const double values[] = {-1.0, -0.5, 0.0, 0.5};
  const int mult[] = {24, 192, 144, 192};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(s.entries[i].value, values[i], 1e-12);
    EXPECT_EQ(s.entries[i].multiplicity, mult[i]);
  }
  EXPECT_EQ(s.total(), 552);
  EXPECT_FALSE(s.ambiguous);
}

TEST(Geometry, InnerProductMultisetOfCThetaHasElevenClusters) {
  const auto s = inner_product_multiset(c_theta(ThetaParam{1.0}));
  ASSERT_EQ(s.entries.size(), 11u);
  std::vector<int> mult;
  for (const auto& e : s.entries)
    mult.push_back(e.multiplicity);
  std::sort(mult.begin(), mult.end());
  EXPECT_EQ(mult, (std::vector<int>{18, 18, 36, 36, 36, 36, 72, 72, 72, 72, 84}));
  EXPECT_EQ(s.total(), 552);
}

TEST(Geometry, InnerProductMultisetOfPair) {
  const auto s = inner_product_multiset(pair_code(Vec4::Unit(0), Vec4::Unit(1)));
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].value, 0.0);
  EXPECT_EQ(s.entries[0].multiplicity, 2);
}

TEST(Geometry, AmbiguousClusteringIsFlagged) {
  const auto s = cluster_sorted({0.0, 1.5e-9, 3.2e-9}, 1e-9);
  EXPECT_TRUE(s.ambiguous);
  EXPECT_THROW(cluster_sorted({0.0}, 0.0), std::invalid_argument);
}

TEST(Geometry, TMaxIsLargestClusterValue) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Code c = random_code(24, seed);
    EXPECT_NEAR(t_max(c), inner_product_multiset(c).entries.back().value, 1e-12);
  }
}

TEST(Geometry, HopfProjectionOfHexagons) {
  const auto hs = hexagons();
  for (const auto& p : hopf_project(Code({hs[0].points.begin(), hs[0].points.end()}))) {
    EXPECT_NEAR(p.y0, 0.0, 1e-15);
    EXPECT_NEAR(p.y1, 0.0, 1e-15);
    EXPECT_NEAR(p.y2, 1.0, 1e-15);
  }
  // Ratio convention: z = w1/w2 with (2x, 2y, |z|^2 - 1)/(|z|^2 + 1).
  const Vec4 x = from_complex({0.6, 0.0}, {0.0, 0.8});
  const auto y = hopf_point(x);
  const Complex z = Complex(0.6, 0.0) / Complex(0.0, 0.8);
  const double n2 = std::norm(z);
  EXPECT_NEAR(y.y0, 2 * z.real() / (n2 + 1), 1e-15);
  EXPECT_NEAR(y.y1, 2 * z.imag() / (n2 + 1), 1e-15);
  EXPECT_NEAR(y.y2, (n2 - 1) / (n2 + 1), 1e-15);
}

TEST(Geometry, HopfImageOfHexDesignIsATetrahedron) {
  const Complex a1 = std::polar(1.0, 0.3), a2 = std::polar(1.0, 1.7), a3 = std::polar(1.0, -2.2);
  const Code rotated = hex_design_units(1.0, a1, a2, a3);
  const auto img = hopf_project(rotated);
  const auto base = hopf_project(d4());
  std::vector<SpherePoint3> distinct;
  for (std::size_t i = 0; i < img.size(); ++i) {
    EXPECT_NEAR(img[i].y0, base[i].y0, 1e-12);
    EXPECT_NEAR(img[i].y1, base[i].y1, 1e-12);
    EXPECT_NEAR(img[i].y2, base[i].y2, 1e-12);
    EXPECT_NEAR(img[i].dot(img[i]), 1.0, 1e-12);
    bool seen = false;
    for (const auto& d : distinct)
      seen = seen || d.dot(img[i]) > 1 - 1e-9;
    if (!seen)
      distinct.push_back(img[i]);
  }
  ASSERT_EQ(distinct.size(), 4u);
  for (std::size_t a = 0; a < 4; ++a) {
    int count = 0;
    for (const auto& p : img)
      count += p.dot(distinct[a]) > 1 - 1e-9;
    EXPECT_EQ(count, 6);
    for (std::size_t b = a + 1; b < 4; ++b)
      EXPECT_NEAR(distinct[a].dot(distinct[b]), -1.0 / 3.0, 1e-9);
  }
}

TEST(Geometry, RandomCodeIsUnitAndDeterministic) {
  const Code a = random_code(24, 42), b = random_code(24, 42), c = random_code(24, 43);
  EXPECT_EQ(a.size(), 24u);
  EXPECT_TRUE(a.is_unit(1e-12));
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i], b[i]);
  EXPECT_NE(a[0], c[0]);
  EXPECT_THROW(random_code(0, 1), std::invalid_argument);
}

TEST(Geometry, RandomCodeMeanIsSmall) {
  const Code c = random_code(10000, 7);
  Vec4 mean = Vec4::Zero();
  for (const auto& p : c)
    mean += p;
  mean /= 10000.0;
  EXPECT_LT(mean.norm(), 0.05);
}

TEST(Geometry, RandomOrthogonalIsOrthogonal) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Mat4 q = random_orthogonal(s);
    EXPECT_LT((q.transpose() * q - Mat4::Identity()).norm(), 1e-13);
  }
}

TEST(Geometry, SpectrumDistance) {
  const Code d = d4();
  EXPECT_EQ(spectrum_distance(d, d), 0.0);
  EXPECT_LT(spectrum_distance(d, d.transformed(random_orthogonal(3))), 1e-12);
  EXPECT_GT(spectrum_distance(d, c_theta(ThetaParam{1.0})), 0.01);
  EXPECT_THROW(spectrum_distance(d, random_code(5, 1)), std::invalid_argument);
}

TEST(Geometry, SpectrumDistanceIsAPseudometric) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Code a = random_code(24, 3 * s), b = random_code(24, 3 * s + 1), c = random_code(24, 3 * s + 2);
    EXPECT_DOUBLE_EQ(spectrum_distance(a, b), spectrum_distance(b, a));
    EXPECT_LE(spectrum_distance(a, c), spectrum_distance(a, b) + spectrum_distance(b, c) + 1e-15);
    EXPECT_LT(spectrum_distance(a, a.transformed(random_orthogonal(s))), 1e-12);
  }
}

TEST(Geometry, CodeJsonRoundTripIsExact) {
  const Code c = random_code(24, 99);
  const Json j = to_json(c);
  const Code back = code_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.label(), c.label());
  for (std::size_t i = 0; i < c.size(); ++i)
    EXPECT_EQ(back[i], c[i]);
  EXPECT_THROW(code_from_json(Json::parse(R"({"points": [[1, 2]]})")), std::invalid_argument);
}

TEST(Geometry, GramSpectrumCsv) {
  const auto csv = to_csv(inner_product_multiset(d4()));
  EXPECT_EQ(csv.substr(0, 19), "value,multiplicity\n");
  EXPECT_NE(csv.find(",144\n"), std::string::npos);
}
