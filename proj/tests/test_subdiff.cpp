#include <gtest/gtest.h>

#include <cmath>

#include "fno/calculus.hpp"
#include "fno/sampling.hpp"
#include "fno/subdiff.hpp"
#include "support/functions.hpp"

using namespace fno;
namespace ft = fno::testing;

namespace {

std::vector<Point> line(double lo, double hi, double step) {
  std::vector<Point> out;
  for (double z = lo; z <= hi + 1e-12; z += step) out.push_back({z});
  return out;
}

FuzzyVector crisp_vec(GridPtr g, double v) {
  const double a[] = {v};
  return FuzzyVector({make_crisp(a, std::move(g))});
}

FuzzyNCell curves(const GridPtr& g, double (*lo)(double), double (*hi)(double)) {
  std::vector<double> l, h;
  for (double r : g->levels()) {
    l.push_back(lo(r));
    h.push_back(hi(r));
  }
  return FuzzyNCell::from_endpoints(g, 1, l, h);
}

std::vector<Point> kink_samples() {
  const double t[] = {0.0};
  return default_samples(ft::interval_box(-2, 2), t);
}

}  // namespace

TEST(VerifySubgradient, ZeroAtTheKink) {
  auto g = LevelGrid::uniform();
  const double t[] = {0.0};
  auto z = kink_samples();
  auto cert = verify_subgradient(ft::kink_example(g), t, crisp_vec(g, 0), z);
  EXPECT_EQ(cert.status, Status::Verified);
  EXPECT_EQ(cert.samples_used, z.size());
  EXPECT_FALSE(cert.witness);
}

TEST(VerifySubgradient, ThreeIsRefutedAtOne) {
  auto g = LevelGrid::uniform();
  const double t[] = {0.0};
  const std::vector<Point> z = {{-1.0}, {1.0}, {2.0}};
  auto f = ft::kink_example(g);
  auto cert = verify_subgradient(f, t, crisp_vec(g, 3), z);
  ASSERT_EQ(cert.status, Status::Refuted);
  ASSERT_TRUE(cert.witness && cert.witness->violation);
  EXPECT_EQ(cert.witness->point, Point{1.0});
  EXPECT_EQ(cert.witness->violation->level, 0u);
  EXPECT_EQ(cert.witness->violation->side, Endpoint::Lower);
  EXPECT_NEAR(cert.witness->lhs, 0.0, 1e-15);
  EXPECT_EQ(cert.witness->rhs, 3.0);
  // Reproduce: F(1) (-)g F(0) has levels [r, 2-r] and 3*1 = 3.
  auto lhs = g_diff(f(cert.witness->point), f(t));
  EXPECT_NEAR(lhs.lo(0, 0), 0.0, 1e-15);
  EXPECT_LT(lhs.lo(0, 0), 3.0);
}

TEST(VerifySubgradient, GradientOfConvexDifferentiable) {
  auto g = LevelGrid::uniform(51);
  auto f = ft::kkt_objective(g);
  for (double x : {-1.0, 0.0, 0.5, 1.5}) {
    const double t[] = {x};
    auto z = default_samples(f.domain(), t);
    EXPECT_EQ(verify_subgradient(f, t, gradient(f, t), z).status, Status::Verified) << x;
  }
}

TEST(VerifySubgradient, DimensionAndDomainErrors) {
  auto g = LevelGrid::uniform(11);
  const double t[] = {0.0};
  const std::vector<Point> outside = {{5.0}};
  try {
    verify_subgradient(ft::kink_example(g), t, crisp_vec(g, 0), outside);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
  }
  EXPECT_THROW(verify_subgradient(ft::kink_example(g), t, crisp_vec(LevelGrid::uniform(11), 0), line(-1, 1, 1)),
               Error);
}

TEST(SubdiffBox, KinkReproducesTheBox) {
  auto g = LevelGrid::uniform();
  auto box = subdiff_box_1d(ft::kink_example(g), 0.0, kink_samples());
  EXPECT_TRUE(box.nonempty);
  EXPECT_TRUE(box.has_legal_member);
  EXPECT_FALSE(box.half_bounded);
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double r = (*g)[k];
    EXPECT_NEAR(box.vlo_min[k], r - 2, 1e-9);
    EXPECT_NEAR(box.vlo_max[k], r, 1e-9);
    EXPECT_NEAR(box.vhi_min[k], -r, 1e-9);
    EXPECT_NEAR(box.vhi_max[k], 2 - r, 1e-9);
  }
  EXPECT_TRUE(box.contains(make_zero(1, g)));
  EXPECT_TRUE(box.contains(curves(g, [](double r) { return r - 1; }, [](double r) { return 1 - r; })));
  EXPECT_FALSE(box.contains(make_triangular(0, 1, 3, g)));
  auto member = box.legal_member();
  ASSERT_TRUE(member);
  EXPECT_TRUE(box.contains(*member));
}

TEST(SubdiffBox, AbsoluteValueMatchesBruteForce) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::endpoints_1d(g, [](double, std::span<const double> t) { return std::abs(t[0]); },
                            [](double, std::span<const double> t) { return std::abs(t[0]); },
                            ft::interval_box(-2, 2));
  auto z = line(-2, 2, 0.125);
  auto box = subdiff_box_1d(f, 0.0, z);
  for (std::size_t k = 0; k < g->size(); ++k) {
    EXPECT_NEAR(box.vlo_min[k], -1, 1e-12);
    EXPECT_NEAR(box.vhi_max[k], 1, 1e-12);
  }
  const double t[] = {0.0};
  for (double v = -2; v <= 2; v += 0.125) {
    const bool member = verify_subgradient(f, t, crisp_vec(g, v), z).verified();
    EXPECT_EQ(member, box.contains(crisp_vec(g, v)[0])) << "v=" << v;
    EXPECT_EQ(member, std::abs(v) <= 1) << "v=" << v;
  }
}

TEST(SubdiffBox, DifferentiablePointDegenerates) {
  auto g = LevelGrid::uniform(21);
  auto f = ft::kkt_objective(g);
  std::vector<Point> z;
  for (int q = 1; q <= 10; ++q) {
    z.push_back({1.0 + std::ldexp(1.0, -10 - q)});
    z.push_back({1.0 - std::ldexp(1.0, -10 - q)});
  }
  auto box = subdiff_box_1d(f, 1.0, z);
  for (std::size_t k = 0; k < g->size(); ++k) {
    // Quotients are z + 1 on both endpoints; the closest samples pin 2.
    EXPECT_NEAR(box.vlo_min[k], 2, 1e-6);
    EXPECT_NEAR(box.vlo_max[k], 2, 1e-6);
    EXPECT_NEAR(box.vhi_min[k], 2, 1e-6);
    EXPECT_NEAR(box.vhi_max[k], 2, 1e-6);
  }
  const double t[] = {1.0};
  EXPECT_TRUE(verify_subgradient(f, t, crisp_vec(g, 2), z).verified());
  EXPECT_FALSE(verify_subgradient(f, t, crisp_vec(g, 2.01), z).verified());
  EXPECT_FALSE(verify_subgradient(f, t, crisp_vec(g, 1.99), z).verified());
}

TEST(SubdiffBox, OneSidedSamples) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::kink_example(g);
  auto right = line(0.5, 2, 0.5);
  try {
    subdiff_box_1d(f, 0.0, right);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptySampleSide);
  }
  auto box = subdiff_box_1d(f, 0.0, right, true);
  EXPECT_TRUE(box.half_bounded);
  EXPECT_TRUE(std::isinf(box.vlo_min[0]));
  EXPECT_FALSE(box.legal_member());
}

TEST(SubdiffBox, CsvHeaderAndRows) {
  auto g = LevelGrid::uniform(3);
  auto box = subdiff_box_1d(ft::kink_example(g), 0.0, line(-1, 1, 0.5));
  const std::string csv = to_csv(box);
  EXPECT_EQ(csv.rfind("r,cell,vlo_min,vlo_max,vhi_min,vhi_max\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("\n0,0,-2,0,0,2\n"), std::string::npos) << csv;
}

TEST(SubdiffAlgebra, ScaleExamples) {
  auto g = LevelGrid::uniform(51);
  auto f = ft::kink_example(g);
  const double t[] = {0.0};
  auto z = kink_samples();
  auto v0 = crisp_vec(g, 0);
  EXPECT_EQ(subdiff_scale_check(f, t, v0, 1.0, z).status, verify_subgradient(f, t, v0, z).status);
  EXPECT_EQ(subdiff_scale_check(f, t, v0, 2.0, z).status, Status::Verified);
  auto corner = FuzzyVector({curves(g, [](double r) { return r; }, [](double r) { return 2 - r; })});
  EXPECT_EQ(subdiff_scale_check(f, t, corner, 3.0, z).status, Status::Verified);
  EXPECT_THROW(subdiff_scale_check(f, t, crisp_vec(g, 3), 2.0, z), Error);
  EXPECT_THROW(subdiff_scale_check(f, t, v0, 0.0, z), Error);
}

TEST(SubdiffAlgebra, SumExamples) {
  auto g = LevelGrid::uniform(51);
  const double t[] = {0.0};
  auto z = kink_samples();
  auto f = ft::kink_example(g);
  auto zero_fn = FuzzyFunction::constant(make_zero(1, g), 1, f.domain());
  auto v0 = crisp_vec(g, 0);
  EXPECT_EQ(subdiff_sum_check(f, zero_fn, t, v0, v0, z).status, Status::Verified);
  EXPECT_EQ(subdiff_sum_check(f, f, t, v0, v0, z).status, Status::Verified);

  auto p = ft::kkt_problem(g);
  const double lambda[] = {1.0, 0.0};
  auto lg1 = scale(lambda[0], p.constraints[0]);
  // G1 is affine in t, so 0 is not a subgradient of it; take its gradient.
  auto vg = gradient(lg1, t);
  auto vf = gradient(p.objective, t);
  EXPECT_EQ(subdiff_sum_check(p.objective, lg1, t, vf, vg, z).status, Status::Verified);
}

TEST(SubdiffAlgebra, SumWithOpposedLengthsIsInconclusive) {
  auto g = LevelGrid::uniform(11);
  auto box = ft::interval_box(-1, 1);
  // F widens away from 0 and G narrows, so the sum rule for g-differences
  // has no hypothesis to stand on.
  auto f = ft::endpoints_1d(g, [](double r, std::span<const double>) { return r - 1; },
                            [](double r, std::span<const double> t) { return 1 - r + std::abs(t[0]); }, box);
  auto gg = ft::endpoints_1d(g, [](double, std::span<const double> t) { return 2 * std::abs(t[0]); },
                             [](double, std::span<const double> t) { return std::abs(t[0]) + 1; }, box);
  const double t[] = {0.0};
  auto z = line(-1, 1, 0.25);
  auto v0 = crisp_vec(g, 0);
  auto cert = subdiff_sum_check(f, gg, t, v0, v0, z);
  EXPECT_EQ(cert.status, Status::Inconclusive);
  ASSERT_TRUE(cert.witness);
  EXPECT_EQ(cert.witness->point, Point{-1.0});
}

TEST(SubdiffAlgebra, ConvexityExamples) {
  auto g = LevelGrid::uniform(51);
  auto f = ft::kink_example(g);
  const double t[] = {0.0};
  auto z = kink_samples();
  auto v1 = FuzzyVector({curves(g, [](double r) { return r; }, [](double r) { return 2 - r; })});
  auto v2 = FuzzyVector({curves(g, [](double r) { return r - 2; }, [](double r) { return -r; })});
  EXPECT_EQ(subdiff_convexity_check(f, t, v1, v2, 0.5, z).status, Status::Verified);
  EXPECT_EQ(subdiff_convexity_check(f, t, v1, v2, 0.0, z).status, verify_subgradient(f, t, v2, z).status);
  EXPECT_EQ(subdiff_convexity_check(f, t, v1, v2, 1.0, z).status, verify_subgradient(f, t, v1, z).status);
  EXPECT_THROW(subdiff_convexity_check(f, t, v1, v2, 1.5, z), Error);
}
