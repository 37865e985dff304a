#include <gtest/gtest.h>

#include <cmath>

#include "fno/funcspace.hpp"
#include "support/functions.hpp"

using namespace fno;
namespace ft = fno::testing;

TEST(EvalFunction, KktObjectiveAtTwo) {
  auto g = LevelGrid::uniform();
  const double t[] = {2.0};
  auto u = eval_function(ft::kkt_objective(g), t);
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double r = (*g)[k];
    EXPECT_NEAR(u.lo(0, k), 3 + r, 1e-14);
    EXPECT_NEAR(u.hi(0, k), 5 - r, 1e-14);
  }
}

TEST(EvalFunction, TriangularExampleAtZero) {
  auto g = LevelGrid::uniform();
  const double t[] = {0.0};
  EXPECT_LT(distance(eval_function(ft::triangular_example(g), t), make_triangular(-1, 0, 1, g)), 1e-15);
}

TEST(EvalFunction, ConstantCrisp) {
  auto g = LevelGrid::uniform(11);
  const double c[] = {1.25};
  auto f = ft::endpoints_1d(g, [](double, std::span<const double>) { return 1.25; },
                            [](double, std::span<const double>) { return 1.25; });
  const double t[] = {-7.0};
  EXPECT_EQ(f(t), make_crisp(c, g));
}

TEST(EvalFunction, FromExpressionsMatchesLambdas) {
  auto g = LevelGrid::uniform(21);
  auto f = FuzzyFunction::from_expressions(g, 1, {ExprProgram::parse("t^2 - 1 + r", 1)},
                                           {ExprProgram::parse("t^2 + 1 - r", 1)});
  for (double x : {-1.5, 0.0, 0.25}) {
    const double t[] = {x};
    EXPECT_EQ(f(t), ft::kkt_objective(g)(t));
  }
  EXPECT_THROW(FuzzyFunction::from_expressions(g, 2, {ExprProgram::parse("t", 1)},
                                               {ExprProgram::parse("t", 1)}),
               Error);
}

TEST(EvalFunction, Errors) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::triangular_example(g);
  const double outside[] = {3.0};
  try {
    f(outside);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
  }
  const double two[] = {0.0, 1.0};
  try {
    f(two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
  auto bad = ft::endpoints_1d(g, [](double, std::span<const double> t) { return t[0] + 1; },
                              [](double, std::span<const double> t) { return t[0] - 1; });
  const double zero[] = {0.0};
  try {
    bad(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidLevelSets);
  }
}

TEST(FunctionAlgebra, ScaleAndAdd) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::kkt_objective(g);
  auto k = ft::kink_example(g);
  for (double x : {-1.0, 0.5}) {
    const double t[] = {x};
    EXPECT_EQ(scale(-2.0, f)(t), scale(-2.0, f(t)));
    EXPECT_EQ(add(f, k)(t), add(f(t), k(t)));
  }
  auto other = ft::kkt_objective(LevelGrid::uniform(11));
  EXPECT_THROW(add(f, other), Error);
}

TEST(DomainBox, ContainsAndIntersect) {
  DomainBox a({{0, 2}, {-1, 1}});
  const double in[] = {2.0, -1.0};
  const double out[] = {2.1, 0.0};
  EXPECT_TRUE(a.contains(in));
  EXPECT_FALSE(a.contains(out));
  EXPECT_TRUE(DomainBox().contains(out));
  EXPECT_TRUE(a.is_finite());
  EXPECT_FALSE(DomainBox::nonnegative_orthant(2).is_finite());
  auto b = intersect(a, DomainBox::nonnegative_orthant(2));
  EXPECT_EQ(b[1], (Interval{0, 1}));
  EXPECT_THROW(intersect(a, DomainBox({{5, 6}, {0, 1}})), Error);
  EXPECT_THROW(DomainBox({{1, 0}}), Error);
}

TEST(FuzzyMatrix, Invariants) {
  auto g = LevelGrid::uniform(11);
  EXPECT_NO_THROW(ft::diag_matrix(g, 0, 4, 8));
  auto a = make_triangular(0, 4, 8, g);
  auto one = make_triangular(1, 1, 1, g);
  auto two = make_triangular(2, 2, 2, g);
  try {
    FuzzyMatrix({{a, one}, {two, a}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantViolation);
  }
  // Crisp [[1, 2], [2, 1]] has eigenvalue -1.
  try {
    FuzzyMatrix({{one, two}, {two, one}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantViolation);
  }
}

TEST(FuzzyQuadratic, DiagonalClosedForm) {
  auto g = LevelGrid::uniform();
  auto f = ft::diag_quadratic(g);
  for (auto [x1, x2] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.5}, {2.0, 3.0}}) {
    const double x[] = {x1, x2};
    // (0,2,4) x1^2 + (0,2,4) x2^2 evaluated from the triangular closed form.
    auto expected = make_triangular(0, 2 * (x1 * x1 + x2 * x2), 4 * (x1 * x1 + x2 * x2), g);
    EXPECT_LT(distance(f(x), expected), 1e-12) << x1 << "," << x2;
  }
  const double e1[] = {1.0, 0.0};
  EXPECT_LT(distance(f(e1), make_triangular(0, 2, 4, g)), 1e-15);
  const double neg[] = {-1.0, 0.0};
  EXPECT_THROW(f(neg), Error);
}

TEST(FuzzyQuadratic, ZeroMatrixIsZero) {
  auto g = LevelGrid::uniform(11);
  auto f = fuzzy_quadratic(ft::diag_matrix(g, 0, 0, 0), FuzzyVector::zeros(2, 1, g));
  const double x[] = {3.0, 1.0};
  EXPECT_EQ(f(x), make_zero(1, g));
}

TEST(FuzzyQuadratic, LinearTerm) {
  auto g = LevelGrid::uniform(11);
  auto b = FuzzyVector({make_triangular(-1, 0, 1, g), make_triangular(1, 2, 3, g)});
  auto f = fuzzy_quadratic(ft::diag_matrix(g, 0, 0, 0), b);
  const double x[] = {2.0, 1.0};
  EXPECT_LT(distance(f(x), make_triangular(-1, 2, 5, g)), 1e-15);
}

TEST(Convexity, ConvexEndpointsGiveOrderConvexity) {
  auto g = LevelGrid::uniform(21);
  auto f = ft::kkt_objective(g);
  for (double x = -2; x <= 2; x += 0.5) {
    for (double y = -2; y <= 2; y += 0.5) {
      for (double lam : {0.1, 0.5, 0.9}) {
        const double m[] = {lam * x + (1 - lam) * y};
        const double px[] = {x};
        const double py[] = {y};
        auto rhs = add(scale(lam, f(px)), scale(1 - lam, f(py)));
        EXPECT_TRUE(order(f(m), rhs).le());
      }
    }
  }
}
