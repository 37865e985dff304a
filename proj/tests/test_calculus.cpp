#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "fno/calculus.hpp"
#include "fno/sampling.hpp"
#include "support/functions.hpp"

using namespace fno;
namespace ft = fno::testing;

namespace {

void expect_levels(const FuzzyNCell& u, const std::function<double(double)>& lo,
                   const std::function<double(double)>& hi, double tol, std::size_t cell = 0) {
  for (std::size_t k = 0; k < u.levels(); ++k) {
    const double r = (*u.grid())[k];
    EXPECT_NEAR(u.lo(cell, k), lo(r), tol) << "r=" << r;
    EXPECT_NEAR(u.hi(cell, k), hi(r), tol) << "r=" << r;
  }
}

FuzzyFunction crisp_1d(GridPtr g, std::function<double(double)> f, DomainBox box = {}) {
  auto e = [f](double, std::span<const double> t) { return f(t[0]); };
  return ft::endpoints_1d(std::move(g), e, e, std::move(box));
}

}  // namespace

TEST(EndpointDerivative, SmoothPolynomialAtZero) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::kkt_objective(g);
  const double t0[] = {0.0};
  const double d[] = {1.0};
  for (std::size_t k = 0; k < g->size(); ++k)
    EXPECT_NEAR(endpoint_dir_derivative(f, t0, d, 0, k, Endpoint::Lower), 0.0, 1e-6);
}

TEST(EndpointDerivative, AbsKinkRightSide) {
  auto g = LevelGrid::uniform(11);
  auto f = ft::triangular_example(g);
  const double t0[] = {0.0};
  const double d[] = {1.0};
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double r = (*g)[k];
    EXPECT_NEAR(endpoint_dir_derivative(f, t0, d, 0, k, Endpoint::Upper), 1 - r, 1e-9);
    // lim h->0- of ((1-r)(|h|+1) - (1-r)) / h = -(1-r)
    EXPECT_NEAR(endpoint_dir_derivative(f, t0, d, 0, k, Endpoint::Upper, Side::Left), r - 1, 1e-9);
  }
}

TEST(EndpointDerivative, Constant) {
  auto g = LevelGrid::uniform(3);
  auto f = crisp_1d(g, [](double) { return 4.0; });
  const double t0[] = {1.0};
  const double d[] = {-3.0};
  EXPECT_EQ(endpoint_dir_derivative(f, t0, d, 0, 1, Endpoint::Lower), 0.0);
}

TEST(EndpointDerivative, AnalyticCorpus) {
  auto g = LevelGrid::uniform(3);
  struct Case {
    const char* name;
    std::function<double(double)> f, df;
    double t;
  };
  const std::vector<Case> corpus = {
      {"t^2", [](double t) { return t * t; }, [](double t) { return 2 * t; }, 0.7},
      {"t^3 - 2t", [](double t) { return t * t * t - 2 * t; }, [](double t) { return 3 * t * t - 2; }, -1.3},
      {"5t^4", [](double t) { return 5 * std::pow(t, 4); }, [](double t) { return 20 * std::pow(t, 3); }, 1.1},
      {"|t|", [](double t) { return std::abs(t); }, [](double) { return 1.0; }, 0.0},
      {"|t-1| t", [](double t) { return std::abs(t - 1) * t; }, [](double t) { return 2 * t - 1; }, 1.0},
      {"(t+2)^2 |t|", [](double t) { return (t + 2) * (t + 2) * std::abs(t); },
       [](double t) { return 3 * t * t + 8 * t + 4; }, 0.5},
      {"1 - t + t^5/10", [](double t) { return 1 - t + std::pow(t, 5) / 10; },
       [](double t) { return -1 + std::pow(t, 4) / 2; }, 1.5},
      {"|t^2 - 4|", [](double t) { return std::abs(t * t - 4); }, [](double t) { return 2 * t; }, 2.0},
      {"max(t, 2t)", [](double t) { return std::max(t, 2 * t); }, [](double) { return 2.0; }, 0.0},
      {"t|t|", [](double t) { return t * std::abs(t); }, [](double t) { return 2 * std::abs(t); }, -0.8},
  };
  const double d[] = {1.0};
  for (const auto& c : corpus) {
    auto f = crisp_1d(g, c.f);
    const double t0[] = {c.t};
    EXPECT_NEAR(endpoint_dir_derivative(f, t0, d, 0, 0, Endpoint::Lower), c.df(c.t), 1e-6) << c.name;
  }
}

TEST(EndpointDerivative, OscillationIsNoConvergence) {
  auto g = LevelGrid::uniform(3);
  auto f = crisp_1d(g, [](double t) { return t == 0 ? 0.0 : t * std::sin(1 / t); });
  const double t0[] = {0.0};
  const double d[] = {1.0};
  try {
    directional_derivative(f, t0, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoConvergence);
  }
  DerivativeOptions opts;
  opts.require_convergence = false;
  auto rep = directional_derivative(f, t0, d, Side::Right, opts);
  EXPECT_FALSE(rep.converged);
  EXPECT_GT(rep.error_estimate, 1e-6);
}

TEST(DirectionalDerivative, TriangularExample) {
  auto g = LevelGrid::uniform();
  const double t0[] = {0.0};
  const double d[] = {1.0};
  auto rep = directional_derivative(ft::triangular_example(g), t0, d);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.side, Side::Right);
  // One record per refinement: steps 1e-2 * 2^-j for j = 1..12.
  ASSERT_EQ(rep.step_history.size(), 12u);
  EXPECT_EQ(rep.step_history.front().h, 5e-3);
  EXPECT_EQ(rep.step_history.back().h, std::ldexp(1e-2, -12));
  expect_levels(rep.value, [](double r) { return r - 1; }, [](double r) { return 1 - r; }, 1e-6);
}

TEST(DirectionalDerivative, KinkSides) {
  auto g = LevelGrid::uniform();
  auto f = ft::kink_example(g);
  const double t0[] = {0.0};
  const double d[] = {1.0};
  auto right = directional_derivative(f, t0, d, Side::Right);
  expect_levels(right.value, [](double r) { return r; }, [](double r) { return 2 - r; }, 1e-6);
  auto left = directional_derivative(f, t0, d, Side::Left);
  EXPECT_EQ(left.side, Side::Left);
  expect_levels(left.value, [](double r) { return r - 2; }, [](double r) { return -r; }, 1e-6);
  EXPECT_GT(distance(right.value, left.value), 1.0);
}

TEST(DirectionalDerivative, ConstantIsZero) {
  auto g = LevelGrid::uniform(11);
  auto f = FuzzyFunction::constant(make_triangular(1, 2, 5, g), 2);
  const double t0[] = {0.3, -4.0};
  for (auto [a, b] : {std::pair{1.0, 0.0}, {-2.0, 5.0}, {0.0, 0.0}}) {
    const double d[] = {a, b};
    EXPECT_EQ(directional_derivative(f, t0, d).value, make_zero(1, g));
  }
}

TEST(DirectionalDerivative, StepShrinksToTheBoundary) {
  auto g = LevelGrid::uniform(11);
  const double t0[] = {2.0 - 1e-3};
  const double d[] = {1.0};
  // Probes beyond 2 would throw DomainViolation.
  auto rep = directional_derivative(ft::kkt_objective(g), t0, d);
  EXPECT_LE(rep.step_history.front().h, 1e-3);
  expect_levels(rep.value, [&](double) { return 2 * t0[0]; }, [&](double) { return 2 * t0[0]; }, 1e-6);
  const double at_edge[] = {2.0};
  EXPECT_THROW(directional_derivative(ft::kkt_objective(g), at_edge, d), Error);
}

TEST(PartialDerivative, QuadraticAtOriginUsesRightSide) {
  auto g = LevelGrid::uniform();
  const double x0[] = {0.0, 0.0};
  for (std::size_t j = 0; j < 2; ++j) {
    auto rep = partial_derivative(ft::diag_quadratic(g), x0, j);
    EXPECT_EQ(rep.side, Side::Right);
    EXPECT_LT(distance(rep.value, make_zero(1, g)), 1e-6);
  }
}

TEST(PartialDerivative, KktObjectiveAtZero) {
  auto g = LevelGrid::uniform();
  const double t0[] = {0.0};
  auto rep = partial_derivative(ft::kkt_objective(g), t0, 0);
  EXPECT_EQ(rep.side, Side::TwoSided);
  EXPECT_LT(distance(rep.value, make_zero(1, g)), 1e-6);
}

TEST(PartialDerivative, KinkIsNotDifferentiable) {
  auto g = LevelGrid::uniform();
  const double t0[] = {0.0};
  try {
    partial_derivative(ft::kink_example(g), t0, 0);
    FAIL();
  } catch (const NotDifferentiableError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotDifferentiable);
    EXPECT_EQ(e.coordinate(), 0u);
    expect_levels(e.right().value, [](double r) { return r; }, [](double r) { return 2 - r; }, 1e-5);
    expect_levels(e.left().value, [](double r) { return r - 2; }, [](double r) { return -r; }, 1e-5);
    EXPECT_NEAR(e.gap(), 2.0, 1e-5);
  }
}

TEST(Gradient, QuadraticInterior) {
  auto g = LevelGrid::uniform();
  auto b = FuzzyVector({make_triangular(-1, 0, 1, g), make_triangular(0, 1, 1, g)});
  auto f = fuzzy_quadratic(ft::diag_matrix(g, 0, 4, 8), b);
  const double x0[] = {0.5, 1.25};
  auto grad = gradient(f, x0);
  ASSERT_EQ(grad.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    // (x0^T A + b)_j = x0_j (0,4,8) + b_j
    auto expected = add(make_triangular(0, 4 * x0[j], 8 * x0[j], g), b[j]);
    EXPECT_LT(distance(grad[j], expected), 1e-6) << "j=" << j;
  }
}

TEST(Gradient, CrispSquare) {
  auto g = LevelGrid::uniform(11);
  const double t0[] = {3.0};
  auto grad = gradient(crisp_1d(g, [](double t) { return t * t; }), t0);
  const double six[] = {6.0};
  EXPECT_LT(distance(grad[0], make_crisp(six, g)), 1e-6);
}

TEST(Gradient, ConstantIsZeroVector) {
  auto g = LevelGrid::uniform(11);
  auto f = FuzzyFunction::constant(make_triangular(0, 1, 2, g), 3);
  const double t0[] = {1.0, 2.0, 3.0};
  auto grad = gradient(f, t0);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(grad[j], make_zero(1, g));
}

TEST(Gradient, PropagatesFailingCoordinate) {
  auto g = LevelGrid::uniform(11);
  auto f = FuzzyFunction::from_endpoints(
      g, 2, {[](double r, std::span<const double> t) { return t[0] * t[0] + r * std::abs(t[1]); }},
      {[](double r, std::span<const double> t) { return t[0] * t[0] + (2 - r) * std::abs(t[1]) + 1; }});
  const double t0[] = {1.0, 0.0};
  try {
    gradient(f, t0);
    FAIL();
  } catch (const NotDifferentiableError& e) {
    EXPECT_EQ(e.coordinate(), 1u);
  }
}

TEST(Convexity, KktObjectiveVerified) {
  auto g = LevelGrid::uniform(21);
  std::vector<ConvexSample> samples;
  for (double x = -2; x <= 2; x += 0.25) samples.push_back({{x}, {-x / 2}, 0.3});
  auto cert = convexity_certificate(ft::kkt_objective(g), samples);
  EXPECT_EQ(cert.status, Status::Verified);
  EXPECT_EQ(cert.samples_used, samples.size());
  EXPECT_EQ(endpoint_convexity_certificate(ft::kkt_objective(g), samples).status, Status::Verified);
}

TEST(Convexity, ConcaveRefutedWithWitness) {
  auto g = LevelGrid::uniform(21);
  auto f = ft::endpoints_1d(g, [](double r, std::span<const double> t) { return -t[0] * t[0] - (1 - r); },
                            [](double r, std::span<const double> t) { return -t[0] * t[0] + (1 - r); });
  const std::vector<ConvexSample> samples = {{{-1.0}, {1.0}, 0.5}};
  auto cert = convexity_certificate(f, samples);
  ASSERT_EQ(cert.status, Status::Refuted);
  ASSERT_TRUE(cert.witness);
  EXPECT_EQ(cert.witness->point, std::vector<double>{-1.0});
  EXPECT_EQ(cert.witness->second_point, std::vector<double>{1.0});
  EXPECT_EQ(cert.witness->weight, 0.5);
  // Re-evaluating the witness reproduces the violation: F(0) has lower -1+r
  // but the chord has lower -2+r.
  ASSERT_TRUE(cert.witness->violation);
  EXPECT_GT(cert.witness->lhs, cert.witness->rhs);
  EXPECT_EQ(endpoint_convexity_certificate(f, samples).status, Status::Refuted);
}

TEST(Convexity, AffineVerified) {
  auto g = LevelGrid::uniform(21);
  auto f = ft::endpoints_1d(g, [](double r, std::span<const double> t) { return 3 * t[0] + r; },
                            [](double r, std::span<const double> t) { return 3 * t[0] + 2 - r; });
  std::vector<ConvexSample> samples;
  for (double x = -3; x <= 3; x += 0.5) samples.push_back({{x}, {x * x - 3}, 0.25});
  EXPECT_EQ(convexity_certificate(f, samples).status, Status::Verified);
}

TEST(GradientIdentity, QuadraticSignConsistentDirection) {
  auto g = LevelGrid::uniform();
  const double x[] = {1.0, 1.0};
  const double d[] = {1.0, 2.0};
  auto rep = check_gradient_identity(ft::diag_quadratic(g), x, d);
  EXPECT_EQ(rep.certificate.status, Status::Verified);
  EXPECT_LT(rep.distance, 1e-5);
  // Both sides equal (0,12,24) by hand: d.(x^T A) = 1*(0,4,8) + 2*(0,4,8).
  EXPECT_LT(distance(rep.directional, make_triangular(0, 12, 24, g)), 1e-6);
}

TEST(GradientIdentity, CoordinateAndZeroDirections) {
  auto g = LevelGrid::uniform(21);
  const double x[] = {0.5, 1.5};
  auto f = ft::diag_quadratic(g);
  const double e2[] = {0.0, 1.0};
  auto rep = check_gradient_identity(f, x, e2);
  EXPECT_EQ(rep.certificate.status, Status::Verified);
  EXPECT_LT(distance(rep.directional, partial_derivative(f, x, 1).value), 1e-9);
  const double zero[] = {0.0, 0.0};
  rep = check_gradient_identity(f, x, zero);
  EXPECT_EQ(rep.certificate.status, Status::Verified);
  EXPECT_EQ(rep.directional, make_zero(1, g));
  EXPECT_EQ(rep.via_gradient, make_zero(1, g));
}

TEST(GradientIdentity, MixedSignDirectionBreaksTheIdentity) {
  // The g-difference quotient along (1,-1) sees F(x+hd) - F(x) with the two
  // cross terms cancelling per endpoint, while grad.d adds the interval
  // (0,4,8) and -(0,4,8) as fuzzy numbers and widens.
  auto g = LevelGrid::uniform();
  const double x[] = {1.0, 1.0};
  const double d[] = {1.0, -1.0};
  auto rep = check_gradient_identity(ft::diag_quadratic(g), x, d);
  EXPECT_EQ(rep.certificate.status, Status::Refuted);
  EXPECT_LT(distance(rep.directional, make_zero(1, g)), 1e-6);
  EXPECT_LT(distance(rep.via_gradient, make_triangular(-8, 0, 8, g)), 1e-6);
}
