#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hmz/function_space.hpp"
#include "hmz/hermite.hpp"
#include "hmz/interpolation.hpp"

namespace {

using hmz::Decay;
using hmz::FunctionHandle;
using hmz::NormSpec;
using hmz::VectorValue;

FunctionHandle hermite_handle(std::size_t k) {
  return hmz::scalar_function([k](double t) { return hmz::hermite_function(k, t); });
}

TEST(NormX, Examples) {
  const VectorValue v{3.0, 4.0};
  EXPECT_DOUBLE_EQ(hmz::norm_x(v, {2, 2.0, 1.0}), 5.0);
  EXPECT_DOUBLE_EQ(hmz::norm_x(v, {2, hmz::infinity, 1.0}), 4.0);
  EXPECT_DOUBLE_EQ(hmz::norm_x(v, {2, 1.0, 1.0}), 7.0);
  EXPECT_THROW(hmz::norm_x(v, {3, 2.0, 1.0}), hmz::shape_error);
}

TEST(NormX, MonotoneInQHomogeneousAndSubadditive) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    VectorValue a(4);
    VectorValue b(4);
    for (std::size_t i = 0; i < 4; ++i) {
      a[i] = normal(rng);
      b[i] = normal(rng);
    }
    double prev = INFINITY;
    for (double q : {1.0, 1.5, 2.0, 3.0, 7.0, hmz::infinity}) {
      const NormSpec s{4, q, 1.0};
      const double na = hmz::norm_x(a, s);
      EXPECT_LE(na, prev * (1 + 1e-15));
      prev = na;
      EXPECT_NEAR(hmz::norm_x(-2.5 * a, s), 2.5 * na, 1e-14 * na);
      EXPECT_LE(hmz::norm_x(a + b, s), na + hmz::norm_x(b, s) + 1e-14);
    }
  }
}

TEST(NormSpec, ValidationAndConjugate) {
  EXPECT_THROW((NormSpec{0, 2.0, 2.0}).validate(), hmz::usage_error);
  EXPECT_THROW((NormSpec{1, 0.5, 2.0}).validate(), hmz::usage_error);
  EXPECT_THROW((NormSpec{1, 2.0, 0.9}).validate(), hmz::usage_error);
  EXPECT_NO_THROW((NormSpec{2, hmz::infinity, 3.0}).validate());
  EXPECT_DOUBLE_EQ((NormSpec{1, 2.0, 3.0}).p_conjugate(), 1.5);
  EXPECT_TRUE(std::isinf((NormSpec{1, 2.0, 1.0}).p_conjugate()));
}

TEST(WeightedLpNorm, Examples) {
  EXPECT_NEAR(hmz::weighted_lp_norm(hermite_handle(0), {1, 2.0, 2.0}, 0), 1.0, 1e-12);
  EXPECT_NEAR(hmz::weighted_lp_norm(hermite_handle(5), {1, 2.0, 2.0}, 5), 1.0, 1e-10);
  for (double q : {1.0, 2.0, hmz::infinity}) {
    FunctionHandle g{[](double t, std::span<double> out) {
                       out[0] = std::exp(-t * t / 2);
                       out[1] = 0.0;
                       out[2] = 0.0;
                     },
                     3, Decay::gaussian};
    EXPECT_NEAR(hmz::weighted_lp_norm(g, {3, q, 1.0}, 0), std::sqrt(2 * std::numbers::pi), 1e-10);
    EXPECT_NEAR(hmz::weighted_lp_norm(g, {3, q, 1.0}, 0), 2.5066283, 1e-7);
  }
}

TEST(WeightedLpNorm, Errors) {
  auto g = hermite_handle(2);
  g.decay = Decay::none;
  EXPECT_THROW(hmz::weighted_lp_norm(g, {1, 2.0, 2.0}, 2), hmz::usage_error);
  g.decay = Decay::algebraic;
  EXPECT_THROW(hmz::weighted_lp_norm(g, {1, 2.0, 2.0}, 2), hmz::usage_error);
  EXPECT_THROW(hmz::weighted_lp_norm(hermite_handle(2), {1, 2.0, hmz::infinity}, 2), hmz::usage_error);
  EXPECT_THROW(hmz::weighted_lp_norm(hermite_handle(2), {2, 2.0, 2.0}, 2), hmz::shape_error);
}

// Odd p puts kinks at every zero of H_k; compare with the exact split at the known zeros.
TEST(WeightedLpNorm, KinksAtZerosMatchExactSplit) {
  const std::size_t k = 40;
  const auto zeros = hmz::build_rule(k - 1);  // zeros of H_k
  std::vector<double> breaks{-25.0};
  for (std::size_t j = zeros.size(); j-- > 0;) breaks.push_back(zeros.node(j));
  breaks.push_back(25.0);
  const double p = 1.5;
  const double ref = std::pow(hmz::integrate_panels_scalar(
                                  [&](double t) { return std::pow(std::abs(hmz::hermite_function(k, t)), p); }, breaks,
                                  {.rel_tol = 1e-13}),
                              1 / p);
  EXPECT_NEAR(hmz::weighted_lp_norm(hermite_handle(k), {1, 2.0, p}, k), ref, 1e-10 * ref);
}

TEST(WeightedLpNorm, HomogeneityAndPanelDoubling) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal;
  for (std::size_t n : {16u, 64u, 256u}) {
    std::vector<double> a((n + 1) * 2);
    for (double& x : a) x = normal(rng);
    const auto q = hmz::WeightedPolyEval::coefficients(2, a);
    const auto g = q.handle();
    auto scaled = g;
    scaled.eval = [g](double t, std::span<double> out) {
      g.eval(t, out);
      for (double& x : out) x *= -3.0;
    };
    for (double p : {1.5, 3.0}) {
      const NormSpec spec{2, hmz::infinity, p};
      const double base = hmz::weighted_lp_norm(g, spec, n);
      EXPECT_NEAR(hmz::weighted_lp_norm(scaled, spec, n), 3.0 * base, 1e-12 * base);
      const double doubled = hmz::weighted_lp_norm(g, spec, n, {.subdivide = 2});
      EXPECT_NEAR(doubled, base, 1e-9 * base) << "n=" << n << " p=" << p;
    }
  }
}

TEST(LpNorm, UnweightedWholeLine) {
  const auto f = hmz::scalar_function([](double t) { return 1.0 / (1.0 + t * t); }, Decay::algebraic);
  EXPECT_NEAR(hmz::lp_norm(f, {1, 2.0, 2.0}, 16), std::sqrt(std::numbers::pi / 2), 1e-10);
  EXPECT_NEAR(hmz::lp_norm(f, {1, 2.0, 1.0}, 16), std::numbers::pi, 1e-10);
  auto none = f;
  none.decay = Decay::none;
  EXPECT_THROW(hmz::lp_norm(none, {1, 2.0, 2.0}, 16), hmz::usage_error);
}

TEST(SampleAtNodes, Examples) {
  const auto r1 = hmz::build_rule(1);
  const auto c = hmz::sample_at_nodes(hmz::scalar_function([](double) { return 2.5; }, Decay::none), r1);
  EXPECT_DOUBLE_EQ(c.raw(r1, 0)[0], 2.5);
  EXPECT_DOUBLE_EQ(c.raw(r1, 1)[0], 2.5);
  const auto id = hmz::sample_at_nodes(hmz::scalar_function([](double t) { return t; }, Decay::none), r1);
  EXPECT_NEAR(id.raw(r1, 0)[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(id.raw(r1, 1)[0], -1 / std::sqrt(2.0), 1e-15);

  const auto r9 = hmz::build_rule(9);
  const auto even = hmz::sample_at_nodes(hmz::scalar_function([](double t) { return std::cos(t) + t * t; }, Decay::none), r9);
  for (std::size_t j = 0; j < r9.size(); ++j) EXPECT_EQ(even.weighted(j)[0], even.weighted(r9.size() - 1 - j)[0]);
}

}  // namespace
