#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hmz/panel_integration.hpp"

namespace {

TEST(GaussLegendre16, IntegratesDegree31Exactly) {
  const auto& gl = hmz::gauss_legendre16();
  double wsum = 0.0;
  for (double w : gl.weights) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-15);
  for (int k = 0; k <= 31; ++k) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += gl.weights[i] * std::pow(gl.nodes[i], k);
    const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR(s, exact, 1e-15) << k;
  }
}

TEST(IntegratePanels, SmoothAndKinkedIntegrands) {
  const std::vector<double> breaks{-3.0, -1.0, 0.5, 4.0};
  EXPECT_NEAR(hmz::integrate_panels_scalar([](double t) { return std::cos(t); }, breaks), std::sin(4.0) + std::sin(3.0),
              1e-13);
  // |t - 0.3|^{1.5} has a kink that is not a breakpoint: adaptivity has to find it.
  auto kink = [](double t) { return std::pow(std::abs(t - 0.3), 1.5); };
  const double exact = (std::pow(3.3, 2.5) + std::pow(3.7, 2.5)) / 2.5;
  EXPECT_NEAR(hmz::integrate_panels_scalar(kink, breaks), exact, 1e-10 * exact);
}

TEST(IntegratePanels, VectorIntegrandAndSubdivision) {
  const std::vector<double> breaks{0.0, 1.0, 2.0};
  hmz::PanelIntegrand f = [](double t, std::span<double> out) {
    out[0] = t;
    out[1] = std::exp(t);
  };
  auto r1 = hmz::integrate_panels(f, 2, breaks);
  auto r2 = hmz::integrate_panels(f, 2, breaks, {.subdivide = 4});
  EXPECT_NEAR(r1[0], 2.0, 1e-14);
  EXPECT_NEAR(r1[1], std::exp(2.0) - 1.0, 1e-13);
  EXPECT_NEAR(r2[1], r1[1], 1e-13);
}

TEST(IntegratePanels, Errors) {
  const std::vector<double> one{0.0};
  const std::vector<double> bad{1.0, 0.0};
  auto f = [](double) { return 1.0; };
  EXPECT_THROW(hmz::integrate_panels_scalar(f, one), hmz::usage_error);
  EXPECT_THROW(hmz::integrate_panels_scalar(f, bad), hmz::usage_error);
  EXPECT_THROW(hmz::integrate_panels_scalar([](double) { return NAN; }, std::vector<double>{0.0, 1.0}),
               hmz::numerical_error);
}

TEST(IntegrateWholeLine, AlgebraicAndGaussianTails) {
  std::vector<double> core;
  for (int i = -10; i <= 10; ++i) core.push_back(0.5 * i);
  hmz::PanelIntegrand lorentz = [](double t, std::span<double> out) { out[0] = 1.0 / (1.0 + t * t); };
  EXPECT_NEAR(hmz::integrate_whole_line(lorentz, 1, core)[0], std::numbers::pi, 1e-11);
  hmz::PanelIntegrand gauss = [](double t, std::span<double> out) { out[0] = std::exp(-t * t / 2); };
  EXPECT_NEAR(hmz::integrate_whole_line(gauss, 1, core)[0], std::sqrt(2 * std::numbers::pi), 1e-12);
  // Slow tail: int (1+t^2)^{-0.6} dt = sqrt(pi) Gamma(0.1) / Gamma(0.6).
  hmz::PanelIntegrand slow = [](double t, std::span<double> out) { out[0] = std::pow(1.0 + t * t, -0.6); };
  const double exact = std::sqrt(std::numbers::pi) * std::tgamma(0.1) / std::tgamma(0.6);
  EXPECT_NEAR(hmz::integrate_whole_line(slow, 1, core)[0], exact, 1e-9 * exact);
}

}  // namespace
