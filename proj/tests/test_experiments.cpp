#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hmz/experiments.hpp"
#include "hmz/report.hpp"

namespace {

using hmz::ExperimentReport;

const std::vector<std::size_t> small_list{8, 12, 16, 24, 32};

TEST(MzRatioSweep, ParsevalCaseIsExact) {
  for (const hmz::NormSpec spec : {hmz::NormSpec{1, 2.0, 2.0}, hmz::NormSpec{2, 2.0, 2.0}}) {
    const auto r = hmz::mz_ratio_sweep(spec, small_list, 3, 7, 1);
    ASSERT_EQ(r.rows.size(), small_list.size());
    for (const auto& row : r.rows) {
      EXPECT_NEAR(row.get("upper_max"), 1.0, 1e-8);
      EXPECT_NEAR(row.get("lower_max"), 1.0, 1e-8);
      EXPECT_NEAR(row.get("witness_ratio"), 1.0, 1e-8);
    }
  }
}

TEST(MzRatioSweep, IndependentOfThreadCountAndKeyedBySeed) {
  const hmz::NormSpec spec{2, hmz::infinity, 3.0};
  const auto a = hmz::to_json(hmz::mz_ratio_sweep(spec, small_list, 3, 11, 1)).dump();
  const auto b = hmz::to_json(hmz::mz_ratio_sweep(spec, small_list, 3, 11, 4)).dump();
  const auto c = hmz::to_json(hmz::mz_ratio_sweep(spec, small_list, 3, 12, 4)).dump();
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(MzRatioSweep, WitnessMatchesDirectComputation) {
  const hmz::NormSpec spec{1, 2.0, 5.0};
  const auto r = hmz::mz_ratio_sweep(spec, small_list, 1, 1, 1);
  const auto w = hmz::mz_witness_hn(5.0, small_list, 1);
  const auto g = hmz::hermite_norm_growth(5.0, small_list, 1);
  for (std::size_t i = 0; i < small_list.size(); ++i) {
    EXPECT_NEAR(r.rows[i].get("witness_D"), w.rows[i].get("direct"), 1e-12);
    EXPECT_NEAR(r.rows[i].get("witness_C"), g.rows[i].get("norm"), 1e-9);
  }
}

TEST(MzRatioSweep, RejectsBadArguments) {
  const hmz::NormSpec spec{1, 2.0, 3.0};
  EXPECT_THROW(hmz::mz_ratio_sweep(spec, {}, 2, 1), hmz::usage_error);
  EXPECT_THROW(hmz::mz_ratio_sweep(spec, std::vector<std::size_t>{16, 8}, 2, 1), hmz::usage_error);
  EXPECT_THROW(hmz::mz_ratio_sweep(spec, small_list, 0, 1), hmz::usage_error);
  EXPECT_THROW(hmz::mz_ratio_sweep({1, 2.0, hmz::infinity}, small_list, 1, 1), hmz::usage_error);
  EXPECT_THROW(hmz::mz_ratio_sweep({1, 2.0, 0.5}, small_list, 1, 1), hmz::usage_error);
}

TEST(MzWitness, ClosedFormAndExamples) {
  const auto two = hmz::mz_witness_hn(2.0, small_list, 2);
  for (const auto& row : two.rows) {
    EXPECT_NEAR(row.get("direct"), 1.0, 1e-12);
    EXPECT_NEAR(row.get("closed_form"), 1.0, 1e-12);
  }
  const std::vector<std::size_t> n64{64};
  const auto five = hmz::mz_witness_hn(5.0, n64, 1);
  EXPECT_NEAR(five.rows[0].get("direct"), five.rows[0].get("closed_form"), 1e-10 * five.rows[0].get("closed_form"));
  EXPECT_TRUE(five.verdict("closed_form_agrees").pass);

  const auto eight = hmz::mz_witness_hn(8.0, hmz::default_n_list(), 2);
  EXPECT_NEAR(eight.fit("direct").slope, -0.1875, 0.02);
  EXPECT_TRUE(eight.verdict("slope_matches").pass);
}

// ||H_n||_p by Gauss-Kronrod between consecutive zeros and over the tails.
double norm_oracle(std::size_t n, double p) {
  const auto zeros = hmz::build_rule(n - 1);  // zeros of H_n
  std::vector<double> cuts{-40.0};
  for (std::size_t j = zeros.size(); j-- > 0;) cuts.push_back(zeros.node(j));
  cuts.push_back(40.0);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double t) { return std::pow(std::abs(hmz::hermite_function(n, t)), p); }, cuts[k], cuts[k + 1], 10, 1e-14);
  return std::pow(s, 1.0 / p);
}

TEST(HermiteNormGrowth, AgreesWithIndependentQuadrature) {
  const std::vector<std::size_t> ns{3, 10, 25};
  for (double p : {1.5, 3.0, 8.0}) {
    const auto r = hmz::hermite_norm_growth(p, ns, 1);
    for (std::size_t i = 0; i < ns.size(); ++i)
      EXPECT_NEAR(r.rows[i].get("norm"), norm_oracle(ns[i], p), 1e-9) << "p=" << p << " n=" << ns[i];
  }
}

TEST(HermiteNormGrowth, ExponentsAtTwoAndEight) {
  const auto two = hmz::hermite_norm_growth(2.0, hmz::default_n_list(), 2);
  for (const auto& row : two.rows) EXPECT_NEAR(row.get("norm"), 1.0, 1e-10);
  EXPECT_NEAR(two.fit("norm").slope, 0.0, 0.01);
  const auto eight = hmz::hermite_norm_growth(8.0, hmz::default_n_list(), 2);
  EXPECT_NEAR(eight.fit("norm").slope, -1.0 / 48 - 1.0 / 12, 0.02);
  EXPECT_TRUE(eight.verdict("slope_matches").pass);
}

TEST(HermiteNormGrowth, FourthPowerComparesModels) {
  const auto r = hmz::hermite_norm_growth(4.0, hmz::default_n_list(), 2);
  EXPECT_NO_THROW(r.summary_value("power_residual"));
  EXPECT_NO_THROW(r.summary_value("log_corrected_residual"));
  EXPECT_NO_THROW(r.verdict("log_correction_improves"));
  EXPECT_THROW(r.verdict("slope_matches"), hmz::usage_error);
}

TEST(Counterexample, NodeDataFollowsSignPattern) {
  const auto rule = hmz::build_rule(20);
  const auto nv = hmz::counterexample_data(rule, 0.2);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double t = rule.node(j);
    const double w = nv.weighted(j)[0];
    if (t > 0) {
      EXPECT_EQ(w, 0.0);
    } else {
      EXPECT_NEAR(std::abs(w), std::pow(1 + std::abs(t), -0.2), 1e-15);
      EXPECT_EQ(w > 0, rule.derivatives()[j] > 0);
    }
  }
  // Every term of the interpolant has the same sign on t >= 0.
  const auto ig = hmz::interpolate(rule, nv);
  const double at_node = ig(rule.node(rule.size() - 1))[0];
  EXPECT_NEAR(at_node, nv.weighted(rule.size() - 1)[0], 1e-14);
}

TEST(Counterexample, RegimeWarningsAndGrowth) {
  auto regime_warned = [](const ExperimentReport& r) {
    return std::any_of(r.warnings.begin(), r.warnings.end(),
                       [](const std::string& w) { return w.find("regime") != std::string::npos; });
  };
  EXPECT_FALSE(regime_warned(hmz::counterexample_growth(6.0, 0.2, small_list, 2)));
  EXPECT_FALSE(regime_warned(hmz::counterexample_growth(2.0, 0.0, small_list, 2)));
  EXPECT_TRUE(regime_warned(hmz::counterexample_growth(3.0, 0.2, small_list, 2)));
  EXPECT_THROW(hmz::counterexample_growth(6.0, -0.1, small_list), hmz::usage_error);

  const auto big = hmz::counterexample_growth(2.0, 0.0, hmz::default_n_list(), 2);
  EXPECT_GE(big.fit("norm").slope, 0.15);
  EXPECT_GT(big.fit("norm_even_n").slope, 0.0);
  EXPECT_GT(big.fit("norm_odd_n").slope, 0.0);
  EXPECT_TRUE(big.verdict("diverges").pass);
}

TEST(InterpolationConvergence, ReproducesPolynomialsAndConvergesForSmoothData) {
  const auto h5 = hmz::scalar_function([](double t) { return hmz::hermite_function(5, t); });
  const auto exact = hmz::interpolation_convergence(h5, {1, 2.0, 3.0}, 1.0, std::vector<std::size_t>{5, 8, 16}, 1);
  for (const auto& row : exact.rows) EXPECT_LT(row.get("error"), 1e-12);

  // f = e^{-t^2} (1, 1)/sqrt(2), so g = e^{-3t^2/2} (1, 1)/sqrt(2).
  hmz::FunctionHandle g{[](double t, std::span<double> out) {
                          out[0] = out[1] = std::exp(-1.5 * t * t) / std::sqrt(2.0);
                        },
                        2, hmz::Decay::gaussian};
  const auto r = hmz::interpolation_convergence(g, {2, 2.0, 2.0}, 1.0, std::vector<std::size_t>{8, 16, 32, 64, 128}, 2);
  EXPECT_LE(r.rows.back().get("error"), r.rows.front().get("error") / 4);
  EXPECT_TRUE(r.verdict("decreasing").pass);
  EXPECT_TRUE(std::none_of(r.warnings.begin(), r.warnings.end(),
                           [](const std::string& w) { return w.find("alpha") != std::string::npos; }));
  const auto low = hmz::interpolation_convergence(g, {2, 2.0, 2.0}, 0.4, std::vector<std::size_t>{8}, 1);
  EXPECT_FALSE(low.warnings.empty());
}

TEST(ExpansionConvergence, ExamplesFromTheContract) {
  const auto h2 = hmz::scalar_function([](double t) { return hmz::hermite_function(2, t); });
  const auto exact = hmz::expansion_convergence(h2, {1, 2.0, 2.0}, std::vector<std::size_t>{2, 4, 8}, 1);
  for (const auto& row : exact.rows) EXPECT_LT(row.get("error"), 1e-9);

  const auto lorentz = hmz::scalar_function([](double t) { return 1.0 / (1.0 + t * t); }, hmz::Decay::algebraic);
  const std::vector<std::size_t> ns{4, 8, 16, 32, 64};
  const auto l2 = hmz::expansion_convergence(lorentz, {1, 2.0, 2.0}, ns, 2);
  const auto e = l2.column("error");
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i], e[i - 1]);
  EXPECT_TRUE(l2.verdict("convergent").pass);
  // Parseval: ||f - P_n f||_2^2 = ||f||_2^2 - sum_{j<=n} a_j^2 with ||f||_2^2 = pi/2.
  const auto c = hmz::coefficients(lorentz, 8);
  double tail = std::numbers::pi / 2;
  for (std::size_t j = 0; j <= 8; ++j) tail -= c.row(j)[0] * c.row(j)[0];
  EXPECT_NEAR(l2.rows[1].get("error"), std::sqrt(tail), 1e-7);

  const auto outside = hmz::expansion_convergence(lorentz, {1, 2.0, 1.2}, ns, 2);
  EXPECT_TRUE(outside.verdicts.empty());
  EXPECT_FALSE(outside.warnings.empty());
}

TEST(HilbertMatrix, SmallCaseAndExactSums) {
  // Largest singular value of [[2, -2], [2/3, 2]].
  const double tr = 112.0 / 9.0;
  const double det = 256.0 / 9.0;
  EXPECT_NEAR(hmz::hilbert_matrix_norm(2.0, 2), std::sqrt((tr + std::sqrt(tr * tr - 4 * det)) / 2), 1e-12);
  EXPECT_NEAR(hmz::hilbert_matrix_norm(2.0, 2), 3.07036752, 1e-8);

  for (std::size_t size : {2u, 7u, 40u}) {
    double best = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < size; ++i) s += 1.0 / std::abs(static_cast<double>(i) - static_cast<double>(j) + 0.5);
      best = std::max(best, s);
    }
    EXPECT_NEAR(hmz::hilbert_matrix_norm(1.0, size), best, 1e-12);
    EXPECT_NEAR(hmz::hilbert_matrix_norm(hmz::infinity, size), best, 1e-12);
  }
  EXPECT_THROW(hmz::hilbert_matrix_norm(2.0, 1), hmz::usage_error);
  EXPECT_THROW(hmz::hilbert_matrix_norm(0.5, 4), hmz::usage_error);
}

TEST(HilbertMatrix, NormsRespectInterpolationBounds) {
  for (std::size_t size : {16u, 64u}) {
    const double n1 = hmz::hilbert_matrix_norm(1.0, size);
    const double n2 = hmz::hilbert_matrix_norm(2.0, size);
    const double n3 = hmz::hilbert_matrix_norm(3.0, size);
    EXPECT_LE(n2, std::numbers::pi + 1e-6);
    // Riesz-Thorin between 2 and infinity (row sums equal column sums here).
    EXPECT_LE(n3, std::pow(n2, 2.0 / 3.0) * std::pow(n1, 1.0 / 3.0) * (1 + 1e-12));
    // A unit vector already achieves (sum_i |A_i0|^3)^{1/3}.
    double col = 0.0;
    for (std::size_t i = 0; i < size; ++i) col += std::pow(std::abs(hmz::hilbert_entry(i, 0)), 3.0);
    EXPECT_GE(n3, std::cbrt(col));
  }
  const auto r = hmz::hilbert_matrix_growth(2.0, std::vector<std::size_t>{4, 16, 64, 256}, 2);
  const auto v = r.column("norm");
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GE(v[i], v[i - 1] - 1e-12);
  EXPECT_TRUE(r.verdict("below_pi").pass);
}

TEST(HilbertSection, InterlacingAndErrors) {
  const auto r = hmz::hilbert_section_deviation(std::vector<std::size_t>{8, 16, 32, 64, 128, 256, 512, 1024}, 2);
  EXPECT_TRUE(r.verdict("interlacing").pass);
  for (const auto& row : r.rows) {
    EXPECT_GE(row.get("size_I"), 1.0);
    EXPECT_LT(row.get("scaled_deviation"), 0.1);
  }
  EXPECT_THROW(hmz::hilbert_section_deviation(std::vector<std::size_t>{4, 16}), hmz::usage_error);
}

TEST(KernelExperiments, FirstOrderAndDiagonal) {
  const auto kb = hmz::kernel_bound(std::vector<std::size_t>{1, 2, 4, 8}, 0.9, 2);
  EXPECT_NEAR(kb.rows[0].get("continuous"), std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(kb.rows[1].get("continuous"), std::sqrt(2.0), 1e-7);  // K^2 at s = 0 is still K_0
  for (const auto& row : kb.rows) {
    EXPECT_GT(row.get("discrete_m_2n"), 0.5);
    EXPECT_LT(row.get("discrete_m_2n"), 3.0);
  }
  EXPECT_THROW(hmz::kernel_bound(std::vector<std::size_t>{1}, 1.0), hmz::usage_error);
  EXPECT_THROW(hmz::kernel_bound(std::vector<std::size_t>{0, 1}, 0.5), hmz::usage_error);

  const std::vector<std::size_t> ns{10, 20};
  const auto diag = hmz::kernel_diagonal_growth(ns, 1);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const auto rule = hmz::build_rule(ns[i]);
    const std::size_t m = (3 * ns[i] + 1) / 2;
    double direct = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double h = hmz::hermite_function(k, rule.node(0));
      direct += (1.0 - static_cast<double>(k) / m) * h * h;
    }
    EXPECT_NEAR(diag.rows[i].get("diagonal"), rule.mu(0) * direct, 1e-12);
  }
}

TEST(Report, AccessorsAndSerialisation) {
  const auto r = hmz::mz_witness_hn(3.0, small_list, 1);
  EXPECT_THROW(r.fit("nope"), hmz::usage_error);
  EXPECT_THROW(r.verdict("nope"), hmz::usage_error);
  EXPECT_THROW(r.rows[0].get("nope"), hmz::usage_error);

  const auto j = hmz::to_json(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "params", "rows", "summary", "fits", "verdicts", "warnings"}));
  EXPECT_EQ(j["rows"].size(), small_list.size());
  EXPECT_EQ(j["rows"][0]["n"].get<double>(), 8.0);

  const auto csv = hmz::to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,direct,closed_form,rel_diff");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(small_list.size() + 1));
  EXPECT_EQ(hmz::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(hmz::format_double(std::numbers::pi)), std::numbers::pi);

  const auto inf = hmz::to_json(hmz::mz_ratio_sweep({2, hmz::infinity, 2.0}, std::vector<std::size_t>{4}, 1, 1, 1));
  EXPECT_EQ(inf["params"]["q"], "inf");
}

}  // namespace
