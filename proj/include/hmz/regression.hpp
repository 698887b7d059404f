#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "hmz/errors.hpp"

namespace hmz {

enum class FitWindow { top_half, all };

/// Least-squares line through (log n, log y).
struct RegressionFit {
  std::string name;
  FitWindow window = FitWindow::top_half;
  std::vector<double> x;  // log n
  std::vector<double> y;  // log value
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // log units
  double slope_stderr = 0.0;
  double slope_ci95 = 0.0;  // half-width

  std::size_t count() const { return x.size(); }
  bool slope_within(double lo, double hi) const { return slope >= lo && slope <= hi; }
};

namespace detail {

inline void least_squares(RegressionFit& fit) {
  const std::size_t m = fit.x.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += fit.x[i];
    my += fit.y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (fit.x[i] - mx) * (fit.x[i] - mx);
    sxy += (fit.x[i] - mx) * (fit.y[i] - my);
  }
  if (!(sxx > 0.0)) throw usage_error("fit '" + fit.name + "': abscissae are all equal");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  fit.max_residual = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = fit.y[i] - (fit.intercept + fit.slope * fit.x[i]);
    sse += r * r;
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  const double dof = static_cast<double>(m) - 2.0;
  fit.slope_stderr = std::sqrt(sse / dof / sxx);
  const boost::math::students_t dist(dof);
  fit.slope_ci95 = boost::math::quantile(boost::math::complement(dist, 0.025)) * fit.slope_stderr;
  if (!std::isfinite(fit.slope)) throw numerical_error("fit '" + fit.name + "': slope is not finite");
}

}  // namespace detail

/// Fits log y against log n. The top-half window keeps indices >= size/2 of
/// the ascending n-list; at least four points are required inside the window.
inline RegressionFit fit_power_law(std::string name, std::span<const double> n, std::span<const double> y,
                                   FitWindow window = FitWindow::top_half) {
  if (n.size() != y.size()) throw shape_error("fit_power_law: n and y differ in length");
  const std::size_t first = window == FitWindow::top_half ? n.size() / 2 : 0;
  RegressionFit fit;
  fit.name = std::move(name);
  fit.window = window;
  for (std::size_t i = first; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
      throw numerical_error("fit '" + fit.name + "': needs positive finite data, got y = " + std::to_string(y[i]));
    fit.x.push_back(std::log(n[i]));
    fit.y.push_back(std::log(y[i]));
  }
  if (fit.x.size() < 4) throw usage_error("fit '" + fit.name + "': needs at least 4 points in the window");
  detail::least_squares(fit);
  return fit;
}

/// Plain least-squares line through (x, y), no logarithms.
inline RegressionFit fit_line(std::string name, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw shape_error("fit_line: x and y differ in length");
  if (x.size() < 4) throw usage_error("fit '" + name + "': needs at least 4 points");
  RegressionFit fit;
  fit.name = std::move(name);
  fit.window = FitWindow::all;
  fit.x.assign(x.begin(), x.end());
  fit.y.assign(y.begin(), y.end());
  detail::least_squares(fit);
  return fit;
}

/// Model y = n^{-1/8} (a log n + b)^{1/4}, fitted linearly as
/// y^4 n^{1/2} = a log n + b. Returns the max |log y - log model|.
inline double log_corrected_residual(std::span<const double> n, std::span<const double> y) {
  if (n.size() != y.size() || n.size() < 4) throw usage_error("log_corrected_residual: needs at least 4 points");
  RegressionFit lin;
  lin.name = "log_corrected";
  for (std::size_t i = 0; i < n.size(); ++i) {
    lin.x.push_back(std::log(n[i]));
    lin.y.push_back(std::pow(y[i], 4.0) * std::sqrt(n[i]));
  }
  detail::least_squares(lin);
  double worst = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double inner = lin.slope * lin.x[i] + lin.intercept;
    if (!(inner > 0.0)) return INFINITY;
    const double model = std::pow(n[i], -0.125) * std::pow(inner, 0.25);
    worst = std::max(worst, std::abs(std::log(y[i]) - std::log(model)));
  }
  return worst;
}

}  // namespace hmz
