#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hmz/errors.hpp"
#include "hmz/function_space.hpp"
#include "hmz/hermite.hpp"
#include "hmz/interpolation.hpp"
#include "hmz/panel_integration.hpp"
#include "hmz/parallel.hpp"
#include "hmz/quadrature.hpp"

namespace hmz {

/// a_0 ... a_n, each in R^d, stored row-major.
class HermiteCoefficients {
 public:
  HermiteCoefficients(std::size_t d, std::vector<double> a) : d_(d), a_(std::move(a)) {
    if (d_ == 0 || a_.empty() || a_.size() % d_ != 0) throw shape_error("HermiteCoefficients: bad array shape");
  }

  std::size_t degree() const { return a_.size() / d_ - 1; }
  std::size_t dim() const { return d_; }
  std::span<const double> row(std::size_t k) const { return std::span<const double>(a_).subspan(k * d_, d_); }
  VectorValue at(std::size_t k) const {
    const auto r = row(k);
    return VectorValue(std::vector<double>(r.begin(), r.end()));
  }
  std::span<const double> data() const { return a_; }

 private:
  std::size_t d_;
  std::vector<double> a_;
};

/// a_j = int f(t) H_j(t) dt for j <= n.
inline HermiteCoefficients coefficients(const FunctionHandle& f, std::size_t n, const PanelOptions& opts = {}) {
  if (f.decay == Decay::none) throw usage_error("coefficients: handle declares no decay");
  const std::size_t d = f.dim;
  const std::size_t terms = n + 1;
  std::vector<double> fv(d);
  std::vector<double> hv(terms);
  PanelIntegrand integrand = [&](double t, std::span<double> out) {
    f.eval(t, fv);
    hermite_functions(t, hv);
    for (std::size_t k = 0; k < terms; ++k)
      for (std::size_t a = 0; a < d; ++a) out[k * d + a] = fv[a] * hv[k];
  };
  auto breaks = detail::uniform_breaks(n);
  breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return HermiteCoefficients(d, integrate_panels(integrand, terms * d, breaks, opts));
}

/// Weight applied to a_j by P_m.
inline double partial_sum_multiplier(std::size_t m, std::size_t j) { return j <= m ? 1.0 : 0.0; }

/// (1 - j/m)_+, the weight applied by sigma_m.
inline double cesaro_multiplier(std::size_t m, std::size_t j) {
  if (m == 0) throw usage_error("cesaro_multiplier: m must be at least 1");
  return j < m ? 1.0 - static_cast<double>(j) / static_cast<double>(m) : 0.0;
}

/// 1 on [0, 2n], linear down to 0 at 4n.
inline double vallee_poussin_multiplier(std::size_t n, std::size_t j) {
  if (n == 0) throw usage_error("vallee_poussin_multiplier: n must be at least 1");
  if (j <= 2 * n) return 1.0;
  if (j >= 4 * n) return 0.0;
  return static_cast<double>(4 * n - j) / static_cast<double>(2 * n);
}

/// sum_{j < terms} w(j) a_j H_j, as an evaluable function.
inline WeightedPolyEval apply_multiplier(const HermiteCoefficients& c, std::size_t terms,
                                         const std::function<double(std::size_t)>& w) {
  const std::size_t d = c.dim();
  terms = std::max<std::size_t>(terms, 1);
  std::vector<double> out(terms * d, 0.0);
  for (std::size_t j = 0; j < terms && j <= c.degree(); ++j) {
    const double wj = w(j);
    const auto r = c.row(j);
    for (std::size_t a = 0; a < d; ++a) out[j * d + a] = wj * r[a];
  }
  return WeightedPolyEval::coefficients(d, std::move(out));
}

inline WeightedPolyEval partial_sum_operator(const HermiteCoefficients& c, std::size_t m) {
  if (m > c.degree()) throw usage_error("partial_sum: m exceeds coefficient degree");
  return apply_multiplier(c, m + 1, [](std::size_t) { return 1.0; });
}

inline WeightedPolyEval cesaro_operator(const HermiteCoefficients& c, std::size_t m) {
  if (m == 0) throw usage_error("cesaro_mean: m must be at least 1");
  if (m - 1 > c.degree()) throw usage_error("cesaro_mean: needs coefficients up to m - 1");
  return apply_multiplier(c, m, [m](std::size_t j) { return cesaro_multiplier(m, j); });
}

inline WeightedPolyEval vallee_poussin_operator(const HermiteCoefficients& c, std::size_t n) {
  if (n == 0) throw usage_error("vallee_poussin: n must be at least 1");
  if (c.degree() + 1 < 4 * n) throw usage_error("vallee_poussin: needs coefficients up to 4n - 1");
  return apply_multiplier(c, 4 * n, [n](std::size_t j) { return vallee_poussin_multiplier(n, j); });
}

inline VectorValue partial_sum(const HermiteCoefficients& c, std::size_t m, double t) {
  return partial_sum_operator(c, m)(t);
}

inline VectorValue cesaro_mean(const HermiteCoefficients& c, std::size_t m, double t) {
  return cesaro_operator(c, m)(t);
}

inline VectorValue vallee_poussin(const HermiteCoefficients& c, std::size_t n, double t) {
  return vallee_poussin_operator(c, n)(t);
}

/// K_j(t, s) = sum_{i <= j} H_i(t) H_i(s).
inline double kernel(std::size_t j, double t, double s) {
  detail::require_finite(t, "kernel");
  detail::require_finite(s, "kernel");
  if (std::abs(t - s) < 1e-6 * (1.0 + std::max(std::abs(t), std::abs(s)))) {
    detail::ScaledHermiteRecurrence rt(t);
    detail::ScaledHermiteRecurrence rs(s);
    double sum = rt.value() * rs.value();
    for (std::size_t i = 1; i <= j; ++i) {
      rt.advance();
      rs.advance();
      sum += rt.value() * rs.value();
    }
    return sum;
  }
  // Christoffel-Darboux.
  detail::ScaledHermiteRecurrence rt(t);
  detail::ScaledHermiteRecurrence rs(s);
  rt.advance_to(j + 1);
  rs.advance_to(j + 1);
  const double num = rt.value() * rs.previous() - rt.previous() * rs.value();
  return std::sqrt(0.5 * static_cast<double>(j + 1)) * num / (t - s);
}

/// K^m(t, s) = (1/m) sum_{j < m} K_j(t, s) = sum_{i < m} (1 - i/m) H_i(t) H_i(s).
inline double kernel_mean(std::size_t m, double t, double s) {
  if (m == 0) throw usage_error("kernel_mean: m must be at least 1");
  detail::require_finite(t, "kernel_mean");
  detail::require_finite(s, "kernel_mean");
  detail::ScaledHermiteRecurrence rt(t);
  detail::ScaledHermiteRecurrence rs(s);
  double sum = rt.value() * rs.value();
  for (std::size_t i = 1; i < m; ++i) {
    rt.advance();
    rs.advance();
    sum += cesaro_multiplier(m, i) * rt.value() * rs.value();
  }
  return sum;
}

/// 129 Chebyshev points on [-(sqrt(N) + 2), sqrt(N) + 2].
inline std::vector<double> default_s_grid(double N) {
  constexpr int count = 129;
  const double R = std::sqrt(N) + 2.0;
  std::vector<double> grid(count);
  for (int k = 0; k < count; ++k) grid[k] = R * std::cos(std::numbers::pi * (k + 0.5) / count);
  grid[count / 2] = 0.0;
  return grid;
}

namespace detail {

// Coefficients (1 - i/m) H_i(s) turning K^m(., s) into a Hermite series.
inline std::vector<double> kernel_mean_row(std::size_t m, double s) {
  std::vector<double> c(m);
  hermite_functions(s, c);
  for (std::size_t i = 0; i < m; ++i) c[i] *= cesaro_multiplier(m, i);
  return c;
}

}  // namespace detail

/// max over s in grid of int |K^m(t, s)| dt.
inline double freud_poiani_scan(std::size_t m, std::span<const double> s_grid, std::size_t threads = 1,
                                const PanelOptions& opts = {.rel_tol = 1e-8}) {
  if (m == 0) throw usage_error("freud_poiani_scan: m must be at least 1");
  if (s_grid.empty()) throw usage_error("freud_poiani_scan: empty s grid");
  std::vector<double> values(s_grid.size());
  const NormSpec spec{1, 1.0, 1.0};
  parallel_for(s_grid.size(), threads, [&](std::size_t k) {
    const auto g = WeightedPolyEval::coefficients(1, detail::kernel_mean_row(m, s_grid[k])).handle();
    values[k] = detail::integrate_norm_power(g, spec, detail::uniform_breaks(m - 1), opts);
  });
  return *std::max_element(values.begin(), values.end());
}

/// max over s in grid of sum_{|t_j| <= delta sqrt(N)} mu_j |K^m(t_j, s)|.
inline double discrete_kernel_scan(const QuadratureRule& rule, std::size_t m, double delta,
                                   std::span<const double> s_grid, std::size_t threads = 1) {
  if (m == 0) throw usage_error("discrete_kernel_scan: m must be at least 1");
  if (m > 4 * rule.degree()) throw usage_error("discrete_kernel_scan: m exceeds 4n");
  if (!(delta > 0.0 && delta < 1.0)) throw usage_error("discrete_kernel_scan: delta must lie in (0, 1)");
  if (s_grid.empty()) throw usage_error("discrete_kernel_scan: empty s grid");

  const double radius = delta * rule.sqrt_N();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < rule.size(); ++j)
    if (std::abs(rule.node(j)) <= radius) active.push_back(j);

  std::vector<double> table(active.size() * m);
  for (std::size_t r = 0; r < active.size(); ++r)
    hermite_functions(rule.node(active[r]), std::span<double>(table).subspan(r * m, m));

  std::vector<double> values(s_grid.size());
  parallel_for(s_grid.size(), threads, [&](std::size_t k) {
    const auto c = detail::kernel_mean_row(m, s_grid[k]);
    double sum = 0.0;
    for (std::size_t r = 0; r < active.size(); ++r) {
      double kv = 0.0;
      const double* h = table.data() + r * m;
      for (std::size_t i = 0; i < m; ++i) kv += c[i] * h[i];
      sum += rule.mu(active[r]) * std::abs(kv);
    }
    values[k] = sum;
  });
  return *std::max_element(values.begin(), values.end());
}

}  // namespace hmz
