#pragma once

// Composite 16-point Gauss-Legendre integration of vector-valued integrands
// with adaptive bisection, plus an algebraic map for the two infinite tails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hmz/errors.hpp"

namespace hmz {

struct GaussLegendre16 {
  std::array<double, 16> nodes{};    // ascending, on [-1, 1]
  std::array<double, 16> weights{};
};

inline const GaussLegendre16& gauss_legendre16() {
  static const GaussLegendre16 rule = [] {
    constexpr int m = 16;
    GaussLegendre16 r;
    auto legendre = [](double x, double& p, double& dp) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      p = p1;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
    };
    for (int i = 0; i < m / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
      double p = 0.0;
      double dp = 0.0;
      for (int it = 0; it < 12; ++it) {
        legendre(x, p, dp);
        const double dx = p / dp;
        x -= dx;
        if (std::abs(dx) < 1e-17) break;
      }
      legendre(x, p, dp);
      r.nodes[m - 1 - i] = x;
      r.nodes[i] = -x;
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.weights[i] = w;
      r.weights[m - 1 - i] = w;
    }
    return r;
  }();
  return rule;
}

/// f(t, out) writes dim values into out.
using PanelIntegrand = std::function<void(double, std::span<double>)>;

struct PanelOptions {
  double rel_tol = 1e-11;
  double abs_tol = 0.0;
  int max_depth = 40;
  /// Each base panel is first cut into this many equal pieces (convergence certificates).
  std::size_t subdivide = 1;
};

namespace detail {

inline double pairwise_sum(const std::vector<double>& pieces, std::size_t dim, std::size_t c, std::size_t lo,
                           std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += pieces[k * dim + c];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(pieces, dim, c, lo, mid) + pairwise_sum(pieces, dim, c, mid, hi);
}

class AdaptivePanels {
 public:
  AdaptivePanels(const PanelIntegrand& f, std::size_t dim, const PanelOptions& opts)
      : f_(f), dim_(dim), opts_(opts), scratch_(dim) {}

  std::vector<double> run(std::span<const double> breakpoints) {
    if (breakpoints.size() < 2) throw usage_error("integrate_panels: need at least two breakpoints");
    std::vector<double> edges;
    const std::size_t sub = std::max<std::size_t>(1, opts_.subdivide);
    edges.reserve((breakpoints.size() - 1) * sub + 1);
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
      const double a = breakpoints[k];
      const double b = breakpoints[k + 1];
      if (!std::isfinite(a) || !std::isfinite(b) || !(b >= a))
        throw usage_error("integrate_panels: breakpoints must be finite and non-decreasing");
      if (b == a) continue;
      for (std::size_t s = 0; s < sub; ++s) edges.push_back(a + (b - a) * static_cast<double>(s) / sub);
    }
    edges.push_back(breakpoints.back());
    const std::size_t panels = edges.size() - 1;
    length_ = edges.back() - edges.front();

    std::vector<double> coarse(panels * dim_);
    for (std::size_t k = 0; k < panels; ++k)
      apply(edges[k], edges[k + 1], std::span<double>(coarse).subspan(k * dim_, dim_));

    double scale = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < panels; ++k) s += std::abs(coarse[k * dim_ + c]);
      scale = std::max(scale, s);
    }
    budget_ = std::max(opts_.abs_tol, opts_.rel_tol * scale);

    pieces_.clear();
    for (std::size_t k = 0; k < panels; ++k) {
      std::vector<double> whole(coarse.begin() + static_cast<std::ptrdiff_t>(k * dim_),
                                coarse.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim_));
      refine(edges[k], edges[k + 1], whole, 0);
    }

    std::vector<double> total(dim_, 0.0);
    const std::size_t count = pieces_.size() / std::max<std::size_t>(dim_, 1);
    for (std::size_t c = 0; c < dim_; ++c) total[c] = pairwise_sum(pieces_, dim_, c, 0, count);
    return total;
  }

 private:
  void apply(double a, double b, std::span<double> out) {
    const auto& gl = gauss_legendre16();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < 16; ++i) {
      f_(c + h * gl.nodes[i], scratch_);
      const double w = h * gl.weights[i];
      for (std::size_t k = 0; k < dim_; ++k) out[k] += w * scratch_[k];
    }
  }

  void refine(double a, double b, const std::vector<double>& whole, int depth) {
    const double m = 0.5 * (a + b);
    std::vector<double> left(dim_);
    std::vector<double> right(dim_);
    apply(a, m, left);
    apply(m, b, right);
    double diff = 0.0;
    double mag = 0.0;
    bool finite = true;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double s = left[k] + right[k];
      finite = finite && std::isfinite(s);
      diff = std::max(diff, std::abs(s - whole[k]));
      mag = std::max(mag, std::abs(s));
    }
    if (!finite) throw numerical_error("integrate_panels: integrand is not finite");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double tol = std::max(budget_ * (b - a) / length_, 64.0 * eps * mag);
    if (diff <= tol || !(m > a && m < b)) {
      for (std::size_t k = 0; k < dim_; ++k) pieces_.push_back(left[k] + right[k]);
      return;
    }
    if (depth >= opts_.max_depth)
      throw numerical_error("integrate_panels: no convergence on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "]");
    refine(a, m, left, depth + 1);
    refine(m, b, right, depth + 1);
  }

  const PanelIntegrand& f_;
  std::size_t dim_;
  PanelOptions opts_;
  std::vector<double> scratch_;
  std::vector<double> pieces_;
  double budget_ = 0.0;
  double length_ = 1.0;
};

}  // namespace detail

/// Integral over [breakpoints.front(), breakpoints.back()]. Panels are refined
/// by bisection until whole and halved estimates agree within a share of
/// max(abs_tol, rel_tol * sum|panel|) proportional to panel width. Summation
/// order is fixed, so the result does not depend on anything but the inputs.
inline std::vector<double> integrate_panels(const PanelIntegrand& f, std::size_t dim,
                                            std::span<const double> breakpoints, const PanelOptions& opts = {}) {
  if (dim == 0) throw usage_error("integrate_panels: dimension must be positive");
  detail::AdaptivePanels engine(f, dim, opts);
  return engine.run(breakpoints);
}

inline double integrate_panels_scalar(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                      const PanelOptions& opts = {}) {
  PanelIntegrand g = [&f](double t, std::span<double> out) { out[0] = f(t); };
  return integrate_panels(g, 1, breakpoints, opts)[0];
}

/// Integral over the whole line. `core` (ascending, from -T to T with T > 0)
/// covers the middle; each tail |t| > T is mapped by t = T e^x, x in [0, 200],
/// which turns power-law decay into exponential decay.
inline std::vector<double> integrate_whole_line(const PanelIntegrand& f, std::size_t dim,
                                                std::span<const double> core, const PanelOptions& opts = {}) {
  if (core.size() < 2) throw usage_error("integrate_whole_line: need at least two core breakpoints");
  const double lo = core.front();
  const double hi = core.back();
  if (!(lo < 0.0 && hi > 0.0)) throw usage_error("integrate_whole_line: core must straddle the origin");
  constexpr int tail_length = 200;

  std::vector<double> scratch(dim);
  PanelIntegrand mapped = [&](double x, std::span<double> out) {
    if (x >= lo && x <= hi) {
      f(x, out);
      return;
    }
    const bool right = x > hi;
    const double t = right ? hi * std::exp(x - hi) : lo * std::exp(lo - x);
    f(t, scratch);
    const double jac = std::abs(t);
    for (std::size_t k = 0; k < dim; ++k) out[k] = scratch[k] * jac;
  };

  std::vector<double> breaks;
  breaks.reserve(core.size() + 2 * tail_length);
  for (int k = tail_length; k >= 1; --k) breaks.push_back(lo - k);
  breaks.insert(breaks.end(), core.begin(), core.end());
  for (int k = 1; k <= tail_length; ++k) breaks.push_back(hi + k);
  return integrate_panels(mapped, dim, breaks, opts);
}

}  // namespace hmz
