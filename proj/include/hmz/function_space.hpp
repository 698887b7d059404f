#pragma once

// X = (R^d, l_q) valued functions on the line and their L_p norms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "hmz/errors.hpp"
#include "hmz/panel_integration.hpp"
#include "hmz/quadrature.hpp"

namespace hmz {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct NormSpec {
  std::size_t d = 1;
  double q = 2.0;  // inner l_q exponent, may be infinity
  double p = 2.0;  // outer exponent; infinity only for discrete norms

  void validate() const {
    if (d < 1) throw usage_error("NormSpec: d must be at least 1");
    if (!(q >= 1.0)) throw usage_error("NormSpec: q must be at least 1");
    if (!(p >= 1.0)) throw usage_error("NormSpec: p must be at least 1");
  }
  /// p' = p/(p-1).
  double p_conjugate() const {
    if (p == 1.0) return infinity;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
  }
};

class VectorValue {
 public:
  VectorValue() = default;
  explicit VectorValue(std::size_t d) : c_(d, 0.0) {}
  VectorValue(std::initializer_list<double> xs) : c_(xs) {}
  explicit VectorValue(std::vector<double> xs) : c_(std::move(xs)) {}

  std::size_t size() const { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  std::span<double> components() { return c_; }
  std::span<const double> components() const { return c_; }

  VectorValue& operator*=(double s) {
    for (double& x : c_) x *= s;
    return *this;
  }
  VectorValue& operator+=(const VectorValue& o) {
    if (o.size() != size()) throw shape_error("VectorValue: dimension mismatch");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  friend VectorValue operator*(double s, VectorValue v) { return v *= s; }
  friend VectorValue operator+(VectorValue a, const VectorValue& b) { return a += b; }
  friend bool operator==(const VectorValue&, const VectorValue&) = default;

 private:
  std::vector<double> c_;
};

/// l_q norm of a component array.
inline double lq_norm(std::span<const double> v, double q) {
  if (v.empty()) return 0.0;
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (v.size() == 1) return std::abs(v[0]);
  if (q == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x) / m, q);
  return m * std::pow(s, 1.0 / q);
}

inline double norm_x(const VectorValue& v, const NormSpec& spec) {
  if (v.size() != spec.d)
    throw shape_error("norm_x: value has " + std::to_string(v.size()) + " components, spec has d = " +
                      std::to_string(spec.d));
  return lq_norm(v.components(), spec.q);
}

enum class Decay {
  gaussian,   // (polynomial) * exp(-t^2/2)
  algebraic,  // integrable power-law tails
  none,
};

/// t -> R^d. The callable must be safe to invoke concurrently.
struct FunctionHandle {
  std::function<void(double, std::span<double>)> eval;
  std::size_t dim = 1;
  Decay decay = Decay::gaussian;

  VectorValue operator()(double t) const {
    VectorValue v(dim);
    eval(t, v.components());
    return v;
  }
};

inline FunctionHandle scalar_function(std::function<double(double)> f, Decay decay = Decay::gaussian) {
  return {[f = std::move(f)](double t, std::span<double> out) { out[0] = f(t); }, 1, decay};
}

namespace detail {

inline bool is_even_integer(double x) { return std::isfinite(x) && x == std::floor(x) && std::fmod(x, 2.0) == 0.0; }

// Scalar functions of g(t) whose sign changes mark points where ||g(t)||_q^p
// is not smooth.
inline std::vector<std::function<double(std::span<const double>)>> kink_indicators(const NormSpec& spec) {
  std::vector<std::function<double(std::span<const double>)>> out;
  const std::size_t d = spec.d;
  if (d == 1) {
    if (!is_even_integer(spec.p)) out.emplace_back([](std::span<const double> v) { return v[0]; });
    return out;
  }
  if (!is_even_integer(spec.q) || std::isinf(spec.q)) {
    for (std::size_t a = 0; a < d; ++a) out.emplace_back([a](std::span<const double> v) { return v[a]; });
  }
  if (std::isinf(spec.q)) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) {
        out.emplace_back([a, b](std::span<const double> v) { return v[a] - v[b]; });
        out.emplace_back([a, b](std::span<const double> v) { return v[a] + v[b]; });
      }
  }
  return out;
}

// Adds the sign changes of every kink indicator, located by bracketing on a
// 9-point sample of each panel, to the breakpoint list.
inline std::vector<double> split_at_kinks(const FunctionHandle& g, const NormSpec& spec, std::vector<double> breaks) {
  const auto indicators = kink_indicators(spec);
  if (indicators.empty()) return breaks;
  constexpr int samples = 8;
  std::vector<double> vals((samples + 1) * g.dim);
  std::vector<double> scratch(g.dim);
  std::vector<double> extra;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (!(b > a)) continue;
    std::vector<double> xs(samples + 1);
    for (int i = 0; i <= samples; ++i) {
      xs[i] = (i == samples) ? b : a + (b - a) * i / samples;
      g.eval(xs[i], std::span<double>(vals).subspan(i * g.dim, g.dim));
    }
    for (const auto& ind : indicators) {
      for (int i = 0; i < samples; ++i) {
        const double f0 = ind(std::span<const double>(vals).subspan(i * g.dim, g.dim));
        const double f1 = ind(std::span<const double>(vals).subspan((i + 1) * g.dim, g.dim));
        if (!(f0 * f1 < 0.0)) continue;
        auto h = [&](double t) {
          g.eval(t, scratch);
          return ind(scratch);
        };
        std::uintmax_t iters = 60;
        const auto bracket =
            boost::math::tools::toms748_solve(h, xs[i], xs[i + 1], f0, f1, boost::math::tools::eps_tolerance<double>(48),
                                              iters);
        const double root = 0.5 * (bracket.first + bracket.second);
        if (root > a && root < b) extra.push_back(root);
      }
    }
  }
  breaks.insert(breaks.end(), extra.begin(), extra.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

inline double truncation_radius(std::size_t n_hint) { return std::sqrt(2.0 * static_cast<double>(n_hint) + 3.0) + 12.0; }

// Equal panels no wider than h covering [lo, hi].
inline void append_uniform(std::vector<double>& out, double lo, double hi, double h) {
  const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / h)));
  for (std::size_t i = 0; i < pieces; ++i) out.push_back(lo + (hi - lo) * static_cast<double>(i) / pieces);
}

inline std::vector<double> uniform_breaks(std::size_t n_hint) {
  const double T = truncation_radius(n_hint);
  const double h = std::numbers::pi / std::sqrt(2.0 * static_cast<double>(n_hint) + 3.0);
  std::vector<double> b;
  append_uniform(b, -T, T, h);
  b.push_back(T);
  return b;
}

inline std::vector<double> node_breaks(const QuadratureRule& rule) {
  const double T = truncation_radius(rule.degree());
  const double h = std::numbers::pi / rule.sqrt_N();
  const auto nodes = rule.nodes();
  std::vector<double> b;
  append_uniform(b, -T, nodes.back(), h);
  for (std::size_t j = nodes.size(); j-- > 1;) b.push_back(nodes[j]);
  append_uniform(b, nodes.front(), T, h);
  b.push_back(T);
  return b;
}

inline double integrate_norm_power(const FunctionHandle& g, const NormSpec& spec, std::vector<double> breaks,
                                   const PanelOptions& opts) {
  breaks = split_at_kinks(g, spec, std::move(breaks));
  std::vector<double> scratch(g.dim);
  PanelIntegrand integrand = [&](double t, std::span<double> out) {
    g.eval(t, scratch);
    const double r = lq_norm(scratch, spec.q);
    out[0] = (spec.p == 2.0) ? r * r : std::pow(r, spec.p);
  };
  return integrate_panels(integrand, 1, breaks, opts)[0];
}

inline void check_weighted_args(const FunctionHandle& g, const NormSpec& spec, const char* where) {
  spec.validate();
  if (g.dim != spec.d) throw shape_error(std::string(where) + ": handle dimension differs from spec.d");
  if (g.decay != Decay::gaussian)
    throw usage_error(std::string(where) + ": integrand must be declared (polynomial) * exp(-t^2/2)");
  if (std::isinf(spec.p)) throw usage_error(std::string(where) + ": p = infinity is not supported");
}

}  // namespace detail

/// (int ||g(t)||_q^p dt)^{1/p} for g = (polynomial of degree <= n_hint) * exp(-t^2/2),
/// integrated over |t| <= sqrt(2 n_hint + 3) + 12.
inline double weighted_lp_norm(const FunctionHandle& g, const NormSpec& spec, std::size_t n_hint,
                               const PanelOptions& opts = {}) {
  detail::check_weighted_args(g, spec, "weighted_lp_norm");
  const double s = detail::integrate_norm_power(g, spec, detail::uniform_breaks(n_hint), opts);
  return std::pow(s, 1.0 / spec.p);
}

/// Same norm with panel boundaries at the nodes of `rule`.
inline double weighted_lp_norm(const FunctionHandle& g, const NormSpec& spec, const QuadratureRule& rule,
                               const PanelOptions& opts = {}) {
  detail::check_weighted_args(g, spec, "weighted_lp_norm");
  const double s = detail::integrate_norm_power(g, spec, detail::node_breaks(rule), opts);
  return std::pow(s, 1.0 / spec.p);
}

/// (int_a^b ||g(t)||_q^p dt)^{1/p}, panels of width pi/sqrt(2 n_hint + 3).
inline double lp_norm_on(const FunctionHandle& g, const NormSpec& spec, double a, double b, std::size_t n_hint,
                         const PanelOptions& opts = {}) {
  spec.validate();
  if (g.dim != spec.d) throw shape_error("lp_norm_on: handle dimension differs from spec.d");
  if (std::isinf(spec.p)) throw usage_error("lp_norm_on: p = infinity is not supported");
  if (!(b > a)) throw usage_error("lp_norm_on: requires a < b");
  std::vector<double> breaks;
  detail::append_uniform(breaks, a, b, std::numbers::pi / std::sqrt(2.0 * static_cast<double>(n_hint) + 3.0));
  breaks.push_back(b);
  return std::pow(detail::integrate_norm_power(g, spec, std::move(breaks), opts), 1.0 / spec.p);
}

/// Unweighted whole-line norm (int ||f(t)||_q^p dt)^{1/p}; accepts algebraic tails.
inline double lp_norm(const FunctionHandle& f, const NormSpec& spec, std::size_t n_hint, const PanelOptions& opts = {}) {
  spec.validate();
  if (f.dim != spec.d) throw shape_error("lp_norm: handle dimension differs from spec.d");
  if (f.decay == Decay::none) throw usage_error("lp_norm: handle declares no decay; the norm may diverge");
  if (std::isinf(spec.p)) throw usage_error("lp_norm: p = infinity is not supported");
  auto core = detail::split_at_kinks(f, spec, detail::uniform_breaks(n_hint));
  std::vector<double> scratch(f.dim);
  PanelIntegrand integrand = [&](double t, std::span<double> out) {
    f.eval(t, scratch);
    const double r = lq_norm(scratch, spec.q);
    out[0] = std::pow(r, spec.p);
  };
  return std::pow(integrate_whole_line(integrand, 1, core, opts)[0], 1.0 / spec.p);
}

}  // namespace hmz
