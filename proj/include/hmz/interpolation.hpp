#pragma once

// Lagrange interpolation at the zeros of H_{n+1}, kept in weighted form:
//
//   I_n f(t) e^{-t^2/2} = sum_j w_j L_j(t),   w_j = f(t_j) e^{-t_j^2/2},
//   L_j(t) = H_{n+1}(t) / (H'_{n+1}(t_j) (t - t_j)).
//
// Neither h_{n+1} nor e^{t^2/2} is ever formed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmz/errors.hpp"
#include "hmz/function_space.hpp"
#include "hmz/hermite.hpp"
#include "hmz/quadrature.hpp"

namespace hmz {

/// Samples at the n+1 nodes, stored as w_j = f(t_j) e^{-t_j^2/2} (row j, d columns).
class NodeValues {
 public:
  NodeValues() = default;

  static NodeValues from_weighted(std::size_t count, std::size_t d, std::vector<double> weighted) {
    if (d == 0) throw shape_error("NodeValues: d must be positive");
    if (weighted.size() != count * d) throw shape_error("NodeValues: expected count * d entries");
    NodeValues nv;
    nv.count_ = count;
    nv.d_ = d;
    nv.w_ = std::move(weighted);
    return nv;
  }

  static NodeValues from_raw(const QuadratureRule& rule, std::size_t d, std::vector<double> raw) {
    if (raw.size() != rule.size() * d) throw shape_error("NodeValues: expected (n+1) * d raw entries");
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double e = std::exp(-0.5 * rule.node(j) * rule.node(j));
      for (std::size_t a = 0; a < d; ++a) raw[j * d + a] *= e;
    }
    return from_weighted(rule.size(), d, std::move(raw));
  }

  std::size_t size() const { return count_; }
  std::size_t dim() const { return d_; }
  std::span<const double> weighted(std::size_t j) const { return std::span<const double>(w_).subspan(j * d_, d_); }
  std::span<const double> weighted_data() const { return w_; }

  /// f(t_j); may overflow to infinity far out on large rules.
  VectorValue raw(const QuadratureRule& rule, std::size_t j) const {
    VectorValue v(d_);
    const double e = std::exp(0.5 * rule.node(j) * rule.node(j));
    for (std::size_t a = 0; a < d_; ++a) v[a] = w_[j * d_ + a] * e;
    return v;
  }

  NodeValues scaled(double s) const {
    NodeValues out = *this;
    for (double& x : out.w_) x *= s;
    return out;
  }

 private:
  std::size_t count_ = 0;
  std::size_t d_ = 1;
  std::vector<double> w_;
};

inline void require_matching(const QuadratureRule& rule, const NodeValues& nv, const char* where) {
  if (nv.size() != rule.size())
    throw shape_error(std::string(where) + ": " + std::to_string(nv.size()) + " node values for a rule with " +
                      std::to_string(rule.size()) + " nodes");
}

/// Samples a raw function f at the nodes.
inline NodeValues sample_at_nodes(const FunctionHandle& f, const QuadratureRule& rule) {
  std::vector<double> raw(rule.size() * f.dim);
  for (std::size_t j = 0; j < rule.size(); ++j)
    f.eval(rule.node(j), std::span<double>(raw).subspan(j * f.dim, f.dim));
  return NodeValues::from_raw(rule, f.dim, std::move(raw));
}

/// Samples g = f e^{-t^2/2} at the nodes; stored as is.
inline NodeValues sample_weighted_at_nodes(const FunctionHandle& g, const QuadratureRule& rule) {
  std::vector<double> w(rule.size() * g.dim);
  for (std::size_t j = 0; j < rule.size(); ++j) g.eval(rule.node(j), std::span<double>(w).subspan(j * g.dim, g.dim));
  return NodeValues::from_weighted(rule.size(), g.dim, std::move(w));
}

namespace detail {

// Index of the node closest to t (nodes descending).
inline std::size_t nearest_node(std::span<const double> nodes, double t) {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), t, std::greater<>());
  if (it == nodes.end()) return nodes.size() - 1;
  const auto i = static_cast<std::size_t>(it - nodes.begin());
  if (i == 0) return 0;
  return (std::abs(nodes[i - 1] - t) < std::abs(nodes[i] - t)) ? i - 1 : i;
}

// L_i(t) for |t - t_i| sqrt(N) < 1e-3: Taylor expansion using H'' = 0 and
// H''' = -(N - t_i^2) H' at a zero of H_{n+1}.
inline double basis_near_node(const QuadratureRule& rule, std::size_t i, double t) {
  const double ti = rule.node(i);
  const double h = t - ti;
  return 1.0 - (rule.N() - ti * ti) * h * h / 6.0 + ti * h * h * h / 6.0;
}

inline bool near_node(const QuadratureRule& rule, std::size_t i, double t) {
  return std::abs(t - rule.node(i)) * rule.sqrt_N() < 1e-3;
}

}  // namespace detail

/// e^{-t^2/2} l_j(t) e^{t_j^2/2}, the coefficient of w_j in the weighted interpolant (j 0-based).
inline double weighted_lagrange_basis(const QuadratureRule& rule, std::size_t j, double t) {
  detail::require_finite(t, "weighted_lagrange_basis");
  if (j >= rule.size())
    throw usage_error("weighted_lagrange_basis: index " + std::to_string(j) + " out of range for " +
                      std::to_string(rule.size()) + " nodes");
  const double tj = rule.node(j);
  if (t == tj) return 1.0;
  if (detail::near_node(rule, j, t)) return detail::basis_near_node(rule, j, t);
  return hermite_function(rule.size(), t) / (rule.derivatives()[j] * (t - tj));
}

/// Evaluable t -> q(t) e^{-t^2/2} for X-valued q, from node values or Hermite coefficients.
class WeightedPolyEval {
 public:
  enum class Mode { lagrange, coefficients };

  static WeightedPolyEval lagrange(RulePtr rule, NodeValues nv) {
    if (!rule) throw usage_error("WeightedPolyEval: null rule");
    require_matching(*rule, nv, "interpolate");
    auto impl = std::make_shared<Impl>();
    impl->mode = Mode::lagrange;
    impl->d = nv.dim();
    impl->rule = std::move(rule);
    impl->nv = std::move(nv);
    return WeightedPolyEval(std::move(impl));
  }

  /// g(t) = sum_k a_k H_k(t), with a_k stored row-major (k, component).
  static WeightedPolyEval coefficients(std::size_t d, std::vector<double> a) {
    if (d == 0 || a.size() % d != 0 || a.empty()) throw shape_error("WeightedPolyEval: bad coefficient array");
    auto impl = std::make_shared<Impl>();
    impl->mode = Mode::coefficients;
    impl->d = d;
    impl->coef = std::move(a);
    return WeightedPolyEval(std::move(impl));
  }

  Mode mode() const { return impl_->mode; }
  std::size_t dim() const { return impl_->d; }
  /// Upper bound on the degree of q.
  std::size_t degree() const {
    return impl_->mode == Mode::lagrange ? impl_->rule->degree() : impl_->coef.size() / impl_->d - 1;
  }

  void eval_into(double t, std::span<double> out) const {
    detail::require_finite(t, "WeightedPolyEval");
    const Impl& m = *impl_;
    if (out.size() != m.d) throw shape_error("WeightedPolyEval: output has wrong dimension");
    std::fill(out.begin(), out.end(), 0.0);
    if (m.mode == Mode::coefficients) {
      detail::ScaledHermiteRecurrence rec(t);
      const std::size_t terms = m.coef.size() / m.d;
      for (std::size_t k = 0; k < terms; ++k) {
        if (k > 0) rec.advance();
        const double hk = rec.value();
        for (std::size_t a = 0; a < m.d; ++a) out[a] += m.coef[k * m.d + a] * hk;
      }
      return;
    }
    const QuadratureRule& rule = *m.rule;
    const auto nodes = rule.nodes();
    const auto deriv = rule.derivatives();
    const std::size_t i = detail::nearest_node(nodes, t);
    if (t == nodes[i]) {
      const auto w = m.nv.weighted(i);
      std::copy(w.begin(), w.end(), out.begin());
      return;
    }
    const bool close = detail::near_node(rule, i, t);
    const double H = hermite_function(rule.size(), t);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (close && j == i) continue;
      const double c = H / (deriv[j] * (t - nodes[j]));
      const auto w = m.nv.weighted(j);
      for (std::size_t a = 0; a < m.d; ++a) out[a] += c * w[a];
    }
    if (close) {
      const double c = detail::basis_near_node(rule, i, t);
      const auto w = m.nv.weighted(i);
      for (std::size_t a = 0; a < m.d; ++a) out[a] += c * w[a];
    }
  }

  VectorValue operator()(double t) const {
    VectorValue v(dim());
    eval_into(t, v.components());
    return v;
  }

  FunctionHandle handle() const {
    return {[self = *this](double t, std::span<double> out) { self.eval_into(t, out); }, impl_->d, Decay::gaussian};
  }

 private:
  struct Impl {
    Mode mode = Mode::lagrange;
    std::size_t d = 1;
    RulePtr rule;
    NodeValues nv;
    std::vector<double> coef;
  };

  explicit WeightedPolyEval(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// I_n f in weighted form.
inline WeightedPolyEval interpolate(RulePtr rule, NodeValues nv) {
  return WeightedPolyEval::lagrange(std::move(rule), std::move(nv));
}

inline WeightedPolyEval interpolate(const QuadratureRule& rule, NodeValues nv) {
  return interpolate(std::make_shared<const QuadratureRule>(rule), std::move(nv));
}

namespace detail {

inline double discrete_norm_over(const QuadratureRule& rule, const NodeValues& nv, const NormSpec& spec,
                                 double radius) {
  spec.validate();
  require_matching(rule, nv, "discrete_mz_norm");
  if (nv.dim() != spec.d) throw shape_error("discrete_mz_norm: node values have dimension differing from spec.d");
  const auto nodes = rule.nodes();
  const auto mu = rule.mu();
  if (std::isinf(spec.p)) {
    double m = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (std::abs(nodes[j]) <= radius) m = std::max(m, lq_norm(nv.weighted(j), spec.q));
    return m;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (std::abs(nodes[j]) > radius) continue;
    const double r = lq_norm(nv.weighted(j), spec.q);
    if (r != 0.0) s += mu[j] * std::pow(r, spec.p);
  }
  return std::pow(s, 1.0 / spec.p);
}

}  // namespace detail

/// (sum_j mu_j ||w_j||^p)^{1/p}; for p = infinity, max_j ||w_j||.
inline double discrete_mz_norm(const QuadratureRule& rule, const NodeValues& nv, const NormSpec& spec) {
  return detail::discrete_norm_over(rule, nv, spec, infinity);
}

/// The same sum over nodes with |t_j| <= delta sqrt(N).
inline double restricted_mz_norm(const QuadratureRule& rule, const NodeValues& nv, const NormSpec& spec,
                                 double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw usage_error("restricted_mz_norm: delta must lie in (0, 1)");
  return detail::discrete_norm_over(rule, nv, spec, delta * rule.sqrt_N());
}

}  // namespace hmz
