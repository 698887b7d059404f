#pragma once

// Gauss-Hermite rule at the zeros t_1 > ... > t_{n+1} of H_{n+1}.
//
//   lambda_j = 2 exp(-t_j^2) / H'_{n+1}(t_j)^2     (Gaussian weights)
//   mu_j     = lambda_j exp(t_j^2) = 2 / H'_{n+1}(t_j)^2
//
// where H is the Hermite *function*. Nodes come from the eigenvalues of the
// Jacobi matrix, polished by Newton steps on H_{n+1}; only the non-negative half
// is computed and then mirrored, so the rule is exactly antisymmetric.

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hmz/errors.hpp"
#include "hmz/hermite.hpp"
#include "hmz/tridiagonal.hpp"

namespace hmz {

inline constexpr std::size_t max_rule_degree = 100000;

class QuadratureRule {
 public:
  /// Degree parameter n; the rule has n+1 nodes and is exact on polynomials of degree <= 2n+1.
  std::size_t degree() const { return n_; }
  std::size_t size() const { return nodes_.size(); }
  /// N = 2n + 3.
  double N() const { return 2.0 * static_cast<double>(n_) + 3.0; }
  double sqrt_N() const { return std::sqrt(N()); }

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> lambda() const { return lambda_; }
  /// log(lambda_j); finite even where lambda_j itself underflows.
  std::span<const double> log_lambda() const { return log_lambda_; }
  std::span<const double> mu() const { return mu_; }
  /// H'_{n+1}(t_j).
  std::span<const double> derivatives() const { return derivatives_; }

  double node(std::size_t j) const { return nodes_[j]; }
  double mu(std::size_t j) const { return mu_[j]; }

 private:
  friend QuadratureRule build_rule(std::size_t n);

  std::size_t n_ = 0;
  std::vector<double> nodes_;
  std::vector<double> lambda_;
  std::vector<double> log_lambda_;
  std::vector<double> mu_;
  std::vector<double> derivatives_;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

inline QuadratureRule build_rule(std::size_t n) {
  if (n > max_rule_degree)
    throw capacity_error("build_rule: n = " + std::to_string(n) + " exceeds " + std::to_string(max_rule_degree));

  const std::size_t count = n + 1;
  std::vector<double> off(n);
  for (std::size_t k = 1; k <= n; ++k) off[k - 1] = std::sqrt(0.5 * static_cast<double>(k));
  const std::vector<double> guesses = symmetric_tridiagonal_eigenvalues(std::vector<double>(count, 0.0), off);

  QuadratureRule rule;
  rule.n_ = n;
  rule.nodes_.assign(count, 0.0);
  rule.derivatives_.assign(count, 0.0);

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const std::size_t positive = count / 2;
  // H'_{n+1} has parity (-1)^n.
  const double mirror_sign = (n % 2 == 0) ? 1.0 : -1.0;

  for (std::size_t i = 0; i < positive; ++i) {
    double x = guesses[i];
    HermiteValue hv{};
    for (int it = 0; it < 8; ++it) {
      hv = eval_hermite_pair(count, x);
      const double step = hv.value / hv.derivative;
      if (!std::isfinite(step)) throw numerical_error("build_rule: Newton step is not finite");
      x -= step;
      if (std::abs(step) <= 2.0 * eps * std::abs(x)) break;
    }
    hv = eval_hermite_pair(count, x);
    rule.nodes_[i] = x;
    rule.nodes_[count - 1 - i] = -x;
    rule.derivatives_[i] = hv.derivative;
    rule.derivatives_[count - 1 - i] = mirror_sign * hv.derivative;
  }
  if (count % 2 == 1) {
    rule.nodes_[positive] = 0.0;
    rule.derivatives_[positive] = eval_hermite_pair(count, 0.0).derivative;
  }

  for (std::size_t j = 0; j + 1 < count; ++j) {
    if (!(rule.nodes_[j] > rule.nodes_[j + 1]))
      throw numerical_error("build_rule: nodes are not strictly descending for n = " + std::to_string(n));
  }

  rule.lambda_.resize(count);
  rule.log_lambda_.resize(count);
  rule.mu_.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double t = rule.nodes_[j];
    const double d = rule.derivatives_[j];
    rule.mu_[j] = 2.0 / (d * d);
    rule.log_lambda_[j] = std::numbers::ln2 - t * t - 2.0 * std::log(std::abs(d));
    rule.lambda_[j] = std::exp(rule.log_lambda_[j]);
  }
  return rule;
}

inline RulePtr make_rule(std::size_t n) { return std::make_shared<const QuadratureRule>(build_rule(n)); }

/// sum_j lambda_j samples_j, with samples_j = q(t_j).
inline double integrate_gaussian(const QuadratureRule& rule, std::span<const double> samples) {
  if (samples.size() != rule.size())
    throw shape_error("integrate_gaussian: expected " + std::to_string(rule.size()) + " samples, got " +
                      std::to_string(samples.size()));
  // Outer nodes carry the smallest weights; summing from the edges inward keeps
  // small terms from being absorbed early.
  const std::size_t count = rule.size();
  double acc = 0.0;
  std::size_t lo = 0;
  std::size_t hi = count;
  while (lo < hi) {
    acc += rule.lambda()[lo] * samples[lo];
    ++lo;
    if (lo < hi) {
      --hi;
      acc += rule.lambda()[hi] * samples[hi];
    }
  }
  return acc;
}

/// True iff the zeros of H_{n+1} (higher) strictly separate those of H_n (lower):
/// t^{n+1}_{j+1} < t^n_j < t^{n+1}_j.
inline bool zeros_interlace(const QuadratureRule& higher, const QuadratureRule& lower) {
  if (higher.degree() != lower.degree() + 1)
    throw usage_error("zeros_interlace: degree parameters must differ by exactly one");
  const auto hi = higher.nodes();
  const auto lo = lower.nodes();
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!(hi[j + 1] < lo[j] && lo[j] < hi[j])) return false;
  }
  return true;
}

}  // namespace hmz
