#pragma once

// L2-normalized Hermite functions H_n(t) = h_n(t) exp(-t^2/2), their derivatives,
// and the phase / envelope quantities used to describe them near the turning point.
//
// Only the weighted functions are ever formed. The raw polynomials h_n overflow
// double precision near t ~ sqrt(2n) once n exceeds a couple of hundred.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hmz/errors.hpp"

namespace hmz {

/// pi^{-1/4}, i.e. H_0(0).
inline constexpr double hermite0_at_origin = 0.75112554446494248286;

struct HermiteValue {
  std::size_t n = 0;
  double t = 0.0;
  double value = 0.0;       // H_n(t)
  double derivative = 0.0;  // H_n'(t)
};

namespace detail {

inline void require_finite(double t, const char* where) {
  if (!std::isfinite(t)) throw domain_error(std::string(where) + ": non-finite abscissa");
}

// Three-term recurrence
//   H_{k+1} = t sqrt(2/(k+1)) H_k - sqrt(k/(k+1)) H_{k-1}
// run on mantissas that share one exponent. The Gaussian factor starts in the
// exponent, so values that are representable come out right even when
// exp(-t^2/2) alone would underflow.
class ScaledHermiteRecurrence {
 public:
  explicit ScaledHermiteRecurrence(double t) : t_(t), log_scale_(-0.5 * t * t) {
    factor_ = std::exp(log_scale_);
  }

  std::size_t index() const { return k_; }
  double value() const { return cur_ * factor_; }
  double previous() const { return prev_ * factor_; }

  // sqrt(2k) H_{k-1} - t H_k, formed before the common factor is applied.
  double derivative() const {
    const double kk = static_cast<double>(k_);
    return (std::sqrt(2.0 * kk) * prev_ - t_ * cur_) * factor_;
  }

  void advance() {
    const double kk = static_cast<double>(k_);
    const double next = t_ * std::sqrt(2.0 / (kk + 1.0)) * cur_ - std::sqrt(kk / (kk + 1.0)) * prev_;
    prev_ = cur_;
    cur_ = next;
    ++k_;
    if (std::abs(cur_) > kRescaleAbove) {
      cur_ = std::ldexp(cur_, -kShift);
      prev_ = std::ldexp(prev_, -kShift);
      log_scale_ += kShift * std::numbers::ln2;
      factor_ = std::exp(log_scale_);
    }
  }

  void advance_to(std::size_t n) {
    while (k_ < n) advance();
  }

 private:
  static constexpr double kRescaleAbove = 0x1p+500;
  static constexpr int kShift = 500;

  double t_;
  double log_scale_;
  double factor_ = 0.0;
  double prev_ = 0.0;
  double cur_ = hermite0_at_origin;
  std::size_t k_ = 0;
};

}  // namespace detail

/// Fills out[k] = H_k(t) for k = 0 .. out.size()-1.
inline void hermite_functions(double t, std::span<double> out) {
  detail::require_finite(t, "hermite_functions");
  if (out.empty()) return;
  detail::ScaledHermiteRecurrence rec(t);
  out[0] = rec.value();
  for (std::size_t k = 1; k < out.size(); ++k) {
    rec.advance();
    out[k] = rec.value();
  }
}

/// H_0(t), ..., H_{n_max}(t).
inline std::vector<double> eval_hermite_sequence(std::size_t n_max, double t) {
  std::vector<double> out(n_max + 1);
  hermite_functions(t, out);
  return out;
}

/// H_n(t) together with H_n'(t) = sqrt(2n) H_{n-1}(t) - t H_n(t).
inline HermiteValue eval_hermite_pair(std::size_t n, double t) {
  detail::require_finite(t, "eval_hermite_pair");
  detail::ScaledHermiteRecurrence rec(t);
  rec.advance_to(n);
  return {n, t, rec.value(), rec.derivative()};
}

inline double hermite_function(std::size_t n, double t) {
  detail::require_finite(t, "hermite_function");
  detail::ScaledHermiteRecurrence rec(t);
  rec.advance_to(n);
  return rec.value();
}

/// Phase function on [0,1]: (2/3) phi(x)^{3/2} = int_x^1 sqrt(1 - s^2) ds.
inline double phi(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw domain_error("phi: argument outside [0,1]");
  // With theta = arccos x the area is (u - sin u)/4, u = 2 theta.
  const double theta = 2.0 * std::asin(std::sqrt(0.5 * (1.0 - x)));
  const double u = 2.0 * theta;
  double u_minus_sin;
  if (u < 0.25) {
    const double u2 = u * u;
    // u^3/3! - u^5/5! + ... through u^13
    double term = u * u2 / 6.0;
    u_minus_sin = 0.0;
    for (int k = 0; k < 6; ++k) {
      u_minus_sin += term;
      term *= -u2 / ((2.0 * k + 4.0) * (2.0 * k + 5.0));
    }
  } else {
    u_minus_sin = u - std::sin(u);
  }
  const double area = 0.25 * u_minus_sin;
  return std::pow(1.5 * area, 2.0 / 3.0);
}

/// n^{-1/8} (sqrt(N) - |t|)^{-1/4} with N = 2n + 3: the size of H_{n+1} between
/// neighbouring zeros near t.
inline double envelope_scale(std::size_t n, double t) {
  detail::require_finite(t, "envelope_scale");
  if (n == 0) throw domain_error("envelope_scale: n must be positive");
  const double root_n = std::sqrt(2.0 * static_cast<double>(n) + 3.0);
  const double gap = root_n - std::abs(t);
  if (!(gap > 0.0)) throw domain_error("envelope_scale: |t| >= sqrt(2n+3)");
  return std::pow(static_cast<double>(n), -0.125) * std::pow(gap, -0.25);
}

/// sup |H_{n+1}(t)| over [a, b]: dense sampling (64 points per half wavelength
/// pi/sqrt(N)) followed by golden-section refinement around the best sample.
inline double local_sup_abs(std::size_t n, double a, double b) {
  detail::require_finite(a, "local_sup_abs");
  detail::require_finite(b, "local_sup_abs");
  if (b < a) throw usage_error("local_sup_abs: requires a < b");
  const std::size_t m = n + 1;
  auto f = [m](double t) { return std::abs(hermite_function(m, t)); };
  if (b - a < 1e-14) return f(a);

  const double half_wave = std::numbers::pi / std::sqrt(2.0 * static_cast<double>(n) + 3.0);
  const auto cells = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / half_wave)));
  const std::size_t samples = 64 * cells;
  const double h = (b - a) / static_cast<double>(samples);

  std::size_t best_i = 0;
  double best = f(a);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double x = (i == samples) ? b : a + h * static_cast<double>(i);
    const double v = f(x);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }

  double lo = (best_i == 0) ? a : a + h * static_cast<double>(best_i - 1);
  double hi = (best_i == samples) ? b : a + h * static_cast<double>(best_i + 1);
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > 1e-10 * (1.0 + std::abs(lo))) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace hmz
