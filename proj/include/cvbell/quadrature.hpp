#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "cvbell/error.hpp"

namespace cvbell::quad {

/// Gauss–Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline Rule build_gauss_legendre(int n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      const double pn = (n == 1) ? x : p1;
      const double pn1 = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pn1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached n-point Gauss–Legendre rule. Thread-safe.
inline const Rule& gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(detail::build_gauss_legendre(n));
  return *slot;
}

/// Fixed-order Gauss–Legendre on [a, b].
template <class F>
auto fixed(F&& f, double a, double b, const Rule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  decltype(f(mid)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return sum * half;
}

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  bool converged = true;
};

namespace detail {

template <class F, class T>
void adaptive_step(F& f, double a, double b, T whole, double tol, int depth, const Rule& rule,
                   Result<T>& out) {
  const double mid = 0.5 * (a + b);
  const T left = fixed(f, a, mid, rule);
  const T right = fixed(f, mid, b, rule);
  const double diff = std::abs(left + right - whole);
  // Differences at rounding level of the panel value cannot shrink further.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  const bool settled = diff <= tol || diff <= floor;
  if (settled || depth <= 0 || (b - a) < 1e-14 * (1.0 + std::abs(a))) {
    out.value += left + right;
    out.error += diff;
    if (!settled) out.converged = false;
    return;
  }
  adaptive_step(f, a, mid, left, 0.5 * tol, depth - 1, rule, out);
  adaptive_step(f, mid, b, right, 0.5 * tol, depth - 1, rule, out);
}

}  // namespace detail

/// Adaptive bisection over [a, b] using a 15-point Gauss–Legendre panel rule.
/// `tol` is an absolute error target for the whole interval.
template <class F>
auto adaptive(F&& f, double a, double b, double tol, int max_depth = 40) {
  using T = decltype(f(a));
  const Rule& rule = gauss_legendre(15);
  Result<T> out;
  if (a == b) return out;
  const T whole = fixed(f, a, b, rule);
  detail::adaptive_step(f, a, b, whole, tol, max_depth, rule, out);
  return out;
}

/// Adaptive integration after splitting [a, b] into `panels` equal pieces;
/// useful when the integrand is oscillatory on the scale of (b - a).
template <class F>
auto adaptive_panels(F&& f, double a, double b, int panels, double tol) {
  using T = decltype(f(a));
  Result<T> total;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + k * h;
    const double hi = (k + 1 == panels) ? b : lo + h;
    auto part = adaptive(f, lo, hi, tol / panels);
    total.value += part.value;
    total.error += part.error;
    total.converged = total.converged && part.converged;
  }
  return total;
}

}  // namespace cvbell::quad
