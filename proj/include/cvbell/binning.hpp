#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "cvbell/error.hpp"
#include "cvbell/quadrature.hpp"
#include "cvbell/wavefunc.hpp"

namespace cvbell {

enum class Sign : std::int8_t { minus = -1, plus = 1 };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline double to_double(Sign s) { return static_cast<double>(static_cast<int>(s)); }
inline char to_char(Sign s) { return s == Sign::plus ? '+' : '-'; }

/// A partition of the real line into intervals
/// (-inf, b_1), [b_1, b_2), ..., [b_m, +inf), each labeled with a sign.
/// A breakpoint belongs to the interval on its right.
class SignedPartition {
 public:
  SignedPartition() : signs_{Sign::plus} {}

  SignedPartition(std::vector<double> breakpoints, std::vector<Sign> signs)
      : breakpoints_(std::move(breakpoints)), signs_(std::move(signs)) {
    require(signs_.size() == breakpoints_.size() + 1, "SignedPartition: need one sign per interval");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      require(std::isfinite(breakpoints_[i]), "SignedPartition: breakpoints must be finite");
      if (i > 0) require(breakpoints_[i - 1] < breakpoints_[i], "SignedPartition: breakpoints must increase");
    }
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<Sign>& signs() const { return signs_; }
  std::size_t interval_count() const { return signs_.size(); }

  std::size_t interval_index(double q) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), q) - breakpoints_.begin());
  }

  Sign classify(double q) const { return signs_[interval_index(q)]; }

  /// Bounds of interval i; the outer intervals extend to +-infinity.
  std::pair<double, double> interval(std::size_t i) const {
    const double inf = std::numeric_limits<double>::infinity();
    return {i == 0 ? -inf : breakpoints_[i - 1], i == breakpoints_.size() ? inf : breakpoints_[i]};
  }

  /// Same labeling with adjacent equal-sign intervals fused.
  SignedPartition merged() const {
    std::vector<double> b;
    std::vector<Sign> s{signs_.front()};
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
      if (signs_[i + 1] == s.back()) continue;
      b.push_back(breakpoints_[i]);
      s.push_back(signs_[i + 1]);
    }
    return SignedPartition(std::move(b), std::move(s));
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<Sign> signs_;
};

inline Sign classify(const SignedPartition& p, double q) { return p.classify(q); }

/// "+" iff q >= 0.
inline SignedPartition pn_binning() { return SignedPartition({0.0}, {Sign::minus, Sign::plus}); }

struct RootBinningOptions {
  double window = 0.0;  ///< half-width of the sampled region; 0 selects the functions' evaluation window
  int resolution = 20001;
  double bisection_tol = 1e-10;
  double tail_mass_tol = 1e-9;
  double imag_tol = 1e-9;
};

namespace detail {

// Sign of f*g at q when it is resolved above rounding noise; 0 otherwise.
inline int resolved_product_sign(const Sample& a, const Sample& b) {
  constexpr double noise = 64.0 * std::numeric_limits<double>::epsilon();
  const double fa = a.value.real(), gb = b.value.real();
  if (!(std::abs(fa) > noise * a.magnitude) || !(std::abs(gb) > noise * b.magnitude)) return 0;
  if (std::abs(fa * gb) < std::numeric_limits<double>::min()) return 0;
  return (fa > 0) == (gb > 0) ? 1 : -1;
}

inline int resolved_product_sign(const Wavefunction& f, const Wavefunction& g, double q) {
  return resolved_product_sign(f.sample(q), g.sample(q));
}

}  // namespace detail

/// Partition with "+" where f(q) g(q) >= 0 and "-" where f(q) g(q) < 0.
///
/// The product is sampled on a uniform grid; sign changes between neighbouring
/// samples are refined by bisection. Samples where the product is lost in
/// rounding noise or underflow (tails, gaps between far-apart peaks) carry no
/// sign information: such runs join an adjacent "+" run if there is one, and
/// otherwise the surrounding "-" run. A double root that touches zero without
/// changing sign never produces a breakpoint.
inline SignedPartition root_binning(const Wavefunction& f, const Wavefunction& g, const RootBinningOptions& opts = {}) {
  const double natural = std::max(evaluation_window(f), evaluation_window(g));
  const double window = opts.window > 0.0 ? opts.window : natural;
  require(opts.resolution >= 3, "root_binning: resolution too small");

  const double feature = std::min(feature_scale(f), feature_scale(g));
  const long needed = static_cast<long>(std::ceil(2.0 * window / (feature / 8.0))) + 1;
  const long count = std::max<long>(opts.resolution, std::min<long>(needed, 4'000'001));
  const double step = 2.0 * window / static_cast<double>(count - 1);

  std::vector<double> xs(count);
  std::vector<int> raw(count);
  double max_abs = 0.0, max_imag = 0.0;
  for (long k = 0; k < count; ++k) {
    const double q = -window + step * static_cast<double>(k);
    xs[k] = q;
    const Sample a = f.sample(q), b = g.sample(q);
    max_abs = std::max({max_abs, std::abs(a.value), std::abs(b.value)});
    max_imag = std::max({max_imag, std::abs(a.value.imag()), std::abs(b.value.imag())});
    raw[k] = detail::resolved_product_sign(a, b);
  }
  if (max_imag > opts.imag_tol * std::max(max_abs, std::numeric_limits<double>::min())) {
    throw Error("root_binning: functions must be real-valued");
  }

  if (window < natural) {
    auto tail = [&](double q) { return std::abs(f(q).real() * g(q).real()); };
    const int panels = static_cast<int>(std::ceil((natural - window) / feature)) + 1;
    const double mass = quad::adaptive_panels(tail, window, natural + 10.0, panels, 1e-13).value +
                        quad::adaptive_panels(tail, -natural - 10.0, -window, panels, 1e-13).value;
    if (mass > opts.tail_mass_tol) throw Error("root_binning: window too small");
  }

  // Resolve unlabeled runs.
  std::vector<int> label(raw);
  long k = 0;
  while (k < count) {
    if (label[k] != 0) {
      ++k;
      continue;
    }
    long end = k;
    while (end < count && raw[end] == 0) ++end;
    const int left = k > 0 ? label[k - 1] : 0;
    const int right = end < count ? raw[end] : 0;
    int fill = 1;
    if (left == 1 || right == 1) {
      fill = 1;
    } else if (left == -1 || right == -1) {
      fill = -1;
    }
    for (long j = k; j < end; ++j) label[j] = fill;
    k = end;
  }

  std::vector<double> breakpoints;
  std::vector<Sign> signs{label[0] > 0 ? Sign::plus : Sign::minus};
  for (long j = 0; j + 1 < count; ++j) {
    if (label[j] == label[j + 1]) continue;
    // Pointwise labeling consistent with the run resolution above.
    const int undetermined_as = raw[j] == 0 ? label[j] : raw[j + 1] == 0 ? label[j + 1] : 1;
    auto pointwise = [&](double q) {
      const int s = detail::resolved_product_sign(f, g, q);
      return s != 0 ? s : undetermined_as;
    };
    double lo = xs[j], hi = xs[j + 1];
    const int left_label = label[j];
    while (hi - lo > opts.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (pointwise(mid) == left_label ? lo : hi) = mid;
    }
    const double b = 0.5 * (lo + hi);
    if (!breakpoints.empty() && b <= breakpoints.back()) {
      // Two sign changes collapsed onto one point: the sliver between them has no width.
      breakpoints.pop_back();
      signs.pop_back();
      continue;
    }
    breakpoints.push_back(b);
    signs.push_back(label[j + 1] > 0 ? Sign::plus : Sign::minus);
  }
  return SignedPartition(std::move(breakpoints), std::move(signs)).merged();
}

}  // namespace cvbell
