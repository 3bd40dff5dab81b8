#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "cvbell/error.hpp"

namespace cvbell::opt {

struct Maximum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [a, b],
/// stopping when the bracket is narrower than `tol`.
template <class F>
Maximum golden_section_maximize(F&& f, double a, double b, double tol) {
  require(b > a, "golden_section_maximize: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Maximum{c, fc} : Maximum{d, fd};
}

struct GridScan {
  std::vector<double> xs;
  std::vector<double> values;
  std::size_t best = 0;
};

/// Evaluates f at lo, lo + step, ... up to hi (inclusive within rounding).
template <class F>
GridScan grid_scan(F&& f, double lo, double hi, double step) {
  require(hi > lo && step > 0.0, "grid_scan: invalid range");
  GridScan scan;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  for (std::size_t k = 0; k < count; ++k) {
    const double x = lo + step * static_cast<double>(k);
    scan.xs.push_back(x);
    scan.values.push_back(f(x));
    if (scan.values.back() > scan.values[scan.best]) scan.best = k;
  }
  return scan;
}

}  // namespace cvbell::opt
