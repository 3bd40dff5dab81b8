#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cvbell/error.hpp"

namespace cvbell {

// Normalized Hermite functions phi_n(q) = (2^n n! sqrt(pi))^{-1/2} H_n(q) exp(-q^2/2),
// i.e. the position wavefunctions <q|n> of Fock states. The recurrence runs on
// phi_n directly so no factorials or large H_n values ever appear.

/// phi_0 .. phi_{n_max} at q, written into `out` (resized to n_max + 1).
inline void hermite_functions(int n_max, double q, std::vector<double>& out) {
  require(n_max >= 0, "hermite_functions: n_max must be non-negative");
  out.resize(static_cast<std::size_t>(n_max) + 1);
  const double phi0 = std::exp(-0.5 * q * q) / std::sqrt(std::sqrt(std::numbers::pi));
  out[0] = phi0;
  if (n_max == 0) return;
  out[1] = std::numbers::sqrt2 * q * phi0;
  for (int n = 1; n < n_max; ++n) {
    out[n + 1] = std::sqrt(2.0 / (n + 1)) * q * out[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * out[n - 1];
  }
}

inline std::vector<double> hermite_functions(int n_max, double q) {
  std::vector<double> out;
  hermite_functions(n_max, q, out);
  return out;
}

inline double hermite_function(int n, double q) {
  require(n >= 0, "hermite_function: n must be non-negative");
  double prev = 0.0;
  double cur = std::exp(-0.5 * q * q) / std::sqrt(std::sqrt(std::numbers::pi));
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * q * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace cvbell
