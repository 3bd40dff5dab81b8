#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "cvbell/bell.hpp"
#include "cvbell/error.hpp"
#include "cvbell/hermite.hpp"
#include "cvbell/quadrature.hpp"
#include "cvbell/wavefunc.hpp"

namespace cvbell {

/// Real Fock amplitudes c_0 .. c_{n_max} of a state, plus the probability the
/// truncated expansion captures.
struct FockExpansion {
  std::vector<double> coeffs;
  double captured = 0.0;   ///< sum of c_n^2
  bool low_capture = false;  ///< captured < 1 - epsilon_capture

  double probability(std::size_t n) const { return n < coeffs.size() ? coeffs[n] * coeffs[n] : 0.0; }

  /// The truncated expansion rescaled to unit norm.
  FockExpansion renormalized() const {
    require(captured > 0.0, "FockExpansion: empty expansion");
    FockExpansion out = *this;
    const double k = 1.0 / std::sqrt(captured);
    for (auto& c : out.coeffs) c *= k;
    out.captured = 1.0;
    out.low_capture = false;
    return out;
  }

  /// Coefficients restricted to n == residue (mod modulus).
  FockExpansion restricted(int modulus, int residue) const {
    FockExpansion out = *this;
    out.captured = 0.0;
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
      if (static_cast<int>(n % static_cast<std::size_t>(modulus)) != residue) out.coeffs[n] = 0.0;
      out.captured += out.coeffs[n] * out.coeffs[n];
    }
    return out;
  }

  Wavefunction to_wavefunction() const { return Wavefunction::from_fock(coeffs); }

  static FockExpansion from_coeffs(std::vector<double> c) {
    FockExpansion e;
    e.coeffs = std::move(c);
    for (double x : e.coeffs) e.captured += x * x;
    return e;
  }

  /// From sparse (n, c_n) pairs.
  static FockExpansion from_pairs(const std::vector<std::pair<int, double>>& pairs) {
    std::vector<double> c;
    for (const auto& [n, v] : pairs) {
      require(n >= 0, "FockExpansion: negative Fock index");
      if (static_cast<std::size_t>(n) >= c.size()) c.resize(static_cast<std::size_t>(n) + 1, 0.0);
      c[static_cast<std::size_t>(n)] += v;
    }
    return from_coeffs(std::move(c));
  }
};

struct DecomposeOptions {
  double epsilon_capture = 0.01;
  int nodes = 20;  ///< Gauss–Legendre nodes per panel
};

/// c_n = <phi_n|psi> for n = 0..n_max, by composite Gauss–Legendre over the
/// evaluation window with panels finer than both the narrowest feature of psi
/// and the oscillation scale of phi_{n_max}.
inline FockExpansion decompose(const Wavefunction& psi, int n_max, const DecomposeOptions& opts = {}) {
  require(n_max >= 0, "decompose: n_max must be non-negative");
  require(is_real(psi), "decompose: wavefunction must be real");
  if (psi.is_fock()) {
    FockExpansion e;
    e.coeffs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::size_t n = 0; n < e.coeffs.size() && n < psi.fock_coeffs().size(); ++n) e.coeffs[n] = psi.fock_coeffs()[n].real();
    for (double c : e.coeffs) e.captured += c * c;
    e.low_capture = e.captured < 1.0 - opts.epsilon_capture;
    return e;
  }
  const double window = std::max(evaluation_window(psi), std::sqrt(2.0 * n_max + 1.0) + 10.0);
  const double h = std::min(feature_scale(psi), 1.0 / std::sqrt(2.0 * n_max + 1.0));
  const int panels = static_cast<int>(std::ceil(2.0 * window / h));
  const auto& rule = quad::gauss_legendre(opts.nodes);
  const double width = 2.0 * window / panels;

  FockExpansion e;
  e.coeffs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<double> phi;
  for (int k = 0; k < panels; ++k) {
    const double mid = -window + (k + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double q = mid + 0.5 * width * rule.nodes[i];
      const double w = 0.5 * width * rule.weights[i] * psi(q).real();
      if (w == 0.0) continue;
      hermite_functions(n_max, q, phi);
      for (int n = 0; n <= n_max; ++n) e.coeffs[n] += w * phi[n];
    }
  }
  for (double c : e.coeffs) e.captured += c * c;
  e.low_capture = e.captured < 1.0 - opts.epsilon_capture;
  return e;
}

struct FockBell {
  double S = 0.0;
  double V = 0.0;
  double W = 0.0;
};

namespace detail {

inline bool support_in(const FockExpansion& e, int modulus, int residue) {
  for (std::size_t n = 0; n < e.coeffs.size(); ++n) {
    if (e.coeffs[n] != 0.0 && static_cast<int>(n % static_cast<std::size_t>(modulus)) != residue) return false;
  }
  return true;
}

}  // namespace detail

/// Root-binned V, W and optimized S for the pair (f, g) given in the Fock
/// basis. Inputs are rescaled to unit norm first. When f lives on n = 0 mod 4
/// and g on n = 1 mod 4 both are Fourier eigenvectors, so W must equal V and
/// S must equal 2 sqrt(2) V^2; that identity is enforced.
inline FockBell fock_state_S(const FockExpansion& f_coeffs, const FockExpansion& g_coeffs) {
  require(detail::support_in(f_coeffs, 2, 0), "fock_state_S: f must have support on even n only");
  require(detail::support_in(g_coeffs, 2, 1), "fock_state_S: g must have support on odd n only");
  const auto f = normalize(f_coeffs.to_wavefunction());
  const auto g = normalize(g_coeffs.to_wavefunction());
  const auto o = root_binned_overlaps(f, g);
  const auto best = chsh_S_max(o.V, o.W);
  FockBell r{best.S, o.V, o.W};
  if (detail::support_in(f_coeffs, 4, 0) && detail::support_in(g_coeffs, 4, 1)) {
    require(std::abs(r.W - r.V) < 1e-6, "fock_state_S: Fourier-eigenstate pair with W != V");
    require(std::abs(r.S - 2.0 * std::numbers::sqrt2 * r.V * r.V) < 1e-6, "fock_state_S: S != 2 sqrt(2) V^2");
  }
  return r;
}

}  // namespace cvbell
