#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "cvbell/error.hpp"
#include "cvbell/hermite.hpp"
#include "cvbell/quadrature.hpp"

namespace cvbell {

using complex = std::complex<double>;

/// amplitude * exp(-(q - center)^2 / (2 width^2)) * exp(i linear_phase q)
struct GaussianTerm {
  complex amplitude{1.0, 0.0};
  double center = 0.0;
  double width = 1.0;
  double linear_phase = 0.0;

  double envelope(double q) const {
    const double u = (q - center) / width;
    return std::exp(-0.5 * u * u);
  }

  complex operator()(double q) const {
    const double e = envelope(q);
    if (linear_phase == 0.0) return amplitude * e;
    return amplitude * e * std::polar(1.0, linear_phase * q);
  }
};

enum class Parity { even, odd, none };

inline const char* to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    default: return "none";
  }
}

/// A value-semantic pointwise sample: the function value and the sum of the
/// absolute values of its constituent terms (a cancellation scale).
struct Sample {
  complex value;
  double magnitude = 0.0;
};

/// A 1-D wavefunction, either a finite sum of Gaussian terms or a Fock
/// (Hermite-function) expansion. Immutable once built; terms are kept in a
/// canonical merged order so equal functions compare equal term-by-term.
class Wavefunction {
 public:
  enum class Kind { gaussian_sum, fock };

  Wavefunction() = default;

  static Wavefunction from_terms(std::vector<GaussianTerm> terms) {
    Wavefunction w;
    w.kind_ = Kind::gaussian_sum;
    w.terms_ = canonicalize(std::move(terms));
    w.parity_ = detect_parity(w.terms_);
    return w;
  }

  static Wavefunction from_fock(std::vector<complex> coeffs) {
    Wavefunction w;
    w.kind_ = Kind::fock;
    while (!coeffs.empty() && coeffs.back() == complex{}) coeffs.pop_back();
    w.fock_ = std::move(coeffs);
    bool has_even = false, has_odd = false;
    for (std::size_t n = 0; n < w.fock_.size(); ++n) {
      if (w.fock_[n] == complex{}) continue;
      (n % 2 == 0 ? has_even : has_odd) = true;
    }
    w.parity_ = (has_even && !has_odd) ? Parity::even : (has_odd && !has_even) ? Parity::odd : Parity::none;
    return w;
  }

  static Wavefunction from_fock(const std::vector<double>& coeffs) {
    return from_fock(std::vector<complex>(coeffs.begin(), coeffs.end()));
  }

  Kind kind() const { return kind_; }
  bool is_gaussian_sum() const { return kind_ == Kind::gaussian_sum; }
  bool is_fock() const { return kind_ == Kind::fock; }
  const std::vector<GaussianTerm>& terms() const { return terms_; }
  const std::vector<complex>& fock_coeffs() const { return fock_; }
  Parity parity() const { return parity_; }

  Sample sample(double q) const {
    Sample s;
    if (kind_ == Kind::gaussian_sum) {
      for (const auto& t : terms_) {
        const double e = t.envelope(q);
        if (e == 0.0) continue;
        const complex v = t.linear_phase == 0.0 ? t.amplitude * e : t.amplitude * e * std::polar(1.0, t.linear_phase * q);
        s.value += v;
        s.magnitude += std::abs(t.amplitude) * e;
      }
    } else if (!fock_.empty()) {
      thread_local std::vector<double> phi;
      hermite_functions(static_cast<int>(fock_.size()) - 1, q, phi);
      for (std::size_t n = 0; n < fock_.size(); ++n) {
        s.value += fock_[n] * phi[n];
        s.magnitude += std::abs(fock_[n] * phi[n]);
      }
    }
    return s;
  }

  complex operator()(double q) const { return sample(q).value; }

 private:
  static bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

  static bool same_shape(const GaussianTerm& a, const GaussianTerm& b) {
    return close(a.center, b.center) && close(a.width, b.width) && close(a.linear_phase, b.linear_phase);
  }

  static std::vector<GaussianTerm> canonicalize(std::vector<GaussianTerm> terms) {
    std::vector<GaussianTerm> merged;
    std::vector<double> scale;
    for (const auto& t : terms) {
      require(std::isfinite(t.width) && t.width > 0.0, "GaussianTerm: width must be positive");
      require(std::isfinite(t.center) && std::isfinite(t.linear_phase) && std::isfinite(std::abs(t.amplitude)),
              "GaussianTerm: non-finite parameter");
      if (t.amplitude == complex{}) continue;
      auto it = std::find_if(merged.begin(), merged.end(), [&](const GaussianTerm& m) { return same_shape(m, t); });
      if (it == merged.end()) {
        merged.push_back(t);
        scale.push_back(std::abs(t.amplitude));
      } else {
        it->amplitude += t.amplitude;
        scale[static_cast<std::size_t>(it - merged.begin())] += std::abs(t.amplitude);
      }
    }
    std::vector<GaussianTerm> out;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      // Exact or rounding-level cancellation removes the term.
      if (std::abs(merged[i].amplitude) <= 8.0 * std::numeric_limits<double>::epsilon() * scale[i]) continue;
      out.push_back(merged[i]);
    }
    std::sort(out.begin(), out.end(), [](const GaussianTerm& a, const GaussianTerm& b) {
      return std::tie(a.center, a.width, a.linear_phase) < std::tie(b.center, b.width, b.linear_phase);
    });
    return out;
  }

  static Parity detect_parity(const std::vector<GaussianTerm>& terms) {
    if (terms.empty()) return Parity::none;
    double amp_scale = 0.0;
    for (const auto& t : terms) amp_scale = std::max(amp_scale, std::abs(t.amplitude));
    auto mirrored = [&](double sign) {
      for (const auto& t : terms) {
        const bool found = std::any_of(terms.begin(), terms.end(), [&](const GaussianTerm& u) {
          return close(u.center, -t.center) && close(u.width, t.width) && close(u.linear_phase, -t.linear_phase) &&
                 std::abs(u.amplitude - sign * t.amplitude) <= 1e-12 * amp_scale;
        });
        if (!found) return false;
      }
      return true;
    };
    if (mirrored(1.0)) return Parity::even;
    if (mirrored(-1.0)) return Parity::odd;
    return Parity::none;
  }

  Kind kind_ = Kind::gaussian_sum;
  std::vector<GaussianTerm> terms_;
  std::vector<complex> fock_;
  Parity parity_ = Parity::none;
};

inline complex evaluate(const Wavefunction& psi, double q) { return psi(q); }

/// Half-width of the region outside which the function is negligible
/// (below ~1e-22 relative for Gaussian tails).
inline double evaluation_window(const Wavefunction& psi) {
  if (psi.is_fock()) {
    const double n_max = psi.fock_coeffs().empty() ? 0.0 : static_cast<double>(psi.fock_coeffs().size() - 1);
    return std::sqrt(2.0 * n_max + 1.0) + 10.0;
  }
  double c = 0.0, w = 0.0;
  for (const auto& t : psi.terms()) {
    c = std::max(c, std::abs(t.center));
    w = std::max(w, t.width);
  }
  return c + 10.0 * w;
}

/// Shortest length scale on which the function varies: narrowest width or
/// fastest oscillation.
inline double feature_scale(const Wavefunction& psi) {
  if (psi.is_fock()) {
    const double n = static_cast<double>(psi.fock_coeffs().size());
    return 1.0 / std::sqrt(2.0 * n + 1.0);
  }
  double s = std::numeric_limits<double>::infinity();
  for (const auto& t : psi.terms()) {
    s = std::min(s, t.width);
    if (t.linear_phase != 0.0) s = std::min(s, 1.0 / std::abs(t.linear_phase));
  }
  return std::isfinite(s) ? s : 1.0;
}

inline Wavefunction scaled(const Wavefunction& psi, complex factor) {
  if (psi.is_fock()) {
    auto c = psi.fock_coeffs();
    for (auto& x : c) x *= factor;
    return Wavefunction::from_fock(std::move(c));
  }
  auto terms = psi.terms();
  for (auto& t : terms) t.amplitude *= factor;
  return Wavefunction::from_terms(std::move(terms));
}

/// Pointwise sum; both operands must share a representation.
inline Wavefunction add(const Wavefunction& a, const Wavefunction& b) {
  require(a.kind() == b.kind(), "add: mixed representations");
  if (a.is_fock()) {
    std::vector<complex> c(std::max(a.fock_coeffs().size(), b.fock_coeffs().size()));
    for (std::size_t n = 0; n < a.fock_coeffs().size(); ++n) c[n] += a.fock_coeffs()[n];
    for (std::size_t n = 0; n < b.fock_coeffs().size(); ++n) c[n] += b.fock_coeffs()[n];
    return Wavefunction::from_fock(std::move(c));
  }
  auto terms = a.terms();
  terms.insert(terms.end(), b.terms().begin(), b.terms().end());
  return Wavefunction::from_terms(std::move(terms));
}

/// psi(q) -> psi(q - d), i.e. the action of exp(-i d p).
inline Wavefunction displaced(const Wavefunction& psi, double d) {
  require(psi.is_gaussian_sum(), "displaced: Gaussian-sum representation required");
  auto terms = psi.terms();
  for (auto& t : terms) {
    t.amplitude *= std::polar(1.0, -t.linear_phase * d);
    t.center += d;
  }
  return Wavefunction::from_terms(std::move(terms));
}

/// psi(q) -> exp(i kappa q) psi(q).
inline Wavefunction with_linear_phase(const Wavefunction& psi, double kappa) {
  require(psi.is_gaussian_sum(), "with_linear_phase: Gaussian-sum representation required");
  auto terms = psi.terms();
  for (auto& t : terms) t.linear_phase += kappa;
  return Wavefunction::from_terms(std::move(terms));
}

/// Unitary transform psi~(p) = (2 pi)^{-1/2} \int psi(q) exp(-i q p) dq.
inline Wavefunction fourier_transform(const Wavefunction& psi) {
  if (psi.is_fock()) {
    auto c = psi.fock_coeffs();
    const complex minus_i{0.0, -1.0};
    complex phase{1.0, 0.0};
    for (auto& x : c) {
      x *= phase;
      phase *= minus_i;
    }
    return Wavefunction::from_fock(std::move(c));
  }
  std::vector<GaussianTerm> out;
  out.reserve(psi.terms().size());
  for (const auto& t : psi.terms()) {
    GaussianTerm u;
    u.amplitude = t.amplitude * t.width * std::polar(1.0, t.linear_phase * t.center);
    u.center = t.linear_phase;
    u.width = 1.0 / t.width;
    u.linear_phase = -t.center;
    out.push_back(u);
  }
  return Wavefunction::from_terms(std::move(out));
}

/// Closed-form <a|b> for two Gaussian terms over the real line.
inline complex term_overlap(const GaussianTerm& a, const GaussianTerm& b) {
  const double va = a.width * a.width, vb = b.width * b.width;
  const double vs = va + vb;
  const double dc = a.center - b.center;
  const double dk = b.linear_phase - a.linear_phase;
  const double mean = (a.center * vb + b.center * va) / vs;
  const double re = -0.5 * dc * dc / vs - 0.5 * dk * dk * va * vb / vs;
  const double pref = a.width * b.width * std::sqrt(2.0 * std::numbers::pi / vs);
  return std::conj(a.amplitude) * b.amplitude * pref * std::exp(re) * std::polar(1.0, dk * mean);
}

/// Integral of conj(a) b over [lo, hi] by adaptive quadrature.
inline complex overlap_quadrature(const Wavefunction& a, const Wavefunction& b, double lo, double hi, double tol) {
  const double h = std::min(feature_scale(a), feature_scale(b));
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / (2.0 * h))));
  auto r = quad::adaptive_panels([&](double q) { return std::conj(a(q)) * b(q); }, lo, hi, panels, tol);
  require(r.converged, "overlap quadrature did not converge");
  return r.value;
}

/// <a|b>, conjugate-linear in a.
inline complex inner_product(const Wavefunction& a, const Wavefunction& b) {
  if (a.is_gaussian_sum() && b.is_gaussian_sum()) {
    complex sum{};
    for (const auto& s : a.terms())
      for (const auto& t : b.terms()) sum += term_overlap(s, t);
    return sum;
  }
  if (a.is_fock() && b.is_fock()) {
    complex sum{};
    const std::size_t n = std::min(a.fock_coeffs().size(), b.fock_coeffs().size());
    for (std::size_t k = 0; k < n; ++k) sum += std::conj(a.fock_coeffs()[k]) * b.fock_coeffs()[k];
    return sum;
  }
  const double w = std::max(evaluation_window(a), evaluation_window(b));
  return overlap_quadrature(a, b, -w, w, 1e-12);
}

inline double norm_squared(const Wavefunction& psi) { return inner_product(psi, psi).real(); }

inline double norm(const Wavefunction& psi) { return std::sqrt(std::max(0.0, norm_squared(psi))); }

/// Returns psi / ||psi||; throws on a (numerically) zero function.
inline Wavefunction normalize(const Wavefunction& psi) {
  const double n2 = norm_squared(psi);
  // Magnitude scale of the pairwise sum, for detecting cancellation to zero.
  double scale = 0.0;
  if (psi.is_gaussian_sum()) {
    for (const auto& s : psi.terms())
      for (const auto& t : psi.terms()) scale += std::abs(term_overlap(s, t));
  } else {
    for (const auto& c : psi.fock_coeffs()) scale += std::norm(c);
  }
  if (!(n2 > 64.0 * std::numeric_limits<double>::epsilon() * scale) || !std::isfinite(n2)) {
    throw Error("degenerate wavefunction");
  }
  return scaled(psi, 1.0 / std::sqrt(n2));
}

/// True when the function is real-valued: checked structurally (conjugation
/// symmetry of terms / real Fock coefficients) up to a relative tolerance.
inline bool is_real(const Wavefunction& psi, double tol = 1e-9) {
  if (psi.is_fock()) {
    double scale = 0.0;
    for (const auto& c : psi.fock_coeffs()) scale = std::max(scale, std::abs(c));
    return std::all_of(psi.fock_coeffs().begin(), psi.fock_coeffs().end(),
                       [&](const complex& c) { return std::abs(c.imag()) <= tol * scale; });
  }
  double scale = 0.0;
  for (const auto& t : psi.terms()) scale = std::max(scale, std::abs(t.amplitude));
  const auto& terms = psi.terms();
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a) + std::abs(b)); };
  for (const auto& t : terms) {
    const bool found = std::any_of(terms.begin(), terms.end(), [&](const GaussianTerm& u) {
      return near(u.center, t.center) && near(u.width, t.width) && near(u.linear_phase, -t.linear_phase) &&
             std::abs(u.amplitude - std::conj(t.amplitude)) <= tol * scale;
    });
    if (!found) return false;
  }
  return true;
}

}  // namespace cvbell
