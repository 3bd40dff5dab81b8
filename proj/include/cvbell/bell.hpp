#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "cvbell/binning.hpp"
#include "cvbell/error.hpp"
#include "cvbell/quadrature.hpp"
#include "cvbell/wavefunc.hpp"

namespace cvbell {

/// (|f f> + e^{i theta} |g g>) / sqrt(2) with f real even and g real odd.
struct TwoModeState {
  Wavefunction f;
  Wavefunction g;
  double theta = 0.0;

  /// Validates parity, reality and normalization; wraps theta into [0, 2 pi).
  static TwoModeState make(Wavefunction f, Wavefunction g, double theta) {
    require(f.parity() == Parity::even, "TwoModeState: f must be even");
    require(g.parity() == Parity::odd, "TwoModeState: g must be odd");
    require(is_real(f) && is_real(g), "TwoModeState: f and g must be real");
    require(std::abs(norm_squared(f) - 1.0) < 1e-9, "TwoModeState: f must be normalized");
    require(std::abs(norm_squared(g) - 1.0) < 1e-9, "TwoModeState: g must be normalized");
    require(std::isfinite(theta), "TwoModeState: theta must be finite");
    double t = std::fmod(theta, 2.0 * std::numbers::pi);
    if (t < 0.0) t += 2.0 * std::numbers::pi;
    return TwoModeState{std::move(f), std::move(g), t};
  }
};

struct CorrelatorReport {
  double V = 0.0;
  double W = 0.0;
  double E_qq = 0.0;
  double E_pp = 0.0;
  double E_qp = 0.0;
  double E_pq = 0.0;
  double theta_m = 0.0;
  double S_at_theta = 0.0;
  double S_max = 0.0;
};

namespace detail {

// \int_{x0}^{x1} exp(-(q - mu)^2 / (2 tau^2)) dq, stable in the tails.
inline double gaussian_interval(double mu, double tau, double x0, double x1) {
  const double k = 1.0 / (tau * std::numbers::sqrt2);
  const double u0 = (x0 - mu) * k, u1 = (x1 - mu) * k;
  double diff;
  if (u0 >= 0.0) {
    diff = std::erfc(u0) - std::erfc(u1);
  } else if (u1 <= 0.0) {
    diff = std::erfc(-u1) - std::erfc(-u0);
  } else {
    diff = std::erf(u1) - std::erf(u0);
  }
  return tau * std::sqrt(0.5 * std::numbers::pi) * diff;
}

inline bool real_plain_terms(const Wavefunction& w) {
  return w.is_gaussian_sum() && std::all_of(w.terms().begin(), w.terms().end(), [](const GaussianTerm& t) {
           return t.linear_phase == 0.0 && t.amplitude.imag() == 0.0;
         });
}

// Signed sum over intervals of \int Re f Re g, closed form for real Gaussian sums.
inline double signed_overlap_closed(const Wavefunction& f, const Wavefunction& g, const SignedPartition& part) {
  struct Pair {
    double weight, mu, tau;
  };
  std::vector<Pair> pairs;
  for (const auto& a : f.terms()) {
    for (const auto& b : g.terms()) {
      const double va = a.width * a.width, vb = b.width * b.width, vs = va + vb;
      const double dc = a.center - b.center;
      const double w = a.amplitude.real() * b.amplitude.real() * std::exp(-0.5 * dc * dc / vs);
      if (w == 0.0) continue;
      pairs.push_back({w, (a.center * vb + b.center * va) / vs, a.width * b.width / std::sqrt(vs)});
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < part.interval_count(); ++i) {
    const auto [x0, x1] = part.interval(i);
    double sum = 0.0;
    for (const auto& p : pairs) {
      if (x1 < p.mu - 40.0 * p.tau || x0 > p.mu + 40.0 * p.tau) continue;
      sum += p.weight * gaussian_interval(p.mu, p.tau, x0, x1);
    }
    total += to_double(part.signs()[i]) * sum;
  }
  return total;
}

inline double signed_overlap_quadrature(const Wavefunction& f, const Wavefunction& g, const SignedPartition& part,
                                        double tol) {
  const double window = std::max(evaluation_window(f), evaluation_window(g));
  const double feature = std::min(feature_scale(f), feature_scale(g));
  auto integrand = [&](double q) { return f(q).real() * g(q).real(); };
  double total = 0.0;
  for (std::size_t i = 0; i < part.interval_count(); ++i) {
    auto [x0, x1] = part.interval(i);
    x0 = std::max(x0, -window);
    x1 = std::min(x1, window);
    if (!(x1 > x0)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((x1 - x0) / (2.0 * feature))));
    const auto r = quad::adaptive_panels(integrand, x0, x1, panels, tol / static_cast<double>(part.interval_count()));
    require(r.converged, "overlap quadrature did not converge");
    total += to_double(part.signs()[i]) * r.value;
  }
  return total;
}

}  // namespace detail

/// \int_{D+} f g - \int_{D-} f g for the labeling `part`; equals \int |f g|
/// when `part` is the root binning of (f, g).
inline double overlap_V(const Wavefunction& f, const Wavefunction& g, const SignedPartition& part) {
  require(is_real(f) && is_real(g), "overlap_V: functions must be real-valued");
  if (detail::real_plain_terms(f) && detail::real_plain_terms(g)) return detail::signed_overlap_closed(f, g, part);
  return detail::signed_overlap_quadrature(f, g, part, 1e-12);
}

inline double overlap_V(const Wavefunction& f, const Wavefunction& g) { return overlap_V(f, g, root_binning(f, g)); }

/// Momentum-space partners: f~ = FT(f) and h~ with FT(g) = i h~, both real.
struct MomentumPair {
  Wavefunction f_tilde;
  Wavefunction h_tilde;
};

inline MomentumPair momentum_pair(const Wavefunction& f, const Wavefunction& g) {
  MomentumPair m{fourier_transform(f), scaled(fourier_transform(g), complex{0.0, -1.0})};
  require(is_real(m.f_tilde), "overlap_W: Fourier transform of f is not real (f not even real)");
  require(is_real(m.h_tilde), "overlap_W: Fourier transform of g is not purely imaginary (g not odd real)");
  return m;
}

inline double overlap_W(const Wavefunction& f, const Wavefunction& g, const SignedPartition& momentum_part) {
  const auto m = momentum_pair(f, g);
  return overlap_V(m.f_tilde, m.h_tilde, momentum_part);
}

inline double overlap_W(const Wavefunction& f, const Wavefunction& g) {
  const auto m = momentum_pair(f, g);
  return overlap_V(m.f_tilde, m.h_tilde, root_binning(m.f_tilde, m.h_tilde));
}

/// V, W together with the position (D+-) and momentum (D'+-) partitions used.
struct Overlaps {
  double V = 0.0;
  double W = 0.0;
  SignedPartition position;
  SignedPartition momentum;
};

inline Overlaps root_binned_overlaps(const Wavefunction& f, const Wavefunction& g, const RootBinningOptions& opts = {}) {
  Overlaps o;
  o.position = root_binning(f, g, opts);
  o.V = overlap_V(f, g, o.position);
  const auto m = momentum_pair(f, g);
  o.momentum = root_binning(m.f_tilde, m.h_tilde, opts);
  o.W = overlap_V(m.f_tilde, m.h_tilde, o.momentum);
  return o;
}

/// |cos(theta) (V^2 + W^2) - 2 sin(theta) V W|
inline double chsh_S(double V, double W, double theta) {
  return std::abs(std::cos(theta) * (V * V + W * W) - 2.0 * std::sin(theta) * V * W);
}

struct SMax {
  double S = 0.0;
  double theta_m = 0.0;
};

/// Maximum of chsh_S over theta. theta_m = atan2(-2VW, V^2 + W^2), which is
/// -pi/4 at V = W = 1 and 0 when either overlap vanishes.
inline SMax chsh_S_max(double V, double W) {
  const double v2 = V * V, w2 = W * W;
  return {std::sqrt(v2 * v2 + w2 * w2 + 6.0 * v2 * w2), std::atan2(-2.0 * V * W, v2 + w2)};
}

/// S = |E(q,q) + E(q,p) + E(p,q) - E(p,p)|, the combination whose closed form
/// is chsh_S.
inline double chsh_combination(double E_qq, double E_pp, double E_qp, double E_pq) {
  return std::abs(E_qq + E_qp + E_pq - E_pp);
}

inline CorrelatorReport correlators(double V, double W, double theta) {
  CorrelatorReport r;
  r.V = V;
  r.W = W;
  r.E_qq = V * V * std::cos(theta);
  r.E_pp = -W * W * std::cos(theta);
  r.E_qp = -V * W * std::sin(theta);
  r.E_pq = r.E_qp;
  const auto best = chsh_S_max(V, W);
  r.theta_m = best.theta_m;
  r.S_max = best.S;
  r.S_at_theta = chsh_S(V, W, theta);
  return r;
}

inline CorrelatorReport correlators(const TwoModeState& state) {
  const auto o = root_binned_overlaps(state.f, state.g);
  return correlators(o.V, o.W, state.theta);
}

enum class Basis { q, p };

inline const char* to_string(Basis b) { return b == Basis::q ? "q" : "p"; }

/// Joint sign probabilities P_{s1 s2} for one pair of quadrature settings.
struct SignProbabilities {
  double pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;
  double error = 0.0;  ///< achieved agreement between the last two refinement levels

  double total() const { return pp + pm + mp + mm; }
  double correlation() const { return pp + mm - pm - mp; }
};

struct BruteForceOptions {
  double tol = 1e-9;
  int nodes = 64;  ///< Gauss–Legendre nodes per partition interval
  int max_refinements = 4;
};

namespace detail {

struct SideNodes {
  std::vector<double> weight;
  std::vector<complex> u;  // f or f~
  std::vector<complex> v;  // g or FT(g)
  std::size_t plus_count = 0;  // nodes [0, plus_count) are in D+, the rest in D-
};

inline SideNodes build_side(const Wavefunction& u, const Wavefunction& v, const SignedPartition& part, double window,
                            int nodes, int level) {
  const auto& rule = quad::gauss_legendre(nodes);
  SideNodes plus, minus;
  const int pieces = 1 << level;
  for (std::size_t i = 0; i < part.interval_count(); ++i) {
    auto [x0, x1] = part.interval(i);
    x0 = std::max(x0, -window);
    x1 = std::min(x1, window);
    if (!(x1 > x0)) continue;
    SideNodes& dst = part.signs()[i] == Sign::plus ? plus : minus;
    const double h = (x1 - x0) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double a = x0 + k * h;
      const double half = 0.5 * h, mid = a + half;
      for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
        const double x = mid + half * rule.nodes[n];
        dst.weight.push_back(half * rule.weights[n]);
        dst.u.push_back(u(x));
        dst.v.push_back(v(x));
      }
    }
  }
  SideNodes out = std::move(plus);
  out.plus_count = out.weight.size();
  out.weight.insert(out.weight.end(), minus.weight.begin(), minus.weight.end());
  out.u.insert(out.u.end(), minus.u.begin(), minus.u.end());
  out.v.insert(out.v.end(), minus.v.begin(), minus.v.end());
  return out;
}

inline std::array<double, 4> integrate_sides(const SideNodes& s1, const SideNodes& s2, double theta) {
  const complex phase = std::polar(1.0, theta);
  std::array<double, 4> p{};  // ++, +-, -+, --
  for (std::size_t i = 0; i < s1.weight.size(); ++i) {
    const complex a = s1.u[i];
    const complex b = phase * s1.v[i];
    double acc_plus = 0.0, acc_minus = 0.0;
    for (std::size_t j = 0; j < s2.plus_count; ++j) acc_plus += s2.weight[j] * std::norm(a * s2.u[j] + b * s2.v[j]);
    for (std::size_t j = s2.plus_count; j < s2.weight.size(); ++j)
      acc_minus += s2.weight[j] * std::norm(a * s2.u[j] + b * s2.v[j]);
    const bool first_plus = i < s1.plus_count;
    p[first_plus ? 0 : 2] += 0.5 * s1.weight[i] * acc_plus;
    p[first_plus ? 1 : 3] += 0.5 * s1.weight[i] * acc_minus;
  }
  return p;
}

}  // namespace detail

/// Integrates the joint quadrature density |<x1|<x2|Psi>|^2 over the four
/// sign-domain products by tensorized interval-wise Gauss–Legendre, doubling
/// the panel count until two successive levels agree within `tol`.
inline SignProbabilities sign_probabilities(const TwoModeState& state, Basis first, Basis second,
                                            const BruteForceOptions& opts = {}) {
  require(opts.tol >= 1e-10, "brute_force_correlator: tol must be >= 1e-10");
  const auto ft_f = fourier_transform(state.f);
  const auto ft_g = fourier_transform(state.g);
  const auto m = momentum_pair(state.f, state.g);
  const SignedPartition pos = root_binning(state.f, state.g);
  const SignedPartition mom = root_binning(m.f_tilde, m.h_tilde);
  const double wq = std::max(evaluation_window(state.f), evaluation_window(state.g));
  const double wp = std::max(evaluation_window(ft_f), evaluation_window(ft_g));

  auto side = [&](Basis b, int level) {
    return b == Basis::q ? detail::build_side(state.f, state.g, pos, wq, opts.nodes, level)
                         : detail::build_side(ft_f, ft_g, mom, wp, opts.nodes, level);
  };

  std::array<double, 4> prev = detail::integrate_sides(side(first, 0), side(second, 0), state.theta);
  double diff = 0.0;
  for (int level = 1; level <= opts.max_refinements; ++level) {
    const auto cur = detail::integrate_sides(side(first, level), side(second, level), state.theta);
    diff = 0.0;
    for (int k = 0; k < 4; ++k) diff = std::max(diff, std::abs(cur[k] - prev[k]));
    prev = cur;
    if (diff <= opts.tol) return {cur[0], cur[1], cur[2], cur[3], diff};
  }
  throw Error("brute_force_correlator: quadrature did not converge (achieved " + std::to_string(diff) + ")");
}

/// P++ + P-- - P+- - P-+ by direct integration of the joint density.
inline double brute_force_correlator(const TwoModeState& state, Basis first, Basis second,
                                     const BruteForceOptions& opts = {}) {
  return sign_probabilities(state, first, second, opts).correlation();
}

/// One product term amplitude * |mode1> |mode2> of a two-mode state.
struct ProductComponent {
  complex amplitude{1.0, 0.0};
  Wavefunction mode1;
  Wavefunction mode2;
};

/// A two-mode pure state given as a finite sum of product terms; the form
/// produced by the preparation simulator.
struct TwoModeSuperposition {
  std::vector<ProductComponent> components;

  double norm_squared() const {
    complex sum{};
    for (const auto& a : components)
      for (const auto& b : components)
        sum += std::conj(a.amplitude) * b.amplitude * inner_product(a.mode1, b.mode1) * inner_product(a.mode2, b.mode2);
    return sum.real();
  }

  complex overlap(const TwoModeSuperposition& other) const {
    complex sum{};
    for (const auto& a : components)
      for (const auto& b : other.components)
        sum += std::conj(a.amplitude) * b.amplitude * inner_product(a.mode1, b.mode1) * inner_product(a.mode2, b.mode2);
    return sum;
  }

  static TwoModeSuperposition from(const TwoModeState& s) {
    const double r = 1.0 / std::numbers::sqrt2;
    return {{{complex{r, 0.0}, s.f, s.f}, {std::polar(r, s.theta), s.g, s.g}}};
  }
};

namespace detail {

// \int sign(x) conj(a(x)) b(x) dx with sign from `part`.
inline complex signed_cross_overlap(const Wavefunction& a, const Wavefunction& b, const SignedPartition& part) {
  const double window = std::max(evaluation_window(a), evaluation_window(b));
  complex total{};
  for (std::size_t i = 0; i < part.interval_count(); ++i) {
    auto [x0, x1] = part.interval(i);
    x0 = std::max(x0, -window);
    x1 = std::min(x1, window);
    if (!(x1 > x0)) continue;
    total += to_double(part.signs()[i]) *
             overlap_quadrature(a, b, x0, x1, 1e-12 / static_cast<double>(part.interval_count()));
  }
  return total;
}

}  // namespace detail

/// Correlation E(first, second) of a general two-mode state for the sign
/// labelings `position` (q) and `momentum` (p), normalized by the state norm.
inline double correlation(const TwoModeSuperposition& psi, Basis first, Basis second, const SignedPartition& position,
                          const SignedPartition& momentum) {
  const std::size_t n = psi.components.size();
  std::vector<Wavefunction> m1, m2;
  for (const auto& c : psi.components) {
    m1.push_back(first == Basis::q ? c.mode1 : fourier_transform(c.mode1));
    m2.push_back(second == Basis::q ? c.mode2 : fourier_transform(c.mode2));
  }
  const SignedPartition& part1 = first == Basis::q ? position : momentum;
  const SignedPartition& part2 = second == Basis::q ? position : momentum;
  complex sum{};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      sum += std::conj(psi.components[k].amplitude) * psi.components[l].amplitude *
             detail::signed_cross_overlap(m1[k], m1[l], part1) * detail::signed_cross_overlap(m2[k], m2[l], part2);
    }
  }
  return sum.real() / psi.norm_squared();
}

struct ChshEstimate {
  double E_qq = 0.0, E_pp = 0.0, E_qp = 0.0, E_pq = 0.0;
  double S = 0.0;
};

inline ChshEstimate chsh_estimate(const TwoModeSuperposition& psi, const SignedPartition& position,
                                  const SignedPartition& momentum) {
  ChshEstimate e;
  e.E_qq = correlation(psi, Basis::q, Basis::q, position, momentum);
  e.E_pp = correlation(psi, Basis::p, Basis::p, position, momentum);
  e.E_qp = correlation(psi, Basis::q, Basis::p, position, momentum);
  e.E_pq = correlation(psi, Basis::p, Basis::q, position, momentum);
  e.S = chsh_combination(e.E_qq, e.E_pp, e.E_qp, e.E_pq);
  return e;
}

}  // namespace cvbell
