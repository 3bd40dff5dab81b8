#pragma once

// Randomized property checks shared by the unit suite and the acceptance
// runner. Each returns the number of cases, the failures and the worst error.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvbell/cvbell.hpp"

namespace checks {

using namespace cvbell;

struct Outcome {
  int cases = 0;
  int failures = 0;
  double worst = 0.0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
  void record(bool pass, double err, const std::string& what) {
    ++cases;
    worst = std::max(worst, err);
    if (!pass && failures++ == 0) first_failure = what;
  }
};

inline Wavefunction random_gaussian_sum(std::mt19937_64& rng, Parity parity) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<GaussianTerm> terms;
  const int n = count(rng);
  for (int k = 0; k < n; ++k) {
    GaussianTerm t{complex{u(rng), u(rng)}, 5.0 * u(rng), 0.3 + 1.5 * (u(rng) + 1.0), 2.0 * u(rng)};
    terms.push_back(t);
    if (parity != Parity::none) {
      GaussianTerm m = t;
      m.center = -t.center;
      m.linear_phase = -t.linear_phase;
      if (parity == Parity::odd) m.amplitude = -t.amplitude;
      terms.push_back(m);
    }
  }
  return normalize(Wavefunction::from_terms(terms));
}

/// F^4 = identity (term by term) and F^2 psi(q) = psi(-q).
inline Outcome fourier_involution(int cases, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    const auto psi = random_gaussian_sum(rng, Parity::none);
    const auto f2 = fourier_transform(fourier_transform(psi));
    const auto f4 = fourier_transform(fourier_transform(f2));
    double err = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double q = u(rng);
      err = std::max({err, std::abs(f2(q) - psi(-q)), std::abs(f4(q) - psi(q))});
    }
    out.record(err < 1e-12, err, "case " + std::to_string(c));
  }
  return out;
}

/// ||F psi|| = ||psi|| for Gaussian sums (closed form) and Fock vectors.
inline Outcome parseval(int cases, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    const auto psi = random_gaussian_sum(rng, Parity::none);
    double err = std::abs(norm_squared(fourier_transform(psi)) - norm_squared(psi));
    std::vector<complex> coeffs(8);
    for (auto& x : coeffs) x = {u(rng), u(rng)};
    const auto fock = Wavefunction::from_fock(coeffs);
    err = std::max(err, std::abs(norm_squared(fourier_transform(fock)) - norm_squared(fock)) / norm_squared(fock));
    out.record(err < 1e-12, err, "case " + std::to_string(c));
  }
  return out;
}

/// Even stays even and odd stays odd under F, for both representations;
/// real even f gives real f~, real odd g gives real h~.
inline Outcome parity_propagation(int cases, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    const auto e = random_gaussian_sum(rng, Parity::even);
    const auto o = random_gaussian_sum(rng, Parity::odd);
    bool pass = fourier_transform(e).parity() == Parity::even && fourier_transform(o).parity() == Parity::odd;
    std::vector<double> ce(9, 0.0), co(9, 0.0);
    for (int n = 0; n < 9; n += 2) ce[n] = u(rng);
    for (int n = 1; n < 9; n += 2) co[n] = u(rng);
    pass = pass && fourier_transform(Wavefunction::from_fock(ce)).parity() == Parity::even &&
           fourier_transform(Wavefunction::from_fock(co)).parity() == Parity::odd;
    // Real-valued partners from real cat-like pairs.
    const double a = 0.5 + 4.0 * (u(rng) + 1.0);
    const auto pair = catN_flat(4, a);
    const auto m = momentum_pair(pair.f, pair.g);
    pass = pass && is_real(m.f_tilde) && is_real(m.h_tilde) && m.f_tilde.parity() == Parity::even &&
           m.h_tilde.parity() == Parity::odd;
    out.record(pass, pass ? 0.0 : 1.0, "case " + std::to_string(c));
  }
  return out;
}

/// S(alpha) = S(pi / alpha) for the envelope family, N large enough that
/// truncation is below 1e-6.
inline Outcome duality(int cases, unsigned seed, double tol = 1e-3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(1.3, 2.4), us(0.25, 0.3);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    const double alpha = ua(rng), s = us(rng);
    const double dual = std::numbers::pi / alpha;
    const double S1 = bell_summary(catN_envelope(min_paws(1e-6, alpha, s), alpha, s)).S;
    const double S2 = bell_summary(catN_envelope(min_paws(1e-6, dual, s), dual, s)).S;
    const double err = std::abs(S1 - S2);
    out.record(err <= tol, err, "alpha=" + std::to_string(alpha) + " s=" + std::to_string(s));
  }
  return out;
}

inline CatPair random_family_state(std::mt19937_64& rng, int max_paws = 6) {
  std::uniform_int_distribution<int> kind(0, 2), half(2, max_paws / 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (kind(rng)) {
    case 0:
      return cat2(0.3 + 4.0 * u(rng));
    case 1:
      return catN_flat(2 * half(rng), 2.0 + 13.0 * u(rng));
    default:
      return catN_envelope(2 * half(rng), 1.2 + 2.0 * u(rng), 0.2 + 0.3 * u(rng));
  }
}

/// The root binning labels every point by the sign of f g (points where
/// |f g| < 1e-12 carry no sign information and are skipped), breakpoints
/// increase strictly and neighbouring intervals alternate.
inline Outcome binning_completeness(int cases, unsigned seed) {
  std::mt19937_64 rng(seed);
  Outcome out;
  for (int c = 0; c < cases; ++c) {
    const auto pair = random_family_state(rng, 8);
    const auto p = root_binning(pair.f, pair.g);
    bool pass = p.interval_count() == p.breakpoints().size() + 1;
    for (std::size_t i = 0; i + 1 < p.signs().size(); ++i) pass = pass && p.signs()[i] != p.signs()[i + 1];
    const double window = std::max(evaluation_window(pair.f), evaluation_window(pair.g));
    std::uniform_real_distribution<double> uq(-window, window);
    int mismatches = 0;
    for (int k = 0; k < 400; ++k) {
      const double q = uq(rng);
      const double fg = pair.f(q).real() * pair.g(q).real();
      if (std::abs(fg) < 1e-12) continue;
      if (p.classify(q) != (fg >= 0 ? Sign::plus : Sign::minus)) ++mismatches;
    }
    pass = pass && mismatches == 0;
    out.record(pass, mismatches, "case " + std::to_string(c));
  }
  return out;
}

/// Brute-force sign probabilities against the closed-form correlators.
struct OracleOutcome {
  Outcome correlators;  // |brute - closed| <= 1e-4
  Outcome closure;      // |sum of probabilities - 1| <= 1e-9
  Outcome tsirelson;    // S <= 2 sqrt 2
};

inline OracleOutcome oracle_equivalence(int configs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * std::numbers::pi), u(0.0, 1.0);
  const double bound = 2.0 * std::numbers::sqrt2 + 1e-12;
  OracleOutcome out;
  for (int c = 0; c < configs; ++c) {
    const auto pair = random_family_state(rng);
    const double theta = ut(rng);
    const auto st = TwoModeState::make(pair.f, pair.g, theta);
    const auto o = root_binned_overlaps(pair.f, pair.g);
    const auto r = correlators(o.V, o.W, theta);
    const std::string tag = "config " + std::to_string(c);
    double E[4];
    const Basis bases[4][2] = {{Basis::q, Basis::q}, {Basis::p, Basis::p}, {Basis::q, Basis::p}, {Basis::p, Basis::q}};
    const double closed[4] = {r.E_qq, r.E_pp, r.E_qp, r.E_pq};
    for (int k = 0; k < 4; ++k) {
      const auto sp = sign_probabilities(st, bases[k][0], bases[k][1]);
      E[k] = sp.correlation();
      const double err = std::abs(E[k] - closed[k]);
      out.correlators.record(err <= 1e-4, err, tag);
      const double cl = std::abs(sp.total() - 1.0);
      out.closure.record(cl <= 1e-9, cl, tag);
    }
    const double S_brute = chsh_combination(E[0], E[1], E[2], E[3]);
    const double S_max = chsh_S_max(o.V, o.W).S;
    out.tsirelson.record(S_brute <= bound && r.S_at_theta <= bound && S_max <= bound,
                         std::max({S_brute, S_max}) - 2.0 * std::numbers::sqrt2, tag);
  }
  // The closed form itself over the whole admissible (V, W) square.
  for (int c = 0; c < 1000; ++c) {
    const double V = u(rng), W = u(rng);
    const double S = chsh_S_max(V, W).S;
    out.tsirelson.record(S <= bound, S - 2.0 * std::numbers::sqrt2, "V,W square");
  }
  return out;
}

}  // namespace checks
