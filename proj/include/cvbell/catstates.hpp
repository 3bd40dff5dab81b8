#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "cvbell/bell.hpp"
#include "cvbell/error.hpp"
#include "cvbell/optimize.hpp"
#include "cvbell/wavefunc.hpp"

namespace cvbell {

/// An even/odd pair of normalized real wavefunctions.
struct CatPair {
  Wavefunction f;
  Wavefunction g;
};

enum class CatKind { flat, envelope };

/// N-paw cat family parameters. `alpha` is the full spacing between
/// neighbouring peaks; `s` is the squeezing width (1 for the flat kind).
struct CatFamilySpec {
  CatKind kind = CatKind::flat;
  int N = 4;
  double alpha = 15.0;
  double s = 1.0;

  void validate() const {
    require(N >= 2 && N % 2 == 0, "cat family: N must be an even integer >= 2");
    require(std::isfinite(alpha) && alpha > 0.0, "cat family: alpha must be positive");
    require(std::isfinite(s) && s > 0.0, "cat family: s must be positive");
    if (kind == CatKind::flat) require(s == 1.0, "cat family: flat kind has s = 1");
    if (kind == CatKind::envelope) require(s <= 1.0, "cat family: envelope kind needs s in (0, 1]");
  }
};

/// Two-paw cats f ~ e^{-(q+a)^2/2} + e^{-(q-a)^2/2}, g ~ -e^{-(q+a)^2/2} + e^{-(q-a)^2/2}.
/// Normalization constants are closed form; expm1 keeps g well defined as a -> 0.
inline CatPair cat2(double a) {
  require(std::isfinite(a) && a > 0.0, "cat2: a must be positive");
  const double root_pi = std::sqrt(std::numbers::pi);
  const double nf = 1.0 / std::sqrt(2.0 * root_pi * (1.0 + std::exp(-a * a)));
  const double ng = 1.0 / std::sqrt(-2.0 * root_pi * std::expm1(-a * a));
  return {Wavefunction::from_terms({{nf, -a, 1.0, 0.0}, {nf, a, 1.0, 0.0}}),
          Wavefunction::from_terms({{-ng, -a, 1.0, 0.0}, {ng, a, 1.0, 0.0}})};
}

namespace detail {

// Peak j sits at (j + 1/2) alpha, j = -N/2 .. N/2 - 1, with weights
// cos and sin of pi (2j + 1) / 4.
template <class Peak>
CatPair build_comb(int N, double alpha, Peak&& peak) {
  std::vector<GaussianTerm> f, g;
  for (int j = -N / 2; j < N / 2; ++j) {
    const double x = (j + 0.5) * alpha;
    const double phase = std::numbers::pi * (2.0 * j + 1.0) / 4.0;
    GaussianTerm t = peak(x);
    GaussianTerm tf = t, tg = t;
    tf.amplitude *= std::cos(phase);
    tg.amplitude *= std::sin(phase);
    f.push_back(tf);
    g.push_back(tg);
  }
  return {normalize(Wavefunction::from_terms(std::move(f))), normalize(Wavefunction::from_terms(std::move(g)))};
}

}  // namespace detail

/// Equal-height N-paw cats with unit-width peaks.
inline CatPair catN_flat(int N, double alpha) {
  CatFamilySpec{CatKind::flat, N, alpha, 1.0}.validate();
  return detail::build_comb(N, alpha, [](double x) { return GaussianTerm{1.0, x, 1.0, 0.0}; });
}

/// N-paw truncation of G_{1/s}(q) [comb * G_s](q): every comb tooth becomes a
/// width-s Gaussian, and the envelope exp(-s^2 q^2 / 2) folds into it as
///   exp(-s^2 x^2 / (2 (1 + s^4))) * exp(-(q - x / (1 + s^4))^2 / (2 sigma^2)),
/// sigma = s / sqrt(1 + s^4).
inline CatPair catN_envelope(int N, double alpha, double s) {
  CatFamilySpec{CatKind::envelope, N, alpha, s}.validate();
  const double s2 = s * s, d = 1.0 + s2 * s2;
  const double sigma = s / std::sqrt(d);
  return detail::build_comb(N, alpha, [&](double x) {
    return GaussianTerm{std::exp(-0.5 * s2 * x * x / d), x / d, sigma, 0.0};
  });
}

inline CatPair make_cat(const CatFamilySpec& spec) {
  spec.validate();
  return spec.kind == CatKind::flat ? catN_flat(spec.N, spec.alpha) : catN_envelope(spec.N, spec.alpha, spec.s);
}

/// Smallest even N with N > 2 sqrt(2 |ln eps|) / (alpha s).
inline int min_paws(double epsilon, double alpha, double s) {
  require(epsilon > 0.0 && epsilon <= 1.0, "min_paws: epsilon must be in (0, 1)");
  require(alpha > 0.0 && s > 0.0, "min_paws: alpha and s must be positive");
  const double bound = 2.0 * std::sqrt(2.0 * std::abs(std::log(epsilon))) / (alpha * s);
  int n = static_cast<int>(std::floor(bound)) + 1;
  if (n % 2 != 0) ++n;
  return std::max(n, 2);
}

struct BellSummary {
  double V = 0.0;
  double W = 0.0;
  double S = 0.0;
  double theta_m = 0.0;
};

inline BellSummary bell_summary(const CatPair& pair) {
  const auto o = root_binned_overlaps(pair.f, pair.g);
  const auto best = chsh_S_max(o.V, o.W);
  return {o.V, o.W, best.S, best.theta_m};
}

struct AlphaOptimum {
  double alpha = 0.0;
  double S = 0.0;
};

struct AlphaSearchOptions {
  double lo = 0.5;
  double hi = 5.0;
  double grid_step = 0.05;
  double tol = 1e-4;
};

/// Maximizes S over alpha for the envelope family: coarse grid scan, then
/// golden-section refinement around the best grid point.
inline AlphaOptimum optimize_alpha(int N, double s, const AlphaSearchOptions& opts = {}) {
  auto S_of = [&](double alpha) { return bell_summary(catN_envelope(N, alpha, s)).S; };
  const auto scan = opt::grid_scan(S_of, opts.lo, opts.hi, opts.grid_step);
  if (scan.best == 0 || scan.best + 1 == scan.xs.size()) throw Error("optimize_alpha: bracket too small");
  const auto best = opt::golden_section_maximize(S_of, scan.xs[scan.best - 1], scan.xs[scan.best + 1], opts.tol);
  if (best.value < scan.values[scan.best]) return {scan.xs[scan.best], scan.values[scan.best]};
  return {best.x, best.value};
}

struct Table1Row {
  int N = 0;
  double S = 0.0;
};

/// S for flat cats, N = 2, 4, ..., 12 at alpha = 15.
inline std::vector<Table1Row> table1(double alpha = 15.0) {
  std::vector<Table1Row> rows;
  for (int N = 2; N <= 12; N += 2) rows.push_back({N, bell_summary(catN_flat(N, alpha)).S});
  return rows;
}

struct Table2Row {
  int N = 0;
  double alpha_opt = 0.0;
  double S = 0.0;
};

/// Optimized envelope cats, N = 4, 6, ..., 12 at squeezing s.
inline std::vector<Table2Row> table2(double s = 0.3, const AlphaSearchOptions& opts = {}) {
  std::vector<Table2Row> rows;
  for (int N = 4; N <= 12; N += 2) {
    const auto best = optimize_alpha(N, s, opts);
    rows.push_back({N, best.alpha, best.S});
  }
  return rows;
}

}  // namespace cvbell
