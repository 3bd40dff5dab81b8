#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "cvbell/bell.hpp"
#include "cvbell/catstates.hpp"
#include "cvbell/optimize.hpp"
#include "oracles.hpp"

using namespace cvbell;
using Catch::Matchers::WithinAbs;

namespace {

// Oracle values frozen from tests/oracles.hpp (Boost quadrature, direct Fourier sums).
constexpr double four_paw_alpha10_W = 0.8488263640;
constexpr double env4_alpha26_W = 0.9772002927;

}  // namespace

TEST_CASE("correlator closed forms") {
  const double V = 0.9, W = 0.7, theta = 0.4;
  const auto r = correlators(V, W, theta);
  CHECK_THAT(r.E_qq, WithinAbs(V * V * std::cos(theta), 1e-15));
  CHECK_THAT(r.E_pp, WithinAbs(-W * W * std::cos(theta), 1e-15));
  CHECK_THAT(r.E_qp, WithinAbs(-V * W * std::sin(theta), 1e-15));
  CHECK_THAT(r.E_pq, WithinAbs(-V * W * std::sin(theta), 1e-15));
  CHECK_THAT(r.S_at_theta, WithinAbs(chsh_combination(r.E_qq, r.E_pp, r.E_qp, r.E_pq), 1e-15));
  CHECK_THAT(r.S_at_theta, WithinAbs(chsh_S(V, W, theta), 1e-15));
}

TEST_CASE("S_max is the maximum over theta") {
  for (auto [V, W] : {std::pair{1.0, 1.0}, {0.8, 0.3}, {1.0, 2.0 / std::numbers::pi}, {0.1, 0.9}}) {
    const auto best = chsh_S_max(V, W);
    CHECK_THAT(best.S, WithinAbs(std::sqrt(V * V * V * V + W * W * W * W + 6 * V * V * W * W), 1e-14));
    CHECK_THAT(chsh_S(V, W, best.theta_m), WithinAbs(best.S, 1e-12));
    const auto scan = opt::grid_scan([&](double t) { return chsh_S(V, W, t); }, 0.0, 2.0 * std::numbers::pi, 1e-3);
    CHECK(scan.values[scan.best] <= best.S + 1e-12);
  }
  CHECK_THAT(chsh_S_max(1.0, 1.0).S, WithinAbs(2.0 * std::numbers::sqrt2, 1e-14));
}

TEST_CASE("V for vacuum and one photon is sqrt(2/pi)") {
  const auto f = Wavefunction::from_fock(std::vector<double>{1.0});
  const auto g = Wavefunction::from_fock(std::vector<double>{0.0, 1.0});
  CHECK_THAT(overlap_V(f, g), WithinAbs(std::sqrt(2.0 / std::numbers::pi), 1e-10));
}

TEST_CASE("two-paw W approaches 2/pi") {
  const auto c = cat2(10.0);
  const auto o = root_binned_overlaps(c.f, c.g);
  CHECK_THAT(o.V, WithinAbs(1.0, 1e-10));
  CHECK_THAT(o.W, WithinAbs(2.0 / std::numbers::pi, 1e-4));
}

TEST_CASE("four-paw W approaches 8/(3 pi) and S = 2.417") {
  const auto c = catN_flat(4, 10.0);
  const auto o = root_binned_overlaps(c.f, c.g);
  CHECK_THAT(o.W, WithinAbs(8.0 / (3.0 * std::numbers::pi), 1e-4));
  CHECK_THAT(o.W, WithinAbs(four_paw_alpha10_W, 1e-6));
  CHECK_THAT(chsh_S_max(o.V, o.W).S, WithinAbs(2.417, 1e-3));
}

TEST_CASE("V and W agree with an independent quadrature oracle") {
  SECTION("flat four-paw") {
    const auto o = root_binned_overlaps(catN_flat(4, 10.0).f, catN_flat(4, 10.0).g);
    const auto ref = oracle::flat_cat(4, 10.0);
    CHECK_THAT(o.V, WithinAbs(oracle::abs_overlap(ref.f, ref.g, ref.window, 0.05), 1e-8));
    CHECK_THAT(o.W, WithinAbs(oracle::abs_overlap(oracle::momentum_grid(ref, 8.0, 2001, 1.0)), 2e-5));
  }
  SECTION("envelope four-paw") {
    const auto c = catN_envelope(4, 2.6, 0.3);
    const auto o = root_binned_overlaps(c.f, c.g);
    CHECK_THAT(o.W, WithinAbs(env4_alpha26_W, 1e-5));
    const auto ref = oracle::envelope_cat(4, 2.6, 0.3);
    CHECK_THAT(o.V, WithinAbs(oracle::abs_overlap(ref.f, ref.g, ref.window, 0.02), 1e-8));
  }
}

TEST_CASE("two-mode state validation") {
  const auto c = cat2(2.0);
  CHECK_NOTHROW(TwoModeState::make(c.f, c.g, 0.3));
  CHECK_THROWS_WITH(TwoModeState::make(c.g, c.g, 0.3), "TwoModeState: f must be even");
  CHECK_THROWS_WITH(TwoModeState::make(c.f, c.f, 0.3), "TwoModeState: g must be odd");
  CHECK_THROWS_WITH(TwoModeState::make(scaled(c.f, 2.0), c.g, 0.3), "TwoModeState: f must be normalized");
  CHECK(TwoModeState::make(c.f, c.g, -0.5).theta == Catch::Approx(2.0 * std::numbers::pi - 0.5));
}

TEST_CASE("non-real momentum partners are rejected") {
  const auto f = Wavefunction::from_terms({{1.0, -1.0, 1.0, 0.0}, {1.0, 1.0, 1.0, 0.0}});
  const auto g = Wavefunction::from_terms({{1.0, -1.0, 1.0, 0.0}, {1.0, 1.0, 1.0, 0.0}});
  CHECK_THROWS_AS(overlap_W(f, g), Error);
}

TEST_CASE("brute-force correlators reproduce the closed forms") {
  const auto c = catN_flat(4, 6.0);
  const auto o = root_binned_overlaps(c.f, c.g);
  for (double theta : {0.0, 0.9, 2.5, 4.0}) {
    const auto st = TwoModeState::make(c.f, c.g, theta);
    const auto r = correlators(o.V, o.W, theta);
    const auto qq = sign_probabilities(st, Basis::q, Basis::q);
    const auto pp = sign_probabilities(st, Basis::p, Basis::p);
    const auto qp = sign_probabilities(st, Basis::q, Basis::p);
    const auto pq = sign_probabilities(st, Basis::p, Basis::q);
    CHECK_THAT(qq.correlation(), WithinAbs(r.E_qq, 1e-6));
    CHECK_THAT(pp.correlation(), WithinAbs(r.E_pp, 1e-6));
    CHECK_THAT(qp.correlation(), WithinAbs(r.E_qp, 1e-6));
    CHECK_THAT(pq.correlation(), WithinAbs(r.E_pq, 1e-6));
    for (const auto* s : {&qq, &pp, &qp, &pq}) CHECK_THAT(s->total(), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("general two-mode correlations match the product-state formulas") {
  const auto c = catN_flat(4, 8.0);
  const auto o = root_binned_overlaps(c.f, c.g);
  const double theta = 1.1;
  const auto psi = TwoModeSuperposition::from(TwoModeState::make(c.f, c.g, theta));
  const auto est = chsh_estimate(psi, o.position, o.momentum);
  const auto r = correlators(o.V, o.W, theta);
  CHECK_THAT(est.E_qq, WithinAbs(r.E_qq, 1e-9));
  CHECK_THAT(est.E_pp, WithinAbs(r.E_pp, 1e-9));
  CHECK_THAT(est.E_qp, WithinAbs(r.E_qp, 1e-9));
  CHECK_THAT(est.E_pq, WithinAbs(r.E_pq, 1e-9));
  CHECK_THAT(est.S, WithinAbs(r.S_at_theta, 1e-9));
}

TEST_CASE("positive-negative binning gives a weaker violation than root binning") {
  const auto c = catN_flat(4, 10.0);
  const auto root = root_binned_overlaps(c.f, c.g);
  const double V_pn = overlap_V(c.f, c.g, pn_binning());
  CHECK(std::abs(V_pn) < root.V);
}
