#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "cvbell/catstates.hpp"
#include "cvbell/fock.hpp"
#include "cvbell/reference.hpp"
#include "oracles.hpp"

using namespace cvbell;
using Catch::Matchers::WithinAbs;

namespace {

const double root_pi = std::sqrt(std::numbers::pi);

// <phi_n|f>, <phi_n|g> for the envelope pair (N = 10, alpha = sqrt(pi), s = 0.4),
// frozen from Boost-Hermite quadrature in tests/oracles.hpp.
constexpr std::pair<int, double> f_frozen[] = {{0, 0.67471529}, {2, -0.02334112}, {4, -0.69710473}, {8, -0.08699862}, {12, -0.20263046}};
constexpr std::pair<int, double> g_frozen[] = {{1, 0.85147373}, {5, 0.39279093}, {9, -0.32511741}, {13, -0.09656674}};

CatPair reference_pair() {
  return catN_envelope(min_paws(reference::fock_ref_epsilon, root_pi, reference::fock_ref_s), root_pi, reference::fock_ref_s);
}

template <std::size_t K>
FockExpansion from_reference(const std::array<reference::FockProbability, K>& entries) {
  std::vector<std::pair<int, double>> pairs;
  for (const auto& e : entries) pairs.emplace_back(e.n, e.sign * std::sqrt(e.p));
  return FockExpansion::from_pairs(pairs);
}

}  // namespace

TEST_CASE("vacuum decomposes onto |0>") {
  const auto v = Wavefunction::from_terms({{std::pow(std::numbers::pi, -0.25), 0.0, 1.0, 0.0}});
  const auto e = decompose(v, 6);
  CHECK_THAT(e.coeffs[0], WithinAbs(1.0, 1e-12));
  for (int n = 1; n <= 6; ++n) CHECK_THAT(e.coeffs[n], WithinAbs(0.0, 1e-12));
  CHECK_FALSE(e.low_capture);
}

TEST_CASE("decomposition matches the frozen oracle coefficients") {
  const auto pair = reference_pair();
  REQUIRE(pair.f.terms().size() == 10);
  const auto fe = decompose(pair.f, 14);
  const auto ge = decompose(pair.g, 14);
  for (auto [n, c] : f_frozen) CHECK_THAT(fe.coeffs[n], WithinAbs(c, 1e-7));
  for (auto [n, c] : g_frozen) CHECK_THAT(ge.coeffs[n], WithinAbs(c, 1e-7));
  // Parity: odd orders of f and even orders of g vanish.
  for (int n = 1; n <= 14; n += 2) CHECK_THAT(fe.coeffs[n], WithinAbs(0.0, 1e-12));
  for (int n = 0; n <= 14; n += 2) CHECK_THAT(ge.coeffs[n], WithinAbs(0.0, 1e-12));
}

TEST_CASE("decomposition agrees with direct Boost quadrature") {
  const auto pair = reference_pair();
  const auto fe = decompose(pair.f, 12);
  for (unsigned n : {0u, 4u, 6u, 12u}) {
    const double ref = oracle::integrate([&](double q) { return pair.f(q).real() * oracle::hermite_function(n, q); }, -25, 25, 0.05);
    CHECK_THAT(fe.coeffs[n], WithinAbs(ref, 1e-10));
  }
}

TEST_CASE("reference Fock probabilities after renormalizing the mod-4 classes") {
  const auto pair = reference_pair();
  const auto f = decompose(pair.f, reference::fock_ref_n_max).restricted(4, 0).renormalized();
  const auto g = decompose(pair.g, reference::fock_ref_n_max).restricted(4, 1).renormalized();
  for (const auto& e : reference::fock_ref_f) {
    CHECK_THAT(f.probability(e.n), WithinAbs(e.p, reference::fock_ref_prob_tol));
    CHECK(f.coeffs[e.n] * e.sign > 0);
  }
  for (const auto& e : reference::fock_ref_g) {
    CHECK_THAT(g.probability(e.n), WithinAbs(e.p, reference::fock_ref_prob_tol));
    CHECK(g.coeffs[e.n] * e.sign > 0);
  }
}

TEST_CASE("orders outside n = 0, 1 mod 4 are suppressed for a wide envelope") {
  const auto pair = catN_envelope(min_paws(1e-6, root_pi, 0.1), root_pi, 0.1);
  const auto f = decompose(pair.f, 20);
  const auto g = decompose(pair.g, 20);
  for (int n = 0; n <= 20; ++n) {
    if (n % 4 != 0) CHECK(std::abs(f.coeffs[n]) < 1e-3);
    if (n % 4 != 1) CHECK(std::abs(g.coeffs[n]) < 1e-3);
  }
}

TEST_CASE("truncation below the capture threshold is flagged") {
  const auto pair = reference_pair();
  CHECK(decompose(pair.f, 4).low_capture);
  CHECK_FALSE(decompose(pair.f, 14).low_capture);
}

TEST_CASE("Fock-basis Bell values of the reference states") {
  const auto a = fock_state_S(from_reference(reference::fock_ref_f), from_reference(reference::fock_ref_g));
  CHECK_THAT(a.S, WithinAbs(reference::fock_ref_S_truncated.value, reference::fock_ref_S_truncated.tol));
  CHECK_THAT(a.W, WithinAbs(a.V, 1e-6));

  const auto b = fock_state_S(from_reference(reference::two_term_f), from_reference(reference::two_term_g));
  CHECK_THAT(b.S, WithinAbs(reference::fock_ref_S_two_term.value, reference::fock_ref_S_two_term.tol));

  const auto c = fock_state_S(from_reference(reference::vacuum_one_f), from_reference(reference::vacuum_one_g));
  CHECK_THAT(c.S, WithinAbs(reference::fock_ref_S_vacuum_one.value, reference::fock_ref_S_vacuum_one.tol));
  CHECK_THAT(c.S, WithinAbs(2.0 * std::numbers::sqrt2 * c.V * c.V, 1e-9));
}

TEST_CASE("Bell value of the computed truncation") {
  const auto pair = reference_pair();
  const auto f = decompose(pair.f, 14).restricted(4, 0);
  const auto g = decompose(pair.g, 14).restricted(4, 1);
  const auto r = fock_state_S(f, g);
  CHECK_THAT(r.S, WithinAbs(2.81, 0.02));
}

TEST_CASE("fock_state_S checks parity") {
  const auto even = FockExpansion::from_coeffs({1.0});
  const auto odd = FockExpansion::from_coeffs({0.0, 1.0});
  CHECK_THROWS_WITH(fock_state_S(odd, odd), "fock_state_S: f must have support on even n only");
  CHECK_THROWS_WITH(fock_state_S(even, even), "fock_state_S: g must have support on odd n only");
  // Inputs are rescaled to unit norm.
  const auto r1 = fock_state_S(even, odd);
  const auto r2 = fock_state_S(FockExpansion::from_coeffs({3.0}), FockExpansion::from_coeffs({0.0, 0.5}));
  CHECK_THAT(r1.S, WithinAbs(r2.S, 1e-12));
  CHECK_THAT(r1.V, WithinAbs(std::sqrt(2.0 / std::numbers::pi), 1e-9));
}

TEST_CASE("expansion helpers") {
  const auto e = FockExpansion::from_pairs({{0, 0.6}, {4, -0.8}});
  CHECK(e.coeffs.size() == 5);
  CHECK_THAT(e.captured, WithinAbs(1.0, 1e-15));
  CHECK_THAT(e.probability(4), WithinAbs(0.64, 1e-15));
  CHECK(e.probability(100) == 0.0);
  CHECK_THROWS_AS(FockExpansion::from_pairs({{-1, 1.0}}), Error);
  CHECK_THROWS_AS(FockExpansion{}.renormalized(), Error);
}
