#pragma once

#include <array>
#include <cmath>
#include <string_view>

// Published reference values with per-value tolerances. Shared by the CLI
// checks and the golden tests.
namespace cvbell::reference {

inline constexpr std::string_view version = "1";

struct Table1Entry {
  int N;
  double S;
  double tol;
};

/// Flat N-paw cats at alpha = 15.
inline constexpr double table1_alpha = 15.0;
inline constexpr std::array<Table1Entry, 6> table1{{
    {2, 1.895, 0.005},
    {4, 2.417, 0.005},
    {6, 2.529, 0.005},
    {8, 2.611, 0.005},
    {10, 2.649, 0.005},
    {12, 2.681, 0.005},
}};

struct Table2Entry {
  int N;
  double alpha_opt;
  double S;
  double alpha_tol;
  double S_tol;
};

/// Envelope N-paw cats at s = 0.3, optimized over alpha.
inline constexpr double table2_s = 0.3;
inline constexpr std::array<Table2Entry, 5> table2{{
    {4, 2.6, 2.764, 0.1, 0.01},
    {6, 2.3, 2.823, 0.1, 0.01},
    {8, 2.0, 2.826, 0.1, 0.01},
    {10, 1.8, 2.828, 0.1, 0.01},
    {12, 1.8, 2.828, 0.1, 0.01},
}};

struct FockProbability {
  int n;
  double p;
  int sign;
};

/// Truncated Fock decomposition of the envelope pair at alpha = sqrt(pi), s = 0.4.
inline constexpr double fock_ref_s = 0.4;
inline constexpr double fock_ref_epsilon = 0.01;
inline constexpr int fock_ref_n_max = 14;
inline constexpr double fock_ref_prob_tol = 0.005;
inline constexpr std::array<FockProbability, 4> fock_ref_f{{{0, 0.459, 1}, {4, 0.491, -1}, {8, 0.008, -1}, {12, 0.042, -1}}};
inline constexpr std::array<FockProbability, 4> fock_ref_g{{{1, 0.729, 1}, {5, 0.155, 1}, {9, 0.107, -1}, {13, 0.009, -1}}};

struct ValueWithTol {
  double value;
  double tol;
};

inline constexpr ValueWithTol fock_ref_S_truncated{2.81, 0.02};
inline constexpr ValueWithTol fock_ref_S_two_term{2.68, 0.01};
inline constexpr ValueWithTol fock_ref_S_vacuum_one{2.3, 0.01};

inline constexpr std::array<FockProbability, 2> two_term_f{{{0, 0.585, 1}, {4, 0.415, -1}}};
inline constexpr std::array<FockProbability, 2> two_term_g{{{1, 0.848, 1}, {5, 0.152, 1}}};
inline constexpr std::array<FockProbability, 2> vacuum_one_f{{{0, 0.67, 1}, {4, 0.33, -1}}};
inline constexpr std::array<FockProbability, 1> vacuum_one_g{{{1, 1.0, 1}}};

/// Flat 4-paw cat at alpha = 10.
inline constexpr ValueWithTol four_paw_S{2.417, 1e-3};
/// Envelope state at alpha = sqrt(pi), s = 0.3, N = 12: relative error to 2 sqrt(2).
inline constexpr double tsirelson_rel_tol = 1e-4;

inline bool within(double value, double expected, double tol) { return std::abs(value - expected) <= tol; }

}  // namespace cvbell::reference
