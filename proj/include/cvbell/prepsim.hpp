#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cvbell/bell.hpp"
#include "cvbell/catstates.hpp"
#include "cvbell/error.hpp"
#include "cvbell/wavefunc.hpp"

namespace cvbell {

/// One branch amp * |bits> (x) |mode_0> (x) ... of a hybrid qubit-oscillator state.
struct Branch {
  std::vector<int> bits;
  complex amp{1.0, 0.0};
  std::vector<Wavefunction> modes;
};

namespace detail {

inline bool same_function(const Wavefunction& a, const Wavefunction& b) {
  if (a.kind() != b.kind() || a.terms().size() != b.terms().size()) return false;
  auto close = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + std::abs(x) + std::abs(y)); };
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& s = a.terms()[i];
    const auto& t = b.terms()[i];
    if (!close(s.center, t.center) || !close(s.width, t.width) || !close(s.linear_phase, t.linear_phase)) return false;
    if (std::abs(s.amplitude - t.amplitude) > 1e-12 * (std::abs(s.amplitude) + std::abs(t.amplitude))) return false;
  }
  if (a.is_fock()) return a.fock_coeffs() == b.fock_coeffs();
  return true;
}

}  // namespace detail

/// Exact state of n qubits and n oscillator modes as a list of branches.
/// Gates return new states. Branches with equal bits are merged whenever
/// the result is again a product: always for one mode, and for several
/// modes when they differ in at most one mode.
class HybridState {
 public:
  HybridState() = default;
  HybridState(int n_qubits, int n_modes, std::vector<Branch> branches)
      : n_qubits_(n_qubits), n_modes_(n_modes), branches_(std::move(branches)) {
    for (const auto& b : branches_) {
      require(static_cast<int>(b.bits.size()) == n_qubits_, "HybridState: wrong number of bits");
      require(static_cast<int>(b.modes.size()) == n_modes_, "HybridState: wrong number of modes");
    }
    merge();
  }

  int n_qubits() const { return n_qubits_; }
  int n_modes() const { return n_modes_; }
  const std::vector<Branch>& branches() const { return branches_; }

  /// <psi|psi> including cross terms between branches that share bits.
  double norm_squared() const {
    complex sum{};
    for (const auto& a : branches_)
      for (const auto& b : branches_) sum += cross(a, b);
    return sum.real();
  }

  /// <this|other>.
  complex overlap(const HybridState& other) const {
    complex sum{};
    for (const auto& a : branches_)
      for (const auto& b : other.branches_) sum += cross(a, b);
    return sum;
  }

  void check_qubit(int q) const { require(q >= 0 && q < n_qubits_, "qubit index out of range"); }
  void check_mode(int m) const { require(m >= 0 && m < n_modes_, "mode index out of range"); }

 private:
  static complex cross(const Branch& a, const Branch& b) {
    if (a.bits != b.bits) return {};
    complex v = std::conj(a.amp) * b.amp;
    for (std::size_t m = 0; m < a.modes.size(); ++m) v *= inner_product(a.modes[m], b.modes[m]);
    return v;
  }

  void merge() {
    std::vector<Branch> out;
    for (auto& b : branches_) {
      bool absorbed = false;
      for (auto& o : out) {
        if (o.bits != b.bits) continue;
        int differing = -1, count = 0;
        for (int m = 0; m < n_modes_; ++m) {
          if (!detail::same_function(o.modes[m], b.modes[m])) {
            differing = m;
            ++count;
          }
        }
        if (count > 1) continue;
        if (count == 0) {
          o.amp += b.amp;
        } else {
          o.modes[differing] = add(scaled(o.modes[differing], o.amp), scaled(b.modes[differing], b.amp));
          o.amp = 1.0;
        }
        absorbed = true;
        break;
      }
      if (!absorbed) out.push_back(std::move(b));
    }
    std::erase_if(out, [](const Branch& b) {
      if (b.amp == complex{}) return true;
      for (const auto& m : b.modes)
        if (m.is_gaussian_sum() && m.terms().empty()) return true;
      return false;
    });
    branches_ = std::move(out);
  }

  int n_qubits_ = 0;
  int n_modes_ = 0;
  std::vector<Branch> branches_;
};

/// All qubits |0>, every mode a width-s Gaussian at the origin.
inline HybridState init(int n_qubits, int n_modes, double s = 1.0) {
  require(n_qubits >= 0 && n_modes >= 0, "init: negative size");
  require(std::isfinite(s) && s > 0.0, "init: s must be positive");
  const double amp = std::pow(std::numbers::pi * s * s, -0.25);
  Branch b{std::vector<int>(n_qubits, 0), complex{1.0, 0.0},
           std::vector<Wavefunction>(n_modes, Wavefunction::from_terms({{amp, 0.0, s, 0.0}}))};
  return HybridState(n_qubits, n_modes, {std::move(b)});
}

inline HybridState hadamard(const HybridState& st, int qubit) {
  st.check_qubit(qubit);
  const double r = 1.0 / std::numbers::sqrt2;
  std::vector<Branch> out;
  for (const auto& b : st.branches()) {
    Branch zero = b, one = b;
    zero.bits[qubit] = 0;
    one.bits[qubit] = 1;
    zero.amp *= r;
    one.amp *= b.bits[qubit] == 0 ? r : -r;
    out.push_back(std::move(zero));
    out.push_back(std::move(one));
  }
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

inline HybridState cnot(const HybridState& st, int control, int target) {
  st.check_qubit(control);
  st.check_qubit(target);
  require(control != target, "cnot: control and target must differ");
  auto out = st.branches();
  for (auto& b : out)
    if (b.bits[control] == 1) b.bits[target] ^= 1;
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

inline HybridState bit_flip(const HybridState& st, int qubit) {
  st.check_qubit(qubit);
  auto out = st.branches();
  for (auto& b : out) b.bits[qubit] ^= 1;
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

/// diag(1, e^{i phi}) on one qubit.
inline HybridState phase(const HybridState& st, int qubit, double phi) {
  st.check_qubit(qubit);
  auto out = st.branches();
  for (auto& b : out)
    if (b.bits[qubit] == 1) b.amp *= std::polar(1.0, phi);
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

/// exp(-i d p sigma_z): the mode moves by +d on bit 0 and by -d on bit 1.
inline HybridState cond_displacement(const HybridState& st, int qubit, int mode, double d) {
  st.check_qubit(qubit);
  st.check_mode(mode);
  auto out = st.branches();
  for (auto& b : out) b.modes[mode] = displaced(b.modes[mode], b.bits[qubit] == 0 ? d : -d);
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

/// exp(i pi/4 (2q/alpha - 1)(1 - sigma_z)): identity on bit 0; on bit 1 the
/// mode picks up e^{i pi (q/alpha - 1/2)}, i.e. global phase -i and linear
/// phase pi/alpha.
inline HybridState lambda_gate(const HybridState& st, int qubit, int mode, double alpha) {
  st.check_qubit(qubit);
  st.check_mode(mode);
  require(std::isfinite(alpha) && alpha > 0.0, "lambda_gate: alpha must be positive");
  auto out = st.branches();
  for (auto& b : out) {
    if (b.bits[qubit] == 0) continue;
    b.amp *= complex{0.0, -1.0};
    b.modes[mode] = with_linear_phase(b.modes[mode], std::numbers::pi / alpha);
  }
  return HybridState(st.n_qubits(), st.n_modes(), std::move(out));
}

struct Measurement {
  double prob = 0.0;
  HybridState collapsed;
};

/// Projects `qubit` onto `outcome`; the probability is exact (cross terms
/// included) and the collapsed state is renormalized.
inline Measurement measure_qubit(const HybridState& st, int qubit, int outcome) {
  st.check_qubit(qubit);
  require(outcome == 0 || outcome == 1, "measure_qubit: outcome must be 0 or 1");
  std::vector<Branch> kept;
  for (const auto& b : st.branches())
    if (b.bits[qubit] == outcome) kept.push_back(b);
  HybridState sub(st.n_qubits(), st.n_modes(), std::move(kept));
  const double total = st.norm_squared();
  const double prob = sub.norm_squared() / total;
  if (!(prob >= 1e-12)) throw Error("impossible outcome");
  auto branches = sub.branches();
  const double k = 1.0 / std::sqrt(sub.norm_squared());
  for (auto& b : branches) b.amp *= k;
  return {prob, HybridState(st.n_qubits(), st.n_modes(), std::move(branches))};
}

struct TraceStep {
  std::string gate;
  std::optional<int> outcome;
  double probability = 1.0;
};

inline std::string format_trace(const std::vector<TraceStep>& trace) {
  std::ostringstream os;
  os.precision(10);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << i + 1 << ". " << trace[i].gate;
    if (trace[i].outcome) os << " -> outcome " << *trace[i].outcome << ", p = " << trace[i].probability;
    os << '\n';
  }
  return os.str();
}

/// Fidelity |<a|b>| of normalized copies.
inline double fidelity(const Wavefunction& a, const Wavefunction& b) {
  return std::abs(inner_product(a, b)) / std::sqrt(norm_squared(a) * norm_squared(b));
}

inline double fidelity(const TwoModeSuperposition& a, const TwoModeSuperposition& b) {
  return std::abs(a.overlap(b)) / std::sqrt(a.norm_squared() * b.norm_squared());
}

/// The single mode of a state whose qubits are in a definite basis state.
inline Wavefunction single_mode(const HybridState& st) {
  require(st.n_modes() == 1 && st.branches().size() == 1, "single_mode: state is not a single product branch");
  const auto& b = st.branches().front();
  return scaled(b.modes.front(), b.amp);
}

struct GProtocolResult {
  Wavefunction state;
  double success_prob = 0.0;
  std::vector<TraceStep> trace;
};

/// Grows a 2^{n+1}-paw odd cat with peak spacing alpha from the vacuum:
/// H e^{-i alpha p sigma_z} H keeping |1> (then reset to |0>), n - 1 rounds
/// with displacement 2^k alpha keeping |0>, and a final alpha/2 round keeping |0>.
inline GProtocolResult run_g_protocol(int n, double alpha) {
  require(n >= 1, "run_g_protocol: n must be >= 1");
  require(std::isfinite(alpha) && alpha > 0.0, "run_g_protocol: alpha must be positive");
  GProtocolResult r;
  r.success_prob = 1.0;
  auto st = init(1, 1, 1.0);
  r.trace.push_back({"init vacuum, qubit |0>", std::nullopt, 1.0});

  auto round = [&](double d, int keep) {
    st = hadamard(st, 0);
    st = cond_displacement(st, 0, 0, d);
    st = hadamard(st, 0);
    auto m = measure_qubit(st, 0, keep);
    std::ostringstream name;
    name.precision(10);
    name << "H exp(-i " << d << " p sigma_z) H, measure";
    r.trace.push_back({name.str(), keep, m.prob});
    r.success_prob *= m.prob;
    st = std::move(m.collapsed);
  };

  round(alpha, 1);
  st = bit_flip(st, 0);
  r.trace.push_back({"bit flip", std::nullopt, 1.0});
  for (int k = 1; k < n; ++k) round(std::ldexp(alpha, k), 0);
  round(alpha / 2.0, 0);
  r.state = normalize(single_mode(st));
  return r;
}

struct PsiProtocolResult {
  TwoModeSuperposition state;
  double success_prob = 0.0;
  std::vector<TraceStep> trace;
};

/// Prepares (|ff> + e^{i theta}|gg>)/sqrt(2) from two copies of the
/// protocol's |g>: entangled ancilla pair, Lambda on each mode, then CNOT
/// (control 0) and H on qubit 0 and post-selection of qubit 0 in |0>.
/// On peak j, Lambda multiplies g by (-1)^j up to the slow intra-peak phase,
/// turning the g sign pattern into the f one.
inline PsiProtocolResult run_psi_protocol(int n, double alpha, double theta) {
  require(std::isfinite(theta), "run_psi_protocol: theta must be finite");
  const auto g = run_g_protocol(n, alpha);
  PsiProtocolResult r;
  r.trace = g.trace;
  r.trace.push_back({"same sequence on mode 1", std::nullopt, g.success_prob});

  HybridState st(2, 2, {Branch{{0, 0}, complex{1.0, 0.0}, {g.state, g.state}}});
  st = hadamard(st, 0);
  st = cnot(st, 0, 1);
  st = phase(st, 0, -theta);
  r.trace.push_back({"ancilla pair (|00> + e^{-i theta}|11>)/sqrt(2)", std::nullopt, 1.0});
  st = lambda_gate(st, 0, 0, alpha);
  st = lambda_gate(st, 1, 1, alpha);
  r.trace.push_back({"Lambda(q0, mode0), Lambda(q1, mode1)", std::nullopt, 1.0});
  st = cnot(st, 0, 1);
  st = hadamard(st, 0);
  r.trace.push_back({"CNOT(q0 -> q1), H(q0)", std::nullopt, 1.0});
  auto m = measure_qubit(st, 0, 0);
  r.trace.push_back({"measure q0", 0, m.prob});
  r.success_prob = g.success_prob * g.success_prob * m.prob;

  for (const auto& b : m.collapsed.branches()) {
    require(b.bits[1] == 0, "run_psi_protocol: qubit 1 not disentangled");
    r.state.components.push_back({b.amp, b.modes[0], b.modes[1]});
  }
  const double k = 1.0 / std::sqrt(r.state.norm_squared());
  for (auto& c : r.state.components) c.amplitude *= k;
  return r;
}

/// arg(<gg|psi> / <ff|psi>) for real normalized f, g.
inline double relative_phase(const TwoModeSuperposition& psi, const Wavefunction& f, const Wavefunction& g) {
  const TwoModeSuperposition ff{{{complex{1.0, 0.0}, f, f}}};
  const TwoModeSuperposition gg{{{complex{1.0, 0.0}, g, g}}};
  return std::arg(gg.overlap(psi) / ff.overlap(psi));
}

}  // namespace cvbell
