#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cvbell/cvbell.hpp"

namespace cvbell::cli {

using json = nlohmann::json;

enum class Format { csv, json };

/// 6 significant digits, '.' decimal separator regardless of locale.
inline std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct StateSpec {
  std::string family = "flat";  // cat2 | flat | envelope | fock
  int N = 4;                     // 0 selects min_paws(epsilon, alpha, s) for envelope
  double alpha = 10.0;
  double s = 0.3;
  double a = 1.0;
  double epsilon = 0.01;
  std::string file;
};

inline std::vector<std::pair<int, double>> read_pairs(const json& arr) {
  std::vector<std::pair<int, double>> out;
  for (const auto& e : arr) {
    require(e.is_array() && e.size() == 2, "fock file: entries must be [n, c] pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<double>());
  }
  return out;
}

/// {"f": [[n, c_n], ...], "g": [[n, c_n], ...]}
inline std::pair<FockExpansion, FockExpansion> read_fock_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open fock file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("fock file: ") + e.what());
  }
  require(j.contains("f") && j.contains("g"), "fock file: needs \"f\" and \"g\" arrays");
  return {FockExpansion::from_pairs(read_pairs(j["f"])), FockExpansion::from_pairs(read_pairs(j["g"]))};
}

inline int resolved_paws(const StateSpec& spec) {
  return spec.N > 0 ? spec.N : min_paws(spec.epsilon, spec.alpha, spec.s);
}

inline CatPair build_pair(const StateSpec& spec) {
  if (spec.family == "cat2") return cat2(spec.a);
  if (spec.family == "flat") return catN_flat(spec.N, spec.alpha);
  if (spec.family == "envelope") return catN_envelope(resolved_paws(spec), spec.alpha, spec.s);
  if (spec.family == "fock") {
    const auto [f, g] = read_fock_file(spec.file);
    return {normalize(f.to_wavefunction()), normalize(g.to_wavefunction())};
  }
  throw Error("unknown family: " + spec.family);
}

inline json state_json(const StateSpec& spec) {
  json j{{"family", spec.family}};
  if (spec.family == "cat2") j["a"] = spec.a;
  if (spec.family == "flat") j.update({{"N", spec.N}, {"alpha", spec.alpha}});
  if (spec.family == "envelope") j.update({{"N", resolved_paws(spec)}, {"alpha", spec.alpha}, {"s", spec.s}});
  if (spec.family == "fock") j["file"] = spec.file;
  return j;
}

inline json partition_json(const SignedPartition& p) {
  std::string signs;
  for (auto s : p.signs()) signs += to_char(s);
  return {{"breakpoints", p.breakpoints()}, {"signs", signs}};
}

// ---- table1 / table2 --------------------------------------------------------

struct TableConfig {
  Format format = Format::csv;
};

inline int cmd_table1(const TableConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto rows = table1(reference::table1_alpha);
  bool ok = true;
  json arr = json::array();
  if (cfg.format == Format::csv) out << "N,S\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::table1[i];
    const bool pass = rows[i].N == ref.N && reference::within(rows[i].S, ref.S, ref.tol);
    ok = ok && pass;
    if (cfg.format == Format::csv) {
      out << rows[i].N << ',' << csv_number(rows[i].S) << '\n';
    } else {
      arr.push_back({{"N", rows[i].N}, {"S", rows[i].S}});
    }
    log << (pass ? "PASS" : "FAIL") << " N=" << rows[i].N << " S=" << csv_number(rows[i].S) << " ref=" << ref.S
        << " tol=" << ref.tol << '\n';
  }
  if (cfg.format == Format::json) out << arr.dump(2) << '\n';
  return ok ? 0 : 1;
}

inline int cmd_table2(const TableConfig& cfg, std::ostream& out, std::ostream& log) {
  const auto rows = table2(reference::table2_s);
  bool ok = true;
  json arr = json::array();
  if (cfg.format == Format::csv) out << "N,alpha_opt,S\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::table2[i];
    const double S_at_ref = bell_summary(catN_envelope(ref.N, ref.alpha_opt, reference::table2_s)).S;
    const bool pass = rows[i].N == ref.N && reference::within(rows[i].alpha_opt, ref.alpha_opt, ref.alpha_tol) &&
                      reference::within(rows[i].S, ref.S, ref.S_tol) && reference::within(S_at_ref, ref.S, ref.S_tol);
    ok = ok && pass;
    if (cfg.format == Format::csv) {
      out << rows[i].N << ',' << csv_number(rows[i].alpha_opt) << ',' << csv_number(rows[i].S) << '\n';
    } else {
      arr.push_back({{"N", rows[i].N}, {"alpha_opt", rows[i].alpha_opt}, {"S", rows[i].S}});
    }
    log << (pass ? "PASS" : "FAIL") << " N=" << rows[i].N << " alpha_opt=" << csv_number(rows[i].alpha_opt)
        << " S=" << csv_number(rows[i].S) << " S(ref alpha)=" << csv_number(S_at_ref) << " ref=(" << ref.alpha_opt
        << ", " << ref.S << ")\n";
  }
  if (cfg.format == Format::json) out << arr.dump(2) << '\n';
  return ok ? 0 : 1;
}

// ---- svalue -----------------------------------------------------------------

struct SValueConfig {
  StateSpec state;
  bool has_theta = false;
  double theta = 0.0;
  bool brute_force = false;
};

inline json svalue_report(const SValueConfig& cfg) {
  const auto pair = build_pair(cfg.state);
  const auto o = root_binned_overlaps(pair.f, pair.g);
  const auto best = chsh_S_max(o.V, o.W);
  const double theta = cfg.has_theta ? cfg.theta : best.theta_m;
  const auto rep = correlators(o.V, o.W, theta);
  json j{{"state", state_json(cfg.state)},
         {"V", o.V},
         {"W", o.W},
         {"theta_m", best.theta_m},
         {"S", best.S},
         {"theta", theta},
         {"S_at_theta", rep.S_at_theta},
         {"E_qq", rep.E_qq},
         {"E_pp", rep.E_pp},
         {"E_qp", rep.E_qp},
         {"E_pq", rep.E_pq},
         {"binning", {{"position", partition_json(o.position)}, {"momentum", partition_json(o.momentum)}}}};
  if (cfg.brute_force) {
    const auto st = TwoModeState::make(pair.f, pair.g, theta);
    json d;
    d["qq"] = brute_force_correlator(st, Basis::q, Basis::q) - rep.E_qq;
    d["pp"] = brute_force_correlator(st, Basis::p, Basis::p) - rep.E_pp;
    d["qp"] = brute_force_correlator(st, Basis::q, Basis::p) - rep.E_qp;
    d["pq"] = brute_force_correlator(st, Basis::p, Basis::q) - rep.E_pq;
    j["brute_force_delta"] = d;
  }
  return j;
}

inline int cmd_svalue(const SValueConfig& cfg, std::ostream& out, std::ostream&) {
  out << svalue_report(cfg).dump(2) << '\n';
  return 0;
}

// ---- plotdata ---------------------------------------------------------------

struct PlotConfig {
  StateSpec state;
  std::string prefix = "plot";
  double range = 0.0;  // 0 selects the state's evaluation window
  int points = 2001;
};

struct PlotSeries {
  std::string name;
  std::string axis;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Samples f(q), g(q), f~(p) and h~(p) = -i g~(p), all real.
inline std::vector<PlotSeries> plot_series(const PlotConfig& cfg) {
  require(cfg.points >= 2, "plotdata: need at least two points");
  const auto pair = build_pair(cfg.state);
  const auto mom = momentum_pair(pair.f, pair.g);
  const double rq = cfg.range > 0.0 ? cfg.range : std::max(evaluation_window(pair.f), evaluation_window(pair.g));
  const double rp = cfg.range > 0.0 ? cfg.range : std::max(evaluation_window(mom.f_tilde), evaluation_window(mom.h_tilde));
  auto sample = [&](const std::string& name, const std::string& axis, const Wavefunction& w, double r) {
    PlotSeries s{name, axis, {}, {}};
    for (int k = 0; k < cfg.points; ++k) {
      // Symmetric grid; the midpoint is exactly 0.
      const double x = r * (2.0 * k - (cfg.points - 1)) / (cfg.points - 1);
      s.xs.push_back(x);
      s.ys.push_back(w(x).real());
    }
    return s;
  };
  return {sample("f_q", "q", pair.f, rq), sample("g_q", "q", pair.g, rq), sample("f_p", "p", mom.f_tilde, rp),
          sample("h_p", "p", mom.h_tilde, rp)};
}

inline int cmd_plotdata(const PlotConfig& cfg, std::ostream&, std::ostream& log) {
  for (const auto& s : plot_series(cfg)) {
    const std::string path = cfg.prefix + "_" + s.name + ".csv";
    std::ofstream f(path);
    require(f.good(), "cannot write " + path);
    f << s.axis << ',' << s.name.substr(0, 1) << '\n';
    for (std::size_t i = 0; i < s.xs.size(); ++i) f << csv_number(s.xs[i]) << ',' << csv_number(s.ys[i]) << '\n';
    log << "wrote " << path << '\n';
  }
  return 0;
}

// ---- prepsim ----------------------------------------------------------------

struct PrepConfig {
  std::string protocol = "g";  // g | psi
  int n = 1;
  double alpha = 10.0;
  bool theta_optimal = true;
  double theta = 0.0;
};

inline json trace_json(const std::vector<TraceStep>& trace) {
  json arr = json::array();
  for (const auto& t : trace) {
    json s{{"gate", t.gate}};
    if (t.outcome) s.update({{"outcome", *t.outcome}, {"probability", t.probability}});
    arr.push_back(s);
  }
  return arr;
}

inline int cmd_prepsim(const PrepConfig& cfg, std::ostream& out, std::ostream& log) {
  require(cfg.n >= 1, "prepsim: n must be >= 1");
  require(cfg.alpha > 0.0, "prepsim: alpha must be positive");
  const int paws = 1 << (cfg.n + 1);
  const auto target = catN_flat(paws, cfg.alpha);
  json j{{"protocol", cfg.protocol}, {"n", cfg.n}, {"alpha", cfg.alpha}, {"paws", paws}};
  int code = 0;
  if (cfg.protocol == "g") {
    const auto r = run_g_protocol(cfg.n, cfg.alpha);
    const double fid = fidelity(r.state, target.g);
    j.update({{"success_prob", r.success_prob},
              {"expected_success_prob", std::ldexp(1.0, -(cfg.n + 1))},
              {"fidelity", fid},
              {"trace", trace_json(r.trace)}});
    log << format_trace(r.trace);
  } else if (cfg.protocol == "psi") {
    const auto o = root_binned_overlaps(target.f, target.g);
    const auto best = chsh_S_max(o.V, o.W);
    const double theta = cfg.theta_optimal ? best.theta_m : cfg.theta;
    const auto r = run_psi_protocol(cfg.n, cfg.alpha, theta);
    const auto ideal = TwoModeSuperposition::from(TwoModeState::make(target.f, target.g, theta));
    const auto est = chsh_estimate(r.state, o.position, o.momentum);
    const double S_target = correlators(o.V, o.W, theta).S_at_theta;
    const bool closure = std::abs(est.S - S_target) <= 5e-3;
    j.update({{"theta", theta},
              {"success_prob", r.success_prob},
              {"fidelity", fidelity(r.state, ideal)},
              {"relative_phase", relative_phase(r.state, target.f, target.g)},
              {"S", est.S},
              {"S_target", S_target},
              {"closure_pass", closure},
              {"correlators", {{"qq", est.E_qq}, {"pp", est.E_pp}, {"qp", est.E_qp}, {"pq", est.E_pq}}},
              {"trace", trace_json(r.trace)}});
    log << format_trace(r.trace) << (closure ? "PASS" : "FAIL") << " downstream S=" << csv_number(est.S)
        << " target S=" << csv_number(S_target) << '\n';
    code = closure ? 0 : 1;
  } else {
    throw Error("prepsim: unknown protocol " + cfg.protocol);
  }
  out << j.dump(2) << '\n';
  return code;
}

// ---- decompose --------------------------------------------------------------

struct DecomposeConfig {
  StateSpec state{"envelope", 0, std::sqrt(std::numbers::pi), 0.4, 1.0, 0.01, {}};
  int n_max = 14;
  Format format = Format::csv;
  std::string write_fock;  // optional path for a fock-family state file
};

inline int cmd_decompose(const DecomposeConfig& cfg, std::ostream& out, std::ostream& log) {
  require(cfg.state.family != "fock", "decompose: state is already in the Fock basis");
  const auto pair = build_pair(cfg.state);
  const auto fe = decompose(pair.f, cfg.n_max);
  const auto ge = decompose(pair.g, cfg.n_max);
  // The reference form keeps only the Fourier-eigenvector classes n = 0 and 1 (mod 4).
  const auto fr = fe.restricted(4, 0).renormalized(), gr = ge.restricted(4, 1).renormalized();
  if (fe.low_capture || ge.low_capture) log << "warning: truncation keeps less than 1 - epsilon of the norm\n";

  json rows = json::array();
  if (cfg.format == Format::csv) out << "state,n,c,p,p_mod4\n";
  for (const auto* which : {"f", "g"}) {
    const auto& e = which[0] == 'f' ? fe : ge;
    const auto& r = which[0] == 'f' ? fr : gr;
    for (int n = 0; n <= cfg.n_max; ++n) {
      if (cfg.format == Format::csv) {
        out << which << ',' << n << ',' << csv_number(e.coeffs[n]) << ',' << csv_number(e.probability(n)) << ','
            << csv_number(r.probability(n)) << '\n';
      } else {
        rows.push_back({{"state", which}, {"n", n}, {"c", e.coeffs[n]}, {"p", e.probability(n)},
                        {"p_mod4", r.probability(n)}});
      }
    }
  }
  if (cfg.format == Format::json) {
    out << json{{"state", state_json(cfg.state)}, {"n_max", cfg.n_max}, {"captured_f", fe.captured},
                {"captured_g", ge.captured}, {"coefficients", rows}}
               .dump(2)
        << '\n';
  }

  if (!cfg.write_fock.empty()) {
    json f = json::array(), g = json::array();
    for (int n = 0; n <= cfg.n_max; ++n) {
      if (n % 4 == 0) f.push_back({n, fr.coeffs[n]});
      if (n % 4 == 1) g.push_back({n, gr.coeffs[n]});
    }
    std::ofstream file(cfg.write_fock);
    require(file.good(), "cannot write " + cfg.write_fock);
    file << json{{"f", f}, {"g", g}}.dump(2) << '\n';
    log << "wrote " << cfg.write_fock << '\n';
  }
  return 0;
}

}  // namespace cvbell::cli
