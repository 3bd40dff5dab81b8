#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace cvbell::cli;

void add_state_options(CLI::App* cmd, StateSpec& s) {
  cmd->add_option("--family", s.family, "cat2 | flat | envelope | fock")
      ->check(CLI::IsMember({"cat2", "flat", "envelope", "fock"}));
  cmd->add_option("--N", s.N, "number of paws (envelope: 0 picks the minimum for --epsilon)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--alpha", s.alpha, "peak spacing")->check(CLI::PositiveNumber);
  cmd->add_option("--s", s.s, "squeezing width of the envelope family")->check(CLI::PositiveNumber);
  cmd->add_option("--a", s.a, "half-separation of the 2-paw cat")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", s.epsilon, "truncation threshold for the number of paws")->check(CLI::Range(1e-300, 1.0));
  cmd->add_option("--file", s.file, "JSON file {\"f\": [[n, c], ...], \"g\": [[n, c], ...]}");
}

const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHSH violation with continuous-variable cat states"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "write the main output here instead of stdout");

  TableConfig table_cfg;
  auto* t1 = app.add_subcommand("table1", "S for flat N-paw cats at alpha = 15");
  auto* t2 = app.add_subcommand("table2", "optimized alpha and S for envelope cats at s = 0.3");
  for (auto* t : {t1, t2}) {
    t->add_option("--format", table_cfg.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
    t->add_option("--out", out_path, "output file");
  }

  SValueConfig sv_cfg;
  auto* sv = app.add_subcommand("svalue", "V, W, theta_m and S for one state pair");
  add_state_options(sv, sv_cfg.state);
  sv->add_option("--theta", sv_cfg.theta, "relative phase (default: optimal)");
  sv->add_flag("--brute-force", sv_cfg.brute_force, "cross-check correlators by direct integration");
  sv->add_option("--out", out_path, "output file");

  PlotConfig plot_cfg;
  auto* pd = app.add_subcommand("plotdata", "sampled f, g, f~ and h~ for plotting");
  add_state_options(pd, plot_cfg.state);
  pd->add_option("--prefix", plot_cfg.prefix, "output file prefix");
  pd->add_option("--range", plot_cfg.range, "half-width of the sampled interval")->check(CLI::NonNegativeNumber);
  pd->add_option("--points", plot_cfg.points, "samples per curve")->check(CLI::Range(2, 10'000'000));

  PrepConfig prep_cfg;
  std::string theta_arg = "optimal";
  auto* ps = app.add_subcommand("prepsim", "simulate the conditional preparation protocols");
  ps->add_option("--protocol", prep_cfg.protocol, "g | psi")->check(CLI::IsMember({"g", "psi"}));
  ps->add_option("--n", prep_cfg.n, "number of growth rounds (N = 2^(n+1) paws)")->check(CLI::Range(1, 20));
  ps->add_option("--alpha", prep_cfg.alpha, "peak spacing")->check(CLI::PositiveNumber);
  ps->add_option("--theta", theta_arg, "relative phase or 'optimal'");
  ps->add_option("--out", out_path, "output file");

  DecomposeConfig dec_cfg;
  auto* dc = app.add_subcommand("decompose", "Fock-basis decomposition of a state pair");
  add_state_options(dc, dec_cfg.state);
  dc->add_option("--n-max", dec_cfg.n_max, "truncation order")->check(CLI::NonNegativeNumber);
  dc->add_option("--format", dec_cfg.format, "csv | json")->transform(CLI::CheckedTransformer(formats));
  dc->add_option("--write-fock", dec_cfg.write_fock, "also write the renormalized mod-4 pair as a fock file");
  dc->add_option("--out", out_path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  sv_cfg.has_theta = sv->count("--theta") > 0;
  if (ps->parsed()) {
    if (theta_arg == "optimal") {
      prep_cfg.theta_optimal = true;
    } else {
      try {
        prep_cfg.theta = std::stod(theta_arg);
        prep_cfg.theta_optimal = false;
      } catch (const std::exception&) {
        std::cerr << "--theta: expected a number or 'optimal'\n";
        return 2;
      }
    }
  }

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "cannot write " << out_path << '\n';
      return 2;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (t1->parsed()) return cmd_table1(table_cfg, out, std::cerr);
    if (t2->parsed()) return cmd_table2(table_cfg, out, std::cerr);
    if (sv->parsed()) return cmd_svalue(sv_cfg, out, std::cerr);
    if (pd->parsed()) return cmd_plotdata(plot_cfg, out, std::cerr);
    if (ps->parsed()) return cmd_prepsim(prep_cfg, out, std::cerr);
    if (dc->parsed()) return cmd_decompose(dec_cfg, out, std::cerr);
  } catch (const cvbell::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
