// Command-line front end: JSON descriptions in, verdict reports out.
// Exit codes: 0 all verdicts positive (or purely computational verb),
// 1 negative verdicts, 2 malformed input or precondition failures.

#include "kperf/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace kperf;

namespace {

std::string g_ell = "2", g_p = "2";

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_flag("--json", cfg.json_output, "emit the report as JSON");
  cmd->add_option("--budget", cfg.budget, "step budget for enumeration loops");
}

void finish(RunConfig& cfg) {
  cfg.ell = parse_int(g_ell);
  cfg.p = parse_int(g_p);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact checks for localization, Adams operations, and Frobenius perfection"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* lemell = app.add_subcommand("lemell-check",
                                    "decide conditions (a), (b), (c) for an endomorphism");
  lemell->add_option("--group", cfg.group_path, "group JSON")->required();
  lemell->add_option("--endo", cfg.endo_path, "endomorphism JSON")->required();
  lemell->add_option("--ell", g_ell, "the integer to invert");
  add_common(lemell, cfg);
  lemell->callback([&] { cfg.verb = "lemell-check"; });

  auto* colim = app.add_subcommand("colim-equal", "decide equality of colimit elements");
  colim->add_option("--group", cfg.group_path)->required();
  colim->add_option("--endo", cfg.endo_path)->required();
  colim->add_option("--a", cfg.elem_a, "first representative, comma coordinates")->required();
  colim->add_option("--stage-a", cfg.stage_a, "stage of the first representative");
  colim->add_option("--b", cfg.elem_b, "second representative")->required();
  colim->add_option("--stage-b", cfg.stage_b, "stage of the second representative");
  add_common(colim, cfg);
  colim->callback([&] { cfg.verb = "colim-equal"; });

  auto* loc = app.add_subcommand("localize", "canonical form of A[1/ell]");
  loc->add_option("--group", cfg.group_path)->required();
  loc->add_option("--ell", g_ell);
  add_common(loc, cfg);
  loc->callback([&] { cfg.verb = "localize"; });

  auto* lambda = app.add_subcommand("lambda", "lambda-ring operations");
  lambda->require_subcommand(1);
  auto add_ring_opts = [&](CLI::App* sub) {
    sub->add_option("--ring", cfg.ring_path, "ring JSON");
    sub->add_option("--builtin", cfg.ring_builtin, "Z, RC2, or trunc:<m>");
  };
  auto* lload = lambda->add_subcommand("load", "load and validate a ring description");
  add_ring_opts(lload);
  add_common(lload, cfg);
  lload->callback([&] { cfg.verb = "lambda load"; });
  auto* ladams = lambda->add_subcommand("adams", "apply an Adams operation");
  add_ring_opts(ladams);
  ladams->add_option("--n", cfg.adams_degree, "operation degree");
  ladams->add_option("--element", cfg.element, "basis name or comma coordinates")->required();
  add_common(ladams, cfg);
  ladams->callback([&] { cfg.verb = "lambda adams"; });
  auto* lgamma = lambda->add_subcommand("gamma-filtration", "compute the gamma filtration");
  add_ring_opts(lgamma);
  lgamma->add_option("--cap", cfg.cap, "maximal weight");
  add_common(lgamma, cfg);
  lgamma->callback([&] { cfg.verb = "lambda gamma-filtration"; });
  auto* lprop = lambda->add_subcommand("verify-prop",
                                       "check colim over psi^ell of ker eps against (ker eps)[1/ell]");
  add_ring_opts(lprop);
  lprop->add_option("--ell", g_ell);
  lprop->add_option("--cap", cfg.cap, "filtration cap for the consistency check");
  add_common(lprop, cfg);
  lprop->callback([&] { cfg.verb = "lambda verify-prop"; });

  auto* perf = app.add_subcommand("perfection", "Frobenius perfection checks");
  perf->require_subcommand(1);
  auto* k1 = perf->add_subcommand("k1-units", "units model of K_1 for F_p[t]/(t^m)");
  k1->add_option("--p", g_p)->required();
  k1->add_option("--m", cfg.m)->required();
  add_common(k1, cfg);
  k1->callback([&] { cfg.verb = "perfection k1-units"; });
  auto* pt = perf->add_subcommand("ptorsion", "exhibit a unit of exact order p");
  pt->add_option("--p", g_p)->required();
  pt->add_option("--m", cfg.m)->required();
  add_common(pt, cfg);
  pt->callback([&] { cfg.verb = "perfection ptorsion"; });
  auto* nk = perf->add_subcommand("negk", "negative-K scaling rule on supplied data");
  nk->add_option("--datum", cfg.datum_path, "K-group datum JSON")->required();
  nk->add_option("--p", g_p)->required();
  add_common(nk, cfg);
  nk->callback([&] { cfg.verb = "perfection negk"; });
  auto* k0 = perf->add_subcommand("k0-split", "K_0 splitting prediction on supplied data");
  k0->add_option("--datum", cfg.datum_path, "K-group datum JSON")->required();
  k0->add_option("--p", g_p)->required();
  k0->add_option("--h0-rank", cfg.h0_rank, "rank of H_0(R)");
  add_common(k0, cfg);
  k0->callback([&] { cfg.verb = "perfection k0-split"; });

  auto* suite = app.add_subcommand("paper-suite", "run the bundled regression examples");
  suite->add_option("--cap", cfg.cap, "gamma filtration cap");
  suite->add_option("--jobs", cfg.jobs, "parallel verification degree");
  add_common(suite, cfg);
  suite->callback([&] { cfg.verb = "paper-suite"; });

  CLI11_PARSE(app, argc, argv);

  try {
    finish(cfg);
    Report rep = run(cfg);
    if (cfg.json_output) std::cout << rep.to_json().dump(2) << "\n";
    else std::cout << rep.to_text();
    return rep.exit_code();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
