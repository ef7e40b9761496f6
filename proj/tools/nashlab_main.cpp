#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nashlab/analysis.hpp"
#include "nashlab/best_response.hpp"
#include "nashlab/checkpoint.hpp"
#include "nashlab/kernels.hpp"
#include "nashlab/runner.hpp"
#include "nashlab/util.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_sigint(int) { g_stop.store(true); }

using nashlab::SolverKind;

void print_deviation(const nashlab::DeviationReport& dev) {
  std::cout << "deviation bound: eps=" << nashlab::format_double(dev.eps)
            << " |A|=" << dev.action_count << " T=" << dev.horizon
            << " gamma=" << nashlab::format_double(dev.discount)
            << " bound=" << nashlab::format_double_sig(dev.bound, 6)
            << " measured=" << nashlab::format_double_sig(dev.measured_deviation, 6)
            << " satisfied=" << (dev.satisfied ? "yes" : "no") << "\n";
}

void print_run_summary(const std::string& game, SolverKind kind,
                       const nashlab::RunResult& res) {
  std::cout << "game " << game << " solver " << nashlab::solver_name(kind) << ": "
            << res.iterations_run << " iterations, final NashConv "
            << nashlab::format_double_sig(res.final_nashconv, 6) << "\n";
  if (res.verdict_applicable) {
    std::cout << "convergence: " << (res.verdict.converged ? "converged" : "not converged")
              << " (window " << res.verdict.window << ", threshold "
              << nashlab::format_double_sig(res.verdict.threshold, 4) << ", window max "
              << nashlab::format_double_sig(res.verdict.window_max, 4) << ")";
    if (res.iterations_to_threshold >= 0)
      std::cout << ", reached at iteration " << res.iterations_to_threshold;
    std::cout << "\n";
  }
  print_deviation(res.deviation);
}

int cmd_solve(const nashlab::RunConfig& cfg_in) {
  nashlab::RunConfig cfg = cfg_in;
  cfg.stop_flag = &g_stop;
  std::signal(SIGINT, on_sigint);
  nashlab::RunResult res = nashlab::run_from_config(cfg);
  print_run_summary(cfg.game, cfg.solver, res);
  if (!cfg.csv_path.empty()) std::cout << "csv: " << cfg.csv_path << "\n";
  if (!cfg.checkpoint_path.empty())
    std::cout << "checkpoint: " << cfg.checkpoint_path << "\n";
  return 0;
}

int cmd_verify_counts(int leduc_raise_cap) {
  std::vector<nashlab::GameCounts> rows;
  if (leduc_raise_cap > 0) {
    // deliberately mis-parameterized Leduc builds for calibration experiments
    const int64_t wants[][2] = {{54, 12}, {600, 48}, {9450, 936}, {396120, 13878}};
    rows.push_back(nashlab::count_report(nashlab::build_kuhn(2), wants[0][0], wants[0][1]));
    rows.push_back(nashlab::count_report(nashlab::build_kuhn(3), wants[1][0], wants[1][1]));
    for (int p = 2; p <= 3; ++p) {
      nashlab::PokerRules r = nashlab::leduc_rules(p);
      for (auto& rd : r.rounds) rd.max_raises = leduc_raise_cap;
      rows.push_back(nashlab::count_report(
          nashlab::build_poker("leduc-" + std::to_string(p), r), wants[p][0],
          wants[p][1]));
    }
  } else {
    rows = nashlab::verify_counts();
  }
  std::cout << std::left << std::setw(10) << "game" << std::setw(12) << "all-nodes"
            << std::setw(12) << "excl-root" << std::setw(12) << "dec+term"
            << std::setw(10) << "infosets" << std::setw(18) << "reference"
            << "matched\n";
  bool all_ok = true;
  for (const auto& c : rows) {
    std::ostringstream want;
    want << c.want_histories << "/" << c.want_infosets;
    std::cout << std::left << std::setw(10) << c.game << std::setw(12) << c.nodes_total
              << std::setw(12) << c.nodes_excl_root << std::setw(12)
              << c.decision_terminal << std::setw(10) << c.infosets << std::setw(18)
              << want.str() << c.matched << "\n";
    all_ok = all_ok && c.ok;
  }
  std::cout << (all_ok ? "verify-counts: PASS" : "verify-counts: FAIL") << "\n";
  return all_ok ? 0 : 2;
}

int cmd_compare(const std::vector<std::string>& games, int64_t budget,
                const std::string& out_dir, bool extended) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  int workers = nashlab::worker_slots_from_env();
  auto cells = nashlab::run_compare(games, budget, workers, out_dir, extended);
  std::cout << std::left << std::setw(8) << "solver";
  for (const auto& g : games) std::cout << std::setw(14) << g;
  std::cout << "\n";
  for (SolverKind k : {SolverKind::kIesl, SolverKind::kCfr, SolverKind::kFp,
                       SolverKind::kRd}) {
    std::cout << std::left << std::setw(8) << nashlab::solver_name(k);
    for (const auto& g : games) {
      for (const auto& c : cells)
        if (c.game == g && c.solver == k)
          std::cout << std::setw(14)
                    << (c.ok ? nashlab::format_double_sig(c.final_nashconv, 6)
                             : "error");
    }
    std::cout << "\n";
  }
  for (const auto& c : cells)
    if (!c.ok) std::cout << "error " << c.game << "/" << nashlab::solver_name(c.solver)
                         << ": " << c.error << "\n";
  return 0;
}

int cmd_sweep(const std::string& game, const std::vector<double>& eps_list,
              int64_t budget, double lambda, uint64_t seed, const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  int workers = nashlab::worker_slots_from_env();
  auto entries =
      nashlab::run_sweep_eps(game, eps_list, budget, lambda, seed, workers, out_dir);
  std::cout << std::left << std::setw(10) << "eps" << std::setw(12) << "converged"
            << std::setw(16) << "final-nashconv" << "iters-to-threshold\n";
  for (const auto& e : entries) {
    std::cout << std::left << std::setw(10) << nashlab::format_double(e.eps)
              << std::setw(12) << (e.converged ? "yes" : "no") << std::setw(16)
              << nashlab::format_double_sig(e.final_nashconv, 6);
    if (e.iterations_to_threshold >= 0) std::cout << e.iterations_to_threshold;
    else std::cout << "-";
    std::cout << "\n";
  }
  std::vector<nashlab::SweepEntry> conv;
  for (const auto& e : entries)
    if (e.converged) conv.push_back(e);
  std::sort(conv.begin(), conv.end(),
            [](const auto& a, const auto& b) { return a.final_nashconv < b.final_nashconv; });
  if (!conv.empty()) {
    std::cout << "converged, by final NashConv:";
    for (const auto& e : conv) std::cout << " " << nashlab::format_double(e.eps);
    std::cout << "\n";
  }
  return 0;
}

int cmd_tune(const std::string& game, double lo, double hi, double precision,
             int64_t budget, double lambda, int window, double threshold) {
  nashlab::RunDefaults d = nashlab::default_run_params(game, SolverKind::kIesl);
  if (budget <= 0) budget = d.iterations;
  if (lambda <= 0) lambda = d.lambda;
  auto probe = [&](double eps) {
    nashlab::RunConfig cfg;
    cfg.game = game;
    cfg.solver = SolverKind::kIesl;
    cfg.params.eps = eps;
    cfg.params.lambda = lambda;
    cfg.iterations = budget;
    cfg.conv_window = window;
    cfg.conv_threshold = threshold;
    nashlab::RunResult r = nashlab::run_from_config(cfg);
    std::cout << "  probe eps=" << nashlab::format_double(eps) << ": "
              << (r.verdict_applicable && r.verdict.converged ? "converged"
                                                              : "not converged")
              << ", final NashConv " << nashlab::format_double_sig(r.final_nashconv, 6)
              << "\n";
    return nashlab::EpsProbe{r.verdict_applicable && r.verdict.converged,
                             r.final_nashconv};
  };
  nashlab::TuneResult res = nashlab::tune_eps(probe, lo, hi, precision);
  std::cout << "endpoints: lo " << (res.lo_converged ? "converged" : "diverged")
            << ", hi " << (res.hi_converged ? "converged" : "diverged") << "\n";
  std::cout << "probes:";
  for (auto& [e, c] : res.probes)
    std::cout << " (" << nashlab::format_double(e) << (c ? ",conv)" : ",div)");
  std::cout << "\nprobe count " << res.probe_count << ", final bracket ("
            << nashlab::format_double(res.lo) << ", " << nashlab::format_double(res.hi)
            << "]\n";
  if (res.chosen) {
    std::cout << "chosen eps " << nashlab::format_double(*res.chosen)
              << ", final NashConv "
              << nashlab::format_double_sig(res.chosen_nashconv, 6) << "\n";
    return 0;
  }
  std::cout << "no converging eps in range\n";
  return 2;
}

int cmd_probe(const std::string& game, const std::string& anchor_ckpt, int samples,
              double radius, uint64_t seed) {
  nashlab::GameTree tree = nashlab::build_game(game);
  nashlab::BehavioralPolicy anchor = nashlab::uniform_policy(tree);
  if (!anchor_ckpt.empty()) {
    nashlab::Checkpoint ck = nashlab::read_checkpoint_file(anchor_ckpt);
    if (ck.game != game)
      throw std::runtime_error("anchor checkpoint is for game " + ck.game);
    auto solver = nashlab::restore_solver(tree, ck);
    anchor = solver->eval_policy();
  }
  auto probe = nashlab::probe_hypomonotonicity(tree, anchor, samples, radius, seed);
  std::cout << "samples " << samples << " radius " << nashlab::format_double(radius)
            << "\n";
  std::cout << "mu estimate (infoset-level): "
            << nashlab::format_double_sig(probe.mu_estimate, 6) << "\n";
  std::cout << "mu estimate (reach-weighted): "
            << nashlab::format_double_sig(probe.mu_estimate_weighted, 6) << "\n";
  return 0;
}

int cmd_lemma1(const std::string& game, int trials, uint64_t seed) {
  nashlab::GameTree tree = nashlab::build_game(game);
  auto rep = nashlab::verify_lemma1(tree, trials, seed);
  std::cout << "trials " << rep.trials << " max discrepancy "
            << nashlab::format_double_sig(rep.max_discrepancy, 6) << "\n";
  return rep.max_discrepancy <= 1e-9 ? 0 : 2;
}

int cmd_eval(const std::string& ckpt_path) {
  nashlab::Checkpoint ck = nashlab::read_checkpoint_file(ckpt_path);
  nashlab::GameTree tree = nashlab::build_game(ck.game);
  auto solver = nashlab::restore_solver(tree, ck);
  nashlab::NashConvResult nc = nashlab::nashconv(tree, solver->eval_policy());
  std::cout << "game " << ck.game << " solver " << nashlab::solver_name(ck.state.kind)
            << " iteration " << ck.state.iteration << "\n";
  std::cout << "nashconv " << nashlab::format_double_sig(nc.total, 12) << "\n";
  for (size_t p = 0; p < nc.per_player.size(); ++p)
    std::cout << "exploitability p" << p + 1 << " "
              << nashlab::format_double_sig(nc.per_player[p], 12) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tabular equilibrium workbench"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "run one solver on one game");
  nashlab::RunConfig cfg;
  std::string solver_str = "iesl";
  std::string out_dir;
  solve->set_config("--config");
  solve->add_option("--game", cfg.game, "game name");
  solve->add_option("--solver", solver_str, "iesl|cfr|fp|rd");
  double eps = -1, lambda = -1;
  solve->add_option("--eps", eps, "softmax temperature");
  solve->add_option("--lambda", lambda, "step size");
  solve->add_option("--iterations", cfg.iterations, "iteration budget");
  solve->add_option("--eval-every", cfg.eval_every, "evaluation cadence (0 = auto)");
  solve->add_option("--seed", cfg.params.seed, "rng seed");
  bool random_init = false;
  solve->add_flag("--random-init", random_init, "seeded random score init");
  solve->add_option("--window", cfg.conv_window, "convergence window");
  solve->add_option("--threshold", cfg.conv_threshold,
                    "convergence residual threshold (0 = auto)");
  solve->add_option("--out", out_dir, "output directory for csv/svg/checkpoint");
  solve->add_option("--resume", cfg.resume_path, "resume from checkpoint");

  // verify-counts
  auto* vc = app.add_subcommand("verify-counts", "check benchmark tree sizes");
  int leduc_raise_cap = 0;
  vc->add_option("--leduc-raise-cap", leduc_raise_cap,
                 "override the Leduc per-round raise cap (calibration aid)");

  // compare
  auto* cmp = app.add_subcommand("compare", "run all four solvers on given games");
  std::vector<std::string> cmp_games;
  int64_t cmp_budget = 0;
  std::string cmp_out;
  bool cmp_extended = false;
  cmp->add_option("--games", cmp_games, "game list")->delimiter(',');
  cmp->add_option("--budget", cmp_budget, "iteration budget override");
  cmp->add_option("--out", cmp_out, "output directory");
  cmp->add_flag("--extended", cmp_extended, "extended per-game budgets");

  // sweep-eps
  auto* sweep = app.add_subcommand("sweep-eps", "IESL runs over a list of eps");
  std::string sweep_game = "leduc-2";
  std::vector<double> sweep_eps;
  int64_t sweep_budget = 0;
  double sweep_lambda = 0;
  uint64_t sweep_seed = 0;
  std::string sweep_out;
  sweep->add_option("--game", sweep_game, "game name");
  sweep->add_option("--eps", sweep_eps, "eps values")->delimiter(',')->required();
  sweep->add_option("--budget", sweep_budget, "iteration budget");
  sweep->add_option("--lambda", sweep_lambda, "step size");
  sweep->add_option("--seed", sweep_seed, "rng seed");
  sweep->add_option("--out", sweep_out, "output directory");

  // tune-eps
  auto* tune = app.add_subcommand("tune-eps", "bisection on the convergence predicate");
  std::string tune_game = "leduc-2";
  double tune_lo = 0.02, tune_hi = 0.04, tune_precision = 0.005;
  int64_t tune_budget = 0;
  double tune_lambda = 0, tune_threshold = 0;
  int tune_window = 100;
  tune->add_option("--game", tune_game, "game name");
  tune->add_option("--lo", tune_lo, "interval low end (expected diverging)");
  tune->add_option("--hi", tune_hi, "interval high end (expected converging)");
  tune->add_option("--precision", tune_precision, "bracket precision");
  tune->add_option("--budget", tune_budget, "iterations per probe");
  tune->add_option("--lambda", tune_lambda, "step size");
  tune->add_option("--window", tune_window, "convergence window");
  tune->add_option("--threshold", tune_threshold, "residual threshold (0 = auto)");

  // probe-hypomono
  auto* probe = app.add_subcommand("probe-hypomono", "local hypomonotonicity estimate");
  std::string probe_game = "matching-pennies", probe_anchor;
  int probe_samples = 64;
  double probe_radius = 0.1;
  uint64_t probe_seed = 1;
  probe->add_option("--game", probe_game, "game name");
  probe->add_option("--anchor-checkpoint", probe_anchor,
                    "checkpoint whose policy anchors the probe (default uniform)");
  probe->add_option("--samples", probe_samples, "sample count");
  probe->add_option("--radius", probe_radius, "L-inf sampling radius");
  probe->add_option("--seed", probe_seed, "rng seed");

  // verify-lemma1
  auto* lem = app.add_subcommand("verify-lemma1", "advantage decomposition identity");
  std::string lem_game = "kuhn-2";
  int lem_trials = 50;
  uint64_t lem_seed = 1;
  lem->add_option("--game", lem_game, "game name");
  lem->add_option("--trials", lem_trials, "random trials");
  lem->add_option("--seed", lem_seed, "rng seed");

  // eval
  auto* ev = app.add_subcommand("eval", "NashConv of a checkpointed policy");
  std::string ev_ckpt;
  ev->add_option("--checkpoint", ev_ckpt, "checkpoint path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      cfg.solver = nashlab::solver_from_name(solver_str);
      nashlab::RunDefaults d = nashlab::default_run_params(cfg.game, cfg.solver);
      cfg.params.eps = eps > 0 ? eps : d.eps;
      cfg.params.lambda = lambda > 0 ? lambda : d.lambda;
      cfg.params.random_init = random_init;
      if (cfg.iterations < 0 && cfg.resume_path.empty()) cfg.iterations = d.iterations;
      if (cfg.iterations < 0) cfg.iterations = 0;
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::string base = out_dir + "/" + cfg.game + "-" + solver_str;
        cfg.csv_path = base + ".csv";
        cfg.svg_path = base + ".svg";
        cfg.checkpoint_path = base + ".ckpt";
      }
      return cmd_solve(cfg);
    }
    if (vc->parsed()) return cmd_verify_counts(leduc_raise_cap);
    if (cmp->parsed()) return cmd_compare(cmp_games, cmp_budget, cmp_out, cmp_extended);
    if (sweep->parsed())
      return cmd_sweep(sweep_game, sweep_eps, sweep_budget, sweep_lambda, sweep_seed,
                       sweep_out);
    if (tune->parsed())
      return cmd_tune(tune_game, tune_lo, tune_hi, tune_precision, tune_budget,
                      tune_lambda, tune_window, tune_threshold);
    if (probe->parsed())
      return cmd_probe(probe_game, probe_anchor, probe_samples, probe_radius,
                       probe_seed);
    if (lem->parsed()) return cmd_lemma1(lem_game, lem_trials, lem_seed);
    if (ev->parsed()) return cmd_eval(ev_ckpt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
