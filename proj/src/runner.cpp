#include "nashlab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nashlab/checkpoint.hpp"
#include "nashlab/kernels.hpp"
#include "nashlab/util.hpp"

namespace nashlab {

void RunConfig::validate() const {
  build_game(game);  // throws on unknown game
  if (solver == SolverKind::kIesl || solver == SolverKind::kRd) {
    if (params.eps <= 0.0) throw std::invalid_argument("eps must be positive");
    if (params.lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
    if (solver == SolverKind::kIesl && params.lambda > 1.0)
      throw std::invalid_argument("lambda must be in (0, 1]");
  }
  if (iterations < -1) throw std::invalid_argument("iterations must be >= 0");
  if (eval_every < 0) throw std::invalid_argument("eval-every must be >= 0");
  if (conv_window <= 0) throw std::invalid_argument("window must be positive");
  if (conv_threshold < 0.0) throw std::invalid_argument("threshold must be >= 0");
}

RunDefaults default_run_params(const std::string& game, SolverKind solver,
                               bool extended) {
  // Budgets per game family; eps/lambda tuned per solver below.
  int64_t iters;
  if (game == "kuhn-2" || game == "kuhn-3") iters = 200000;
  else if (game == "leduc-2") iters = 100000;
  else if (game == "leduc-3") iters = extended ? 100000 : 20000;
  else iters = 20000;

  RunDefaults d{0.025, 1e-3, iters};
  if (solver == SolverKind::kIesl) {
    if (game == "kuhn-2") { d.eps = 0.0015; d.lambda = 1e-4; d.iterations = 400000; }
    else if (game == "kuhn-3") { d.eps = 0.0015; d.lambda = 1e-4; d.iterations = 400000; }
    else if (game == "leduc-2") { d.eps = 0.025; d.lambda = 1e-3; }
    else if (game == "leduc-3") { d.eps = 0.05; d.lambda = 1e-3; }
    else { d.eps = 0.1; d.lambda = 1e-2; }
  } else if (solver == SolverKind::kRd) {
    if (game == "kuhn-2") { d.eps = 0.0015; d.lambda = 1e-4; d.iterations = 400000; }
    else if (game == "kuhn-3") { d.eps = 0.0015; d.lambda = 1e-4; d.iterations = 400000; }
    else if (game == "leduc-2") { d.eps = 0.025; d.lambda = 1e-3; }
    else if (game == "leduc-3") { d.eps = 0.05; d.lambda = 1e-3; }
    else { d.eps = 0.1; d.lambda = 1e-2; }
  }
  return d;
}

std::string csv_header(int num_players) {
  std::string h = "iter,nashconv";
  for (int p = 1; p <= num_players; ++p) h += ",expl_p" + std::to_string(p);
  h += ",residual,drift,ms";
  return h;
}

std::string csv_line(const RunRecord& r) {
  std::string s = std::to_string(r.iter);
  s += "," + format_double_sig(r.nashconv, 12);
  for (double e : r.exploitability) s += "," + format_double_sig(e, 12);
  s += "," + format_double_sig(r.residual, 12);
  s += "," + format_double_sig(r.drift, 12);
  s += "," + format_double_sig(r.ms, 12);
  return s;
}

namespace {

bool score_based(SolverKind k) {
  return k == SolverKind::kIesl || k == SolverKind::kRd;
}

}  // namespace

RunResult run_solver(const GameTree& tree, Solver& solver, const RunConfig& config,
                     std::ostream* csv) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
  };
  RunResult res;
  const int64_t iterations = config.iterations;
  const int64_t eval_every =
      config.eval_every > 0 ? config.eval_every : std::max<int64_t>(1, iterations / 500);
  const double threshold = config.conv_threshold > 0.0
                               ? config.conv_threshold
                               : 1e-3 * tree.payoff_spread();
  const bool track_residuals = score_based(solver.kind());

  if (csv) *csv << csv_header(tree.num_players()) << "\n";

  BehavioralPolicy prev_eval;
  auto emit = [&](int64_t iter) {
    const BehavioralPolicy& pol = solver.eval_policy();
    NashConvResult nc = nashconv(tree, pol);
    RunRecord rec;
    rec.iter = iter;
    rec.nashconv = nc.total;
    rec.exploitability = nc.per_player;
    rec.residual = solver.residual();
    rec.drift = prev_eval.size() == 0
                    ? 0.0
                    : kernels::max_abs_diff(pol.data(), prev_eval.data());
    rec.ms = elapsed_ms();
    prev_eval = pol;
    if (csv) {
      *csv << csv_line(rec) << "\n";
      csv->flush();
    }
    res.records.push_back(std::move(rec));
  };

  emit(solver.iteration());

  int64_t run_below = 0;  // consecutive iterations with residual <= threshold
  const int64_t start_iter = solver.iteration();
  for (int64_t k = start_iter + 1; k <= start_iter + iterations; ++k) {
    if (config.stop_flag && config.stop_flag->load()) break;
    solver.step();
    if (track_residuals) {
      double r = solver.residual();
      res.residual_series.push_back(r);
      if (r <= threshold) {
        if (++run_below >= config.conv_window && res.iterations_to_threshold < 0)
          res.iterations_to_threshold = k;
      } else {
        run_below = 0;
      }
    }
    if (k % eval_every == 0 || k == start_iter + iterations) emit(k);
  }
  res.iterations_run = solver.iteration() - start_iter;

  if (track_residuals &&
      static_cast<int>(res.residual_series.size()) >= config.conv_window) {
    res.verdict_applicable = true;
    res.verdict =
        detect_convergence(res.residual_series, config.conv_window, threshold);
  }
  res.final_nashconv = res.records.back().nashconv;
  res.deviation = deviation_check(tree, solver.eval_policy(), solver.params().eps);
  return res;
}

RunResult run_from_config(const RunConfig& config_in) {
  RunConfig config = config_in;
  config.validate();
  GameTree tree = build_game(config.game);
  std::unique_ptr<Solver> solver;
  if (!config.resume_path.empty()) {
    Checkpoint ck = read_checkpoint_file(config.resume_path);
    if (ck.game != config.game && !config.game.empty())
      config.game = ck.game;
    GameTree resumed = build_game(ck.game);
    tree = std::move(resumed);
    solver = restore_solver(tree, ck);
  } else {
    solver = make_solver(tree, config.solver, config.params);
  }
  if (config.iterations < 0)
    config.iterations = default_run_params(config.game, solver->kind()).iterations;

  std::ofstream csv;
  if (!config.csv_path.empty()) {
    csv.open(config.csv_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write csv: " + config.csv_path);
  }
  RunResult res = run_solver(tree, *solver, config, csv.is_open() ? &csv : nullptr);
  if (!config.svg_path.empty()) {
    std::ofstream svg(config.svg_path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot write svg: " + config.svg_path);
    write_learning_curve_svg(svg, res.records,
                             config.game + " " + solver_name(solver->kind()));
  }
  if (!config.checkpoint_path.empty())
    write_checkpoint_file(config.checkpoint_path, config.game, *solver);
  return res;
}

void write_learning_curve_svg(std::ostream& os, const std::vector<RunRecord>& records,
                              const std::string& title) {
  const double width = 640, height = 400, ml = 60, mb = 40, mt = 30, mr = 20;
  double xmax = 1, ymin = 1e300, ymax = -1e300;
  for (const auto& r : records) {
    xmax = std::max(xmax, static_cast<double>(r.iter));
    double v = std::max(r.nashconv, 1e-12);
    ymin = std::min(ymin, v);
    ymax = std::max(ymax, v);
  }
  if (ymin >= ymax) { ymin = ymax / 10 + 1e-12; }
  double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
  if (ly1 <= ly0) ly1 = ly0 + 1;
  auto x_of = [&](double it) { return ml + (width - ml - mr) * (it / xmax); };
  auto y_of = [&](double v) {
    double l = std::log10(std::max(v, 1e-12));
    return height - mb - (height - mb - mt) * ((l - ly0) / (ly1 - ly0));
  };
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
     << height << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << width / 2 << "' y='18' text-anchor='middle' font-size='13'>"
     << title << " (NashConv vs iteration, log scale)</text>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
     << height - mb << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << height - mb << "' x2='" << width - mr
     << "' y2='" << height - mb << "' stroke='black'/>\n";
  for (double e = ly0; e <= ly1; e += 1.0) {
    double y = y_of(std::pow(10.0, e));
    os << "<text x='" << ml - 6 << "' y='" << y + 4
       << "' text-anchor='end' font-size='10'>1e" << static_cast<int>(e)
       << "</text>\n";
    os << "<line x1='" << ml << "' y1='" << y << "' x2='" << width - mr << "' y2='"
       << y << "' stroke='#ddd'/>\n";
  }
  os << "<polyline fill='none' stroke='#1f77b4' stroke-width='1.5' points='";
  for (const auto& r : records)
    os << x_of(static_cast<double>(r.iter)) << "," << y_of(r.nashconv) << " ";
  os << "'/>\n</svg>\n";
}

// --- verify-counts -----------------------------------------------------------

GameCounts count_report(const GameTree& tree, int64_t want_histories,
                        int64_t want_infosets) {
  GameCounts c;
  c.game = tree.name();
  c.nodes_total = tree.num_nodes();
  c.nodes_excl_root = tree.num_nodes() - 1;
  c.decision_terminal = tree.num_decisions() + tree.num_terminals();
  c.infosets = tree.num_infosets();
  c.want_histories = want_histories;
  c.want_infosets = want_infosets;
  if (c.infosets == want_infosets) {
    if (c.nodes_total == want_histories) c.matched = "all-nodes";
    else if (c.decision_terminal == want_histories) c.matched = "decision+terminal";
    else if (c.nodes_excl_root == want_histories) c.matched = "nodes-excl-root";
    else c.matched = "none";
  } else {
    c.matched = "none";
  }
  c.ok = c.matched != "none";
  return c;
}

std::vector<GameCounts> verify_counts() {
  struct Want {
    const char* game;
    int64_t his, info;
  };
  const Want wants[] = {{"kuhn-2", 54, 12},
                        {"kuhn-3", 600, 48},
                        {"leduc-2", 9450, 936},
                        {"leduc-3", 396120, 13878}};
  std::vector<GameCounts> out;
  for (const auto& w : wants)
    out.push_back(count_report(build_game(w.game), w.his, w.info));
  return out;
}

// --- compare / sweep ---------------------------------------------------------

int worker_slots_from_env() {
  if (const char* env = std::getenv("NASHLAB_WORKERS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 4u));
}

namespace {

template <typename Job>
void run_in_slots(std::vector<Job>& jobs, int workers) {
  if (workers <= 1) {
    for (auto& j : jobs) j();
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  int n = std::min<int>(workers, static_cast<int>(jobs.size()));
  for (int i = 0; i < n; ++i)
    pool.emplace_back([&] {
      while (true) {
        size_t k = next.fetch_add(1);
        if (k >= jobs.size()) return;
        jobs[k]();
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace

std::vector<CompareCell> run_compare(const std::vector<std::string>& games,
                                     int64_t budget_override, int workers,
                                     const std::string& out_dir, bool extended) {
  const SolverKind kinds[] = {SolverKind::kIesl, SolverKind::kCfr, SolverKind::kFp,
                              SolverKind::kRd};
  std::vector<CompareCell> cells;
  for (const auto& g : games)
    for (SolverKind k : kinds)
      cells.push_back(CompareCell{g, k, false, "", 0.0, 0});

  std::vector<std::function<void()>> jobs;
  for (auto& cell : cells) {
    jobs.emplace_back([&cell, budget_override, &out_dir, extended] {
      try {
        RunDefaults d = default_run_params(cell.game, cell.solver, extended);
        RunConfig cfg;
        cfg.game = cell.game;
        cfg.solver = cell.solver;
        cfg.params.eps = d.eps;
        cfg.params.lambda = d.lambda;
        cfg.iterations = budget_override > 0 ? budget_override : d.iterations;
        if (!out_dir.empty()) {
          std::string base =
              out_dir + "/" + cell.game + "-" + solver_name(cell.solver);
          cfg.csv_path = base + ".csv";
          cfg.svg_path = base + ".svg";
        }
        RunResult r = run_from_config(cfg);
        cell.final_nashconv = r.final_nashconv;
        cell.iterations = r.iterations_run;
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
      }
    });
  }
  run_in_slots(jobs, workers);
  return cells;
}

std::vector<SweepEntry> run_sweep_eps(const std::string& game,
                                      const std::vector<double>& eps_list,
                                      int64_t budget, double lambda, uint64_t seed,
                                      int workers, const std::string& out_dir) {
  if (eps_list.empty()) throw std::invalid_argument("sweep: empty eps list");
  std::vector<SweepEntry> entries(eps_list.size());
  std::vector<std::function<void()>> jobs;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    jobs.emplace_back([&, i] {
      RunDefaults d = default_run_params(game, SolverKind::kIesl);
      RunConfig cfg;
      cfg.game = game;
      cfg.solver = SolverKind::kIesl;
      cfg.params.eps = eps_list[i];
      cfg.params.lambda = lambda > 0 ? lambda : d.lambda;
      cfg.params.seed = seed;
      cfg.iterations = budget > 0 ? budget : d.iterations;
      if (!out_dir.empty()) {
        std::string base = out_dir + "/" + game + "-iesl-eps" +
                           format_double(eps_list[i]);
        cfg.csv_path = base + ".csv";
        cfg.svg_path = base + ".svg";
      }
      RunResult r = run_from_config(cfg);
      entries[i].eps = eps_list[i];
      entries[i].converged = r.verdict_applicable && r.verdict.converged;
      entries[i].final_nashconv = r.final_nashconv;
      entries[i].iterations_to_threshold = r.iterations_to_threshold;
    });
  }
  run_in_slots(jobs, workers);
  return entries;
}

}  // namespace nashlab
