#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nashlab/analysis.hpp"
#include "nashlab/best_response.hpp"
#include "nashlab/game_builders.hpp"
#include "nashlab/solvers.hpp"

namespace nashlab {

struct RunConfig {
  std::string game = "kuhn-2";
  SolverKind solver = SolverKind::kIesl;
  SolverParams params;
  int64_t iterations = -1;   // -1: per-game default budget
  int64_t eval_every = 0;    // 0: max(1, iterations / 500)
  int conv_window = 100;
  double conv_threshold = 0.0;  // 0: 1e-3 * payoff spread
  std::string csv_path;
  std::string svg_path;
  std::string checkpoint_path;
  std::string resume_path;
  const std::atomic<bool>* stop_flag = nullptr;

  void validate() const;  // throws std::invalid_argument
};

struct RunRecord {
  int64_t iter = 0;
  double nashconv = 0.0;
  std::vector<double> exploitability;
  double residual = 0.0;
  double drift = 0.0;
  double ms = 0.0;
};

struct RunResult {
  std::vector<RunRecord> records;
  bool verdict_applicable = false;  // score-based dynamics only
  ConvergenceVerdict verdict;
  int64_t iterations_to_threshold = -1;  // first detector firing point, -1 if never
  DeviationReport deviation;
  double final_nashconv = 0.0;
  int64_t iterations_run = 0;
  std::vector<double> residual_series;  // per iteration, score-based solvers
};

// Per-(game, solver) tuned defaults: step sizes, temperature, budget.
struct RunDefaults {
  double eps;
  double lambda;
  int64_t iterations;
};
RunDefaults default_run_params(const std::string& game, SolverKind solver,
                               bool extended = false);

std::string csv_header(int num_players);
std::string csv_line(const RunRecord& r);

RunResult run_solver(const GameTree& tree, Solver& solver, const RunConfig& config,
                     std::ostream* csv = nullptr);

// Convenience wrapper: builds the game and solver (or resumes from a
// checkpoint), runs, writes the configured outputs.
RunResult run_from_config(const RunConfig& config);

void write_learning_curve_svg(std::ostream& os, const std::vector<RunRecord>& records,
                              const std::string& title);

// --- verify-counts -----------------------------------------------------------

struct GameCounts {
  std::string game;
  int64_t nodes_total = 0;
  int64_t nodes_excl_root = 0;
  int64_t decision_terminal = 0;
  int64_t infosets = 0;
  int64_t want_histories = 0;
  int64_t want_infosets = 0;
  std::string matched;  // counting convention that reproduces the reference
  bool ok = false;
};

GameCounts count_report(const GameTree& tree, int64_t want_histories,
                        int64_t want_infosets);
// The four benchmark games against their reference sizes.
std::vector<GameCounts> verify_counts();

// --- compare / sweep ---------------------------------------------------------

struct CompareCell {
  std::string game;
  SolverKind solver;
  bool ok = false;
  std::string error;
  double final_nashconv = 0.0;
  int64_t iterations = 0;
};

// Runs every solver on every game under per-game budgets (tuned defaults
// unless overridden), in up to `workers` parallel slots.
std::vector<CompareCell> run_compare(const std::vector<std::string>& games,
                                     int64_t budget_override, int workers,
                                     const std::string& out_dir, bool extended);

struct SweepEntry {
  double eps = 0.0;
  bool converged = false;
  double final_nashconv = 0.0;
  int64_t iterations_to_threshold = -1;
};

std::vector<SweepEntry> run_sweep_eps(const std::string& game,
                                      const std::vector<double>& eps_list,
                                      int64_t budget, double lambda, uint64_t seed,
                                      int workers, const std::string& out_dir);

int worker_slots_from_env();

}  // namespace nashlab
