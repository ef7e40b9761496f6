#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nashlab/advantage.hpp"
#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

enum class SolverKind { kIesl, kCfr, kFp, kRd };

std::string solver_name(SolverKind k);
SolverKind solver_from_name(const std::string& s);

struct SolverParams {
  double eps = 0.025;     // softmax temperature (IESL, RD)
  double lambda = 1e-3;   // step size (IESL, RD)
  bool random_init = false;
  double init_range = 0.1;
  uint64_t seed = 0;
};

// Named tables plus scalar state; enough to rebuild a solver bit-exactly.
struct SolverStateDump {
  SolverKind kind;
  int64_t iteration = 0;
  SolverParams params;
  std::vector<std::pair<std::string, std::vector<double>>> tables;
};

class Solver {
 public:
  Solver(const GameTree& tree, SolverParams params)
      : tree_(tree), params_(params) {}
  virtual ~Solver() = default;

  virtual SolverKind kind() const = 0;
  virtual void step() = 0;

  // The policy NashConv is measured on: instantaneous softmax for IESL,
  // the running average for CFR, FP and RD.
  virtual const BehavioralPolicy& eval_policy() = 0;

  // Residual diagnostic. Score-based dynamics report ||w(sigma(y)) - y||inf;
  // average-policy dynamics report the largest positive advantage under
  // eval_policy().
  virtual double residual() = 0;

  virtual SolverStateDump dump_state() const = 0;
  virtual void load_state(const SolverStateDump& dump) = 0;

  const GameTree& tree() const { return tree_; }
  const SolverParams& params() const { return params_; }
  int64_t iteration() const { return iteration_; }

 protected:
  ScoreTable initial_scores() const;  // zeros, or seeded uniform in +-init_range

  const GameTree& tree_;
  SolverParams params_;
  int64_t iteration_ = 0;
};

std::unique_ptr<Solver> make_solver(const GameTree& tree, SolverKind kind,
                                    SolverParams params);

// pi(a) proportional to max(regret_a, 0); uniform when no positive regret.
void regret_match_row(std::span<const double> regrets, std::span<double> out);
void regret_match(const GameTree& tree, const ActionTable& regrets,
                  BehavioralPolicy& out);

class IeslSolver : public Solver {
 public:
  IeslSolver(const GameTree& tree, SolverParams params);
  SolverKind kind() const override { return SolverKind::kIesl; }
  void step() override;
  const BehavioralPolicy& eval_policy() override;
  double residual() override;
  SolverStateDump dump_state() const override;
  void load_state(const SolverStateDump& dump) override;

  const ScoreTable& scores() const { return y_; }
  // w(sigma(y)) from the most recent step (valid after step()).
  const AdvantageMap& last_advantage() const { return eval_.last(); }

 private:
  ScoreTable y_;
  BehavioralPolicy policy_;
  AdvantageEvaluator eval_;
  double last_residual_ = -1.0;
};

class RdSolver : public Solver {
 public:
  RdSolver(const GameTree& tree, SolverParams params);
  SolverKind kind() const override { return SolverKind::kRd; }
  void step() override;
  const BehavioralPolicy& eval_policy() override;
  double residual() override;
  SolverStateDump dump_state() const override;
  void load_state(const SolverStateDump& dump) override;

  const ScoreTable& scores() const { return y_; }

 private:
  ScoreTable y_;
  BehavioralPolicy policy_;
  ActionTable policy_sum_;
  double count_ = 0.0;
  BehavioralPolicy avg_;
  AdvantageEvaluator eval_;
  double last_residual_ = -1.0;
};

class CfrSolver : public Solver {
 public:
  CfrSolver(const GameTree& tree, SolverParams params);
  SolverKind kind() const override { return SolverKind::kCfr; }
  void step() override;
  const BehavioralPolicy& eval_policy() override;
  double residual() override;
  SolverStateDump dump_state() const override;
  void load_state(const SolverStateDump& dump) override;

  const ActionTable& regrets() const { return regrets_; }
  const BehavioralPolicy& current_policy() const { return policy_; }

 private:
  ActionTable regrets_;
  ActionTable avg_sum_;  // own-reach weighted policy accumulator
  BehavioralPolicy policy_;
  BehavioralPolicy avg_;
  AdvantageEvaluator eval_;
};

class FpSolver : public Solver {
 public:
  FpSolver(const GameTree& tree, SolverParams params);
  SolverKind kind() const override { return SolverKind::kFp; }
  void step() override;
  const BehavioralPolicy& eval_policy() override;
  double residual() override;
  SolverStateDump dump_state() const override;
  void load_state(const SolverStateDump& dump) override;

 private:
  BehavioralPolicy avg_;
  AdvantageEvaluator eval_;
};

// Own (sequence-form) reach of each infoset of its acting player under `p`:
// the product of the player's action probabilities along the infoset's own
// history. Used by CFR averaging and FP mixing.
std::vector<double> infoset_own_reach(const GameTree& tree, const BehavioralPolicy& p);

}  // namespace nashlab
