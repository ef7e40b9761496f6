#include "nashlab/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nashlab/best_response.hpp"
#include "nashlab/kernels.hpp"

namespace nashlab {

std::string solver_name(SolverKind k) {
  switch (k) {
    case SolverKind::kIesl: return "iesl";
    case SolverKind::kCfr: return "cfr";
    case SolverKind::kFp: return "fp";
    case SolverKind::kRd: return "rd";
  }
  return "?";
}

SolverKind solver_from_name(const std::string& s) {
  if (s == "iesl") return SolverKind::kIesl;
  if (s == "cfr") return SolverKind::kCfr;
  if (s == "fp") return SolverKind::kFp;
  if (s == "rd") return SolverKind::kRd;
  throw std::invalid_argument("unknown solver: " + s);
}

ScoreTable Solver::initial_scores() const {
  ScoreTable y(tree_, 0.0);
  if (params_.random_init) {
    std::mt19937_64 rng(params_.seed);
    std::uniform_real_distribution<double> d(-params_.init_range, params_.init_range);
    for (double& v : y.data()) v = d(rng);
  }
  return y;
}

void regret_match_row(std::span<const double> regrets, std::span<double> out) {
  double s = 0.0;
  for (double r : regrets) s += std::max(r, 0.0);
  if (s > 0.0) {
    for (size_t a = 0; a < out.size(); ++a) out[a] = std::max(regrets[a], 0.0) / s;
  } else {
    double u = 1.0 / out.size();
    for (double& v : out) v = u;
  }
}

void regret_match(const GameTree& tree, const ActionTable& regrets,
                  BehavioralPolicy& out) {
  for (InfosetId i = 0; i < tree.num_infosets(); ++i)
    regret_match_row(regrets.at(tree, i), out.at(tree, i));
}

std::vector<double> infoset_own_reach(const GameTree& tree, const BehavioralPolicy& p) {
  std::vector<double> x(tree.num_infosets(), 1.0);
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    const InfoSet& is = tree.infoset(i);
    if (is.parent != kNoInfoset)
      x[i] = x[is.parent] * p.at(tree, is.parent)[is.parent_action];
  }
  return x;
}

namespace {

// Largest positive averaged advantage under `policy`; the average-policy
// solvers report this as their residual diagnostic.
double max_positive_advantage(AdvantageEvaluator& eval, const BehavioralPolicy& policy) {
  const AdvantageMap& adv = eval.compute(policy);
  double m = 0.0;
  for (double v : adv.w.data()) m = std::max(m, v);
  return m;
}

SolverStateDump make_dump(const Solver& s, SolverKind kind,
                          std::vector<std::pair<std::string, std::vector<double>>> tables) {
  SolverStateDump d;
  d.kind = kind;
  d.iteration = s.iteration();
  d.params = s.params();
  d.tables = std::move(tables);
  return d;
}

const std::vector<double>& find_table(const SolverStateDump& d, const std::string& name) {
  for (const auto& [n, t] : d.tables)
    if (n == name) return t;
  throw std::invalid_argument("checkpoint missing table: " + name);
}

}  // namespace

// ---------------------------------------------------------------------------
// IESL: pi = sigma(y); y <- (1 - lambda) y + lambda w(pi).

IeslSolver::IeslSolver(const GameTree& tree, SolverParams params)
    : Solver(tree, params), eval_(tree) {
  if (params_.eps <= 0.0) throw std::invalid_argument("iesl: eps must be positive");
  if (params_.lambda <= 0.0 || params_.lambda > 1.0)
    throw std::invalid_argument("iesl: lambda must be in (0, 1]");
  y_ = initial_scores();
  policy_ = softmax_choice(tree_, y_, params_.eps);
}

void IeslSolver::step() {
  softmax_choice_into(tree_, y_, params_.eps, policy_);
  const AdvantageMap& adv = eval_.compute(policy_, ReachWeighting::kExternal);
  last_residual_ = kernels::max_abs_diff(adv.w.data(), y_.data());
  kernels::blend(y_.data(), adv.w.data(), params_.lambda);
  ++iteration_;
}

const BehavioralPolicy& IeslSolver::eval_policy() {
  softmax_choice_into(tree_, y_, params_.eps, policy_);
  return policy_;
}

double IeslSolver::residual() {
  if (last_residual_ >= 0.0) return last_residual_;
  const AdvantageMap& adv = eval_.compute(eval_policy(), ReachWeighting::kExternal);
  return kernels::max_abs_diff(adv.w.data(), y_.data());
}

SolverStateDump IeslSolver::dump_state() const {
  return make_dump(*this, SolverKind::kIesl, {{"y", y_.data()}});
}

void IeslSolver::load_state(const SolverStateDump& d) {
  y_.data() = find_table(d, "y");
  iteration_ = d.iteration;
  params_ = d.params;
  last_residual_ = -1.0;
  policy_ = softmax_choice(tree_, y_, params_.eps);
}

// ---------------------------------------------------------------------------
// RD: same choice map, no decay; uniform-weight policy averaging.

RdSolver::RdSolver(const GameTree& tree, SolverParams params)
    : Solver(tree, params), eval_(tree) {
  if (params_.eps <= 0.0) throw std::invalid_argument("rd: eps must be positive");
  if (params_.lambda <= 0.0) throw std::invalid_argument("rd: lambda must be positive");
  y_ = initial_scores();
  policy_ = softmax_choice(tree_, y_, params_.eps);
  policy_sum_ = ActionTable(tree, 0.0);
  avg_ = BehavioralPolicy(tree);
}

void RdSolver::step() {
  softmax_choice_into(tree_, y_, params_.eps, policy_);
  kernels::axpy(policy_sum_.data(), policy_.data(), 1.0);
  count_ += 1.0;
  const AdvantageMap& adv = eval_.compute(policy_, ReachWeighting::kExternal);
  last_residual_ = kernels::max_abs_diff(adv.w.data(), y_.data());
  kernels::axpy(y_.data(), adv.w.data(), params_.lambda);
  ++iteration_;
}

const BehavioralPolicy& RdSolver::eval_policy() {
  if (count_ == 0.0) {
    softmax_choice_into(tree_, y_, params_.eps, policy_);
    return policy_;
  }
  avg_.data() = policy_sum_.data();
  kernels::scale(avg_.data(), 1.0 / count_);
  return avg_;
}

double RdSolver::residual() {
  if (last_residual_ >= 0.0) return last_residual_;
  softmax_choice_into(tree_, y_, params_.eps, policy_);
  const AdvantageMap& adv = eval_.compute(policy_, ReachWeighting::kExternal);
  return kernels::max_abs_diff(adv.w.data(), y_.data());
}

SolverStateDump RdSolver::dump_state() const {
  return make_dump(*this, SolverKind::kRd,
                   {{"y", y_.data()},
                    {"policy_sum", policy_sum_.data()},
                    {"count", {count_}}});
}

void RdSolver::load_state(const SolverStateDump& d) {
  y_.data() = find_table(d, "y");
  policy_sum_.data() = find_table(d, "policy_sum");
  count_ = find_table(d, "count").at(0);
  iteration_ = d.iteration;
  params_ = d.params;
  last_residual_ = -1.0;
  policy_ = softmax_choice(tree_, y_, params_.eps);
}

// ---------------------------------------------------------------------------
// CFR: simultaneous-update counterfactual regret matching with own-reach
// weighted policy averaging.

CfrSolver::CfrSolver(const GameTree& tree, SolverParams params)
    : Solver(tree, params), eval_(tree) {
  regrets_ = ActionTable(tree, 0.0);
  avg_sum_ = ActionTable(tree, 0.0);
  policy_ = uniform_policy(tree);
  avg_ = BehavioralPolicy(tree);
}

void CfrSolver::step() {
  std::vector<double> own = infoset_own_reach(tree_, policy_);
  for (InfosetId i = 0; i < tree_.num_infosets(); ++i) {
    auto acc = avg_sum_.at(tree_, i);
    auto cur = policy_.at(tree_, i);
    for (size_t a = 0; a < acc.size(); ++a) acc[a] += own[i] * cur[a];
  }
  const AdvantageMap& adv = eval_.compute(policy_, ReachWeighting::kExternal);
  kernels::axpy(regrets_.data(), adv.numerator.data(), 1.0);
  regret_match(tree_, regrets_, policy_);
  ++iteration_;
}

const BehavioralPolicy& CfrSolver::eval_policy() {
  for (InfosetId i = 0; i < tree_.num_infosets(); ++i) {
    auto acc = avg_sum_.at(tree_, i);
    auto row = avg_.at(tree_, i);
    double s = 0.0;
    for (double v : acc) s += v;
    if (s > 0.0) {
      for (size_t a = 0; a < row.size(); ++a) row[a] = acc[a] / s;
    } else {
      double u = 1.0 / row.size();
      for (double& v : row) v = u;
    }
  }
  return avg_;
}

double CfrSolver::residual() { return max_positive_advantage(eval_, eval_policy()); }

SolverStateDump CfrSolver::dump_state() const {
  return make_dump(*this, SolverKind::kCfr,
                   {{"regrets", regrets_.data()}, {"avg_sum", avg_sum_.data()}});
}

void CfrSolver::load_state(const SolverStateDump& d) {
  regrets_.data() = find_table(d, "regrets");
  avg_sum_.data() = find_table(d, "avg_sum");
  iteration_ = d.iteration;
  params_ = d.params;
  regret_match(tree_, regrets_, policy_);
}

// ---------------------------------------------------------------------------
// FP: sequential exact best responses folded into the average profile with
// realization-equivalent behavioral mixing at rate 1/(k+2).

FpSolver::FpSolver(const GameTree& tree, SolverParams params)
    : Solver(tree, params), eval_(tree) {
  avg_ = uniform_policy(tree);
}

void FpSolver::step() {
  const double alpha = 1.0 / static_cast<double>(iteration_ + 2);
  for (PlayerId p = 0; p < tree_.num_players(); ++p) {
    BestResponseResult br = best_response(tree_, avg_, p);
    std::vector<double> x_avg = infoset_own_reach(tree_, avg_);
    // br own reach is 0/1 along the best-response action path
    std::vector<double> x_br(tree_.num_infosets(), 1.0);
    for (InfosetId i = 0; i < tree_.num_infosets(); ++i) {
      const InfoSet& is = tree_.infoset(i);
      if (is.player != p) continue;
      if (is.parent != kNoInfoset)
        x_br[i] = x_br[is.parent] *
                  (br.action[is.parent] == is.parent_action ? 1.0 : 0.0);
    }
    for (InfosetId i = 0; i < tree_.num_infosets(); ++i) {
      const InfoSet& is = tree_.infoset(i);
      if (is.player != p) continue;
      double wa = (1.0 - alpha) * x_avg[i];
      double wb = alpha * x_br[i];
      double denom = wa + wb;
      if (denom <= 0.0) continue;
      auto row = avg_.at(tree_, i);
      for (int a = 0; a < is.num_actions(); ++a) {
        double brp = br.action[i] == a ? 1.0 : 0.0;
        row[a] = (wa * row[a] + wb * brp) / denom;
      }
    }
  }
  ++iteration_;
}

const BehavioralPolicy& FpSolver::eval_policy() { return avg_; }

double FpSolver::residual() { return max_positive_advantage(eval_, avg_); }

SolverStateDump FpSolver::dump_state() const {
  return make_dump(*this, SolverKind::kFp, {{"avg", avg_.data()}});
}

void FpSolver::load_state(const SolverStateDump& d) {
  avg_.data() = find_table(d, "avg");
  iteration_ = d.iteration;
  params_ = d.params;
}

std::unique_ptr<Solver> make_solver(const GameTree& tree, SolverKind kind,
                                    SolverParams params) {
  switch (kind) {
    case SolverKind::kIesl: return std::make_unique<IeslSolver>(tree, params);
    case SolverKind::kCfr: return std::make_unique<CfrSolver>(tree, params);
    case SolverKind::kFp: return std::make_unique<FpSolver>(tree, params);
    case SolverKind::kRd: return std::make_unique<RdSolver>(tree, params);
  }
  throw std::invalid_argument("make_solver: bad kind");
}

}  // namespace nashlab
