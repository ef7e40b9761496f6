#pragma once

#include <cstdint>
#include <vector>

#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

enum class ReachWeighting {
  kExternal,  // chance x opponents (counterfactual weights)
  kFull       // full reach Pr(h | pi), including the acting player
};

// w^i(pi)(x, a): reach-weighted average of A^i(h, a) over the members of x.
// numerator keeps the unnormalized sums (CFR's counterfactual regrets),
// infoset_weight the per-infoset weight mass; infosets with zero mass are
// flagged unreached and get w = 0.
struct AdvantageMap {
  ActionTable w;
  ActionTable numerator;
  std::vector<double> infoset_weight;
  std::vector<uint8_t> reached;
  std::vector<double> utility;  // root value per player
};

// Owns the traversal buffers so per-iteration calls do not allocate.
class AdvantageEvaluator {
 public:
  explicit AdvantageEvaluator(const GameTree& tree);

  const AdvantageMap& compute(const BehavioralPolicy& policy,
                              ReachWeighting mode = ReachWeighting::kExternal);
  const AdvantageMap& last() const { return out_; }
  const GameTree& tree() const { return tree_; }

 private:
  const GameTree& tree_;
  std::vector<double> own_;    // [node * n + j]
  std::vector<double> ext_;    // [node * n + j]
  std::vector<double> value_;  // [node * n + j]
  AdvantageMap out_;
};

}  // namespace nashlab
