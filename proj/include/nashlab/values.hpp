#pragma once

#include <vector>

#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

// Bottom-up value tables for every player at once.
//
// V(terminal) = payoff. At a decision node, Q(h, a) = r(child_a) + gamma *
// V(child_a) and V = sum_a pi(a) Q(h, a); chance nodes average children
// without discounting. action_value is indexed by the child node reached by
// the action; at chance children it simply holds V(child).
struct ValueTables {
  int num_players = 0;
  std::vector<double> value;         // [node * n + player]
  std::vector<double> action_value;  // [node * n + player], by child node

  double v(NodeId h, PlayerId p) const { return value[h * num_players + p]; }
  double q(const GameTree& tree, NodeId h, int action, PlayerId p) const {
    return action_value[tree.child(h, action) * num_players + p];
  }
  double advantage(const GameTree& tree, NodeId h, int action, PlayerId p) const {
    return q(tree, h, action, p) - v(h, p);
  }
  // u^i(pi): expected utility at the root.
  double utility(PlayerId p) const { return value[p]; }
};

ValueTables expected_values(const GameTree& tree, const BehavioralPolicy& policy);

}  // namespace nashlab
