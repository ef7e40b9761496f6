#pragma once

#include <vector>

#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

// Per-node factorization of Pr(h | pi) into chance, per-player own, and
// per-player external (chance times everyone else) components.
struct ReachDecomposition {
  int num_players = 0;
  std::vector<double> chance;    // [node]
  std::vector<double> own;       // [node * n + player]
  std::vector<double> external;  // [node * n + player]

  double full(NodeId h) const {
    double r = chance[h];
    for (int j = 0; j < num_players; ++j) r *= own[h * num_players + j];
    return r;
  }
  double own_reach(NodeId h, PlayerId p) const { return own[h * num_players + p]; }
  double external_reach(NodeId h, PlayerId p) const {
    return external[h * num_players + p];
  }
};

ReachDecomposition compute_reach(const GameTree& tree, const BehavioralPolicy& policy);

}  // namespace nashlab
