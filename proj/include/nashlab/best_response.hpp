#pragma once

#include <vector>

#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

struct BestResponseResult {
  PlayerId player = 0;
  // Best-response action per infoset; -1 for other players' infosets.
  std::vector<int32_t> action;
  double br_value = 0.0;
  double baseline_value = 0.0;
  double exploitability = 0.0;

  // Profile where `player` plays the best response and everyone else keeps
  // `base`.
  BehavioralPolicy apply_to(const GameTree& tree, const BehavioralPolicy& base) const;
};

// Exact best response by tree-form dynamic programming: the player's infosets
// are resolved deepest-first against external (chance x opponents) reach,
// ties broken toward the lowest action index.
BestResponseResult best_response(const GameTree& tree, const BehavioralPolicy& policy,
                                 PlayerId player);

struct NashConvResult {
  double total = 0.0;
  std::vector<double> per_player;  // exploitability per player
  std::vector<double> br_value;
  std::vector<double> baseline;
};

NashConvResult nashconv(const GameTree& tree, const BehavioralPolicy& policy);

struct DeviationReport {
  double eps = 0.0;
  int action_count = 0;  // max |A| over infosets
  int horizon = 0;       // max own decisions along any path, over players
  double discount = 1.0;
  double bound = 0.0;  // eps * log|A| * sum_{k<T} gamma^k
  double measured_deviation = 0.0;
  bool satisfied = false;
  std::vector<double> per_player;
};

DeviationReport deviation_check(const GameTree& tree, const BehavioralPolicy& policy,
                                double eps);

}  // namespace nashlab
