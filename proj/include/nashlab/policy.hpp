#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nashlab/game_tree.hpp"

namespace nashlab {

// Flat per-(infoset, action) table of doubles. One layout serves behavioral
// policies, score tables and advantage maps.
class ActionTable {
 public:
  ActionTable() = default;
  explicit ActionTable(const GameTree& tree, double init = 0.0)
      : data_(tree.num_action_slots(), init) {}

  std::span<double> at(const GameTree& tree, InfosetId id) {
    const InfoSet& is = tree.infoset(id);
    return {data_.data() + is.slot, static_cast<size_t>(is.num_actions())};
  }
  std::span<const double> at(const GameTree& tree, InfosetId id) const {
    const InfoSet& is = tree.infoset(id);
    return {data_.data() + is.slot, static_cast<size_t>(is.num_actions())};
  }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  size_t size() const { return data_.size(); }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const ActionTable& o) const = default;

 private:
  std::vector<double> data_;
};

using BehavioralPolicy = ActionTable;
using ScoreTable = ActionTable;

BehavioralPolicy uniform_policy(const GameTree& tree);

// Seeded random interior policy (every action probability >= min_prob).
BehavioralPolicy random_policy(const GameTree& tree, uint64_t seed,
                               double min_prob = 1e-3);

// Empty when valid; otherwise human-readable reasons (domain mismatch,
// negative entries, rows not summing to one).
std::vector<std::string> check_policy(const GameTree& tree, const BehavioralPolicy& p);

// pi(x, a) proportional to exp(y(x, a) / eps), max-subtracted per infoset.
// Throws std::invalid_argument when eps <= 0.
BehavioralPolicy softmax_choice(const GameTree& tree, const ScoreTable& y, double eps);
void softmax_choice_into(const GameTree& tree, const ScoreTable& y, double eps,
                         BehavioralPolicy& out);

}  // namespace nashlab
