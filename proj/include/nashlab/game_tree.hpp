#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <string>
#include <vector>

#include "nashlab/types.hpp"

namespace nashlab {

enum class NodeKind : uint8_t { kChance, kDecision, kTerminal };

// Nodes live in a flat array in depth-first preorder: a parent's id is always
// smaller than its descendants', and the children of a node are contiguous.
struct Node {
  NodeKind kind = NodeKind::kTerminal;
  int8_t player = kChancePlayer;  // acting player, decision nodes only
  NodeId parent = kNoNode;
  NodeId first_child = kNoNode;
  int32_t num_children = 0;
  InfosetId infoset = kNoInfoset;
  int32_t data = -1;  // offset into chance_probs_ (chance) or payoffs_ (terminal)
};

struct InfoSet {
  int8_t player = 0;
  int32_t depth = 0;  // number of the player's own decisions before this one
  int32_t slot = 0;   // offset into flat per-(infoset,action) tables
  InfosetId parent = kNoInfoset;    // previous own infoset on the path, if any
  int32_t parent_action = -1;       // action taken there
  std::vector<std::string> actions;
  std::vector<NodeId> members;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

class GameTree {
 public:
  const std::string& name() const { return name_; }
  int num_players() const { return num_players_; }
  double discount() const { return discount_; }

  NodeId root() const { return 0; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  NodeId child(NodeId id, int action) const { return nodes_[id].first_child + action; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  const InfoSet& infoset(InfosetId id) const { return infosets_[id]; }

  // Flat layout shared by policies, scores and advantage tables.
  int num_action_slots() const { return num_action_slots_; }
  int slot(InfosetId id, int action) const { return infosets_[id].slot + action; }

  std::span<const double> chance_probs(NodeId id) const {
    const Node& n = nodes_[id];
    return {chance_probs_.data() + n.data, static_cast<size_t>(n.num_children)};
  }
  std::span<const double> payoffs(NodeId id) const {
    return {payoffs_.data() + nodes_[id].data, static_cast<size_t>(num_players_)};
  }
  // Per-player reward granted on entering `id` from its (decision) parent.
  // Empty span when the game has terminal rewards only.
  std::span<const double> rewards(NodeId id) const {
    if (rewards_.empty()) return {};
    return {rewards_.data() + static_cast<size_t>(id) * num_players_,
            static_cast<size_t>(num_players_)};
  }
  bool has_edge_rewards() const { return !rewards_.empty(); }

  // Number of decision nodes strictly above a node (the discounting epoch).
  int32_t decision_depth(NodeId id) const { return decision_depth_[id]; }
  int32_t max_decision_depth() const { return max_decision_depth_; }
  // Maximum number of own decision points of `p` along any root-to-leaf path.
  int32_t player_horizon(PlayerId p) const { return player_horizon_[p]; }
  int max_actions() const { return max_actions_; }
  // max terminal payoff minus min terminal payoff, over all players
  double payoff_spread() const { return payoff_spread_; }

  int num_terminals() const { return num_terminals_; }
  int num_decisions() const { return num_decisions_; }
  int num_chance() const { return num_chance_; }
  bool zero_sum_expected() const { return zero_sum_expected_; }

  // Checks every structural invariant; returns human-readable violations.
  std::vector<std::string> validate() const;

  // Canonical text dump, one node per line, byte-stable across builds.
  std::string dump() const;

 private:
  friend class GameTreeBuilder;

  std::string name_;
  int num_players_ = 0;
  double discount_ = 1.0;
  std::vector<Node> nodes_;
  std::vector<InfoSet> infosets_;
  std::vector<double> chance_probs_;
  std::vector<double> payoffs_;
  std::vector<double> rewards_;
  std::vector<int32_t> decision_depth_;
  std::vector<int32_t> player_horizon_;
  int num_action_slots_ = 0;
  int32_t max_decision_depth_ = 0;
  int max_actions_ = 0;
  double payoff_spread_ = 0.0;
  int num_terminals_ = 0;
  int num_decisions_ = 0;
  int num_chance_ = 0;
  bool zero_sum_expected_ = false;
};

// Incremental construction with arbitrary node order; finalize() renumbers
// everything into canonical DFS preorder and computes the derived tables.
// Deliberately permissive: tests use it to build invalid trees and check that
// GameTree::validate() catches them.
class GameTreeBuilder {
 public:
  GameTreeBuilder(std::string name, int num_players, double discount = 1.0);

  void set_zero_sum_expected(bool v) { zero_sum_expected_ = v; }

  NodeId add_chance(NodeId parent);
  NodeId add_decision(NodeId parent, PlayerId player, const std::string& infoset_key,
                      const std::vector<std::string>& actions);
  NodeId add_terminal(NodeId parent, const std::vector<double>& payoffs);

  void set_chance_probs(NodeId id, const std::vector<double>& probs);
  // Reward on the edge into `id` (parent must be a decision node).
  void set_rewards(NodeId id, const std::vector<double>& rewards);

  // Registers `node` as an extra member of the keyed infoset without touching
  // the node's own infoset assignment. Only useful for building broken trees.
  void force_member(const std::string& infoset_key, NodeId node);

  GameTree finalize();

 private:
  struct ProtoNode {
    NodeKind kind;
    int8_t player = kChancePlayer;
    NodeId parent = kNoNode;
    int infoset = -1;
    std::vector<NodeId> children;
    std::vector<double> probs;
    std::vector<double> payoffs;
    std::vector<double> rewards;
  };
  struct ProtoInfoset {
    int8_t player;
    std::vector<std::string> actions;
    std::vector<NodeId> members;
    std::vector<NodeId> forced;
  };

  int infoset_for(PlayerId player, const std::string& key,
                  const std::vector<std::string>& actions);

  std::string name_;
  int num_players_;
  double discount_;
  bool zero_sum_expected_ = false;
  bool has_rewards_ = false;
  std::vector<ProtoNode> nodes_;
  std::vector<ProtoInfoset> infosets_;
  std::vector<std::string> infoset_keys_;
  std::unordered_map<std::string, int> key_index_;
};

}  // namespace nashlab
