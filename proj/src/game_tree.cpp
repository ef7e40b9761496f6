#include "nashlab/game_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "nashlab/util.hpp"

namespace nashlab {

namespace {

constexpr double kProbTol = 1e-12;
constexpr double kZeroSumTol = 1e-12;

}  // namespace

GameTreeBuilder::GameTreeBuilder(std::string name, int num_players, double discount)
    : name_(std::move(name)), num_players_(num_players), discount_(discount) {
  if (num_players < 1) throw std::invalid_argument("num_players must be >= 1");
  if (discount <= 0.0 || discount > 1.0)
    throw std::invalid_argument("discount must be in (0, 1]");
}

int GameTreeBuilder::infoset_for(PlayerId player, const std::string& key,
                                 const std::vector<std::string>& actions) {
  auto it = key_index_.find(key);
  if (it != key_index_.end()) return it->second;
  int idx = static_cast<int>(infosets_.size());
  key_index_.emplace(key, idx);
  infosets_.push_back(ProtoInfoset{static_cast<int8_t>(player), actions, {}, {}});
  infoset_keys_.push_back(key);
  return idx;
}

NodeId GameTreeBuilder::add_chance(NodeId parent) {
  ProtoNode n;
  n.kind = NodeKind::kChance;
  n.parent = parent;
  nodes_.push_back(std::move(n));
  NodeId id = static_cast<NodeId>(nodes_.size() - 1);
  if (parent != kNoNode) nodes_[parent].children.push_back(id);
  return id;
}

NodeId GameTreeBuilder::add_decision(NodeId parent, PlayerId player,
                                     const std::string& infoset_key,
                                     const std::vector<std::string>& actions) {
  ProtoNode n;
  n.kind = NodeKind::kDecision;
  n.player = static_cast<int8_t>(player);
  n.parent = parent;
  n.infoset = infoset_for(player, infoset_key, actions);
  nodes_.push_back(std::move(n));
  NodeId id = static_cast<NodeId>(nodes_.size() - 1);
  if (parent != kNoNode) nodes_[parent].children.push_back(id);
  infosets_[nodes_[id].infoset].members.push_back(id);
  return id;
}

NodeId GameTreeBuilder::add_terminal(NodeId parent, const std::vector<double>& payoffs) {
  if (static_cast<int>(payoffs.size()) != num_players_)
    throw std::invalid_argument("terminal payoff count must equal num_players");
  ProtoNode n;
  n.kind = NodeKind::kTerminal;
  n.parent = parent;
  n.payoffs = payoffs;
  nodes_.push_back(std::move(n));
  NodeId id = static_cast<NodeId>(nodes_.size() - 1);
  if (parent != kNoNode) nodes_[parent].children.push_back(id);
  return id;
}

void GameTreeBuilder::set_chance_probs(NodeId id, const std::vector<double>& probs) {
  nodes_[id].probs = probs;
}

void GameTreeBuilder::set_rewards(NodeId id, const std::vector<double>& rewards) {
  if (static_cast<int>(rewards.size()) != num_players_)
    throw std::invalid_argument("reward count must equal num_players");
  nodes_[id].rewards = rewards;
  has_rewards_ = true;
}

void GameTreeBuilder::force_member(const std::string& infoset_key, NodeId node) {
  auto it = key_index_.find(infoset_key);
  if (it == key_index_.end())
    throw std::invalid_argument("force_member: unknown infoset key");
  infosets_[it->second].forced.push_back(node);
}

GameTree GameTreeBuilder::finalize() {
  if (nodes_.empty()) throw std::runtime_error("finalize: empty tree");

  // DFS preorder from node 0, children in action order.
  std::vector<NodeId> order;
  order.reserve(nodes_.size());
  std::vector<NodeId> stack{0};
  std::vector<NodeId> remap(nodes_.size(), kNoNode);
  while (!stack.empty()) {
    NodeId cur = stack.back();
    stack.pop_back();
    remap[cur] = static_cast<NodeId>(order.size());
    order.push_back(cur);
    const auto& kids = nodes_[cur].children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  if (order.size() != nodes_.size())
    throw std::runtime_error("finalize: tree has unreachable nodes");

  GameTree t;
  t.name_ = name_;
  t.num_players_ = num_players_;
  t.discount_ = discount_;
  t.zero_sum_expected_ = zero_sum_expected_;
  t.nodes_.resize(nodes_.size());
  if (has_rewards_) t.rewards_.assign(nodes_.size() * num_players_, 0.0);

  // Infosets renumbered by first-member preorder so ids are canonical.
  std::vector<int> iorder(infosets_.size());
  std::iota(iorder.begin(), iorder.end(), 0);
  std::vector<NodeId> first_member(infosets_.size(), kNoNode);
  for (size_t i = 0; i < infosets_.size(); ++i) {
    NodeId best = kNoNode;
    for (NodeId m : infosets_[i].members)
      if (best == kNoNode || remap[m] < best) best = remap[m];
    first_member[i] = best;
  }
  std::sort(iorder.begin(), iorder.end(),
            [&](int a, int b) { return first_member[a] < first_member[b]; });
  std::vector<int> imap(infosets_.size());
  for (size_t i = 0; i < iorder.size(); ++i) imap[iorder[i]] = static_cast<int>(i);

  for (size_t ni = 0; ni < order.size(); ++ni) {
    const ProtoNode& pn = nodes_[order[ni]];
    Node& n = t.nodes_[ni];
    n.kind = pn.kind;
    n.player = pn.player;
    n.parent = pn.parent == kNoNode ? kNoNode : remap[pn.parent];
    n.num_children = static_cast<int32_t>(pn.children.size());
    n.first_child = pn.children.empty() ? kNoNode : remap[pn.children.front()];
    n.infoset = pn.infoset < 0 ? kNoInfoset : imap[pn.infoset];
    switch (pn.kind) {
      case NodeKind::kChance:
        n.data = static_cast<int32_t>(t.chance_probs_.size());
        t.chance_probs_.insert(t.chance_probs_.end(), pn.probs.begin(), pn.probs.end());
        if (pn.probs.size() != pn.children.size())
          throw std::runtime_error("finalize: chance probs/children size mismatch");
        ++t.num_chance_;
        break;
      case NodeKind::kDecision:
        ++t.num_decisions_;
        break;
      case NodeKind::kTerminal:
        n.data = static_cast<int32_t>(t.payoffs_.size());
        t.payoffs_.insert(t.payoffs_.end(), pn.payoffs.begin(), pn.payoffs.end());
        ++t.num_terminals_;
        break;
    }
    if (!pn.rewards.empty())
      std::copy(pn.rewards.begin(), pn.rewards.end(),
                t.rewards_.begin() + static_cast<size_t>(ni) * num_players_);
  }

  t.infosets_.resize(infosets_.size());
  int slot = 0;
  for (size_t i = 0; i < iorder.size(); ++i) {
    const ProtoInfoset& pi = infosets_[iorder[i]];
    InfoSet& is = t.infosets_[i];
    is.player = pi.player;
    is.actions = pi.actions;
    is.slot = slot;
    slot += is.num_actions();
    for (NodeId m : pi.members) is.members.push_back(remap[m]);
    for (NodeId m : pi.forced) is.members.push_back(remap[m]);
    std::sort(is.members.begin(), is.members.end());
    t.max_actions_ = std::max(t.max_actions_, is.num_actions());
  }
  t.num_action_slots_ = slot;

  // Depth tables. Parents precede children in preorder, so a forward pass works.
  t.decision_depth_.assign(t.nodes_.size(), 0);
  std::vector<int32_t> own(t.nodes_.size() * num_players_, 0);
  t.player_horizon_.assign(num_players_, 0);
  for (NodeId id = 0; id < static_cast<NodeId>(t.nodes_.size()); ++id) {
    const Node& n = t.nodes_[id];
    if (n.parent != kNoNode) {
      const Node& p = t.nodes_[n.parent];
      bool pd = p.kind == NodeKind::kDecision;
      t.decision_depth_[id] = t.decision_depth_[n.parent] + (pd ? 1 : 0);
      for (int j = 0; j < num_players_; ++j)
        own[id * num_players_ + j] =
            own[n.parent * num_players_ + j] + (pd && p.player == j ? 1 : 0);
    }
    t.max_decision_depth_ = std::max(t.max_decision_depth_, t.decision_depth_[id]);
    for (int j = 0; j < num_players_; ++j)
      t.player_horizon_[j] = std::max(t.player_horizon_[j], own[id * num_players_ + j]);
  }

  // Infoset depth and own-history parent links come from the first member;
  // validate() re-checks them against every member.
  for (auto& is : t.infosets_) {
    if (is.members.empty()) continue;
    NodeId m = is.members.front();
    is.depth = own[m * num_players_ + is.player];
    NodeId cur = t.nodes_[m].parent;
    NodeId prev = m;
    while (cur != kNoNode) {
      const Node& pn = t.nodes_[cur];
      if (pn.kind == NodeKind::kDecision && pn.player == is.player) {
        is.parent = pn.infoset;
        is.parent_action = prev - pn.first_child;
        break;
      }
      prev = cur;
      cur = pn.parent;
    }
  }

  double pmin = 0.0, pmax = 0.0;
  bool first = true;
  for (double v : t.payoffs_) {
    if (first) { pmin = pmax = v; first = false; }
    pmin = std::min(pmin, v);
    pmax = std::max(pmax, v);
  }
  t.payoff_spread_ = pmax - pmin;
  return t;
}

std::vector<std::string> GameTree::validate() const {
  std::vector<std::string> out;
  auto fail = [&](std::string msg) { out.push_back(std::move(msg)); };

  if (nodes_.empty()) {
    fail("tree has no nodes");
    return out;
  }
  if (nodes_[0].parent != kNoNode) fail("root has a parent");
  for (NodeId id = 1; id < static_cast<NodeId>(nodes_.size()); ++id)
    if (nodes_[id].parent == kNoNode)
      fail("node " + std::to_string(id) + " has no parent (second root)");

  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    const Node& n = nodes_[id];
    for (int a = 0; a < n.num_children; ++a) {
      NodeId c = n.first_child + a;
      if (c < 0 || c >= static_cast<NodeId>(nodes_.size())) {
        fail("node " + std::to_string(id) + " child out of range");
        continue;
      }
      if (nodes_[c].parent != id)
        fail("node " + std::to_string(c) + " parent link does not match node " +
             std::to_string(id));
    }
    switch (n.kind) {
      case NodeKind::kChance: {
        if (n.num_children == 0) fail("chance node " + std::to_string(id) + " has no children");
        double s = 0.0;
        for (double p : chance_probs(id)) {
          if (p < 0.0) fail("chance node " + std::to_string(id) + " has negative probability");
          s += p;
        }
        if (std::abs(s - 1.0) > kProbTol)
          fail("chance node " + std::to_string(id) + " probabilities sum to " +
               format_double(s));
        break;
      }
      case NodeKind::kDecision:
        if (n.infoset == kNoInfoset)
          fail("decision node " + std::to_string(id) + " has no infoset");
        if (n.player < 0 || n.player >= num_players_)
          fail("decision node " + std::to_string(id) + " has invalid player");
        if (n.num_children == 0)
          fail("decision node " + std::to_string(id) + " has no children");
        break;
      case NodeKind::kTerminal: {
        if (n.num_children != 0) fail("terminal node " + std::to_string(id) + " has children");
        if (zero_sum_expected_) {
          double s = 0.0;
          for (double v : payoffs(id)) s += v;
          if (std::abs(s) > kZeroSumTol)
            fail("terminal node " + std::to_string(id) + " payoffs sum to " +
                 format_double(s));
        }
        break;
      }
    }
  }

  // Infoset membership must be a partition of the decision nodes.
  std::vector<int> owner(nodes_.size(), -1);
  for (InfosetId i = 0; i < static_cast<InfosetId>(infosets_.size()); ++i) {
    const InfoSet& is = infosets_[i];
    if (is.members.empty()) fail("infoset " + std::to_string(i) + " has no members");
    for (NodeId m : is.members) {
      const Node& n = nodes_[m];
      if (n.kind != NodeKind::kDecision)
        fail("infoset " + std::to_string(i) + " member " + std::to_string(m) +
             " is not a decision node");
      else {
        if (n.player != is.player)
          fail("infoset " + std::to_string(i) + " member " + std::to_string(m) +
               " has a different acting player");
        if (n.num_children != is.num_actions())
          fail("infoset " + std::to_string(i) + " member " + std::to_string(m) +
               " child count does not match action list");
      }
      if (owner[m] == -1)
        owner[m] = i;
      else
        fail("node " + std::to_string(m) + " belongs to infosets " +
             std::to_string(owner[m]) + " and " + std::to_string(i));
      if (n.infoset != i && owner[m] == i)
        fail("node " + std::to_string(m) + " membership inconsistent with its infoset id");
    }
  }
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id)
    if (nodes_[id].kind == NodeKind::kDecision && owner[id] == -1 &&
        nodes_[id].infoset == kNoInfoset)
      fail("decision node " + std::to_string(id) + " not covered by any infoset");

  // Perfect recall: all members of an infoset share the acting player's
  // (infoset, action) sequence along their root paths, and hence the depth.
  for (InfosetId i = 0; i < static_cast<InfosetId>(infosets_.size()); ++i) {
    const InfoSet& is = infosets_[i];
    std::vector<std::pair<InfosetId, int>> ref;
    bool have_ref = false;
    for (NodeId m : is.members) {
      if (nodes_[m].kind != NodeKind::kDecision) continue;
      std::vector<std::pair<InfosetId, int>> seq;
      NodeId prev = m, cur = nodes_[m].parent;
      while (cur != kNoNode) {
        const Node& pn = nodes_[cur];
        if (pn.kind == NodeKind::kDecision && pn.player == is.player)
          seq.emplace_back(pn.infoset, prev - pn.first_child);
        prev = cur;
        cur = pn.parent;
      }
      std::reverse(seq.begin(), seq.end());
      if (!have_ref) {
        ref = std::move(seq);
        have_ref = true;
      } else if (seq != ref) {
        fail("infoset " + std::to_string(i) + " violates perfect recall at node " +
             std::to_string(m));
      }
    }
    if (have_ref && static_cast<int32_t>(ref.size()) != is.depth)
      fail("infoset " + std::to_string(i) + " depth inconsistent with own history");
  }
  return out;
}

std::string GameTree::dump() const {
  std::ostringstream os;
  os << "game " << name_ << "\n";
  os << "players " << num_players_ << "\n";
  os << "discount " << format_double(discount_) << "\n";
  os << "nodes " << num_nodes() << " infosets " << num_infosets() << "\n";
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    const Node& n = nodes_[id];
    os << id;
    switch (n.kind) {
      case NodeKind::kChance: {
        os << " C parent=" << n.parent << " children=" << n.first_child << "+"
           << n.num_children << " probs=";
        auto ps = chance_probs(id);
        for (size_t k = 0; k < ps.size(); ++k)
          os << (k ? "," : "") << format_double(ps[k]);
        break;
      }
      case NodeKind::kDecision:
        os << " D parent=" << n.parent << " player=" << int(n.player)
           << " infoset=" << n.infoset << " children=" << n.first_child << "+"
           << n.num_children;
        break;
      case NodeKind::kTerminal: {
        os << " T parent=" << n.parent << " pay=";
        auto ps = payoffs(id);
        for (size_t k = 0; k < ps.size(); ++k)
          os << (k ? "," : "") << format_double(ps[k]);
        break;
      }
    }
    os << "\n";
  }
  for (InfosetId i = 0; i < static_cast<InfosetId>(infosets_.size()); ++i) {
    const InfoSet& is = infosets_[i];
    os << "I " << i << " player=" << int(is.player) << " depth=" << is.depth
       << " actions=";
    for (size_t k = 0; k < is.actions.size(); ++k)
      os << (k ? "," : "") << is.actions[k];
    os << " members=";
    for (size_t k = 0; k < is.members.size(); ++k)
      os << (k ? "," : "") << is.members[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace nashlab
