#include "nashlab/best_response.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nashlab {

BehavioralPolicy BestResponseResult::apply_to(const GameTree& tree,
                                              const BehavioralPolicy& base) const {
  BehavioralPolicy out = base;
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    if (tree.infoset(i).player != player) continue;
    auto row = out.at(tree, i);
    std::fill(row.begin(), row.end(), 0.0);
    row[action[i]] = 1.0;
  }
  return out;
}

namespace {

// Expected value of `policy` for one player, per-edge convention matching
// expected_values().
double policy_value(const GameTree& tree, const BehavioralPolicy& policy,
                    PlayerId player) {
  const double gamma = tree.discount();
  std::vector<double> v(tree.num_nodes());
  for (NodeId id = tree.num_nodes() - 1; id >= 0; --id) {
    const Node& nd = tree.node(id);
    switch (nd.kind) {
      case NodeKind::kTerminal:
        v[id] = tree.payoffs(id)[player];
        break;
      case NodeKind::kChance: {
        auto probs = tree.chance_probs(id);
        double s = 0.0;
        for (int a = 0; a < nd.num_children; ++a)
          s += probs[a] * v[nd.first_child + a];
        v[id] = s;
        break;
      }
      case NodeKind::kDecision: {
        auto probs = policy.at(tree, nd.infoset);
        double s = 0.0;
        for (int a = 0; a < nd.num_children; ++a) {
          NodeId c = nd.first_child + a;
          auto rew = tree.rewards(c);
          s += probs[a] * ((rew.empty() ? 0.0 : rew[player]) + gamma * v[c]);
        }
        v[id] = s;
        break;
      }
    }
  }
  return v[0];
}

}  // namespace

BestResponseResult best_response(const GameTree& tree, const BehavioralPolicy& policy,
                                 PlayerId player) {
  if (player < 0 || player >= tree.num_players())
    throw std::invalid_argument("best_response: invalid player index");
  if (!check_policy(tree, policy).empty())
    throw std::invalid_argument("best_response: invalid policy");
  const double gamma = tree.discount();
  const int nodes = tree.num_nodes();

  // External reach and cumulative discounted rewards along the path.
  std::vector<double> ext(nodes), cum(nodes);
  ext[0] = 1.0;
  cum[0] = 0.0;
  std::vector<double> disc(nodes, 1.0);  // gamma^(decision depth)
  for (NodeId id = 0; id < nodes; ++id) {
    const Node& nd = tree.node(id);
    if (nd.kind == NodeKind::kTerminal) continue;
    const double* row = nd.kind == NodeKind::kChance
                            ? tree.chance_probs(id).data()
                            : policy.at(tree, nd.infoset).data();
    bool mine = nd.kind == NodeKind::kDecision && nd.player == player;
    bool deciding = nd.kind == NodeKind::kDecision;
    for (int a = 0; a < nd.num_children; ++a) {
      NodeId c = nd.first_child + a;
      ext[c] = ext[id] * (mine ? 1.0 : row[a]);
      disc[c] = disc[id] * (deciding ? gamma : 1.0);
      double r = 0.0;
      if (deciding && tree.has_edge_rewards()) {
        auto rew = tree.rewards(c);
        if (!rew.empty()) r = rew[player];
      }
      cum[c] = cum[id] + disc[id] * r;
    }
  }

  BestResponseResult res;
  res.player = player;
  res.action.assign(tree.num_infosets(), -1);

  // Deepest-first over the player's infosets; ids ascending within a depth.
  std::vector<InfosetId> mine;
  for (InfosetId i = 0; i < tree.num_infosets(); ++i)
    if (tree.infoset(i).player == player) mine.push_back(i);
  std::stable_sort(mine.begin(), mine.end(), [&](InfosetId a, InfosetId b) {
    return tree.infoset(a).depth > tree.infoset(b).depth;
  });

  // S(h): sum over terminals reachable from h (following fixed best-response
  // actions at the player's nodes) of ext * discounted path payoff.
  std::vector<double> s_val(nodes);
  std::vector<uint8_t> s_done(nodes, 0);
  auto resolve = [&](auto&& self, NodeId id) -> double {
    if (s_done[id]) return s_val[id];
    const Node& nd = tree.node(id);
    double s = 0.0;
    if (nd.kind == NodeKind::kTerminal) {
      s = ext[id] * (cum[id] + disc[id] * tree.payoffs(id)[player]);
    } else if (nd.kind == NodeKind::kDecision && nd.player == player) {
      int br = res.action[nd.infoset];
      s = self(self, nd.first_child + br);
      // the path rewards of skipped branches never enter: cum is per-node
    } else {
      for (int a = 0; a < nd.num_children; ++a) s += self(self, nd.first_child + a);
    }
    s_done[id] = 1;
    s_val[id] = s;
    return s;
  };

  for (InfosetId i : mine) {
    const InfoSet& is = tree.infoset(i);
    int best = 0;
    double best_v = 0.0;
    for (int a = 0; a < is.num_actions(); ++a) {
      double v = 0.0;
      for (NodeId m : is.members) v += resolve(resolve, tree.child(m, a));
      if (a == 0 || v > best_v) {
        best_v = v;
        best = a;
      }
    }
    res.action[i] = best;
  }

  std::fill(s_done.begin(), s_done.end(), 0);
  res.br_value = resolve(resolve, 0);
  res.baseline_value = policy_value(tree, policy, player);
  res.exploitability = res.br_value - res.baseline_value;
  return res;
}

NashConvResult nashconv(const GameTree& tree, const BehavioralPolicy& policy) {
  NashConvResult r;
  for (PlayerId p = 0; p < tree.num_players(); ++p) {
    BestResponseResult br = best_response(tree, policy, p);
    r.per_player.push_back(br.exploitability);
    r.br_value.push_back(br.br_value);
    r.baseline.push_back(br.baseline_value);
    r.total += br.exploitability;
  }
  if (r.total < -1e-9)
    throw std::logic_error("nashconv: negative total beyond tolerance");
  r.total = std::max(0.0, r.total);
  return r;
}

DeviationReport deviation_check(const GameTree& tree, const BehavioralPolicy& policy,
                                double eps) {
  if (eps < 0.0) throw std::invalid_argument("deviation_check: eps must be >= 0");
  DeviationReport rep;
  rep.eps = eps;
  rep.discount = tree.discount();
  rep.action_count = tree.max_actions();
  int horizon = 0;
  for (PlayerId p = 0; p < tree.num_players(); ++p)
    horizon = std::max(horizon, static_cast<int>(tree.player_horizon(p)));
  rep.horizon = horizon;
  double geo;
  if (rep.discount == 1.0) {
    geo = horizon;
  } else {
    geo = (1.0 - std::pow(rep.discount, horizon)) / (1.0 - rep.discount);
  }
  rep.bound = eps * std::log(static_cast<double>(rep.action_count)) * geo;
  NashConvResult nc = nashconv(tree, policy);
  rep.per_player = nc.per_player;
  rep.measured_deviation = 0.0;
  for (double e : nc.per_player)
    rep.measured_deviation = std::max(rep.measured_deviation, e);
  rep.satisfied = rep.measured_deviation <= rep.bound + 1e-9;
  return rep;
}

}  // namespace nashlab
