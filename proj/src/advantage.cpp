#include "nashlab/advantage.hpp"

#include <cstring>
#include <stdexcept>

namespace nashlab {

AdvantageEvaluator::AdvantageEvaluator(const GameTree& tree) : tree_(tree) {
  const size_t n = static_cast<size_t>(tree.num_nodes()) * tree.num_players();
  own_.resize(n);
  ext_.resize(n);
  value_.resize(n);
  out_.w = ActionTable(tree);
  out_.numerator = ActionTable(tree);
  out_.infoset_weight.resize(tree.num_infosets());
  out_.reached.resize(tree.num_infosets());
  out_.utility.resize(tree.num_players());
}

const AdvantageMap& AdvantageEvaluator::compute(const BehavioralPolicy& policy,
                                                ReachWeighting mode) {
  if (policy.size() != static_cast<size_t>(tree_.num_action_slots()))
    throw std::invalid_argument("advantage_map: policy domain mismatch");
  const int n = tree_.num_players();
  const int nodes = tree_.num_nodes();
  const double gamma = tree_.discount();
  const bool rewards = tree_.has_edge_rewards();

  std::fill(out_.numerator.data().begin(), out_.numerator.data().end(), 0.0);
  std::fill(out_.infoset_weight.begin(), out_.infoset_weight.end(), 0.0);

  // Top-down reach.
  for (int j = 0; j < n; ++j) {
    own_[j] = 1.0;
    ext_[j] = 1.0;
  }
  for (NodeId id = 0; id < nodes; ++id) {
    const Node& nd = tree_.node(id);
    if (nd.kind == NodeKind::kTerminal) continue;
    const double* row = nd.kind == NodeKind::kChance
                            ? tree_.chance_probs(id).data()
                            : policy.at(tree_, nd.infoset).data();
    const double* po = own_.data() + static_cast<size_t>(id) * n;
    const double* pe = ext_.data() + static_cast<size_t>(id) * n;
    const int actor = nd.kind == NodeKind::kDecision ? nd.player : -1;
    for (int a = 0; a < nd.num_children; ++a) {
      const double p = row[a];
      double* co = own_.data() + static_cast<size_t>(nd.first_child + a) * n;
      double* ce = ext_.data() + static_cast<size_t>(nd.first_child + a) * n;
      for (int j = 0; j < n; ++j) {
        co[j] = po[j] * (j == actor ? p : 1.0);
        ce[j] = pe[j] * (j == actor ? 1.0 : p);
      }
    }
  }

  // Bottom-up values with advantage accumulation at decision nodes.
  for (NodeId id = nodes - 1; id >= 0; --id) {
    const Node& nd = tree_.node(id);
    double* v = value_.data() + static_cast<size_t>(id) * n;
    switch (nd.kind) {
      case NodeKind::kTerminal: {
        auto pay = tree_.payoffs(id);
        for (int j = 0; j < n; ++j) v[j] = pay[j];
        break;
      }
      case NodeKind::kChance: {
        const double* probs = tree_.chance_probs(id).data();
        for (int j = 0; j < n; ++j) v[j] = 0.0;
        for (int a = 0; a < nd.num_children; ++a) {
          const double* cv = value_.data() + static_cast<size_t>(nd.first_child + a) * n;
          for (int j = 0; j < n; ++j) v[j] += probs[a] * cv[j];
        }
        break;
      }
      case NodeKind::kDecision: {
        const int actor = nd.player;
        const double* probs = policy.at(tree_, nd.infoset).data();
        double* num = out_.numerator.at(tree_, nd.infoset).data();
        double weight = ext_[static_cast<size_t>(id) * n + actor];
        if (mode == ReachWeighting::kFull)
          weight *= own_[static_cast<size_t>(id) * n + actor];
        const bool discounted = rewards || gamma != 1.0;
        for (int j = 0; j < n; ++j) v[j] = 0.0;
        for (int a = 0; a < nd.num_children; ++a) {
          NodeId c = nd.first_child + a;
          const double* cv = value_.data() + static_cast<size_t>(c) * n;
          if (discounted) {
            auto rew = tree_.rewards(c);
            for (int j = 0; j < n; ++j)
              v[j] += probs[a] * ((rew.empty() ? 0.0 : rew[j]) + gamma * cv[j]);
          } else {
            for (int j = 0; j < n; ++j) v[j] += probs[a] * cv[j];
          }
        }
        const double vp = v[actor];
        for (int a = 0; a < nd.num_children; ++a) {
          NodeId c = nd.first_child + a;
          double q = value_[static_cast<size_t>(c) * n + actor];
          if (discounted) {
            auto rew = tree_.rewards(c);
            q = (rew.empty() ? 0.0 : rew[actor]) + gamma * q;
          }
          num[a] += weight * (q - vp);
        }
        out_.infoset_weight[nd.infoset] += weight;
        break;
      }
    }
  }

  for (int j = 0; j < n; ++j) out_.utility[j] = value_[j];
  for (InfosetId i = 0; i < tree_.num_infosets(); ++i) {
    auto wrow = out_.w.at(tree_, i);
    auto nrow = out_.numerator.at(tree_, i);
    double z = out_.infoset_weight[i];
    out_.reached[i] = z > 0.0;
    if (z > 0.0) {
      double inv = 1.0 / z;
      for (size_t a = 0; a < wrow.size(); ++a) wrow[a] = nrow[a] * inv;
    } else {
      for (double& x : wrow) x = 0.0;
    }
  }
  return out_;
}

}  // namespace nashlab
