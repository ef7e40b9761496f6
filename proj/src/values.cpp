#include "nashlab/values.hpp"

#include <stdexcept>

namespace nashlab {

ValueTables expected_values(const GameTree& tree, const BehavioralPolicy& policy) {
  if (policy.size() != static_cast<size_t>(tree.num_action_slots()))
    throw std::invalid_argument("expected_values: policy domain mismatch");
  const int n = tree.num_players();
  const double gamma = tree.discount();
  ValueTables vt;
  vt.num_players = n;
  vt.value.assign(static_cast<size_t>(tree.num_nodes()) * n, 0.0);
  vt.action_value.assign(static_cast<size_t>(tree.num_nodes()) * n, 0.0);

  // Reverse preorder: children before parents.
  for (NodeId id = tree.num_nodes() - 1; id >= 0; --id) {
    const Node& nd = tree.node(id);
    double* v = vt.value.data() + static_cast<size_t>(id) * n;
    switch (nd.kind) {
      case NodeKind::kTerminal: {
        auto pay = tree.payoffs(id);
        for (int j = 0; j < n; ++j) v[j] = pay[j];
        break;
      }
      case NodeKind::kChance: {
        auto probs = tree.chance_probs(id);
        for (int a = 0; a < nd.num_children; ++a) {
          NodeId c = nd.first_child + a;
          const double* cv = vt.value.data() + static_cast<size_t>(c) * n;
          double* q = vt.action_value.data() + static_cast<size_t>(c) * n;
          for (int j = 0; j < n; ++j) {
            q[j] = cv[j];
            v[j] += probs[a] * cv[j];
          }
        }
        break;
      }
      case NodeKind::kDecision: {
        auto probs = policy.at(tree, nd.infoset);
        for (int a = 0; a < nd.num_children; ++a) {
          NodeId c = nd.first_child + a;
          const double* cv = vt.value.data() + static_cast<size_t>(c) * n;
          auto rew = tree.rewards(c);
          double* q = vt.action_value.data() + static_cast<size_t>(c) * n;
          for (int j = 0; j < n; ++j) {
            q[j] = (rew.empty() ? 0.0 : rew[j]) + gamma * cv[j];
            v[j] += probs[a] * q[j];
          }
        }
        break;
      }
    }
  }
  return vt;
}

}  // namespace nashlab
