#include "nashlab/reach.hpp"

#include <stdexcept>

namespace nashlab {

ReachDecomposition compute_reach(const GameTree& tree, const BehavioralPolicy& policy) {
  if (policy.size() != static_cast<size_t>(tree.num_action_slots()))
    throw std::invalid_argument("compute_reach: policy domain mismatch");
  const int n = tree.num_players();
  ReachDecomposition r;
  r.num_players = n;
  r.chance.assign(tree.num_nodes(), 1.0);
  r.own.assign(static_cast<size_t>(tree.num_nodes()) * n, 1.0);
  r.external.assign(static_cast<size_t>(tree.num_nodes()) * n, 1.0);

  // Preorder: parents before children.
  for (NodeId id = 0; id < tree.num_nodes(); ++id) {
    const Node& nd = tree.node(id);
    if (nd.kind == NodeKind::kTerminal) continue;
    const double* probs = nullptr;
    std::span<const double> row;
    if (nd.kind == NodeKind::kChance) {
      row = tree.chance_probs(id);
    } else {
      row = policy.at(tree, nd.infoset);
    }
    probs = row.data();
    for (int a = 0; a < nd.num_children; ++a) {
      NodeId c = nd.first_child + a;
      double p = probs[a];
      if (nd.kind == NodeKind::kChance) {
        r.chance[c] = r.chance[id] * p;
        for (int j = 0; j < n; ++j) {
          r.own[c * n + j] = r.own[id * n + j];
          r.external[c * n + j] = r.external[id * n + j] * p;
        }
      } else {
        r.chance[c] = r.chance[id];
        int actor = nd.player;
        for (int j = 0; j < n; ++j) {
          r.own[c * n + j] = r.own[id * n + j] * (j == actor ? p : 1.0);
          r.external[c * n + j] = r.external[id * n + j] * (j == actor ? 1.0 : p);
        }
      }
    }
  }
  return r;
}

}  // namespace nashlab
