#include "nashlab/policy.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "nashlab/kernels.hpp"
#include "nashlab/util.hpp"

namespace nashlab {

BehavioralPolicy uniform_policy(const GameTree& tree) {
  BehavioralPolicy p(tree);
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    auto row = p.at(tree, i);
    double v = 1.0 / row.size();
    for (double& x : row) x = v;
  }
  return p;
}

BehavioralPolicy random_policy(const GameTree& tree, uint64_t seed, double min_prob) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  BehavioralPolicy p(tree);
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    auto row = p.at(tree, i);
    double s = 0.0;
    for (double& x : row) {
      x = -std::log(1.0 - unif(rng));  // Dirichlet(1)
      s += x;
    }
    double floor = min_prob;
    double scale = (1.0 - floor * row.size()) / s;
    for (double& x : row) x = floor + x * scale;
  }
  return p;
}

std::vector<std::string> check_policy(const GameTree& tree, const BehavioralPolicy& p) {
  std::vector<std::string> out;
  if (p.size() != static_cast<size_t>(tree.num_action_slots())) {
    out.push_back("policy has " + std::to_string(p.size()) + " slots, game needs " +
                  std::to_string(tree.num_action_slots()));
    return out;
  }
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    auto row = p.at(tree, i);
    double s = 0.0;
    for (double x : row) {
      if (x < 0.0)
        out.push_back("infoset " + std::to_string(i) + " has a negative probability");
      s += x;
    }
    if (std::abs(s - 1.0) > 1e-12)
      out.push_back("infoset " + std::to_string(i) + " probabilities sum to " +
                    format_double(s));
  }
  return out;
}

void softmax_choice_into(const GameTree& tree, const ScoreTable& y, double eps,
                         BehavioralPolicy& out) {
  if (eps <= 0.0) throw std::invalid_argument("softmax_choice: eps must be positive");
  if (y.size() != static_cast<size_t>(tree.num_action_slots()))
    throw std::invalid_argument("softmax_choice: score table size mismatch");
  if (out.size() != y.size()) out = BehavioralPolicy(tree);

  const double inv_eps = 1.0 / eps;
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    auto src = y.at(tree, i);
    auto dst = out.at(tree, i);
    double m = src[0];
    for (double v : src) m = std::max(m, v);
    for (size_t a = 0; a < src.size(); ++a) dst[a] = (src[a] - m) * inv_eps;
  }
  kernels::vexp(out.data());
  for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
    auto dst = out.at(tree, i);
    double s = 0.0;
    for (double v : dst) s += v;
    double inv = 1.0 / s;
    for (double& v : dst) v *= inv;
  }
}

BehavioralPolicy softmax_choice(const GameTree& tree, const ScoreTable& y, double eps) {
  BehavioralPolicy out(tree);
  softmax_choice_into(tree, y, eps, out);
  return out;
}

}  // namespace nashlab
