#include "nashlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "nashlab/advantage.hpp"
#include "nashlab/values.hpp"

namespace nashlab {

ConvergenceVerdict detect_convergence(std::span<const double> residuals, int window,
                                      double threshold) {
  if (window <= 0) throw std::invalid_argument("detect_convergence: window must be > 0");
  if (static_cast<int>(residuals.size()) < window)
    throw std::invalid_argument("detect_convergence: series shorter than window");
  ConvergenceVerdict v;
  v.window = window;
  v.threshold = threshold;
  v.window_max = 0.0;
  for (size_t i = residuals.size() - window; i < residuals.size(); ++i)
    v.window_max = std::max(v.window_max, residuals[i]);
  v.converged = v.window_max <= threshold;
  return v;
}

HypomonotonicityProbe probe_hypomonotonicity(const GameTree& tree,
                                             const BehavioralPolicy& anchor,
                                             int n_samples, double radius,
                                             uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("probe: n_samples must be >= 1");
  if (radius <= 0.0 || radius > 1.0)
    throw std::invalid_argument("probe: radius must be in (0, 1]");
  if (!check_policy(tree, anchor).empty())
    throw std::invalid_argument("probe: invalid anchor policy");

  AdvantageEvaluator eval(tree);
  ActionTable w_anchor = eval.compute(anchor).w;
  // anchor external reach mass per infoset, used by the weighted variant
  std::vector<double> anchor_weight = eval.last().infoset_weight;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  HypomonotonicityProbe probe;
  BehavioralPolicy sample(tree);

  for (int s = 0; s < n_samples; ++s) {
    bool distinct = false;
    while (!distinct) {
      double t = radius * (1.0 - unif(rng));  // (0, radius]
      for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
        auto row = sample.at(tree, i);
        auto base = anchor.at(tree, i);
        double z = 0.0;
        for (double& x : row) {
          x = -std::log(1.0 - unif(rng));
          z += x;
        }
        for (size_t a = 0; a < row.size(); ++a)
          row[a] = (1.0 - t) * base[a] + t * (row[a] / z);
      }
      distinct = sample.data() != anchor.data();
    }
    ActionTable w_sample = eval.compute(sample).w;

    double num = 0.0, den = 0.0, wnum = 0.0, wden = 0.0;
    for (InfosetId i = 0; i < tree.num_infosets(); ++i) {
      auto ps = sample.at(tree, i);
      auto pa = anchor.at(tree, i);
      auto ws = w_sample.at(tree, i);
      auto wa = w_anchor.at(tree, i);
      double kappa = anchor_weight[i];
      for (size_t a = 0; a < ps.size(); ++a) {
        double dp = ps[a] - pa[a];
        double dw = ws[a] - wa[a];
        num += dp * dw;
        den += dp * dp;
        wnum += kappa * dp * dw;
        wden += kappa * dp * dp;
      }
    }
    probe.ratios.push_back(num / den);
    probe.weighted_ratios.push_back(wden > 0.0 ? wnum / wden : 0.0);
  }
  probe.mu_estimate = *std::max_element(probe.ratios.begin(), probe.ratios.end());
  probe.mu_estimate_weighted =
      *std::max_element(probe.weighted_ratios.begin(), probe.weighted_ratios.end());
  return probe;
}

TuneResult tune_eps(const std::function<EpsProbe(double)>& probe, double lo, double hi,
                    double precision) {
  if (!(0.0 < lo && lo < hi)) throw std::invalid_argument("tune_eps: need 0 < lo < hi");
  if (precision <= 0.0) throw std::invalid_argument("tune_eps: precision must be > 0");

  TuneResult r;
  EpsProbe at_hi = probe(hi);
  EpsProbe at_lo = probe(lo);
  r.probe_count = 2;
  r.hi_converged = at_hi.converged;
  r.lo_converged = at_lo.converged;
  r.lo = lo;
  r.hi = hi;
  if (!at_hi.converged) return r;  // nothing in range converges
  if (at_lo.converged) {
    // everything converges; report the tightest bracket at the low end
    r.chosen = lo;
    r.chosen_nashconv = at_lo.final_nashconv;
    r.hi = std::min(hi, lo + precision);
    return r;
  }
  double chosen = hi;
  double chosen_nc = at_hi.final_nashconv;
  while (r.hi - r.lo > precision) {
    double mid = 0.5 * (r.lo + r.hi);
    EpsProbe pm = probe(mid);
    ++r.probe_count;
    r.probes.emplace_back(mid, pm.converged);
    if (pm.converged) {
      r.hi = mid;
      chosen = mid;
      chosen_nc = pm.final_nashconv;
    } else {
      r.lo = mid;
    }
  }
  r.chosen = chosen;
  r.chosen_nashconv = chosen_nc;
  return r;
}

Lemma1Report verify_lemma1(const GameTree& tree, int trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_lemma1: trials must be >= 1");
  const int n = tree.num_players();
  const double gamma = tree.discount();
  Lemma1Report rep;
  rep.trials = trials;

  for (int t = 0; t < trials; ++t) {
    BehavioralPolicy pi = random_policy(tree, seed * 977 + 2 * t);
    BehavioralPolicy dagger_full = random_policy(tree, seed * 977 + 2 * t + 1);
    PlayerId i = t % n;

    // mixed profile: player i deviates to dagger, everyone else keeps pi
    BehavioralPolicy mixed = pi;
    for (InfosetId is = 0; is < tree.num_infosets(); ++is) {
      if (tree.infoset(is).player != i) continue;
      auto src = dagger_full.at(tree, is);
      auto dst = mixed.at(tree, is);
      std::copy(src.begin(), src.end(), dst.begin());
    }

    ValueTables v_pi = expected_values(tree, pi);
    ValueTables v_mixed = expected_values(tree, mixed);
    double lhs = v_mixed.utility(i) - v_pi.utility(i);

    // exhaustive trajectory enumeration under the mixed profile: every
    // root-to-terminal path contributes prob * sum of gamma^depth advantages
    // of pi at player i's decision nodes along it
    double rhs = 0.0;
    std::vector<std::pair<NodeId, std::pair<double, double>>> stack;
    stack.push_back({0, {1.0, 0.0}});
    while (!stack.empty()) {
      auto [id, pa] = stack.back();
      auto [prob, acc] = pa;
      stack.pop_back();
      const Node& nd = tree.node(id);
      if (nd.kind == NodeKind::kTerminal) {
        rhs += prob * acc;
        continue;
      }
      for (int a = 0; a < nd.num_children; ++a) {
        NodeId c = nd.first_child + a;
        double p, add = 0.0;
        if (nd.kind == NodeKind::kChance) {
          p = tree.chance_probs(id)[a];
        } else {
          p = mixed.at(tree, nd.infoset)[a];
          if (nd.player == i)
            add = std::pow(gamma, tree.decision_depth(id)) *
                  v_pi.advantage(tree, id, a, i);
        }
        stack.push_back({c, {prob * p, acc + add}});
      }
    }
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(lhs - rhs));
  }
  return rep;
}

}  // namespace nashlab
