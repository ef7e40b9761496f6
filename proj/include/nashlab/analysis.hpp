#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nashlab/game_tree.hpp"
#include "nashlab/policy.hpp"

namespace nashlab {

struct ConvergenceVerdict {
  bool converged = false;
  int window = 0;
  double threshold = 0.0;
  // largest residual inside the trailing window
  double window_max = 0.0;
};

// converged iff every one of the last `window` residuals is <= threshold.
ConvergenceVerdict detect_convergence(std::span<const double> residuals, int window,
                                      double threshold);

struct HypomonotonicityProbe {
  // per-sample ratios <delta pi, delta w> / ||delta pi||^2
  std::vector<double> ratios;           // flat infoset-level coordinates
  std::vector<double> weighted_ratios;  // coordinates weighted by anchor external reach
  double mu_estimate = 0.0;
  double mu_estimate_weighted = 0.0;
};

// Samples policies within an L-inf ball around the anchor (Dirichlet draws
// mixed toward it) and estimates the local hypomonotonicity constant as the
// max ratio. An estimate, not a certificate.
HypomonotonicityProbe probe_hypomonotonicity(const GameTree& tree,
                                             const BehavioralPolicy& anchor,
                                             int n_samples, double radius,
                                             uint64_t seed);

struct EpsProbe {
  bool converged = false;
  double final_nashconv = 0.0;
};

struct TuneResult {
  std::vector<std::pair<double, bool>> probes;  // bisection probes, in order
  bool lo_converged = false;
  bool hi_converged = false;
  double lo = 0.0, hi = 0.0;  // final bracket (lo, hi]
  std::optional<double> chosen;
  double chosen_nashconv = 0.0;
  int probe_count = 0;  // bisection probes + the two endpoint checks
};

// Bisection on a convergence predicate over (lo, hi]. Expects failure at lo
// and success at hi; degenerate endpoint verdicts short-circuit.
TuneResult tune_eps(const std::function<EpsProbe(double)>& probe, double lo, double hi,
                    double precision);

struct Lemma1Report {
  double max_discrepancy = 0.0;
  int trials = 0;
};

// Performance-difference identity: for random pi and a deviating player's
// pi-dagger, the utility gap must equal the trajectory-weighted discounted
// advantage sum, enumerated exhaustively.
Lemma1Report verify_lemma1(const GameTree& tree, int trials, uint64_t seed);

}  // namespace nashlab
