#ifndef PPOLAB_GAE_HPP_
#define PPOLAB_GAE_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ppolab/errors.hpp"

namespace ppolab {

// Advantages and value targets for one fixed-horizon rollout stream.
struct AdvantageBuffer {
  std::vector<double> advantages;
  std::vector<double> value_targets;
  double gamma = 0.99;
  double lam = 0.95;
};

// Generalized advantage estimation over one stream.
//
// dones[t] == 1 means the transition at step t terminated the episode, so
// s_{t+1} is a fresh reset: the bootstrap and the lambda recursion are cut
// there. values has length T+1 (values[T] bootstraps the open tail).
// Backward form: A_t = delta_t + gamma*lam*(1-dones[t])*A_{t+1} with
// delta_t = r_t + gamma*(1-dones[t])*values[t+1] - values[t].
inline AdvantageBuffer compute_gae(std::span<const double> rewards,
                                   std::span<const double> values,
                                   std::span<const int> dones, double gamma,
                                   double lam) {
  const std::size_t T = rewards.size();
  if (values.size() != T + 1)
    throw ShapeError("compute_gae: values must have length T+1");
  if (dones.size() != T)
    throw ShapeError("compute_gae: dones must have length T");

  AdvantageBuffer buf;
  buf.gamma = gamma;
  buf.lam = lam;
  buf.advantages.assign(T, 0.0);
  buf.value_targets.assign(T, 0.0);

  double tail = 0.0;
  for (std::size_t t = T; t-- > 0;) {
    double nonterminal = dones[t] ? 0.0 : 1.0;
    double delta =
        rewards[t] + gamma * nonterminal * values[t + 1] - values[t];
    tail = delta + gamma * lam * nonterminal * tail;
    buf.advantages[t] = tail;
    buf.value_targets[t] = tail + values[t];
  }
  return buf;
}

// Zero-mean, unit-variance (population std) standardization with a 1e-8
// denominator guard; constant inputs map to zeros.
inline std::vector<double> normalize_advantages(std::span<const double> adv) {
  if (adv.size() < 2)
    throw ShapeError("normalize_advantages: need at least 2 samples");
  double mean = 0.0;
  for (double a : adv) mean += a;
  mean /= static_cast<double>(adv.size());
  double var = 0.0;
  for (double a : adv) var += (a - mean) * (a - mean);
  var /= static_cast<double>(adv.size());
  double denom = std::sqrt(var) + 1e-8;
  std::vector<double> out(adv.size());
  for (std::size_t i = 0; i < adv.size(); ++i) out[i] = (adv[i] - mean) / denom;
  return out;
}

}  // namespace ppolab

#endif  // PPOLAB_GAE_HPP_
