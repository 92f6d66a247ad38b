#ifndef PPOLAB_BATCH_HPP_
#define PPOLAB_BATCH_HPP_

#include <cstddef>
#include <vector>

#include "ppolab/env.hpp"

namespace ppolab {

// One environment step under the behavior policy.
struct Transition {
  std::vector<double> obs;  // as fed to the policy (post-normalization)
  Action action;
  double reward = 0.0;  // post-normalization when reward scaling is on
  bool done = false;
  double logprob_old = 0.0;
  double value_old = 0.0;
};

// Fixed-horizon slice of experience with advantages and value targets
// aligned 1:1 with the transitions.
struct RolloutBatch {
  std::vector<Transition> transitions;
  std::vector<double> advantages;
  std::vector<double> value_targets;

  std::size_t size() const { return transitions.size(); }

  RolloutBatch select(const std::vector<std::size_t>& indices) const {
    RolloutBatch mb;
    mb.transitions.reserve(indices.size());
    mb.advantages.reserve(indices.size());
    mb.value_targets.reserve(indices.size());
    for (std::size_t i : indices) {
      mb.transitions.push_back(transitions.at(i));
      mb.advantages.push_back(advantages.at(i));
      mb.value_targets.push_back(value_targets.at(i));
    }
    return mb;
  }
};

}  // namespace ppolab

#endif  // PPOLAB_BATCH_HPP_
