#ifndef PPOLAB_ENV_HPP_
#define PPOLAB_ENV_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ppolab/errors.hpp"
#include "ppolab/rng.hpp"

namespace ppolab {

enum class EnvId { kPointReach, kChainWalk };

inline const char* env_name(EnvId id) {
  return id == EnvId::kPointReach ? "point" : "chain";
}

struct EnvSpec {
  EnvId id = EnvId::kChainWalk;
  std::size_t horizon = 64;

  void validate() const {
    if (horizon < 1) throw ConfigError("horizon must be >= 1");
  }

  std::size_t obs_dim() const {
    return id == EnvId::kPointReach ? 4 : 16;
  }
  bool continuous() const { return id == EnvId::kPointReach; }
  // Continuous: action vector length. Discrete: number of actions.
  std::size_t action_dim() const { return 2; }
};

inline EnvSpec env_spec_from_name(const std::string& name) {
  if (name == "point") return EnvSpec{EnvId::kPointReach, 100};
  if (name == "chain") return EnvSpec{EnvId::kChainWalk, 64};
  throw ConfigError("unknown environment '" + name + "'");
}

// Either a force vector (continuous) or an action index (discrete).
struct Action {
  std::vector<double> force;
  std::size_t index = 0;
};

struct StepResult {
  std::vector<double> obs;
  double reward = 0.0;
  bool done = false;
};

class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual std::vector<double> reset() = 0;
  virtual StepResult step(const Action& action) = 0;
};

// 2-D point mass in the arena [-1,1]^2 chasing a fixed goal. The force is
// clamped to [-1,1] per axis; reward is the negative distance of the new
// position to the goal minus a small control cost, so it stays within
// [-(diag + 0.02), 0]. Episodes end at the horizon or within 0.05 of the
// goal. Dynamics are fully deterministic; only reset() draws randomness.
class PointReach final : public Env {
 public:
  static constexpr double kGoalX = 0.6;
  static constexpr double kGoalY = 0.6;
  static constexpr double kDt = 0.1;
  static constexpr double kDamping = 0.9;
  static constexpr double kGoalRadius = 0.05;

  PointReach(const EnvSpec& spec, std::uint64_t seed)
      : spec_(spec), rng_(seed) {
    spec_.validate();
  }

  const EnvSpec& spec() const override { return spec_; }

  std::vector<double> reset() override {
    px_ = rng_.uniform(-1.0, 1.0);
    py_ = rng_.uniform(-1.0, 1.0);
    vx_ = vy_ = 0.0;
    steps_ = 0;
    return observe();
  }

  StepResult step(const Action& action) override {
    if (action.force.size() != 2)
      throw ShapeError("PointReach expects a 2-D force action");
    for (double f : action.force)
      if (!std::isfinite(f)) throw NumericError("PointReach action not finite");
    double ax = std::clamp(action.force[0], -1.0, 1.0);
    double ay = std::clamp(action.force[1], -1.0, 1.0);
    vx_ = kDamping * vx_ + kDt * ax;
    vy_ = kDamping * vy_ + kDt * ay;
    px_ = std::clamp(px_ + kDt * vx_, -1.0, 1.0);
    py_ = std::clamp(py_ + kDt * vy_, -1.0, 1.0);
    steps_ += 1;
    double dist = std::hypot(px_ - kGoalX, py_ - kGoalY);
    StepResult r;
    r.reward = -dist - 0.01 * (ax * ax + ay * ay);
    r.done = dist < kGoalRadius || steps_ >= spec_.horizon;
    r.obs = observe();
    return r;
  }

  void set_state(double px, double py, double vx, double vy) {
    px_ = px;
    py_ = py;
    vx_ = vx;
    vy_ = vy;
  }

 private:
  std::vector<double> observe() const { return {px_, py_, vx_, vy_}; }

  EnvSpec spec_;
  Rng rng_;
  double px_ = 0.0, py_ = 0.0, vx_ = 0.0, vy_ = 0.0;
  std::size_t steps_ = 0;
};

// 16-state chain, agent starts at the leftmost state. Action 1 (right)
// moves +1 with probability 0.9 and -1 otherwise (this is the only draw
// from the RNG stream); action 0 (left) moves -1 deterministically.
// Reward is 1 exactly when the state occupied at decision time is the
// rightmost one, so an episode's return lies in [0, horizon]. Episodes
// end at the horizon only.
class ChainWalk final : public Env {
 public:
  static constexpr std::size_t kNumStates = 16;

  ChainWalk(const EnvSpec& spec, std::uint64_t seed)
      : spec_(spec), rng_(seed) {
    spec_.validate();
  }

  const EnvSpec& spec() const override { return spec_; }

  std::vector<double> reset() override {
    state_ = 0;
    steps_ = 0;
    return observe();
  }

  StepResult step(const Action& action) override {
    if (action.index >= 2)
      throw ShapeError("ChainWalk action index out of range");
    StepResult r;
    r.reward = state_ == kNumStates - 1 ? 1.0 : 0.0;
    int delta;
    if (action.index == 1) {
      delta = rng_.uniform() < 0.9 ? 1 : -1;
    } else {
      delta = -1;
    }
    int next = static_cast<int>(state_) + delta;
    state_ = static_cast<std::size_t>(
        std::clamp(next, 0, static_cast<int>(kNumStates) - 1));
    steps_ += 1;
    r.done = steps_ >= spec_.horizon;
    r.obs = observe();
    return r;
  }

  std::size_t state() const { return state_; }

 private:
  std::vector<double> observe() const {
    std::vector<double> obs(kNumStates, 0.0);
    obs[state_] = 1.0;
    return obs;
  }

  EnvSpec spec_;
  Rng rng_;
  std::size_t state_ = 0;
  std::size_t steps_ = 0;
};

inline std::unique_ptr<Env> make_env(const EnvSpec& spec, std::uint64_t seed) {
  spec.validate();
  switch (spec.id) {
    case EnvId::kPointReach: return std::make_unique<PointReach>(spec, seed);
    case EnvId::kChainWalk: return std::make_unique<ChainWalk>(spec, seed);
  }
  throw ConfigError("unknown environment id");
}

// Per-dimension Welford running mean/variance with clamped z-scoring.
// Before any update the transform is the identity (plus the clamp).
class RunningNorm {
 public:
  explicit RunningNorm(std::size_t dim, double clip = 10.0)
      : clip_(clip), mean_(dim, 0.0), m2_(dim, 0.0) {}

  void update(std::span<const double> x) {
    if (x.size() != mean_.size()) throw ShapeError("RunningNorm dim mismatch");
    count_ += 1;
    for (std::size_t j = 0; j < x.size(); ++j) {
      double d = x[j] - mean_[j];
      mean_[j] += d / static_cast<double>(count_);
      m2_[j] += d * (x[j] - mean_[j]);
    }
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != mean_.size()) throw ShapeError("RunningNorm dim mismatch");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      double z = count_ == 0
                     ? x[j]
                     : (x[j] - mean_[j]) / std::sqrt(variance(j) + 1e-8);
      out[j] = std::clamp(z, -clip_, clip_);
    }
    return out;
  }

  // Inverse of apply() where the clamp was inactive.
  std::vector<double> unapply(std::span<const double> y) const {
    std::vector<double> out(y.size());
    for (std::size_t j = 0; j < y.size(); ++j)
      out[j] = count_ == 0 ? y[j]
                           : y[j] * std::sqrt(variance(j) + 1e-8) + mean_[j];
    return out;
  }

  long long count() const { return count_; }
  double mean(std::size_t j) const { return mean_[j]; }
  double variance(std::size_t j) const {
    return count_ > 0 ? m2_[j] / static_cast<double>(count_) : 0.0;
  }

 private:
  double clip_;
  long long count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

// Reward scaling by the running std of the per-env discounted return
// accumulator; no mean subtraction. Termination resets the accumulator.
class RewardNorm {
 public:
  RewardNorm(std::size_t n_envs, double gamma, double clip = 10.0)
      : gamma_(gamma), clip_(clip), returns_(n_envs, 0.0) {}

  double update_and_apply(std::size_t env_index, double reward, bool done) {
    double& ret = returns_.at(env_index);
    ret = gamma_ * ret + reward;
    count_ += 1;
    double d = ret - mean_;
    mean_ += d / static_cast<double>(count_);
    m2_ += d * (ret - mean_);
    double scaled = apply(reward);
    if (done) ret = 0.0;
    return scaled;
  }

  double apply(double reward) const {
    double z = count_ == 0 ? reward : reward / std::sqrt(variance() + 1e-8);
    return std::clamp(z, -clip_, clip_);
  }

  double variance() const {
    return count_ > 0 ? m2_ / static_cast<double>(count_) : 0.0;
  }

 private:
  double gamma_;
  double clip_;
  std::vector<double> returns_;
  long long count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace ppolab

#endif  // PPOLAB_ENV_HPP_
