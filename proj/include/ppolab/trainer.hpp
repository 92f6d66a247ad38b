#ifndef PPOLAB_TRAINER_HPP_
#define PPOLAB_TRAINER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "ppolab/adam.hpp"
#include "ppolab/batch.hpp"
#include "ppolab/diagnostics.hpp"
#include "ppolab/env.hpp"
#include "ppolab/errors.hpp"
#include "ppolab/gae.hpp"
#include "ppolab/policy.hpp"
#include "ppolab/rng.hpp"
#include "ppolab/surrogate.hpp"

namespace ppolab {

struct TrainConfig {
  EnvSpec env;
  SurrogateConfig surrogate;
  long long n_timesteps = 100000;
  std::size_t n_steps = 256;  // T, rollout steps per env
  std::size_t n_envs = 4;
  std::size_t batch_size = 256;  // minibatch size
  std::size_t n_epochs = 8;      // K
  double lr = 3e-3;
  double gamma = 0.99;
  double lam = 0.95;
  double c_vf = 0.5;
  double c_ent = 0.0;
  double max_grad_norm = 0.5;
  bool normalize_adv = true;
  bool normalize_obs = false;
  bool normalize_rew = false;
  std::uint64_t seed = 0;
  long long eval_every = 100;  // training episodes between evaluations
  std::size_t eval_episodes = 10;
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::kTanh;
  double log_std_init = -2.0;
  bool ortho_init = true;

  void validate() const {
    env.validate();
    surrogate.validate();
    if (n_timesteps < 1) throw ConfigError("n_timesteps must be >= 1");
    if (n_steps < 1 || n_envs < 1) throw ConfigError("n_steps/n_envs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if ((n_steps * n_envs) % batch_size != 0)
      throw ConfigError("batch_size must divide n_steps * n_envs");
    if (!(lr > 0.0)) throw ConfigError("lr must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0,1]");
    if (!(lam >= 0.0 && lam <= 1.0)) throw ConfigError("lam must lie in [0,1]");
    if (!(c_vf >= 0.0) || !(c_ent >= 0.0))
      throw ConfigError("loss coefficients must be >= 0");
    if (!(max_grad_norm > 0.0)) throw ConfigError("max_grad_norm must be > 0");
    if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
    if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  }

  PolicySpec policy_spec() const {
    PolicySpec ps;
    ps.obs_dim = env.obs_dim();
    ps.kind = env.continuous() ? PolicyKind::kDiagonalGaussian
                               : PolicyKind::kCategorical;
    ps.action_dim = env.action_dim();
    ps.hidden = hidden;
    ps.activation = activation;
    ps.log_std_init = log_std_init;
    ps.ortho_init = ortho_init;
    return ps;
  }
};

// One metrics row per minibatch of every epoch.
struct MetricsRow {
  long long iter = 0;
  std::size_t epoch = 0;      // 1-based
  std::size_t minibatch = 0;  // 0-based within the epoch
  double loss = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  DirectionStats stats;
};

struct IterationMetrics {
  std::vector<MetricsRow> rows;
};

struct EvalRow {
  long long episodes = 0;  // training episodes completed at eval time
  double mean_return = 0.0;
  double std_return = 0.0;
};

struct EvalResult {
  double mean_return = 0.0;
  double std_return = 0.0;
};

struct TrainReport {
  std::vector<MetricsRow> metrics;
  std::vector<EvalRow> evals;
  std::vector<double> episode_returns;  // raw returns of training episodes
  DirectionStats overall;               // aggregated over all update samples
  Histogram ratio_hist_pos;
  Histogram ratio_hist_neg;
  long long iterations = 0;
  long long timesteps = 0;
};

inline constexpr const char* kMetricsCsvHeader =
    "iter,epoch,minibatch,loss,policy_loss,value_loss,entropy,"
    "frac_wrong_pos,frac_wrong_neg,frac_strict_pos,frac_strict_neg,"
    "mse_pos,mse_neg";

inline constexpr const char* kEvalCsvHeader = "episodes,mean_return,std_return";

inline std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  auto opt = [](std::optional<double> v) {
    return v ? format_g12(*v) : std::string();
  };
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.iter) + "," + std::to_string(r.epoch) + "," +
           std::to_string(r.minibatch) + "," + format_g12(r.loss) + "," +
           format_g12(r.policy_loss) + "," + format_g12(r.value_loss) + "," +
           format_g12(r.entropy) + "," + opt(r.stats.frac_wrong_pos()) + "," +
           opt(r.stats.frac_wrong_neg()) + "," +
           opt(r.stats.frac_strict_pos()) + "," +
           opt(r.stats.frac_strict_neg()) + "," + opt(r.stats.mse_pos()) +
           "," + opt(r.stats.mse_neg()) + "\n";
  }
  return out;
}

inline std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out = std::string(kEvalCsvHeader) + "\n";
  for (const EvalRow& r : rows)
    out += std::to_string(r.episodes) + "," + format_g12(r.mean_return) + "," +
           format_g12(r.std_return) + "\n";
  return out;
}

inline std::string episodes_csv(const std::vector<double>& returns) {
  std::string out = "episode,return\n";
  for (std::size_t i = 0; i < returns.size(); ++i)
    out += std::to_string(i) + "," + format_g12(returns[i]) + "\n";
  return out;
}

// Rollout collection, GAE, minibatch epochs over the chosen surrogate,
// policy swap and evaluation. All randomness flows from cfg.seed through
// named streams, so a run is a pure function of its configuration.
class Trainer {
 public:
  explicit Trainer(const TrainConfig& cfg)
      : cfg_(cfg),
        model_(cfg.policy_spec()),
        adam_(0),
        update_rng_(derive_seed(cfg.seed, 2)),
        obs_norm_(cfg.env.obs_dim()),
        rew_norm_(cfg.n_envs, cfg.gamma) {
    cfg_.validate();
    next_eval_at_ = cfg_.eval_every;
    Rng init_rng(derive_seed(cfg_.seed, 1));
    params_ = model_.init_params(init_rng);
    adam_ = AdamState(params_.size());
    for (std::size_t e = 0; e < cfg_.n_envs; ++e) {
      envs_.push_back(make_env(cfg_.env, derive_seed(cfg_.seed, 100 + e)));
      actor_rngs_.emplace_back(derive_seed(cfg_.seed, 1000 + e));
      std::vector<double> raw = envs_.back()->reset();
      if (cfg_.normalize_obs) obs_norm_.update(raw);
      current_obs_.push_back(cfg_.normalize_obs ? obs_norm_.apply(raw) : raw);
      episode_return_acc_.push_back(0.0);
    }
    report_.ratio_hist_pos = make_histogram(40, 0.0, 2.0);
    report_.ratio_hist_neg = make_histogram(40, 0.0, 2.0);
  }

  const TrainConfig& config() const { return cfg_; }
  const ActorCritic& model() const { return model_; }
  const ParamVector& params() const { return params_; }
  ParamVector& params() { return params_; }
  long long episodes_completed() const { return episodes_completed_; }
  const TrainReport& report() const { return report_; }

  // T steps per env under the frozen current policy; behavior log-probs,
  // critic values and GAE advantages are recorded on the way.
  RolloutBatch collect_rollout() {
    const std::size_t T = cfg_.n_steps;
    const std::size_t E = cfg_.n_envs;
    RolloutBatch batch;
    batch.transitions.resize(T * E);

    std::vector<std::vector<double>> rewards(E), values(E);
    std::vector<std::vector<int>> dones(E);
    for (std::size_t e = 0; e < E; ++e) {
      rewards[e].reserve(T);
      values[e].reserve(T + 1);
      dones[e].reserve(T);
    }

    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t e = 0; e < E; ++e) {
        Transition& tr = batch.transitions[t * E + e];
        tr.obs = current_obs_[e];
        ActResult ar = model_.act(params_, tr.obs, actor_rngs_[e]);
        tr.action = ar.action;
        tr.logprob_old = ar.logprob;
        tr.value_old = ar.value;

        StepResult sr = envs_[e]->step(ar.action);
        episode_return_acc_[e] += sr.reward;

        double reward = sr.reward;
        if (cfg_.normalize_rew)
          reward = rew_norm_.update_and_apply(e, reward, sr.done);
        tr.reward = reward;
        tr.done = sr.done;

        rewards[e].push_back(reward);
        values[e].push_back(ar.value);
        dones[e].push_back(sr.done ? 1 : 0);

        std::vector<double> raw =
            sr.done ? envs_[e]->reset() : std::move(sr.obs);
        if (sr.done) {
          report_.episode_returns.push_back(episode_return_acc_[e]);
          episode_return_acc_[e] = 0.0;
          episodes_completed_ += 1;
        }
        if (cfg_.normalize_obs) {
          obs_norm_.update(raw);
          current_obs_[e] = obs_norm_.apply(raw);
        } else {
          current_obs_[e] = raw;
        }
      }
    }

    batch.advantages.resize(T * E);
    batch.value_targets.resize(T * E);
    for (std::size_t e = 0; e < E; ++e) {
      values[e].push_back(model_.value(params_, current_obs_[e]));
      AdvantageBuffer buf =
          compute_gae(rewards[e], values[e], dones[e], cfg_.gamma, cfg_.lam);
      for (std::size_t t = 0; t < T; ++t) {
        batch.advantages[t * E + e] = buf.advantages[t];
        batch.value_targets[t * E + e] = buf.value_targets[t];
      }
    }
    report_.timesteps += static_cast<long long>(T * E);
    return batch;
  }

  // K epochs of shuffled minibatches: loss_and_grad -> clip -> adam.
  // Direction statistics are taken on the raw (pre-standardization)
  // advantage signs. After this returns the updated parameters are the
  // next rollout's behavior policy.
  IterationMetrics train_iteration(const RolloutBatch& batch) {
    if (batch.size() == 0) throw ShapeError("train_iteration: empty batch");
    iteration_ += 1;
    IterationMetrics metrics;
    std::vector<std::size_t> order(batch.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= cfg_.n_epochs; ++epoch) {
      update_rng_.shuffle(order);
      const std::size_t n_minibatches = batch.size() / cfg_.batch_size;
      for (std::size_t m = 0; m < n_minibatches; ++m) {
        std::vector<std::size_t> idx(
            order.begin() + m * cfg_.batch_size,
            order.begin() + (m + 1) * cfg_.batch_size);
        RolloutBatch mb = batch.select(idx);
        std::vector<double> raw_adv = mb.advantages;
        if (cfg_.normalize_adv && mb.size() >= 2)
          mb.advantages = normalize_advantages(mb.advantages);

        LossResult res = model_.loss_and_grad(params_, mb, cfg_.surrogate,
                                              cfg_.c_vf, cfg_.c_ent);
        clip_grad_norm(res.grad, cfg_.max_grad_norm);
        adam_step(params_, res.grad, adam_, cfg_.lr);

        MetricsRow row;
        row.iter = iteration_;
        row.epoch = epoch;
        row.minibatch = m;
        row.loss = res.loss;
        row.policy_loss = res.policy_loss;
        row.value_loss = res.value_loss;
        row.entropy = res.entropy;
        row.stats = direction_stats(res.ratios, raw_adv, cfg_.surrogate.beta);
        report_.overall.merge(row.stats);
        for (std::size_t i = 0; i < res.ratios.size(); ++i) {
          if (raw_adv[i] > 0.0)
            report_.ratio_hist_pos.add(res.ratios[i]);
          else if (raw_adv[i] < 0.0)
            report_.ratio_hist_neg.add(res.ratios[i]);
        }
        metrics.rows.push_back(std::move(row));
      }
    }
    report_.metrics.insert(report_.metrics.end(), metrics.rows.begin(),
                           metrics.rows.end());
    return metrics;
  }

  // Deterministic-mode evaluation on a fresh environment; normalization
  // statistics are applied but frozen. Returns are raw env rewards.
  EvalResult evaluate(std::size_t n_episodes) {
    if (n_episodes < 1)
      throw ConfigError("evaluate: need at least one episode");
    eval_count_ += 1;
    auto env = make_env(cfg_.env, derive_seed(cfg_.seed, 5000 + eval_count_));
    Rng unused(0);
    std::vector<double> returns;
    for (std::size_t ep = 0; ep < n_episodes; ++ep) {
      std::vector<double> raw = env->reset();
      double ret = 0.0;
      bool done = false;
      while (!done) {
        std::vector<double> obs =
            cfg_.normalize_obs ? obs_norm_.apply(raw) : raw;
        ActResult ar = model_.act(params_, obs, unused, /*deterministic=*/true);
        StepResult sr = env->step(ar.action);
        ret += sr.reward;
        done = sr.done;
        raw = std::move(sr.obs);
      }
      returns.push_back(ret);
    }
    EvalResult r;
    for (double x : returns) r.mean_return += x;
    r.mean_return /= static_cast<double>(returns.size());
    double var = 0.0;
    for (double x : returns)
      var += (x - r.mean_return) * (x - r.mean_return);
    r.std_return = std::sqrt(var / static_cast<double>(returns.size()));
    return r;
  }

  // Stochastic-policy evaluation used by oracle comparisons.
  EvalResult evaluate_stochastic(std::size_t n_episodes, std::uint64_t salt) {
    if (n_episodes < 1)
      throw ConfigError("evaluate: need at least one episode");
    auto env = make_env(cfg_.env, derive_seed(cfg_.seed, 7000 + salt));
    Rng act_rng(derive_seed(cfg_.seed, 8000 + salt));
    std::vector<double> returns;
    for (std::size_t ep = 0; ep < n_episodes; ++ep) {
      std::vector<double> raw = env->reset();
      double ret = 0.0;
      bool done = false;
      while (!done) {
        std::vector<double> obs =
            cfg_.normalize_obs ? obs_norm_.apply(raw) : raw;
        ActResult ar = model_.act(params_, obs, act_rng);
        StepResult sr = env->step(ar.action);
        ret += sr.reward;
        done = sr.done;
        raw = std::move(sr.obs);
      }
      returns.push_back(ret);
    }
    EvalResult r;
    for (double x : returns) r.mean_return += x;
    r.mean_return /= static_cast<double>(returns.size());
    double var = 0.0;
    for (double x : returns)
      var += (x - r.mean_return) * (x - r.mean_return);
    r.std_return = std::sqrt(var / static_cast<double>(returns.size()));
    return r;
  }

  // Outer loop: iterate until n_timesteps are consumed, evaluating every
  // eval_every completed training episodes and once more at the end.
  const TrainReport& train() {
    bool evaluated_last = false;
    while (report_.timesteps < cfg_.n_timesteps) {
      RolloutBatch batch = collect_rollout();
      train_iteration(batch);
      report_.iterations += 1;
      evaluated_last = false;
      if (episodes_completed_ >= next_eval_at_) {
        run_eval();
        evaluated_last = true;
        while (next_eval_at_ <= episodes_completed_)
          next_eval_at_ += cfg_.eval_every;
      }
    }
    if (!evaluated_last) run_eval();
    return report_;
  }

 private:
  void run_eval() {
    EvalResult r = evaluate(cfg_.eval_episodes);
    report_.evals.push_back(
        EvalRow{episodes_completed_, r.mean_return, r.std_return});
  }

  TrainConfig cfg_;
  ActorCritic model_;
  ParamVector params_;
  AdamState adam_;
  Rng update_rng_;
  RunningNorm obs_norm_;
  RewardNorm rew_norm_;
  std::vector<std::unique_ptr<Env>> envs_;
  std::vector<Rng> actor_rngs_;
  std::vector<std::vector<double>> current_obs_;
  std::vector<double> episode_return_acc_;
  long long episodes_completed_ = 0;
  long long next_eval_at_ = 0;
  long long iteration_ = 0;
  long long eval_count_ = 0;
  TrainReport report_;
};

}  // namespace ppolab

#endif  // PPOLAB_TRAINER_HPP_
