#ifndef PPOLAB_POLICY_HPP_
#define PPOLAB_POLICY_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppolab/batch.hpp"
#include "ppolab/distributions.hpp"
#include "ppolab/errors.hpp"
#include "ppolab/mlp.hpp"
#include "ppolab/param_vector.hpp"
#include "ppolab/rng.hpp"
#include "ppolab/surrogate.hpp"

namespace ppolab {

struct PolicySpec {
  std::size_t obs_dim = 0;
  PolicyKind kind = PolicyKind::kCategorical;
  std::size_t action_dim = 0;  // Gaussian dims or categorical arity
  std::vector<std::size_t> hidden{64, 64};
  Activation activation = Activation::kTanh;
  double log_std_init = -2.0;
  bool ortho_init = true;
};

struct ActResult {
  Action action;
  double logprob = 0.0;
  double value = 0.0;
};

struct LossResult {
  double loss = 0.0;
  double policy_loss = 0.0;  // -mean(surrogate term)
  double value_loss = 0.0;   // mean squared value error
  double entropy = 0.0;      // mean policy entropy
  std::vector<double> ratios;
  ParamVector grad;
};

// Actor and critic MLPs over one flat parameter vector. The critic
// shares no parameters with the actor; the Gaussian log_std is a
// state-independent slice. The object is immutable after construction
// and safe to use from multiple threads.
class ActorCritic {
 public:
  explicit ActorCritic(const PolicySpec& spec) : spec_(spec) {
    if (spec.obs_dim == 0 || spec.action_dim == 0)
      throw ConfigError("policy dimensions must be positive");
    actor_ = Mlp({spec.obs_dim, spec.hidden, spec.action_dim,
                  spec.activation},
                 "pi", proto_);
    if (spec.kind == PolicyKind::kDiagonalGaussian)
      log_std_idx_ = proto_.add_slice("pi.log_std", spec.action_dim, 1);
    critic_ =
        Mlp({spec.obs_dim, spec.hidden, 1, spec.activation}, "vf", proto_);
    proto_.finalize();
  }

  const PolicySpec& spec() const { return spec_; }
  std::size_t num_params() const { return proto_.size(); }

  // Fresh zero parameter vector with this model's layout.
  ParamVector make_params() const { return proto_; }

  ParamVector init_params(Rng& rng) const {
    ParamVector p = make_params();
    actor_.init(p, rng, spec_.ortho_init, 0.01);
    critic_.init(p, rng, spec_.ortho_init, 1.0);
    if (spec_.kind == PolicyKind::kDiagonalGaussian) {
      auto ls = p.slice(log_std_idx_);
      std::fill(ls.begin(), ls.end(), spec_.log_std_init);
    }
    return p;
  }

  std::vector<double> actor_out(const ParamVector& params,
                                std::span<const double> obs,
                                Mlp::Cache* cache = nullptr) const {
    return actor_.forward(params, obs, cache);
  }

  double value(const ParamVector& params, std::span<const double> obs,
               Mlp::Cache* cache = nullptr) const {
    return critic_.forward(params, obs, cache)[0];
  }

  std::span<const double> log_std(const ParamVector& params) const {
    return params.slice(log_std_idx_);
  }

  double log_prob(const ParamVector& params, std::span<const double> obs,
                  const Action& action) const {
    std::vector<double> out = actor_out(params, obs);
    if (spec_.kind == PolicyKind::kDiagonalGaussian)
      return gaussian::log_prob(out, log_std(params), action.force);
    return categorical::log_prob(out, action.index);
  }

  double entropy_at(const ParamVector& params,
                    std::span<const double> obs) const {
    if (spec_.kind == PolicyKind::kDiagonalGaussian)
      return gaussian::entropy(log_std(params));
    std::vector<double> out = actor_out(params, obs);
    return categorical::entropy(out);
  }

  // Rollout-time action selection. Deterministic mode takes the Gaussian
  // mean / categorical argmax and does not touch the RNG.
  ActResult act(const ParamVector& params, std::span<const double> obs,
                Rng& rng, bool deterministic = false) const {
    ActResult r;
    std::vector<double> out = actor_out(params, obs);
    if (spec_.kind == PolicyKind::kDiagonalGaussian) {
      auto ls = log_std(params);
      r.action.force = deterministic ? out : gaussian::sample(out, ls, rng);
      r.logprob = gaussian::log_prob(out, ls, r.action.force);
    } else {
      r.action.index =
          deterministic ? categorical::argmax(out) : categorical::sample(out, rng);
      r.logprob = categorical::log_prob(out, r.action.index);
    }
    r.value = value(params, obs);
    return r;
  }

  // Composite clipped-surrogate loss and its exact reverse-mode gradient:
  //   loss = -[ mean(term) - c_vf * mean((V - V_targ)^2) + c_ent * mean(H) ]
  // The surrogate's min-branch selection fixes the gradient at kinks.
  LossResult loss_and_grad(const ParamVector& params, const RolloutBatch& batch,
                           const SurrogateConfig& cfg, double c_vf,
                           double c_ent) const {
    cfg.validate();
    const std::size_t n = batch.size();
    if (n == 0) throw ShapeError("loss_and_grad: empty batch");
    if (batch.advantages.size() != n || batch.value_targets.size() != n)
      throw ShapeError("loss_and_grad: batch not fully populated");

    LossResult res;
    res.grad = params.zeros_like();
    res.ratios.resize(n);
    const double inv_n = 1.0 / static_cast<double>(n);

    Mlp::Cache actor_cache, critic_cache;
    std::vector<double> d_out(spec_.action_dim);
    std::vector<double> d_tmp(spec_.action_dim);

    for (std::size_t i = 0; i < n; ++i) {
      const Transition& tr = batch.transitions[i];
      const double adv = batch.advantages[i];

      // -- policy surrogate --
      std::vector<double> out = actor_.forward(params, tr.obs, &actor_cache);
      double logp, h;
      if (spec_.kind == PolicyKind::kDiagonalGaussian) {
        logp = gaussian::log_prob(out, log_std(params), tr.action.force);
        h = gaussian::entropy(log_std(params));
      } else {
        logp = categorical::log_prob(out, tr.action.index);
        h = categorical::entropy(out);
      }
      double w = std::exp(logp - tr.logprob_old);
      if (!std::isfinite(w))
        throw NumericError("non-finite importance ratio at sample " +
                           std::to_string(i));
      res.ratios[i] = w;
      detail::Branch term = detail::evaluate(cfg, w, adv);
      res.policy_loss -= term.value * inv_n;
      res.entropy += h * inv_n;

      // Upstream through w: d(-term/n)/dlogp = -(dterm/dw) * w / n.
      const double u_logp = -term.slope * w * inv_n;
      if (spec_.kind == PolicyKind::kDiagonalGaussian) {
        auto ls = log_std(params);
        gaussian::log_prob_grad(out, ls, tr.action.force, d_out, d_tmp);
        auto g_ls = res.grad.slice(log_std_idx_);
        for (std::size_t j = 0; j < spec_.action_dim; ++j) {
          d_out[j] *= u_logp;
          // Entropy depends on log_std only; dH/dlog_std = 1.
          g_ls[j] += u_logp * d_tmp[j] - c_ent * inv_n;
        }
      } else {
        categorical::log_prob_grad(out, tr.action.index, d_out);
        categorical::entropy_grad(out, d_tmp);
        for (std::size_t j = 0; j < spec_.action_dim; ++j)
          d_out[j] = u_logp * d_out[j] - c_ent * inv_n * d_tmp[j];
      }
      actor_.backward(params, actor_cache, d_out, res.grad);

      // -- value regression --
      double v = critic_.forward(params, tr.obs, &critic_cache)[0];
      double verr = v - batch.value_targets[i];
      res.value_loss += verr * verr * inv_n;
      double d_v[1] = {c_vf * 2.0 * verr * inv_n};
      critic_.backward(params, critic_cache, d_v, res.grad);

      if (!std::isfinite(res.policy_loss) || !std::isfinite(res.value_loss))
        throw NumericError("non-finite loss at sample " + std::to_string(i));
    }

    res.loss = res.policy_loss + c_vf * res.value_loss - c_ent * res.entropy;
    return res;
  }

  // Importance ratio w = exp(logp(params) - logprob_old) and its exact
  // parameter gradient w * d(logp)/d(theta). Critic entries stay zero.
  std::pair<double, ParamVector> ratio_grad(const ParamVector& params,
                                            std::span<const double> obs,
                                            const Action& action,
                                            double logprob_old) const {
    Mlp::Cache cache;
    std::vector<double> out = actor_.forward(params, obs, &cache);
    ParamVector grad = params.zeros_like();
    std::vector<double> d_out(spec_.action_dim);
    double logp;
    if (spec_.kind == PolicyKind::kDiagonalGaussian) {
      auto ls = log_std(params);
      logp = gaussian::log_prob(out, ls, action.force);
      std::vector<double> d_ls(spec_.action_dim);
      gaussian::log_prob_grad(out, ls, action.force, d_out, d_ls);
      auto g_ls = grad.slice(log_std_idx_);
      for (std::size_t j = 0; j < spec_.action_dim; ++j) g_ls[j] += d_ls[j];
    } else {
      logp = categorical::log_prob(out, action.index);
      categorical::log_prob_grad(out, action.index, d_out);
    }
    actor_.backward(params, cache, d_out, grad);
    double w = std::exp(logp - logprob_old);
    grad.scale(w);
    return {w, std::move(grad)};
  }

 private:
  PolicySpec spec_;
  ParamVector proto_;
  Mlp actor_;
  Mlp critic_;
  std::size_t log_std_idx_ = 0;
};

}  // namespace ppolab

#endif  // PPOLAB_POLICY_HPP_
