#ifndef PPOLAB_LEMMA_HPP_
#define PPOLAB_LEMMA_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppolab/batch.hpp"
#include "ppolab/errors.hpp"
#include "ppolab/policy.hpp"
#include "ppolab/rng.hpp"
#include "ppolab/surrogate.hpp"

namespace ppolab {

// One strict-wrong-direction comparison instance: a small policy at
// theta_0, a batch whose ratios were engineered through logprob_old, the
// index set of strict-wrong samples at theta_0 and a target among them.
// The step parameter is named eta throughout (the source material uses
// gamma, which collides with the discount).
struct LemmaInstance {
  PolicySpec policy;
  ParamVector params0;
  RolloutBatch batch;
  std::vector<std::size_t> omega;
  std::size_t target_index = 0;
  std::vector<double> step_sizes;
  SurrogateConfig dclamp;  // epsilon/alpha/beta used by both variants
};

struct StepCompare {
  double w_ppo = 0.0;
  double w_dclamp = 0.0;
  double gap = 0.0;  // |w_dclamp - 1|^2 - |w_ppo - 1|^2
};

struct LemmaInstanceResult {
  double alignment = 0.0;
  double target_w0 = 0.0;
  double target_advantage = 0.0;
  double phi_prime_fd = 0.0;     // central-difference phi'(0)
  double phi_prime_batch = 0.0;  // (alpha-1)/N * sum over omega
  double phi_prime_omega = 0.0;  // (alpha-1)/|omega| * sum over omega
  std::vector<double> etas;
  std::vector<double> gaps;
  double eta_bar_estimate = 0.0;  // largest grid prefix with gap < 0
  bool pass_smallest = false;
  bool phi_sign_ok = false;
};

struct LemmaReport {
  std::vector<LemmaInstanceResult> instances;
  double pass_rate = 0.0;      // gap < 0 at the smallest grid eta
  double phi_sign_rate = 0.0;  // phi'(0) sign matches the mirror rule
};

// Strict-wrong index set at theta_0, recomputed from the batch.
inline std::vector<std::size_t> strict_wrong_set(const ActorCritic& model,
                                                 const ParamVector& params,
                                                 const RolloutBatch& batch,
                                                 double beta) {
  std::vector<std::size_t> omega;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& tr = batch.transitions[i];
    double w = std::exp(model.log_prob(params, tr.obs, tr.action) -
                        tr.logprob_old);
    if (classify_direction(w, batch.advantages[i], beta) ==
        Direction::kStrictWrong)
      omega.push_back(i);
  }
  return omega;
}

// Hypothesis sum of the one-step contraction statement:
//   sum_{t' in omega} <grad w_t, grad w_t'> A_t A_t'
// Positive value certifies the precondition for the target index.
inline double alignment_condition(const ActorCritic& model,
                                  const LemmaInstance& inst) {
  const Transition& target = inst.batch.transitions[inst.target_index];
  auto [wt, gt] = model.ratio_grad(inst.params0, target.obs, target.action,
                                   target.logprob_old);
  double a_t = inst.batch.advantages[inst.target_index];
  double sum = 0.0;
  for (std::size_t j : inst.omega) {
    const Transition& tr = inst.batch.transitions[j];
    auto [wj, gj] =
        model.ratio_grad(inst.params0, tr.obs, tr.action, tr.logprob_old);
    sum += gt.dot(gj) * a_t * inst.batch.advantages[j];
  }
  return sum;
}

// Full-batch ascent gradient of the chosen surrogate (no value or
// entropy terms; the statement is about the policy objective alone).
inline ParamVector surrogate_ascent_grad(const ActorCritic& model,
                                         const ParamVector& params,
                                         const RolloutBatch& batch,
                                         const SurrogateConfig& cfg) {
  LossResult res = model.loss_and_grad(params, batch, cfg, 0.0, 0.0);
  res.grad.scale(-1.0);
  return std::move(res.grad);
}

inline double ratio_at(const ActorCritic& model, const ParamVector& params,
                       const RolloutBatch& batch, std::size_t index) {
  const Transition& tr = batch.transitions[index];
  return std::exp(model.log_prob(params, tr.obs, tr.action) - tr.logprob_old);
}

// One full-batch ascent step theta_0 + eta * grad J for both variants and
// the squared-distance gap of the target's ratio from 1. Negative eta is
// allowed (used by the phi'(0) finite-difference probe).
inline StepCompare one_step_compare(const ActorCritic& model,
                                    const LemmaInstance& inst, double eta) {
  SurrogateConfig ppo_cfg = inst.dclamp;
  ppo_cfg.variant = Variant::kPpo;

  ParamVector g_ppo =
      surrogate_ascent_grad(model, inst.params0, inst.batch, ppo_cfg);
  ParamVector g_dc =
      surrogate_ascent_grad(model, inst.params0, inst.batch, inst.dclamp);

  ParamVector theta_ppo = inst.params0;
  theta_ppo.axpy(eta, g_ppo);
  ParamVector theta_dc = inst.params0;
  theta_dc.axpy(eta, g_dc);

  StepCompare out;
  out.w_ppo = ratio_at(model, theta_ppo, inst.batch, inst.target_index);
  out.w_dclamp = ratio_at(model, theta_dc, inst.batch, inst.target_index);
  if (!std::isfinite(out.w_ppo) || !std::isfinite(out.w_dclamp))
    throw NumericError("one_step_compare: non-finite ratio after step");
  out.gap = (out.w_dclamp - 1.0) * (out.w_dclamp - 1.0) -
            (out.w_ppo - 1.0) * (out.w_ppo - 1.0);
  return out;
}

// Evaluates the eta grid, estimates the admissible threshold as the
// largest grid prefix with a negative gap, and probes phi'(0) by central
// differences. The precondition (alignment > 0) must hold.
inline LemmaInstanceResult sweep_instance(const ActorCritic& model,
                                          const LemmaInstance& inst) {
  if (inst.step_sizes.empty())
    throw ConfigError("lemma sweep: empty step-size grid");
  LemmaInstanceResult res;
  res.alignment = alignment_condition(model, inst);
  if (!(res.alignment > 0.0))
    throw ConfigError("lemma sweep: alignment condition not satisfied");
  res.target_w0 = ratio_at(model, inst.params0, inst.batch, inst.target_index);
  res.target_advantage = inst.batch.advantages[inst.target_index];

  // Both normalizations of the analytic phi'(0): the full-batch mean used
  // by the objective, and the |omega|-normalized sum used in the proof.
  {
    const Transition& target = inst.batch.transitions[inst.target_index];
    auto [wt, gt] = model.ratio_grad(inst.params0, target.obs, target.action,
                                     target.logprob_old);
    double sum = 0.0;
    for (std::size_t j : inst.omega) {
      const Transition& tr = inst.batch.transitions[j];
      auto [wj, gj] =
          model.ratio_grad(inst.params0, tr.obs, tr.action, tr.logprob_old);
      sum += gt.dot(gj) * inst.batch.advantages[j];
    }
    double alpha = inst.dclamp.alpha;
    res.phi_prime_batch =
        (alpha - 1.0) * sum / static_cast<double>(inst.batch.size());
    res.phi_prime_omega =
        (alpha - 1.0) * sum / static_cast<double>(inst.omega.size());
  }

  const double h = 1e-6;
  StepCompare up = one_step_compare(model, inst, h);
  StepCompare dn = one_step_compare(model, inst, -h);
  res.phi_prime_fd =
      ((up.w_dclamp - up.w_ppo) - (dn.w_dclamp - dn.w_ppo)) / (2.0 * h);
  res.phi_sign_ok = res.target_advantage > 0.0 ? res.phi_prime_fd > 0.0
                                               : res.phi_prime_fd < 0.0;

  res.etas = inst.step_sizes;
  res.gaps.reserve(res.etas.size());
  bool prefix = true;
  for (double eta : res.etas) {
    StepCompare sc = one_step_compare(model, inst, eta);
    res.gaps.push_back(sc.gap);
    if (prefix && sc.gap < 0.0)
      res.eta_bar_estimate = eta;
    else
      prefix = false;
  }
  res.pass_smallest = res.gaps.front() < 0.0;
  return res;
}

// Small dense-observation discrete-action policy instance with ratios
// engineered through logprob_old; resamples until the target satisfies
// the alignment hypothesis. Actor stays under 64 parameters so the ratio
// gradients are exact and cheap.
inline LemmaInstance make_random_instance(Rng& rng,
                                          std::vector<double> step_sizes,
                                          double epsilon = 0.2,
                                          double alpha = 3.0,
                                          double beta = 0.2) {
  PolicySpec ps;
  ps.obs_dim = 6;
  ps.kind = PolicyKind::kCategorical;
  ps.action_dim = 2;
  ps.hidden = {};  // linear policy: 14 actor parameters
  ActorCritic model(ps);

  for (int attempt = 0; attempt < 256; ++attempt) {
    LemmaInstance inst;
    inst.policy = ps;
    inst.step_sizes = step_sizes;
    inst.dclamp =
        SurrogateConfig{Variant::kDclamp, epsilon, alpha, beta};
    inst.params0 = model.init_params(rng);

    const std::size_t n = 8;
    std::size_t n_strict = 1 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) {
      Transition tr;
      tr.obs.resize(ps.obs_dim);
      for (double& x : tr.obs) x = rng.normal();
      tr.action.index = rng.below(2);
      double advantage =
          rng.uniform(0.5, 2.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
      double w;
      if (i < n_strict) {
        w = advantage > 0.0 ? rng.uniform(0.5, 1.0 - beta - 0.05)
                            : rng.uniform(1.0 + beta + 0.05, 1.6);
      } else {
        w = rng.uniform(1.0 - beta + 0.02, 1.0 + beta - 0.02);
      }
      tr.logprob_old =
          model.log_prob(inst.params0, tr.obs, tr.action) - std::log(w);
      inst.batch.transitions.push_back(std::move(tr));
      inst.batch.advantages.push_back(advantage);
      inst.batch.value_targets.push_back(0.0);
    }

    inst.omega = strict_wrong_set(model, inst.params0, inst.batch, beta);
    if (inst.omega.empty()) continue;
    inst.target_index = inst.omega[rng.below(inst.omega.size())];
    if (alignment_condition(model, inst) > 0.0) return inst;
  }
  throw NumericError("could not draw a valid lemma instance");
}

inline LemmaReport run_lemma_sweep(std::size_t n_instances, std::uint64_t seed,
                                   std::vector<double> step_sizes) {
  if (n_instances < 1) throw ConfigError("lemma sweep: need >= 1 instance");
  Rng rng(derive_seed(seed, 42));
  LemmaReport report;
  std::size_t passed = 0, sign_ok = 0;
  for (std::size_t i = 0; i < n_instances; ++i) {
    LemmaInstance inst = make_random_instance(rng, step_sizes);
    ActorCritic model(inst.policy);
    LemmaInstanceResult res = sweep_instance(model, inst);
    passed += res.pass_smallest ? 1 : 0;
    sign_ok += res.phi_sign_ok ? 1 : 0;
    report.instances.push_back(std::move(res));
  }
  report.pass_rate =
      static_cast<double>(passed) / static_cast<double>(n_instances);
  report.phi_sign_rate =
      static_cast<double>(sign_ok) / static_cast<double>(n_instances);
  return report;
}

inline nlohmann::json to_json(const LemmaInstanceResult& r) {
  nlohmann::json j;
  j["alignment"] = r.alignment;
  j["target_w0"] = r.target_w0;
  j["target_advantage"] = r.target_advantage;
  j["phi_prime_fd"] = r.phi_prime_fd;
  j["phi_prime_batch"] = r.phi_prime_batch;
  j["phi_prime_omega"] = r.phi_prime_omega;
  j["etas"] = r.etas;
  j["gaps"] = r.gaps;
  j["eta_bar_estimate"] = r.eta_bar_estimate;
  j["pass_smallest"] = r.pass_smallest;
  j["phi_sign_ok"] = r.phi_sign_ok;
  return j;
}

inline nlohmann::json to_json(const LemmaReport& r) {
  nlohmann::json j;
  j["pass_rate"] = r.pass_rate;
  j["phi_sign_rate"] = r.phi_sign_rate;
  j["instances"] = nlohmann::json::array();
  for (const auto& inst : r.instances) j["instances"].push_back(to_json(inst));
  return j;
}

}  // namespace ppolab

#endif  // PPOLAB_LEMMA_HPP_
