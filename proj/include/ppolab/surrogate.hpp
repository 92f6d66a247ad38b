#ifndef PPOLAB_SURROGATE_HPP_
#define PPOLAB_SURROGATE_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>

#include "ppolab/errors.hpp"

namespace ppolab {

enum class Variant { kPpo, kLeaky, kRb, kDclamp };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kPpo: return "ppo";
    case Variant::kLeaky: return "leaky";
    case Variant::kRb: return "rb";
    case Variant::kDclamp: return "dclamp";
  }
  return "?";
}

// Per-sample objective configuration. alpha/beta are ignored for the
// plain clipped variant and must not affect its output.
struct SurrogateConfig {
  Variant variant = Variant::kPpo;
  double epsilon = 0.2;  // ratio trust-band half-width
  double alpha = 3.0;    // leak / rollback / clamp slope
  double beta = 0.2;     // tolerated wrong-direction half-width

  void validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw ConfigError("epsilon must lie in (0,1)");
    switch (variant) {
      case Variant::kPpo:
        break;
      case Variant::kLeaky:
        if (!(alpha >= 0.0 && alpha < 1.0))
          throw ConfigError("leaky alpha must lie in [0,1)");
        break;
      case Variant::kRb:
        if (!(alpha > 0.0)) throw ConfigError("rollback alpha must be > 0");
        break;
      case Variant::kDclamp:
        if (!(alpha > 1.0)) throw ConfigError("clamp alpha must be > 1");
        if (!(beta >= 0.0 && beta <= 1.0))
          throw ConfigError("beta must lie in [0,1]");
        break;
    }
  }
};

enum class Direction { kRight, kWrong, kStrictWrong, kNeutral };

// Sign of the ratio excursion against the advantage signal. Neutral at
// the starting ratio w=1 or for zero advantage; the wrong-direction
// predicate is the strict inequality (w-1)*A < 0, and strict-wrong
// additionally requires the ratio to leave the [1-beta, 1+beta] band.
inline Direction classify_direction(double w, double advantage, double beta) {
  if (w == 1.0 || advantage == 0.0) return Direction::kNeutral;
  if ((w - 1.0) * advantage > 0.0) return Direction::kRight;
  if (advantage > 0.0 ? (w < 1.0 - beta) : (w > 1.0 + beta))
    return Direction::kStrictWrong;
  return Direction::kWrong;
}

namespace detail {

// One min-candidate of a surrogate: value and d(value)/dw of f(w)*A.
struct Branch {
  double value;
  double slope;
};

// Strict min over up to three branches; ties keep the earliest entry,
// matching what a branch-selecting autodiff of `min` produces.
inline Branch select_min(const Branch* branches, std::size_t n) {
  Branch best = branches[0];
  for (std::size_t i = 1; i < n; ++i)
    if (branches[i].value < best.value) best = branches[i];
  return best;
}

inline Branch unclipped(double w, double a) { return {w * a, a}; }

inline Branch clipped(double w, double a, double eps) {
  double c = std::clamp(w, 1.0 - eps, 1.0 + eps);
  return {c * a, (w > 1.0 - eps && w < 1.0 + eps) ? a : 0.0};
}

inline Branch leaky(double w, double a, double eps, double alpha) {
  double f, df;
  if (w <= 1.0 - eps) {
    f = alpha * w + (1.0 - alpha) * (1.0 - eps);
    df = alpha;
  } else if (w >= 1.0 + eps) {
    f = alpha * w + (1.0 - alpha) * (1.0 + eps);
    df = alpha;
  } else {
    f = w;
    df = 1.0;
  }
  return {f * a, df * a};
}

inline Branch rollback(double w, double a, double eps, double alpha) {
  double f, df;
  if (w <= 1.0 - eps) {
    f = -alpha * w + (1.0 + alpha) * (1.0 - eps);
    df = -alpha;
  } else if (w >= 1.0 + eps) {
    f = -alpha * w + (1.0 + alpha) * (1.0 + eps);
    df = -alpha;
  } else {
    f = w;
    df = 1.0;
  }
  return {f * a, df * a};
}

// Steeper-slope penalty line anchored at the strict-wrong band edge;
// the branch is picked by the advantage sign.
inline Branch clamp_line(double w, double a, double alpha, double beta) {
  double anchor = a > 0.0 ? 1.0 - beta : 1.0 + beta;
  double f = alpha * w - (alpha - 1.0) * anchor;
  return {f * a, alpha * a};
}

inline Branch evaluate(const SurrogateConfig& cfg, double w, double a) {
  if (a == 0.0) return {0.0, 0.0};
  Branch b[3];
  std::size_t n = 0;
  b[n++] = unclipped(w, a);
  switch (cfg.variant) {
    case Variant::kPpo:
      b[n++] = clipped(w, a, cfg.epsilon);
      break;
    case Variant::kLeaky:
      b[n++] = leaky(w, a, cfg.epsilon, cfg.alpha);
      break;
    case Variant::kRb:
      b[n++] = rollback(w, a, cfg.epsilon, cfg.alpha);
      break;
    case Variant::kDclamp:
      b[n++] = clipped(w, a, cfg.epsilon);
      b[n++] = clamp_line(w, a, cfg.alpha, cfg.beta);
      break;
  }
  return select_min(b, n);
}

}  // namespace detail

// min(w*A, clip(w, 1-eps, 1+eps)*A)
inline double ppo_term(double w, double advantage, double eps) {
  SurrogateConfig cfg{Variant::kPpo, eps, 0.0, 0.0};
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).value;
}

// min(w*A, f_leaky(w; eps, alpha)*A); alpha = 0 reduces to ppo_term.
inline double leaky_term(double w, double advantage, double eps, double alpha) {
  SurrogateConfig cfg{Variant::kLeaky, eps, alpha, 0.0};
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).value;
}

// min(w*A, f_rb(w; eps, alpha)*A); slope beyond the band rolls back at -alpha.
inline double rb_term(double w, double advantage, double eps, double alpha) {
  SurrogateConfig cfg{Variant::kRb, eps, alpha, 0.0};
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).value;
}

// Three-way min of the unclipped, clipped and directional-clamp lines.
// For A > 0 the clamp activates below 1-beta, for A < 0 above 1+beta.
inline double dclamp_term(double w, double advantage, double eps, double alpha,
                          double beta) {
  SurrogateConfig cfg{Variant::kDclamp, eps, alpha, beta};
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).value;
}

inline double surrogate_term(const SurrogateConfig& cfg, double w,
                             double advantage) {
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).value;
}

// d(term)/dw of the selected min branch. At kink points the earliest
// branch in argument order (unclipped, clipped, clamp) wins the tie.
inline double surrogate_grad_w(const SurrogateConfig& cfg, double w,
                               double advantage) {
  cfg.validate();
  return detail::evaluate(cfg, w, advantage).slope;
}

}  // namespace ppolab

#endif  // PPOLAB_SURROGATE_HPP_
