#ifndef PPOLAB_ADAM_HPP_
#define PPOLAB_ADAM_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "ppolab/errors.hpp"
#include "ppolab/param_vector.hpp"

namespace ppolab {

// Elementwise Adam state. The parameter layout is metadata only; the
// update never looks at slice boundaries.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-8;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected Adam step, applied as a minimizer: params -= lr * m_hat /
// (sqrt(v_hat) + eps_hat).
inline void adam_step(ParamVector& params, const ParamVector& grad,
                      AdamState& state, double lr) {
  if (grad.size() != params.size() || state.m.size() != params.size())
    throw ShapeError("adam: parameter/gradient/state size mismatch");
  if (!(lr > 0.0)) throw ConfigError("adam: lr must be > 0");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, state.t);
  const double bc2 = 1.0 - std::pow(state.beta2, state.t);
  auto p = params.values();
  auto g = grad.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g[i];
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g[i] * g[i];
    double m_hat = state.m[i] / bc1;
    double v_hat = state.v[i] / bc2;
    p[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps_hat);
  }
}

// Global L2-norm clip: scales the whole gradient when its norm exceeds
// `max_norm`, otherwise leaves it untouched.
inline void clip_grad_norm(ParamVector& grad, double max_norm) {
  if (!(max_norm > 0.0)) throw ConfigError("max_norm must be > 0");
  double norm = grad.norm2();
  if (norm > max_norm) grad.scale(max_norm / norm);
}

}  // namespace ppolab

#endif  // PPOLAB_ADAM_HPP_
