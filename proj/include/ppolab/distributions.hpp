#ifndef PPOLAB_DISTRIBUTIONS_HPP_
#define PPOLAB_DISTRIBUTIONS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "ppolab/errors.hpp"
#include "ppolab/rng.hpp"

namespace ppolab {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

enum class PolicyKind { kDiagonalGaussian, kCategorical };

// Diagonal Gaussian with a state-independent log standard deviation.
namespace gaussian {

inline void check_finite(std::span<const double> mean,
                         std::span<const double> log_std) {
  for (double m : mean)
    if (!std::isfinite(m)) throw NumericError("gaussian mean not finite");
  for (double s : log_std)
    if (!std::isfinite(s)) throw NumericError("gaussian log_std not finite");
}

inline double log_prob(std::span<const double> mean,
                       std::span<const double> log_std,
                       std::span<const double> action) {
  if (mean.size() != action.size() || mean.size() != log_std.size())
    throw ShapeError("gaussian: action dimensionality mismatch");
  check_finite(mean, log_std);
  double lp = 0.0;
  for (std::size_t j = 0; j < mean.size(); ++j) {
    double inv_std = std::exp(-log_std[j]);
    double z = (action[j] - mean[j]) * inv_std;
    lp += -0.5 * z * z - log_std[j] - 0.5 * kLogTwoPi;
  }
  return lp;
}

// d(logp)/d(mean_j) and d(logp)/d(log_std_j).
inline void log_prob_grad(std::span<const double> mean,
                          std::span<const double> log_std,
                          std::span<const double> action,
                          std::span<double> d_mean,
                          std::span<double> d_log_std) {
  for (std::size_t j = 0; j < mean.size(); ++j) {
    double inv_var = std::exp(-2.0 * log_std[j]);
    double diff = action[j] - mean[j];
    d_mean[j] = diff * inv_var;
    d_log_std[j] = diff * diff * inv_var - 1.0;
  }
}

// Sum over dimensions of 0.5*log(2*pi*e*sigma^2).
inline double entropy(std::span<const double> log_std) {
  double h = 0.0;
  for (double ls : log_std) h += ls + 0.5 * (1.0 + kLogTwoPi);
  return h;
}
// d(entropy)/d(log_std_j) = 1 for every j.

inline std::vector<double> sample(std::span<const double> mean,
                                  std::span<const double> log_std, Rng& rng) {
  std::vector<double> a(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j)
    a[j] = mean[j] + std::exp(log_std[j]) * rng.normal();
  return a;
}

}  // namespace gaussian

// Categorical over logits, computed through a stable log-softmax.
namespace categorical {

inline double log_sum_exp(std::span<const double> logits) {
  double m = logits[0];
  for (double z : logits) m = std::max(m, z);
  double s = 0.0;
  for (double z : logits) s += std::exp(z - m);
  return m + std::log(s);
}

inline std::vector<double> probs(std::span<const double> logits) {
  double lse = log_sum_exp(logits);
  std::vector<double> p(logits.size());
  for (std::size_t k = 0; k < logits.size(); ++k)
    p[k] = std::exp(logits[k] - lse);
  return p;
}

inline double log_prob(std::span<const double> logits, std::size_t action) {
  if (action >= logits.size())
    throw ShapeError("categorical: action index out of range");
  for (double z : logits)
    if (!std::isfinite(z)) throw NumericError("categorical logits not finite");
  return logits[action] - log_sum_exp(logits);
}

// d(logp)/d(logit_k) = 1{k == action} - p_k.
inline void log_prob_grad(std::span<const double> logits, std::size_t action,
                          std::span<double> d_logits) {
  std::vector<double> p = probs(logits);
  for (std::size_t k = 0; k < logits.size(); ++k)
    d_logits[k] = (k == action ? 1.0 : 0.0) - p[k];
}

inline double entropy(std::span<const double> logits) {
  std::vector<double> p = probs(logits);
  double h = 0.0;
  for (double pk : p)
    if (pk > 0.0) h -= pk * std::log(pk);
  return h;
}

// d(entropy)/d(logit_k) = -p_k * (log p_k + H).
inline void entropy_grad(std::span<const double> logits,
                         std::span<double> d_logits) {
  std::vector<double> p = probs(logits);
  double h = 0.0;
  for (double pk : p)
    if (pk > 0.0) h -= pk * std::log(pk);
  for (std::size_t k = 0; k < logits.size(); ++k) {
    double logp = p[k] > 0.0 ? std::log(p[k]) : 0.0;
    d_logits[k] = -p[k] * (logp + h);
  }
}

inline std::size_t sample(std::span<const double> logits, Rng& rng) {
  std::vector<double> p = probs(logits);
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) return k;
  }
  return p.size() - 1;
}

inline std::size_t argmax(std::span<const double> logits) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < logits.size(); ++k)
    if (logits[k] > logits[best]) best = k;
  return best;
}

}  // namespace categorical

}  // namespace ppolab

#endif  // PPOLAB_DISTRIBUTIONS_HPP_
