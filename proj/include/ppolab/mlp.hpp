#ifndef PPOLAB_MLP_HPP_
#define PPOLAB_MLP_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppolab/errors.hpp"
#include "ppolab/param_vector.hpp"
#include "ppolab/rng.hpp"

namespace ppolab {

enum class Activation { kTanh, kRelu };

inline const char* activation_name(Activation a) {
  return a == Activation::kTanh ? "tanh" : "relu";
}

// Layer widths: in -> hidden... -> out, linear head, activation on the
// hidden layers only. `hidden` may be empty (a single affine map).
struct MlpSpec {
  std::size_t in = 0;
  std::vector<std::size_t> hidden;
  std::size_t out = 0;
  Activation activation = Activation::kTanh;

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w;
    w.push_back(in);
    for (std::size_t h : hidden) w.push_back(h);
    w.push_back(out);
    return w;
  }
  std::size_t num_layers() const { return hidden.size() + 1; }
};

// Gain-scaled matrix with orthonormal rows (rows <= cols) or columns
// (rows > cols), row-major. Two-pass modified Gram-Schmidt on a random
// Gaussian matrix.
inline std::vector<double> ortho_init(std::size_t rows, std::size_t cols,
                                      double gain, Rng& rng) {
  const bool by_rows = rows <= cols;
  const std::size_t nvec = by_rows ? rows : cols;
  const std::size_t dim = by_rows ? cols : rows;

  std::vector<std::vector<double>> v(nvec, std::vector<double>(dim));
  for (auto& row : v)
    for (double& x : row) x = rng.normal();

  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < nvec; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double proj = 0.0;
        for (std::size_t k = 0; k < dim; ++k) proj += v[i][k] * v[j][k];
        for (std::size_t k = 0; k < dim; ++k) v[i][k] -= proj * v[j][k];
      }
      double norm = 0.0;
      for (std::size_t k = 0; k < dim; ++k) norm += v[i][k] * v[i][k];
      norm = std::sqrt(norm);
      if (norm == 0.0) norm = 1.0;  // measure-zero; keep deterministic
      for (std::size_t k = 0; k < dim; ++k) v[i][k] /= norm;
    }
  }

  std::vector<double> m(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m[r * cols + c] = gain * (by_rows ? v[r][c] : v[c][r]);
  return m;
}

// Fan-in scaled uniform init, the fallback when orthogonal init is off.
inline std::vector<double> uniform_init(std::size_t rows, std::size_t cols,
                                        Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  std::vector<double> m(rows * cols);
  for (double& x : m) x = rng.uniform(-bound, bound);
  return m;
}

// MLP bound to W/b slices of a ParamVector. Stateless apart from the
// slice indices; forward/backward take the parameter values explicitly.
class Mlp {
 public:
  Mlp() = default;

  // Registers weight/bias slices named "<prefix>.w<l>" / "<prefix>.b<l>".
  Mlp(const MlpSpec& spec, const std::string& prefix, ParamVector& params)
      : spec_(spec) {
    auto w = spec.widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      weight_idx_.push_back(params.add_slice(
          prefix + ".w" + std::to_string(l), w[l + 1], w[l]));
      bias_idx_.push_back(
          params.add_slice(prefix + ".b" + std::to_string(l), w[l + 1], 1));
    }
  }

  const MlpSpec& spec() const { return spec_; }

  // Hidden layers gain sqrt(2), head gain `head_gain`; biases zero.
  void init(ParamVector& params, Rng& rng, bool orthogonal,
            double head_gain) const {
    auto w = spec_.widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      bool is_head = (l + 2 == w.size());
      double gain = is_head ? head_gain : std::sqrt(2.0);
      std::vector<double> m =
          orthogonal ? ortho_init(w[l + 1], w[l], gain, rng)
                     : uniform_init(w[l + 1], w[l], rng);
      auto dst = params.slice(weight_idx_[l]);
      std::copy(m.begin(), m.end(), dst.begin());
      auto b = params.slice(bias_idx_[l]);
      std::fill(b.begin(), b.end(), 0.0);
    }
  }

  // Per-call activation cache for the backward pass.
  struct Cache {
    std::vector<std::vector<double>> acts;  // acts[0]=input, acts[L]=output
  };

  std::vector<double> forward(const ParamVector& params,
                              std::span<const double> input,
                              Cache* cache = nullptr) const {
    if (input.size() != spec_.in)
      throw ShapeError("mlp input size " + std::to_string(input.size()) +
                       " != " + std::to_string(spec_.in));
    std::vector<double> x(input.begin(), input.end());
    if (cache) {
      cache->acts.clear();
      cache->acts.push_back(x);
    }
    const std::size_t layers = spec_.num_layers();
    for (std::size_t l = 0; l < layers; ++l) {
      auto W = params.slice(weight_idx_[l]);
      auto b = params.slice(bias_idx_[l]);
      const SliceSpec& ws = params.slices()[weight_idx_[l]];
      std::vector<double> y(ws.rows);
      for (std::size_t r = 0; r < ws.rows; ++r) {
        double acc = b[r];
        const double* wrow = W.data() + r * ws.cols;
        for (std::size_t c = 0; c < ws.cols; ++c) acc += wrow[c] * x[c];
        y[r] = acc;
      }
      if (l + 1 < layers) {
        if (spec_.activation == Activation::kTanh)
          for (double& v : y) v = std::tanh(v);
        else
          for (double& v : y) v = v > 0.0 ? v : 0.0;
      }
      x = std::move(y);
      if (cache) cache->acts.push_back(x);
    }
    return x;
  }

  // Accumulates dL/dparams into `grad` given dL/doutput; returns nothing
  // (input gradients are not needed by any caller).
  void backward(const ParamVector& params, const Cache& cache,
                std::span<const double> grad_out, ParamVector& grad) const {
    const std::size_t layers = spec_.num_layers();
    std::vector<double> g(grad_out.begin(), grad_out.end());
    for (std::size_t l = layers; l-- > 0;) {
      const std::vector<double>& out = cache.acts[l + 1];
      const std::vector<double>& in = cache.acts[l];
      if (l + 1 < layers) {
        // g currently holds dL/d(post-activation); fold in act'.
        if (spec_.activation == Activation::kTanh)
          for (std::size_t r = 0; r < g.size(); ++r)
            g[r] *= 1.0 - out[r] * out[r];
        else
          for (std::size_t r = 0; r < g.size(); ++r)
            if (out[r] <= 0.0) g[r] = 0.0;
      }
      auto W = params.slice(weight_idx_[l]);
      auto dW = grad.slice(weight_idx_[l]);
      auto db = grad.slice(bias_idx_[l]);
      const SliceSpec& ws = params.slices()[weight_idx_[l]];
      std::vector<double> gin(ws.cols, 0.0);
      for (std::size_t r = 0; r < ws.rows; ++r) {
        db[r] += g[r];
        double* dwrow = dW.data() + r * ws.cols;
        const double* wrow = W.data() + r * ws.cols;
        for (std::size_t c = 0; c < ws.cols; ++c) {
          dwrow[c] += g[r] * in[c];
          gin[c] += wrow[c] * g[r];
        }
      }
      g = std::move(gin);
    }
  }

 private:
  MlpSpec spec_;
  std::vector<std::size_t> weight_idx_;
  std::vector<std::size_t> bias_idx_;
};

}  // namespace ppolab

#endif  // PPOLAB_MLP_HPP_
