#ifndef PPOLAB_PARAM_VECTOR_HPP_
#define PPOLAB_PARAM_VECTOR_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppolab/errors.hpp"

namespace ppolab {

// Named view into a flat parameter array: `rows x cols` scalars starting
// at `offset`. Vectors use cols == 1.
struct SliceSpec {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const { return rows * cols; }
};

// Flat, ordered collection of all parameters. The layout is fixed at
// construction; values are the only mutable part.
class ParamVector {
 public:
  ParamVector() = default;

  // Builder-style: register slices, then call `finalize` once.
  std::size_t add_slice(const std::string& name, std::size_t rows,
                        std::size_t cols) {
    SliceSpec s{name, total_, rows, cols};
    slices_.push_back(s);
    total_ += s.size();
    return slices_.size() - 1;
  }

  void finalize() { values_.assign(total_, 0.0); }

  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  const std::vector<SliceSpec>& slices() const { return slices_; }

  std::span<double> slice(std::size_t index) {
    const SliceSpec& s = slices_.at(index);
    return {values_.data() + s.offset, s.size()};
  }
  std::span<const double> slice(std::size_t index) const {
    const SliceSpec& s = slices_.at(index);
    return {values_.data() + s.offset, s.size()};
  }

  std::span<double> slice(const std::string& name) {
    return slice(find(name));
  }
  std::span<const double> slice(const std::string& name) const {
    return slice(find(name));
  }

  std::size_t find(const std::string& name) const {
    for (std::size_t i = 0; i < slices_.size(); ++i)
      if (slices_[i].name == name) return i;
    throw ShapeError("no parameter slice named '" + name + "'");
  }

  // Zero-valued clone with the same layout (gradient accumulators).
  ParamVector zeros_like() const {
    ParamVector out = *this;
    out.values_.assign(out.values_.size(), 0.0);
    return out;
  }

  void fill(double v) { values_.assign(values_.size(), v); }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  ParamVector& operator+=(const ParamVector& rhs) {
    check_same_size(rhs);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
    return *this;
  }

  // this += scale * rhs
  void axpy(double scale, const ParamVector& rhs) {
    check_same_size(rhs);
    for (std::size_t i = 0; i < values_.size(); ++i)
      values_[i] += scale * rhs.values_[i];
  }

  void scale(double s) {
    for (double& v : values_) v *= s;
  }

  double dot(const ParamVector& rhs) const {
    check_same_size(rhs);
    double acc = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
      acc += values_[i] * rhs.values_[i];
    return acc;
  }

  double norm2() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc);
  }

 private:
  void check_same_size(const ParamVector& rhs) const {
    if (rhs.values_.size() != values_.size())
      throw ShapeError("parameter vector size mismatch");
  }

  std::vector<SliceSpec> slices_;
  std::vector<double> values_;
  std::size_t total_ = 0;
};

}  // namespace ppolab

#endif  // PPOLAB_PARAM_VECTOR_HPP_
