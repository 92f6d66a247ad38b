#ifndef PPOLAB_ERRORS_HPP_
#define PPOLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ppolab {

// Invalid hyperparameter or option value.
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Mismatched array lengths / dimensions.
struct ShapeError : std::invalid_argument {
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Non-finite values where finite ones are required.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppolab

#endif  // PPOLAB_ERRORS_HPP_
