#pragma once

#include <stdexcept>
#include <string>

namespace towers {

// Malformed input: out-of-range indices, non-finite values, bad files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap (dense dimension, configuration graph, product space)
// would be exceeded.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, long long required, long long cap)
      : std::runtime_error(what + ": required " + std::to_string(required) +
                           ", cap " + std::to_string(cap)),
        required_(required),
        cap_(cap) {}

  long long required() const { return required_; }
  long long cap() const { return cap_; }

 private:
  long long required_;
  long long cap_;
};

// Casimir eigenvalues could not be rounded to a valid quantum number.
class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A theorem's hypothesis does not hold for the given model.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver failed to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace towers
