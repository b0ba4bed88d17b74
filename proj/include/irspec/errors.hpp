#pragma once

#include <stdexcept>
#include <string>

namespace irs {

// Malformed input: bad permutation text, bad partition, shape mismatch.
// The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The requested computation is well defined but too large to run
// exhaustively. The CLI maps this to exit code 3.
class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(const std::string& what, std::string estimate)
      : std::runtime_error(what + " (estimate: " + estimate + ")"),
        estimate_(std::move(estimate)) {}
  const std::string& estimate() const { return estimate_; }

 private:
  std::string estimate_;
};

}  // namespace irs
