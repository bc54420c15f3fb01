#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddchain {

// Iterative numerics gave up (eigensolver iteration cap, Volterra blow-up).
// index() is the offending eigenvalue index or time step.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddchain
