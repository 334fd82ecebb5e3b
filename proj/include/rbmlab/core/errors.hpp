#pragma once

#include <stdexcept>
#include <string>

namespace rbmlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative method or a resolution-doubling check did not converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A band LU pivot fell below the working-precision floor.
class SingularPivotError : public Error {
 public:
  SingularPivotError(std::size_t index, double magnitude)
      : Error("singular pivot at row " + std::to_string(index) +
              " (|pivot| = " + std::to_string(magnitude) + ")"),
        index_(index),
        magnitude_(magnitude) {}

  [[nodiscard]] std::size_t index() const noexcept { return index_; }
  [[nodiscard]] double magnitude() const noexcept { return magnitude_; }

 private:
  std::size_t index_;
  double magnitude_;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace rbmlab
