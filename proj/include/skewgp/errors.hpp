#pragma once

#include <cstddef>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace skewgp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(int order)
      : Error("unsupported derivative order " + std::to_string(order) +
              " (only 0, 1, 2 are available)") {}
};

/// Kernel whose h'(0) >= 0 or h''(0) <= 0; the derivative ensemble is degenerate.
class DegenerateKernel : public Error {
 public:
  using Error::Error;
};

class IllConditionedGram : public Error {
 public:
  IllConditionedGram(std::size_t pivot, double jitter)
      : Error("Cholesky factorization failed at pivot " + std::to_string(pivot) +
              " with jitter " + format_jitter(jitter)),
        pivot_(pivot) {}

  std::size_t pivot() const { return pivot_; }

 private:
  static std::string format_jitter(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
  }
  std::size_t pivot_;
};

class NoCriticalRadius : public Error {
 public:
  using Error::Error;
};

/// A closed form produced a value that can only come from a formula bug.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace skewgp
