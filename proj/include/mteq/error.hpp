#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mteq {

/// Operand shapes disagree (tensor dimension vs vector length, matrix sizes).
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A pivot fell below the singularity threshold during LU factorization.
class SingularMatrixError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested dense tensor would exceed the configured entry cap.
class DenseCapExceeded : public std::length_error {
public:
  DenseCapExceeded(std::size_t requested, std::size_t cap)
      : std::length_error("dense tensor needs " + std::to_string(requested) +
                          " entries, cap is " + std::to_string(cap) +
                          " (set MTEQ_DENSE_CAP to override)"),
        requested_(requested), cap_(cap) {}

  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t requested_;
  std::size_t cap_;
};

/// Malformed .mt / .vec / manifest input. `line()` is 1-based, 0 if unknown.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// No usable starting point could be constructed (A is likely not a strong M-tensor).
class InitializationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mteq
