#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stable_ergo {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlphaOutOfRange : public Error {
 public:
  explicit AlphaOutOfRange(double alpha)
      : Error("alpha must lie in the open interval (1,2), got " + std::to_string(alpha)), alpha_(alpha) {}
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

class NonPositiveSigma : public Error {
 public:
  NonPositiveSigma(double x, double value)
      : Error("sigma(" + std::to_string(x) + ") = " + std::to_string(value) + " is not strictly positive"),
        x_(x),
        value_(value) {}
  double x() const { return x_; }
  double value() const { return value_; }

 private:
  double x_;
  double value_;
};

// Tail exponent estimate did not settle; criteria depending on it are unknown.
class TailUndetermined : public Error {
 public:
  using Error::Error;
};

class IntegralDiverged : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

class HorizonExceeded : public Error {
 public:
  using Error::Error;
};

class AllCensored : public Error {
 public:
  using Error::Error;
};

class NotErgodic : public Error {
 public:
  using Error::Error;
};

class SignalTooNoisy : public Error {
 public:
  using Error::Error;
};

}  // namespace stable_ergo
