#pragma once

#include <stdexcept>
#include <string>

namespace adiaq {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated an operation's precondition (dimension mismatch,
/// invalid table, out-of-range index, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An operation was asked to materialize something beyond its size cap.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text (DIMACS, config files). Carries a line number
/// when one is known; line == 0 means "not line-specific".
class FormatError : public Error {
 public:
  FormatError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_ = 0;
};

/// An iterative solver ran out of its iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

/// A builder was given parameters that make the requested ground state
/// non-unique by construction (e.g. an all-zero transverse field).
class DegenerateBuilderError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// Sign flip requested at a zero diagonal entry: the flip has no effect.
class FlipNoEffectError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// A subspace closure exceeded its expected numerical rank.
class RankToleranceError : public Error {
 public:
  using Error::Error;
};

/// Time stepping could not proceed: the step size underflowed at time t.
class StiffnessError : public Error {
 public:
  StiffnessError(const std::string& what, double t) : Error(what), t_(t) {}
  double time() const { return t_; }

 private:
  double t_;
};

/// The propagated state left the integrator's validity envelope
/// (norm drift beyond bound).
class IntegratorError : public Error {
 public:
  using Error::Error;
};

/// Two profiles that must share an s-grid do not.
class GridMismatchError : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

}  // namespace adiaq
