#ifndef FTN_ERRORS_HPP
#define FTN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ftn {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A Cholesky pivot fell at or below the configured floor.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(int pivot_index, double pivot_value)
      : Error("matrix not positive definite: pivot " + std::to_string(pivot_index) +
              " = " + std::to_string(pivot_value)),
        pivot_index(pivot_index),
        pivot_value(pivot_value) {}
  int pivot_index;
  double pivot_value;
};

/// QR factorization met a numerically singular column.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(int column)
      : Error("rank-deficient matrix at column " + std::to_string(column)), column(column) {}
  int column;
};

/// Triangular solve hit a near-zero diagonal entry.
class SingularDiagonal : public Error {
 public:
  SingularDiagonal(int index, double value)
      : Error("singular diagonal entry " + std::to_string(index) + " = " + std::to_string(value)),
        index(index) {}
  int index;
};

/// The truncation rule produced an ISI band longer than the configured cap.
class BandTooLong : public Error {
 public:
  BandTooLong(int required, int cap)
      : Error("ISI band of length " + std::to_string(required) + " exceeds cap " +
              std::to_string(cap)),
        required(required),
        cap(cap) {}
  int required;
  int cap;
};

/// Exhaustive search guard: 2^N enumeration refused above the size limit.
class BlockTooLarge : public Error {
 public:
  explicit BlockTooLarge(int n, int limit)
      : Error("block length " + std::to_string(n) + " exceeds exhaustive-search limit " +
              std::to_string(limit)),
        n(n) {}
  int n;
};

/// Iterative solver ran out of its sweep budget.
class NotConverged : public Error {
 public:
  NotConverged(int iterations, double residual)
      : Error("solver did not converge after " + std::to_string(iterations) +
              " sweeps (last decrease " + std::to_string(residual) + ")"),
        iterations(iterations),
        residual(residual) {}
  int iterations;
  double residual;
};

/// find_min_tau: the target BER is missed even at tau = 1.
class TargetUnreachable : public Error {
 public:
  explicit TargetUnreachable(const std::string& msg) : Error(msg) {}
};

/// Malformed experiment configuration.
class BadConfig : public Error {
 public:
  explicit BadConfig(const std::string& msg) : Error(msg) {}
};

}  // namespace ftn

#endif
