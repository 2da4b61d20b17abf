#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace wpc {

using Real = double;
using Complex = std::complex<Real>;

using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;
inline constexpr Real kTwoPi = 2 * std::numbers::pi_v<Real>;
inline constexpr Complex kI{0, 1};

/// Raised for malformed inputs: bad grid sizes, out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Spectral energy escaped above the resolvable band of the grid.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A continuous logarithm branch could not be tracked along the grid.
class BranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency failure, e.g. a lift lost strict monotonicity.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric was requested for maps whose derivative degenerates.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

constexpr bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace wpc
