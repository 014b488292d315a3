#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

namespace hypdim {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Which invariant subbundle an analysis is restricted to.
enum class Bundle { stable, unstable };

std::string_view to_string(Bundle b);

/// Precondition or parameter violations; maps to the CLI's validation exit code.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string operation, const std::string& what)
      : std::runtime_error(operation + ": " + what), operation_(std::move(operation)) {}

  const std::string& operation() const noexcept { return operation_; }

 private:
  std::string operation_;
};

}  // namespace hypdim
