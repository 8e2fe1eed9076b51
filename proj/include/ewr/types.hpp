#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace ewr {

using cplx = std::complex<double>;
using Index = Eigen::Index;

// Columns are samples throughout: a matrix N x m holds m signals of length N.
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Raised when an argument violates an operation's precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a step size breaks tau * ||A||^2 / (KN) <= 1.
class AssumptionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised for unreadable or malformed files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ewr
