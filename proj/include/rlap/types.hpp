#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rlap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Argument outside the domain of an operation: a point off the sphere, a
// parameter outside the open interval, a dimension mismatch.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure could not deliver (indefinite mass matrix, no
// convergence, non-finite integrand).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A stated hypothesis of a check was not met; carries the measured defect.
class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(const std::string& what, double measured)
      : std::runtime_error(what), measured_(measured) {}
  double measured() const { return measured_; }

 private:
  double measured_;
};

}  // namespace rlap
