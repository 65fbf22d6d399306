#ifndef HP2D_ERRORS_HPP_
#define HP2D_ERRORS_HPP_

#include <stdexcept>

namespace hp2d {

/// A caller broke an operation's precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The constraint a*x + b*y >= c has a = b = 0.
class ZeroNormal : public ContractViolation {
 public:
  ZeroNormal() : ContractViolation("constraint normal (a, b) is zero") {}
};

/// A coefficient is infinite or NaN.
class NonFiniteInput : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

/// The start box violates 0 < mx, 0 < my, mx + my < omega.
class BoundViolation : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

}  // namespace hp2d

#endif  // HP2D_ERRORS_HPP_
