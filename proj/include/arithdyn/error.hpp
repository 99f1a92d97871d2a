/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <stdexcept>
#include <string>

namespace arithdyn {

/// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorKind {
    Input,      ///< malformed or unsupported input
    Invariant,  ///< a mathematical contract was violated
    Budget,     ///< an iteration or bit budget ran out
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

#define ARITHDYN_DEFINE_ERROR(Name, Kind)                                                          \
    class Name : public Error {                                                                    \
      public:                                                                                      \
        explicit Name(const std::string &what) : Error(ErrorKind::Kind, #Name ": " + what) {}      \
    };

ARITHDYN_DEFINE_ERROR(DivisionByZero, Input)
ARITHDYN_DEFINE_ERROR(FieldMismatch, Input)
ARITHDYN_DEFINE_ERROR(InvalidPoint, Input)
ARITHDYN_DEFINE_ERROR(UnsupportedField, Input)
ARITHDYN_DEFINE_ERROR(Unsupported, Input)
ARITHDYN_DEFINE_ERROR(ParseError, Input)
ARITHDYN_DEFINE_ERROR(NotAMorphism, Input)
ARITHDYN_DEFINE_ERROR(InvalidMap, Input)
ARITHDYN_DEFINE_ERROR(Unresolvable, Input)
ARITHDYN_DEFINE_ERROR(InsufficientGenerators, Input)
ARITHDYN_DEFINE_ERROR(SingularCurve, Input)
ARITHDYN_DEFINE_ERROR(NotAMorphismAtPoint, Invariant)
ARITHDYN_DEFINE_ERROR(InvariantViolation, Invariant)
ARITHDYN_DEFINE_ERROR(BudgetExceeded, Budget)

#undef ARITHDYN_DEFINE_ERROR

} // namespace arithdyn
