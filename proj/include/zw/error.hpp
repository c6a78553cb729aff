#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace zw {

using cplx = std::complex<double>;

enum class ErrorKind {
  CapacityViolation,
  FlavorMismatch,
  BoundaryMismatch,
  RangeViolation,
  InvalidDiagram,
  StaleMatch,
  NotInNormalForm,
  CapacityMismatch,
  PartsMismatch,
  HasInputs,
  TooLarge,
  UndefinedForFlavor,
  ParseError,
  ValidationError,
  UnknownRule,
};

const char* error_kind_name(ErrorKind kind);

/** Every failure raised by the library carries a machine-readable kind. */
class ZwError : public std::runtime_error {
 public:
  ZwError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace zw
