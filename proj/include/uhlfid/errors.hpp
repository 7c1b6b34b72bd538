#pragma once

#include <stdexcept>
#include <string>

namespace uhlfid {

/// Coarse classification used by the command-line front end to pick an exit code.
enum class ErrorCategory {
  Validation,  // the inputs are not what the operation requires
  Numerical,   // the inputs were fine but a kernel could not deliver
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define UHLFID_DEFINE_ERROR(Name, Category)                                 \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& what) : Error(Category, #Name ": " + what) {} \
  };

UHLFID_DEFINE_ERROR(DimensionError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(DomainError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(HermiticityError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(NegativityError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(TraceError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(ZeroVectorError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(UnitarityError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(RankError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(ParseError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(IoError, ErrorCategory::Validation)
UHLFID_DEFINE_ERROR(ConvergenceError, ErrorCategory::Numerical)
UHLFID_DEFINE_ERROR(SpectrumError, ErrorCategory::Numerical)
UHLFID_DEFINE_ERROR(ClockError, ErrorCategory::Numerical)
UHLFID_DEFINE_ERROR(ReproducibilityError, ErrorCategory::Numerical)

#undef UHLFID_DEFINE_ERROR

}  // namespace uhlfid
