#pragma once

#include <stdexcept>
#include <string>

namespace xrt {

// Base of every domain error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

// Numerical failures surface as exit code 3 in the CLI.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalError"; }
};

// Caller-side misuse (wrong order, wrong grid, ...).
class UsageError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "UsageError"; }
};

#define XRT_DEFINE_ERROR(Name, Base)                          \
  class Name : public Base {                                  \
   public:                                                    \
    using Base::Base;                                         \
    const char* kind() const noexcept override { return #Name; } \
  };

XRT_DEFINE_ERROR(SingularMetric, NumericalError)
XRT_DEFINE_ERROR(StepTooLarge, NumericalError)
XRT_DEFINE_ERROR(NoExit, NumericalError)
XRT_DEFINE_ERROR(ResolutionTooLow, NumericalError)
XRT_DEFINE_ERROR(RankDeficient, NumericalError)
XRT_DEFINE_ERROR(NoConvergence, NumericalError)
XRT_DEFINE_ERROR(MissingDerivatives, UsageError)
XRT_DEFINE_ERROR(OrderTooLow, UsageError)
XRT_DEFINE_ERROR(UnsupportedOrder, UsageError)
XRT_DEFINE_ERROR(OrderMismatch, UsageError)
XRT_DEFINE_ERROR(NotPureDegree, UsageError)
XRT_DEFINE_ERROR(GridMismatch, UsageError)
XRT_DEFINE_ERROR(NotOnBoundary, UsageError)
XRT_DEFINE_ERROR(CoverGap, UsageError)
XRT_DEFINE_ERROR(ConfigError, UsageError)

#undef XRT_DEFINE_ERROR

}  // namespace xrt
