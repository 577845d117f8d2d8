#pragma once

#include <stdexcept>
#include <string>

namespace mapcalc {

/// Base class of every error raised by the library. `code()` is a stable
/// identifier used in reports and CLI output.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what);
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define MAPCALC_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}    \
  };

MAPCALC_DECLARE_ERROR(InvalidArgument)
MAPCALC_DECLARE_ERROR(InvalidPoint)
MAPCALC_DECLARE_ERROR(BeyondInjectivityRadius)
MAPCALC_DECLARE_ERROR(BaseMismatch)
MAPCALC_DECLARE_ERROR(FormulaOutOfTarget)
MAPCALC_DECLARE_ERROR(TargetChartViolated)
MAPCALC_DECLARE_ERROR(InsufficientResolution)
MAPCALC_DECLARE_ERROR(ResolutionMismatch)
MAPCALC_DECLARE_ERROR(HypothesisViolated)
MAPCALC_DECLARE_ERROR(WellDefinednessViolated)
MAPCALC_DECLARE_ERROR(FiberBoxViolated)
MAPCALC_DECLARE_ERROR(ThickeningViolated)
MAPCALC_DECLARE_ERROR(StepOutOfChart)
MAPCALC_DECLARE_ERROR(ParseError)
MAPCALC_DECLARE_ERROR(ConfigError)
MAPCALC_DECLARE_ERROR(IoError)

#undef MAPCALC_DECLARE_ERROR

}  // namespace mapcalc
