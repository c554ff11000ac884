#pragma once

#include <stdexcept>
#include <string>

namespace varcalc {

// Base for every error the library raises on bad inputs or failed
// preconditions.  Findings of the numeric checks themselves are *data*
// (reports carry them); exceptions are reserved for contract violations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define VARCALC_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

VARCALC_DEFINE_ERROR(DimensionMismatch);
VARCALC_DEFINE_ERROR(NonFiniteState);
VARCALC_DEFINE_ERROR(UnknownLagrangian);
VARCALC_DEFINE_ERROR(TooFewFinitePoints);
VARCALC_DEFINE_ERROR(EmptyDualGrid);
VARCALC_DEFINE_ERROR(PointOutsideFiniteRegion);
VARCALC_DEFINE_ERROR(EvaluatorInfinite);
VARCALC_DEFINE_ERROR(EmptyFan);
VARCALC_DEFINE_ERROR(EndpointOutsideGrid);
VARCALC_DEFINE_ERROR(CostOverflow);
VARCALC_DEFINE_ERROR(SlopeOutOfDomain);
VARCALC_DEFINE_ERROR(MassMismatch);
VARCALC_DEFINE_ERROR(GaugeTooWeak);
VARCALC_DEFINE_ERROR(HypothesisFailed);
VARCALC_DEFINE_ERROR(FlagMissing);
VARCALC_DEFINE_ERROR(TrajectoryOffGrid);
VARCALC_DEFINE_ERROR(AllInfiniteLayer);
VARCALC_DEFINE_ERROR(NotAdmissible);
VARCALC_DEFINE_ERROR(ConfigError);

#undef VARCALC_DEFINE_ERROR

// Schema violations remember where in the document they happened.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& what)
      : Error("SchemaError at '" + pointer + "': " + what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace varcalc
