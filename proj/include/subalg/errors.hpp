#pragma once

#include <stdexcept>
#include <string>

namespace subalg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SUBALG_ERROR(Name)                          \
  struct Name : Error {                             \
    explicit Name(const std::string& what)          \
        : Error(std::string(#Name ": ") + what) {}  \
  }

SUBALG_ERROR(NonHermitian);
SUBALG_ERROR(DimensionMismatch);
SUBALG_ERROR(DimensionTooLarge);
SUBALG_ERROR(DegenerateSample);
SUBALG_ERROR(NotClosedUnderStar);
SUBALG_ERROR(ConstructionFailed);
SUBALG_ERROR(NonConvergence);
SUBALG_ERROR(InvalidEpsilon);
SUBALG_ERROR(PreconditionViolated);
SUBALG_ERROR(ConfigError);

#undef SUBALG_ERROR

}  // namespace subalg
