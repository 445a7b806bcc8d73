#pragma once

#include <stdexcept>
#include <string>

namespace tritforge {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TRITFORGE_DEFINE_ERROR(Name)          \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  };

TRITFORGE_DEFINE_ERROR(RegisterError)
TRITFORGE_DEFINE_ERROR(InvalidLevelError)
TRITFORGE_DEFINE_ERROR(InvalidSubspaceError)
TRITFORGE_DEFINE_ERROR(EmbeddingError)
TRITFORGE_DEFINE_ERROR(InvalidCircuitError)
TRITFORGE_DEFINE_ERROR(NotUnitaryError)
TRITFORGE_DEFINE_ERROR(NormalizationError)
TRITFORGE_DEFINE_ERROR(DensityError)
TRITFORGE_DEFINE_ERROR(CatalogError)
TRITFORGE_DEFINE_ERROR(ConstructionIntegrityError)
TRITFORGE_DEFINE_ERROR(WrongCheckerError)
TRITFORGE_DEFINE_ERROR(NotApplicableError)
TRITFORGE_DEFINE_ERROR(InvalidBudgetError)
TRITFORGE_DEFINE_ERROR(ParseError)

#undef TRITFORGE_DEFINE_ERROR

}  // namespace tritforge
