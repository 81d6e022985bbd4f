#pragma once

#include <stdexcept>
#include <string>

namespace perc {

// Base of every error the library throws. Subclasses carry the failure kind
// so callers (the CLI in particular) can map them onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define PERC_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(what) {}  \
    }

PERC_DEFINE_ERROR(DimensionMismatch);
PERC_DEFINE_ERROR(OutOfQuadrant);
PERC_DEFINE_ERROR(InvalidSpec);
PERC_DEFINE_ERROR(BudgetExceeded);
PERC_DEFINE_ERROR(DomainError);
PERC_DEFINE_ERROR(InvalidConfig);
PERC_DEFINE_ERROR(MemoryBudgetExceeded);
PERC_DEFINE_ERROR(NonMonotoneSignal);
PERC_DEFINE_ERROR(KeyMismatch);

#undef PERC_DEFINE_ERROR

} // namespace perc
