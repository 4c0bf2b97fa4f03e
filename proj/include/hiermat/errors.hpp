#pragma once

#include <stdexcept>
#include <string>

namespace hiermat {

/// Base class for all library errors. `name()` is a stable machine-readable
/// identifier (used verbatim by the CLI on stderr); `what()` carries detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define HIERMAT_DEFINE_ERROR(ClassName)                                  \
    class ClassName : public Error {                                     \
    public:                                                              \
        explicit ClassName(const std::string& message)                   \
            : Error(#ClassName, message) {}                              \
    }

HIERMAT_DEFINE_ERROR(InvalidParams);
HIERMAT_DEFINE_ERROR(InvalidArgument);
HIERMAT_DEFINE_ERROR(DegenerateConversion);
HIERMAT_DEFINE_ERROR(DimensionLimitExceeded);
HIERMAT_DEFINE_ERROR(NonPrimeR);
HIERMAT_DEFINE_ERROR(ZeroEigenvalueClass);
HIERMAT_DEFINE_ERROR(DegenerateWord);
HIERMAT_DEFINE_ERROR(NotNormalized);
HIERMAT_DEFINE_ERROR(UnsupportedP);
HIERMAT_DEFINE_ERROR(NonConvergent);
HIERMAT_DEFINE_ERROR(NotBoltzmann);
HIERMAT_DEFINE_ERROR(InternalCheckFailure);

#undef HIERMAT_DEFINE_ERROR

} // namespace hiermat
