#pragma once

#include <stdexcept>
#include <string>

namespace rdx {

// every domain failure carries the module-level error name in kind()
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define RDX_DEFINE_ERROR(Name)                                                  \
    struct Name : Error {                                                       \
        explicit Name(const std::string& msg) : Error(#Name, msg) {}            \
    };

RDX_DEFINE_ERROR(InvalidParameter)
RDX_DEFINE_ERROR(DegenerateSystem)
RDX_DEFINE_ERROR(KindMismatch)
RDX_DEFINE_ERROR(OutOfRange)
RDX_DEFINE_ERROR(DomainError)
RDX_DEFINE_ERROR(ExtrapolationError)
RDX_DEFINE_ERROR(DegenerateODE)
RDX_DEFINE_ERROR(NoBracketing)
RDX_DEFINE_ERROR(StiffnessFailure)
RDX_DEFINE_ERROR(NonConvergence)
RDX_DEFINE_ERROR(NoConnection)
RDX_DEFINE_ERROR(ConfigError)
RDX_DEFINE_ERROR(NonFiniteState)
RDX_DEFINE_ERROR(InsufficientData)
RDX_DEFINE_ERROR(UsageError)

#undef RDX_DEFINE_ERROR

}  // namespace rdx
