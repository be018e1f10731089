#pragma once

#include <stdexcept>
#include <string>

namespace csim {

enum class ErrorKind {
    InvalidArgument,
    NoConvergence,
    DerivativeSingular,
    BranchJumpSuspected,
    NonEscapingPoint,
    NotRepelling,
    NotMinimal,
    FreeCriticalPeriodic,
    OffCurve,
    ChartDomainExceeded,
    ProjectionFailed,
    TransversalityFailure,
    ContinuationFailure,
    SamplingTooCoarse,
    PrecisionExhausted,
    EmptySet,
    BranchAmbiguity,
    InsidePotential,
    NewtonDivergence,
    NotInEscapeRegion,
    Io,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// front ends can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace csim
