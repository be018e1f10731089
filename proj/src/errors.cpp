#include "csim/errors.hpp"

namespace csim {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DerivativeSingular: return "DerivativeSingular";
        case ErrorKind::BranchJumpSuspected: return "BranchJumpSuspected";
        case ErrorKind::NonEscapingPoint: return "NonEscapingPoint";
        case ErrorKind::NotRepelling: return "NotRepelling";
        case ErrorKind::NotMinimal: return "NotMinimal";
        case ErrorKind::FreeCriticalPeriodic: return "FreeCriticalPeriodic";
        case ErrorKind::OffCurve: return "OffCurve";
        case ErrorKind::ChartDomainExceeded: return "ChartDomainExceeded";
        case ErrorKind::ProjectionFailed: return "ProjectionFailed";
        case ErrorKind::TransversalityFailure: return "TransversalityFailure";
        case ErrorKind::ContinuationFailure: return "ContinuationFailure";
        case ErrorKind::SamplingTooCoarse: return "SamplingTooCoarse";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::EmptySet: return "EmptySet";
        case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorKind::InsidePotential: return "InsidePotential";
        case ErrorKind::NewtonDivergence: return "NewtonDivergence";
        case ErrorKind::NotInEscapeRegion: return "NotInEscapeRegion";
        case ErrorKind::Io: return "Io";
        case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace csim
