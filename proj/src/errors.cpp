#include "errors.hpp"

namespace swancond {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Usage: return "Usage";
        case ErrorKind::Schema: return "Schema";
        case ErrorKind::ExtensionRequired: return "ExtensionRequired";
        case ErrorKind::ExtensionCapExceeded: return "ExtensionCapExceeded";
        case ErrorKind::PrecisionLoss: return "PrecisionLoss";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::GridTooCoarse: return "GridTooCoarse";
        case ErrorKind::TailUnbounded: return "TailUnbounded";
        case ErrorKind::UnsupportedSlope: return "UnsupportedSlope";
        case ErrorKind::DomainMismatch: return "DomainMismatch";
        case ErrorKind::SeriesMismatch: return "SeriesMismatch";
        case ErrorKind::ConnectednessNotEstablished: return "ConnectednessNotEstablished";
        case ErrorKind::NotADiskBelow: return "NotADiskBelow";
        case ErrorKind::WitnessInvalid: return "WitnessInvalid";
        case ErrorKind::TheoremViolated: return "TheoremViolated";
        case ErrorKind::AssumptionViolation: return "AssumptionViolation";
        case ErrorKind::InseparabilityUnverified: return "InseparabilityUnverified";
        case ErrorKind::NonUnit: return "NonUnit";
        case ErrorKind::NotAPthPower: return "NotAPthPower";
        case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    }
    return "Unknown";
}

int error_kind_status(ErrorKind k) {
    switch (k) {
        case ErrorKind::Usage:
            return 1;
        case ErrorKind::Schema:
        case ErrorKind::DomainMismatch:
        case ErrorKind::SeriesMismatch:
        case ErrorKind::AssumptionViolation:
        case ErrorKind::ConnectednessNotEstablished:
        case ErrorKind::WitnessInvalid:
        case ErrorKind::NonUnit:
        case ErrorKind::NotAPthPower:
            return 2;
        case ErrorKind::ExtensionRequired:
        case ErrorKind::ExtensionCapExceeded:
            return 3;
        case ErrorKind::PrecisionLoss:
            return 4;
        case ErrorKind::Inconclusive:
        case ErrorKind::NoConvergence:
        case ErrorKind::GridTooCoarse:
        case ErrorKind::TailUnbounded:
        case ErrorKind::UnsupportedSlope:
        case ErrorKind::NotADiskBelow:
        case ErrorKind::InseparabilityUnverified:
            return 5;
        case ErrorKind::TheoremViolated:
        case ErrorKind::InternalInconsistency:
            return 6;
    }
    return 6;
}

}  // namespace swancond
