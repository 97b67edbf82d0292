#include "gpq/errors.hpp"

namespace gpq {

const char* errc_name(Errc e) {
    switch (e) {
        case Errc::EvenPointCount: return "EvenPointCount";
        case Errc::NonPositiveWidth: return "NonPositiveWidth";
        case Errc::NonFiniteField: return "NonFiniteField";
        case Errc::SpeedOutOfRange: return "SpeedOutOfRange";
        case Errc::UnresolvedBranch: return "UnresolvedBranch";
        case Errc::BranchResolutionFailure: return "BranchResolutionFailure";
        case Errc::DomainError: return "DomainError";
        case Errc::VacuumViolation: return "VacuumViolation";
        case Errc::UnwrapAmbiguity: return "UnwrapAmbiguity";
        case Errc::EigenConvergenceFailure: return "EigenConvergenceFailure";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::SingularModulationMatrix: return "SingularModulationMatrix";
        case Errc::PicardDivergence: return "PicardDivergence";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace gpq
