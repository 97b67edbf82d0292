#pragma once

#include <stdexcept>
#include <string>

namespace gpq {

enum class Errc {
    EvenPointCount,
    NonPositiveWidth,
    NonFiniteField,
    SpeedOutOfRange,
    UnresolvedBranch,
    BranchResolutionFailure,
    DomainError,
    VacuumViolation,
    UnwrapAmbiguity,
    EigenConvergenceFailure,
    NoConvergence,
    SingularModulationMatrix,
    PicardDivergence,
    ConfigError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// numerical failures map to exit 3, config problems to exit 2
inline bool is_config_error(Errc e) {
    return e == Errc::ConfigError || e == Errc::EvenPointCount || e == Errc::NonPositiveWidth ||
           e == Errc::SpeedOutOfRange || e == Errc::DomainError;
}

}  // namespace gpq
