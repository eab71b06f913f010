#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace painleve {

enum class ErrorKind {
    InvalidState,
    SingularPoint,
    PoleEncountered,
    SegmentThroughOrigin,
    StepSizeUnderflow,
    OutsideSegment,
    AmbiguousBranch,
    ZeroDenominator,
    InvalidParams,
    DegenerateLocus,
    ZeroQ,
    NonRealInput,
    EvaluationOverflow,
    IdenticallySingular,
    ConfigError,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::SegmentThroughOrigin: return "SegmentThroughOrigin";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::OutsideSegment: return "OutsideSegment";
    case ErrorKind::AmbiguousBranch: return "AmbiguousBranch";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DegenerateLocus: return "DegenerateLocus";
    case ErrorKind::ZeroQ: return "ZeroQ";
    case ErrorKind::NonRealInput: return "NonRealInput";
    case ErrorKind::EvaluationOverflow: return "EvaluationOverflow";
    case ErrorKind::IdenticallySingular: return "IdenticallySingular";
    case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

/// Library-wide exception. `index` carries the failing word letter for
/// SingularPoint / IdenticallySingular and the node index for branch errors;
/// -1 when not applicable.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, int index = -1)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    int index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    int index_;
};

} // namespace painleve
