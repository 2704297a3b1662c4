#include "dispatchsim/error.hpp"

namespace dispatchsim {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DegenerateLoop: return "DegenerateLoop";
        case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
        case ErrorCode::PoleOnAxis: return "PoleOnAxis";
        case ErrorCode::UnstableInverse: return "UnstableInverse";
        case ErrorCode::ImproperResult: return "ImproperResult";
        case ErrorCode::UnstableFilter: return "UnstableFilter";
        case ErrorCode::SingularCalibration: return "SingularCalibration";
        case ErrorCode::NearSingularLoop: return "NearSingularLoop";
        case ErrorCode::NoCrossover: return "NoCrossover";
        case ErrorCode::IllConditioned: return "IllConditioned";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::UnstableSystem: return "UnstableSystem";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::ImproperTF: return "ImproperTF";
        case ErrorCode::BilinearSingularity: return "BilinearSingularity";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::GapTooLarge: return "GapTooLarge";
        case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace dispatchsim
