#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dispatchsim {

enum class ErrorCode {
    InvalidArgument,
    DegenerateLoop,
    ConvergenceFailure,
    PoleOnAxis,
    UnstableInverse,
    ImproperResult,
    UnstableFilter,
    SingularCalibration,
    NearSingularLoop,
    NoCrossover,
    IllConditioned,
    TooShort,
    UnstableSystem,
    DomainMismatch,
    ImproperTF,
    BilinearSingularity,
    ParseError,
    GapTooLarge,
    NonMonotoneTime,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace dispatchsim
