#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace embedlog {

enum class ErrorCode {
    SingularMatrix,
    RowSumViolation,
    SpectrumOutOfClass,
    NegativeEntry,
    NegativeOffDiagonal,
    ImaginaryResidue,
    DegenerateStep,
    OffVariety,
    KZero,
    NotRescalable,
    LOutOfRange,
    DeltaOutOfBound,
    NotMarkov,
    NotInFamily,
    NearDegenerateY,
    NotAWitness,
    InvalidArgument,
    ParseError,
};

std::string_view error_name(ErrorCode code);

/// All library failures surface as this exception; `code()` identifies the
/// failed guard and `what()` carries the diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace embedlog
