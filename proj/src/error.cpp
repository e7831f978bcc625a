#include "embedlog/error.hpp"

namespace embedlog {

std::string_view error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SingularMatrix: return "SingularMatrix";
        case ErrorCode::RowSumViolation: return "RowSumViolation";
        case ErrorCode::SpectrumOutOfClass: return "SpectrumOutOfClass";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::NegativeOffDiagonal: return "NegativeOffDiagonal";
        case ErrorCode::ImaginaryResidue: return "ImaginaryResidue";
        case ErrorCode::DegenerateStep: return "DegenerateStep";
        case ErrorCode::OffVariety: return "OffVariety";
        case ErrorCode::KZero: return "KZero";
        case ErrorCode::NotRescalable: return "NotRescalable";
        case ErrorCode::LOutOfRange: return "LOutOfRange";
        case ErrorCode::DeltaOutOfBound: return "DeltaOutOfBound";
        case ErrorCode::NotMarkov: return "NotMarkov";
        case ErrorCode::NotInFamily: return "NotInFamily";
        case ErrorCode::NearDegenerateY: return "NearDegenerateY";
        case ErrorCode::NotAWitness: return "NotAWitness";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace embedlog
