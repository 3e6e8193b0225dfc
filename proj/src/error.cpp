#include "calim/error.hpp"

namespace calim {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::LabelOutOfRange: return "LabelOutOfRange";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::TooFewClasses: return "TooFewClasses";
        case ErrorCode::InvalidBinCount: return "InvalidBinCount";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ClassOutOfRange: return "ClassOutOfRange";
        case ErrorCode::AllBinsEmpty: return "AllBinsEmpty";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
        case ErrorCode::ClassCountMismatch: return "ClassCountMismatch";
        case ErrorCode::MissingLogits: return "MissingLogits";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::NegativeGamma: return "NegativeGamma";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace calim
