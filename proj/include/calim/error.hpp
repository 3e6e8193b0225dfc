#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace calim {

enum class ErrorCode {
    DimensionMismatch,
    LabelOutOfRange,
    NonFinite,
    NotNormalized,
    TooFewClasses,
    InvalidBinCount,
    OutOfRange,
    ClassOutOfRange,
    AllBinsEmpty,
    EmptyInput,
    NonPositiveWeight,
    ClassCountMismatch,
    MissingLogits,
    LengthMismatch,
    AlphaOutOfRange,
    NegativeGamma,
    InvalidConfig,
    ParseError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace calim
