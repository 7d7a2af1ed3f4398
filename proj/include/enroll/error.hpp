#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace enroll {

enum class ErrorCode {
    // configuration / argument problems
    InvalidArgument,
    Config,
    // data problems
    Io,
    HeaderMismatch,
    RowArityMismatch,
    UnparseableValue,
    KeyColumn,
    MergeConflict,
    AllMissingColumn,
    EmptyDataset,
    FeatureMismatch,
    InvalidIndex,
    // numeric problems
    DimensionMismatch,
    SingularSystem,
    DegenerateLabels,
};

enum class ErrorCategory { Config, Data, Numeric, Io };

constexpr ErrorCategory category_of(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::Config:
        return ErrorCategory::Config;
    case ErrorCode::Io:
        return ErrorCategory::Io;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::SingularSystem:
    case ErrorCode::DegenerateLabels:
        return ErrorCategory::Numeric;
    default:
        return ErrorCategory::Data;
    }
}

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
        , detail_(message)
    {
    }

    ErrorCode code() const noexcept { return code_; }
    ErrorCategory category() const noexcept { return category_of(code_); }
    // message without the code prefix
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

// Re-raise with extra context prepended to the detail, keeping the code.
[[noreturn]] void rethrow_with_context(const Error& e, std::string_view context);

} // namespace enroll
