#include "enroll/error.hpp"

namespace enroll {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::HeaderMismatch: return "HeaderMismatch";
    case ErrorCode::RowArityMismatch: return "RowArityMismatch";
    case ErrorCode::UnparseableValue: return "UnparseableValue";
    case ErrorCode::KeyColumn: return "KeyColumnError";
    case ErrorCode::MergeConflict: return "MergeConflict";
    case ErrorCode::AllMissingColumn: return "AllMissingColumn";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::FeatureMismatch: return "FeatureMismatch";
    case ErrorCode::InvalidIndex: return "InvalidIndex";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    }
    return "Error";
}

void rethrow_with_context(const Error& e, std::string_view context)
{
    throw Error(e.code(), std::string(context) + ": " + e.detail());
}

} // namespace enroll
