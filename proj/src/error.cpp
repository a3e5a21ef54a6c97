#include "opmech/error.hpp"

namespace opmech {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::SingularConditionedBlock: return "SingularConditionedBlock";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::NegativeVariance: return "NegativeVariance";
        case ErrorCode::BadRange: return "BadRange";
        case ErrorCode::WrongVariant: return "WrongVariant";
        case ErrorCode::UnsupportedVariant: return "UnsupportedVariant";
        case ErrorCode::ProjectionResidual: return "ProjectionResidual";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::AcceptanceOutOfRange: return "AcceptanceOutOfRange";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace opmech
