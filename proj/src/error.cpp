#include "ggs/error.hpp"

namespace ggs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AllZeroGradient: return "AllZeroGradient";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::FactorOutOfRange: return "FactorOutOfRange";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::MissingEnergyError: return "MissingEnergyError";
    case ErrorCode::NullSpaceEmpty: return "NullSpaceEmpty";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ggs
