#include "hwmat/errors.hpp"

namespace hwmat {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NotSquarefree: return "NotSquarefree";
    case ErrorCode::DegreeOutOfRange: return "DegreeOutOfRange";
    case ErrorCode::TooDivisibleByX: return "TooDivisibleByX";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DivisorVanishes: return "DivisorVanishes";
    case ErrorCode::NotHyperelliptic: return "NotHyperelliptic";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::DuplicateTranslations: return "DuplicateTranslations";
    case ErrorCode::GenusExceedsPrime: return "GenusExceedsPrime";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

} // namespace hwmat
