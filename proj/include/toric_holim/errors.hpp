#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toric {

enum class ErrorCode {
    NonPrimitiveRay,
    NotPointed,
    IntersectionNotFace,
    InvalidFanData,
    NotRegular,
    UnknownRay,
    RankMismatch,
    BrokenDifferential,
    InhomogeneousEntry,
    NotFace,
    NoRhoConstraint,
    NotAChainMap,
    InconsistentDiagram,
    WindowInsufficient,
    WrongQuotient,
    NotMonomialInclusion,
    NotHomotopySheaf,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonPrimitiveRay: return "NonPrimitiveRay";
    case ErrorCode::NotPointed: return "NotPointed";
    case ErrorCode::IntersectionNotFace: return "IntersectionNotFace";
    case ErrorCode::InvalidFanData: return "InvalidFanData";
    case ErrorCode::NotRegular: return "NotRegular";
    case ErrorCode::UnknownRay: return "UnknownRay";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::BrokenDifferential: return "BrokenDifferential";
    case ErrorCode::InhomogeneousEntry: return "InhomogeneousEntry";
    case ErrorCode::NotFace: return "NotFace";
    case ErrorCode::NoRhoConstraint: return "NoRhoConstraint";
    case ErrorCode::NotAChainMap: return "NotAChainMap";
    case ErrorCode::InconsistentDiagram: return "InconsistentDiagram";
    case ErrorCode::WindowInsufficient: return "WindowInsufficient";
    case ErrorCode::WrongQuotient: return "WrongQuotient";
    case ErrorCode::NotMonomialInclusion: return "NotMonomialInclusion";
    case ErrorCode::NotHomotopySheaf: return "NotHomotopySheaf";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace toric
