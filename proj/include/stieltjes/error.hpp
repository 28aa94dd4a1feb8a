#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace stieltjes {

enum class ErrorKind {
    NegativeMass,
    BadInterval,
    OverlappingPieces,
    BadLambda,
    NonPositiveX,
    OnCut,
    SyntaxError,
    UnknownFunction,
    DomainError,
    InsufficientOrder,
    BadIndices,
    OutOfRange,
    InsufficientLength,
    NotCompletelyMonotone,
    BadOrderPair,
    InvalidInput,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::BadInterval: return "BadInterval";
    case ErrorKind::OverlappingPieces: return "OverlappingPieces";
    case ErrorKind::BadLambda: return "BadLambda";
    case ErrorKind::NonPositiveX: return "NonPositiveX";
    case ErrorKind::OnCut: return "OnCut";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::BadIndices: return "BadIndices";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InsufficientLength: return "InsufficientLength";
    case ErrorKind::NotCompletelyMonotone: return "NotCompletelyMonotone";
    case ErrorKind::BadOrderPair: return "BadOrderPair";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Every failure raised by the library. `kind()` is the stable, testable part;
/// the message is for humans. Syntax errors also carry a 0-based offset.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), position_(position) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<std::size_t> position() const noexcept { return position_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> position_;
};

} // namespace stieltjes
