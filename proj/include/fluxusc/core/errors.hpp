// errors.hpp: exception types shared by every fluxusc module

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fluxusc {

enum class ErrorKind {
    validation,         // bad parameter or precondition
    invalid_basis,
    truncation_too_large,
    hermiticity,
    numeric,            // eigensolver / optimizer failure
    convergence,
    regime,             // formula applied outside its validity range
    estimation,
    range,
    rank,
    no_transition,
    ambiguous,
    degenerate,
    missing_parameter,
    io,
};

inline constexpr std::string_view to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::invalid_basis: return "invalid-basis";
    case ErrorKind::truncation_too_large: return "truncation-too-large";
    case ErrorKind::hermiticity: return "hermiticity";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::regime: return "regime";
    case ErrorKind::estimation: return "estimation";
    case ErrorKind::range: return "range";
    case ErrorKind::rank: return "rank";
    case ErrorKind::no_transition: return "no-transition";
    case ErrorKind::ambiguous: return "ambiguous";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::missing_parameter: return "missing-parameter";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// what() without the kind prefix, for rethrowing with added context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

/// Process exit code for an error kind: 1 validation, 2 I/O, 3 numeric/resource.
inline constexpr int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::io: return 2;
    case ErrorKind::numeric:
    case ErrorKind::convergence:
    case ErrorKind::truncation_too_large:
    case ErrorKind::hermiticity:
    case ErrorKind::rank:
    case ErrorKind::regime:
    case ErrorKind::estimation:
        return 3;
    default: return 1;
    }
}

inline void require(bool ok, ErrorKind kind, const std::string& what) {
    if (!ok) throw Error(kind, what);
}

} // namespace fluxusc
