// transition_label.hpp: the closed set of spectroscopic transitions and their
// frequencies from a ladder of eigenlevels

#pragma once

#include "fluxusc/core/errors.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace fluxusc {

enum class TransitionLabel { w01, w02, w12, w03_half, sideband3 };

inline constexpr std::array<TransitionLabel, 5> all_transition_labels{
    TransitionLabel::w01, TransitionLabel::w02, TransitionLabel::w12, TransitionLabel::w03_half,
    TransitionLabel::sideband3};

inline constexpr std::string_view to_string(TransitionLabel l) {
    switch (l) {
    case TransitionLabel::w01: return "w01";
    case TransitionLabel::w02: return "w02";
    case TransitionLabel::w12: return "w12";
    case TransitionLabel::w03_half: return "w03_half";
    case TransitionLabel::sideband3: return "sideband3";
    }
    return "?";
}

inline TransitionLabel parse_transition_label(std::string_view s) {
    for (auto l : all_transition_labels)
        if (to_string(l) == s) return l;
    throw Error(ErrorKind::validation, "unknown transition label '" + std::string(s) + "'");
}

/// Number of eigenlevels (from the ground state up) a label needs.
inline constexpr int levels_needed(TransitionLabel l) {
    switch (l) {
    case TransitionLabel::w01: return 2;
    case TransitionLabel::w02:
    case TransitionLabel::w12: return 3;
    case TransitionLabel::w03_half:
    case TransitionLabel::sideband3: return 4;
    }
    return 4;
}

/// Observable frequency of a transition: ω₀₁, ω₀₂, ω₁₂, ω₀₃/2 or (ω₀₃+ω₀₁)/3.
inline double transition_frequency(TransitionLabel l, std::span<const double> levels) {
    require(static_cast<int>(levels.size()) >= levels_needed(l), ErrorKind::validation,
            "transition " + std::string(to_string(l)) + " needs more eigenlevels");
    const double e0 = levels[0];
    switch (l) {
    case TransitionLabel::w01: return levels[1] - e0;
    case TransitionLabel::w02: return levels[2] - e0;
    case TransitionLabel::w12: return levels[2] - levels[1];
    case TransitionLabel::w03_half: return 0.5 * (levels[3] - e0);
    case TransitionLabel::sideband3: return (levels[3] - e0 + levels[1] - e0) / 3.0;
    }
    return 0.0;
}

/// Weights c with transition_frequency(l, E) = Σₙ cₙ·Eₙ over the four lowest levels.
inline constexpr std::array<double, 4> transition_coefficients(TransitionLabel l) {
    switch (l) {
    case TransitionLabel::w01: return {-1.0, 1.0, 0.0, 0.0};
    case TransitionLabel::w02: return {-1.0, 0.0, 1.0, 0.0};
    case TransitionLabel::w12: return {0.0, -1.0, 1.0, 0.0};
    case TransitionLabel::w03_half: return {-0.5, 0.0, 0.0, 0.5};
    case TransitionLabel::sideband3: return {-2.0 / 3.0, 1.0 / 3.0, 0.0, 1.0 / 3.0};
    }
    return {};
}

} // namespace fluxusc
