// coupling.hpp: closed-form resonator and qubit–resonator coupling estimates
// from lumped elements. Angular frequencies are used internally; reported
// frequencies are ω/2π in GHz.

#pragma once

#include "fluxusc/circuit/params.hpp"
#include "fluxusc/core/errors.hpp"
#include "fluxusc/units.hpp"

#include <cmath>
#include <numbers>

namespace fluxusc::reduced {

struct RenormalizedResonator {
    double omega_r_GHz = 0.0; // 1/(2π√((LR+Lc)CR))
    double Z_prime_ohm = 0.0; // √((LR+Lc)/CR)
};

inline RenormalizedResonator renormalized_resonator(double LR_nH, double Lc_nH, double CR_fF) {
    require(LR_nH > 0.0 && Lc_nH >= 0.0 && CR_fF > 0.0, ErrorKind::validation,
            "LR and CR must be positive, Lc non-negative");
    const double l = (LR_nH + Lc_nH) * units::nano;
    const double c = CR_fF * units::femto;
    return {1.0 / (2.0 * std::numbers::pi * std::sqrt(l * c)) / units::giga, std::sqrt(l / c)};
}

/// Every intermediate of the coupling estimate. delta_mode_sq is the squared
/// detuning ω_R² − ω₄² of the two bare modes (not the qubit gap).
struct CouplingEstimate {
    double g_GHz = 0.0;
    double Leff_nH = 0.0;
    double omega_R_bare_GHz = 0.0;
    double Irms_nA = 0.0;
    double Z_R_ohm = 0.0;
    double xi_R = 0.0;
    double omega_A_GHz = 0.0;
    double omega_4_GHz = 0.0;
    double g_tilde_GHz = 0.0;
    double C_tot_fF = 0.0;
    double delta_mode_sq_GHz2 = 0.0; // (ω_R² − ω₄²)/(2π)²
    double g_simple_GHz = 0.0;       // Lc·I_p·I_rms/h
    double g_over_omega_R = 0.0;
};

/// g/2π = Lc·I_p·I_rms/h in GHz.
inline double g_simple_limit(double Lc_nH, double Ip_nA, double Irms_nA) {
    require(Lc_nH >= 0.0 && Ip_nA >= 0.0 && Irms_nA >= 0.0, ErrorKind::validation,
            "g_simple_limit inputs must be non-negative");
    return Lc_nH * units::nano * Ip_nA * units::nano * Irms_nA * units::nano / units::planck / units::giga;
}

struct CouplingOptions {
    bool force_unit_xi = false; // ξ_R := 1, leaving the remaining intermediates untouched
};

/// g = ξ_R·Leff·I_p·I_rms,R/ħ with ξ_R² = ω_R/ω_A.
inline CouplingEstimate coupling_estimate(const circuit::CircuitParams& p, double Ip_nA,
                                          const CouplingOptions& opt = {}) {
    require(p.LR_nH > 0.0 && p.Lc_nH > 0.0 && p.CR_fF > 0.0 && p.CJ_fF > 0.0 && p.alpha > 0.0, ErrorKind::validation,
            "coupling estimate needs positive LR, Lc, CR, CJ and alpha");
    require(std::isfinite(p.Csh_fF) && p.Csh_fF >= 0.0, ErrorKind::validation, "Csh_fF must be non-negative");
    require(std::isfinite(Ip_nA) && Ip_nA >= 0.0, ErrorKind::validation, "Ip_nA must be non-negative");
    const double two_pi = 2.0 * std::numbers::pi;
    const double lr = p.LR_nH * units::nano;
    const double cr = p.CR_fF * units::femto;
    const double leff = units::parallel(p.LR_nH, p.Lc_nH) * units::nano;
    const double ctot = (p.alpha * p.CJ_fF + p.Csh_fF) * units::femto;
    require(ctot > 0.0, ErrorKind::validation, "C_tot = alpha*CJ + Csh must be positive");

    const double w_r = 1.0 / std::sqrt(lr * cr);
    const double irms = std::sqrt(units::hbar * w_r / (2.0 * lr));
    const double w4_sq = 1.0 / (leff * ctot);
    const double delta_sq = w_r * w_r - w4_sq;
    const double gt_sq = w_r / std::sqrt(lr * ctot);
    const double wa_sq = 0.5 * (w_r * w_r + w4_sq) - std::sqrt(0.25 * delta_sq * delta_sq + gt_sq * gt_sq);
    if (!(wa_sq > 0.0)) {
        throw Error(ErrorKind::regime, "omega_A^2 <= 0: adiabatic elimination of branch 4 is invalid here");
    }
    const double wa = std::sqrt(wa_sq);

    CouplingEstimate e;
    e.Leff_nH = leff / units::nano;
    e.omega_R_bare_GHz = w_r / two_pi / units::giga;
    e.Irms_nA = irms / units::nano;
    e.Z_R_ohm = std::sqrt(lr / cr);
    e.xi_R = opt.force_unit_xi ? 1.0 : std::sqrt(w_r / wa);
    e.omega_A_GHz = wa / two_pi / units::giga;
    e.omega_4_GHz = std::sqrt(w4_sq) / two_pi / units::giga;
    e.g_tilde_GHz = std::sqrt(gt_sq) / two_pi / units::giga;
    e.C_tot_fF = ctot / units::femto;
    e.delta_mode_sq_GHz2 = delta_sq / (two_pi * two_pi) / (units::giga * units::giga);
    e.g_GHz = e.xi_R * leff * Ip_nA * units::nano * irms / units::hbar / two_pi / units::giga;
    e.g_simple_GHz = g_simple_limit(p.Lc_nH, Ip_nA, e.Irms_nA);
    e.g_over_omega_R = e.g_GHz / renormalized_resonator(p.LR_nH, p.Lc_nH, p.CR_fF).omega_r_GHz;
    return e;
}

/// Relative tolerance within which g and its simple-limit counterpart count as agreeing.
inline constexpr double simple_limit_tolerance = 2e-3;

inline bool simple_limit_agrees(const CouplingEstimate& e) {
    if (e.g_simple_GHz == 0.0) return e.g_GHz == 0.0;
    return std::abs(e.g_GHz / e.g_simple_GHz - 1.0) <= simple_limit_tolerance;
}

} // namespace fluxusc::reduced
