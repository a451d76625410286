// params.hpp: lumped-element parameters of the galvanically coupled
// qubit–resonator circuit and the truncation of its four-mode Hilbert space

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/core/operator.hpp"
#include "fluxusc/units.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace fluxusc::circuit {

/// Shunt capacitance assumed for the device when none is measured (fF).
/// Chosen so the design-parameter circuit has its sweet-spot qubit gap at 3.57 GHz.
inline constexpr double assumed_shunt_capacitance_ff = 8.7;

/// Charging energies follow E_C = e²/2C_J. Energies are ordinary frequencies (GHz).
struct CircuitParams {
    double EJ_GHz = 0.0;
    double CJ_fF = 0.0;
    double alpha = 0.0;
    double Csh_fF = 0.0;
    double LR_nH = 0.0;
    double CR_fF = 0.0;
    double Lc_nH = 0.0;
    std::optional<double> Jc_uA_per_um2;
    std::optional<double> junction_area_um2;

    [[nodiscard]] double EC_GHz() const { return units::charging_energy_ghz(CJ_fF); }
    [[nodiscard]] double alpha_tilde() const { return alpha + Csh_fF / CJ_fF; }
    [[nodiscard]] double Leff_nH() const { return units::parallel(LR_nH, Lc_nH); }

    /// E_J from Jc·area when both are given, otherwise EJ_GHz.
    [[nodiscard]] double resolved_EJ_GHz() const {
        if (Jc_uA_per_um2 && junction_area_um2) {
            // Ic[nA] = Jc[µA/µm²]·area[µm²]·1e3
            return units::josephson_energy_ghz(*Jc_uA_per_um2 * *junction_area_um2 * 1e3);
        }
        return EJ_GHz;
    }

    /// Critical current of a large junction (nA).
    [[nodiscard]] double Ic_nA() const { return units::critical_current_na(resolved_EJ_GHz()); }

    void validate() const {
        auto positive = [](double v, const char* name) {
            require(std::isfinite(v) && v > 0.0, ErrorKind::validation,
                    std::string(name) + " must be positive and finite");
        };
        if (Jc_uA_per_um2 || junction_area_um2) {
            require(Jc_uA_per_um2.has_value() && junction_area_um2.has_value(), ErrorKind::missing_parameter,
                    "Jc_uA_per_um2 and junction_area_um2 must be given together");
            positive(*Jc_uA_per_um2, "Jc_uA_per_um2");
            positive(*junction_area_um2, "junction_area_um2");
        } else {
            positive(EJ_GHz, "EJ_GHz");
        }
        positive(CJ_fF, "CJ_fF");
        require(alpha > 0.0 && alpha <= 1.0, ErrorKind::validation, "alpha must lie in (0, 1]");
        require(std::isfinite(Csh_fF) && Csh_fF >= 0.0, ErrorKind::validation, "Csh_fF must be non-negative");
        positive(LR_nH, "LR_nH");
        positive(CR_fF, "CR_fF");
        positive(Lc_nH, "Lc_nH");
    }
};

/// Build parameters from a charging energy instead of a capacitance.
inline CircuitParams with_charging_energy(CircuitParams p, double EC_GHz) {
    require(std::isfinite(EC_GHz) && EC_GHz > 0.0, ErrorKind::validation, "EC_GHz must be positive");
    p.CJ_fF = units::capacitance_from_ec_ff(EC_GHz);
    return p;
}

/// Design values of the fabricated device. Csh is not published; see assumed_shunt_capacitance_ff.
inline CircuitParams design_params(double Csh_fF = assumed_shunt_capacitance_ff) {
    CircuitParams p;
    p.EJ_GHz = 93.46;
    p.alpha = 0.58;
    p.Csh_fF = Csh_fF;
    p.LR_nH = 0.8986;
    p.CR_fF = 742.3;
    p.Lc_nH = 0.5;
    return with_charging_energy(p, 4.94);
}

/// Junction area (µm²) at which Jc gives the design E_J: area = Ic(93.46 GHz)/Jc.
inline double default_junction_area_um2(double Jc_uA_per_um2) {
    require(Jc_uA_per_um2 > 0.0, ErrorKind::validation, "Jc_uA_per_um2 must be positive");
    return units::critical_current_na(93.46) * 1e-3 / Jc_uA_per_um2;
}

/// Device values estimated after fabrication: Lc from kinetic inductance, α = 0.53, Jc = 0.66 µA/µm².
inline CircuitParams estimated_device_params(double Csh_fF = assumed_shunt_capacitance_ff) {
    CircuitParams p = design_params(Csh_fF);
    p.Lc_nH = 0.74;
    p.alpha = 0.53;
    p.Jc_uA_per_um2 = 0.66;
    p.junction_area_um2 = default_junction_area_um2(0.66);
    return p;
}

/// Charge cutoffs for modes 1, 3 and oscillator levels for modes 4 (branch 4) and 6 (resonator).
struct TruncationSpec {
    int ncut1 = 6;
    int ncut3 = 6;
    int n4 = 8;
    int n6 = 8;
    core::Index cap = core::default_dimension_cap;

    [[nodiscard]] core::Index dim() const {
        return static_cast<core::Index>(2 * ncut1 + 1) * (2 * ncut3 + 1) * n4 * n6;
    }

    [[nodiscard]] TruncationSpec doubled() const {
        TruncationSpec t = *this;
        t.ncut1 *= 2;
        t.ncut3 *= 2;
        t.n4 *= 2;
        t.n6 *= 2;
        return t;
    }

    void validate() const {
        require(ncut1 >= 4 && ncut3 >= 4, ErrorKind::validation, "charge cutoffs ncut1, ncut3 must be >= 4");
        require(n4 >= 4 && n6 >= 4, ErrorKind::validation, "oscillator levels n4, n6 must be >= 4");
        require(dim() <= cap, ErrorKind::truncation_too_large,
                "truncation dimension " + std::to_string(dim()) + " exceeds cap " + std::to_string(cap));
    }
};

} // namespace fluxusc::circuit
