// units.hpp: SI constants and the unit conventions used throughout fluxusc
//
// Energies are ordinary frequencies E/h in GHz. Inductances are nH, capacitances
// fF, currents nA, resistances Ohm. Angular frequencies only appear inside the
// closed-form lumped-element formulas in reduced/coupling.hpp.

#pragma once

#include <numbers>

namespace fluxusc::units {

// Exact SI values (2019 redefinition).
inline constexpr double planck = 6.62607015e-34;          // J s
inline constexpr double elementary_charge = 1.602176634e-19; // C
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge); // Wb
inline constexpr double reduced_flux_quantum = flux_quantum / (2.0 * std::numbers::pi);
inline constexpr double von_klitzing = planck / (elementary_charge * elementary_charge); // Ohm

inline constexpr double nano = 1e-9;
inline constexpr double pico = 1e-12;
inline constexpr double femto = 1e-15;
inline constexpr double giga = 1e9;

/// Charging energy E_C = e^2 / 2C as a frequency in GHz, C in fF.
inline constexpr double charging_energy_ghz(double capacitance_ff) {
    return elementary_charge * elementary_charge / (2.0 * capacitance_ff * femto) / planck / giga;
}

/// Inverse of charging_energy_ghz: capacitance in fF for E_C/h in GHz.
inline constexpr double capacitance_from_ec_ff(double ec_ghz) {
    return elementary_charge * elementary_charge / (2.0 * ec_ghz * giga * planck) / femto;
}

/// Inductive energy E_L = (Phi0/2pi)^2 / L as a frequency in GHz, L in nH.
inline constexpr double inductive_energy_ghz(double inductance_nh) {
    return reduced_flux_quantum * reduced_flux_quantum / (inductance_nh * nano) / planck / giga;
}

/// Critical current I_C = 2pi E_J / Phi0 in nA for E_J/h in GHz.
inline constexpr double critical_current_na(double ej_ghz) {
    return ej_ghz * giga * planck / reduced_flux_quantum / nano;
}

/// E_J/h in GHz for a critical current in nA.
inline constexpr double josephson_energy_ghz(double ic_na) {
    return ic_na * nano * reduced_flux_quantum / planck / giga;
}

/// Energy (I * Phi) expressed as a frequency in GHz for I in nA and Phi in Wb.
inline constexpr double current_flux_to_ghz(double current_na, double flux_wb) {
    return current_na * nano * flux_wb / planck / giga;
}

inline constexpr double parallel(double a, double b) { return a * b / (a + b); }

} // namespace fluxusc::units
