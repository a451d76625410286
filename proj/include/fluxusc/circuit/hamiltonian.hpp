// hamiltonian.hpp: quantized Hamiltonian of the three-junction loop sharing the
// inductance Lc with an LR–CR resonator
//
// Modes: 1, 3 are the large-junction phases (charge basis); 4 is the branch
// across Lc (oscillator basis, Leff = Lc‖LR); 6 is the resonator (oscillator
// basis, LR+Lc with CR). Slot order is (1, 3, 4, 6); all energies in GHz.
//
//   H = 4E_C[n1² + n3² + 2(n1+n3)n4 + (2+1/α̃)n4² + (C_J/C_R)n6²]
//       − E_J cos φ1 − E_J cos φ3 − αE_J cos(φ4 + B),   B = 2πf − φ1 − φ3
//       + ½E_L(Lc) φ4² + ½E_L(LR)(φ6 + φ4)²

#pragma once

#include "fluxusc/circuit/params.hpp"
#include "fluxusc/core/operator.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace fluxusc::circuit {

using core::Index;
using core::Operator;
using core::OscillatorBasis;

/// Oscillator bases of modes 4 and 6 from the quadratic part of H.
struct ModeBases {
    OscillatorBasis mode4;
    OscillatorBasis mode6;
};

/// Mode 4 sees E_C4 = E_C(2 + 1/α̃) and Leff; mode 6 sees C_R and LR + Lc.
inline ModeBases mode_bases(const CircuitParams& p, int n4, int n6) {
    const double at = p.alpha_tilde();
    const double c4 = p.CJ_fF / (2.0 + 1.0 / at);
    return {OscillatorBasis::from_lc(n4, p.Leff_nH(), c4), OscillatorBasis::from_lc(n6, p.LR_nH + p.Lc_nH, p.CR_fF)};
}

inline void validate_flux(double f) {
    require(std::isfinite(f) && f >= 0.0 && f <= 1.0, ErrorKind::validation, "flux fraction must lie in [0, 1]");
}

/// H(f) = H₀ + Σₖ (cₖ e^{2πi·k·f} Mₖ + h.c.): the flux enters only through the loop phasor e^{iB}.
class FluxFamily {
public:
    struct Harmonic {
        int order;
        core::cplx coeff;
        Operator op;
    };

    FluxFamily(Operator h0, std::vector<Harmonic> harmonics)
        : h0_(std::move(h0)), harmonics_(std::move(harmonics)) {}

    [[nodiscard]] Index dim() const { return h0_.dim(); }

    [[nodiscard]] Operator at(double f) const {
        validate_flux(f);
        Operator h = h0_;
        for (const auto& hm : harmonics_) {
            const Operator term = (hm.coeff * std::polar(1.0, 2.0 * std::numbers::pi * hm.order * f)) * hm.op;
            h += term;
            h += term.adjoint();
        }
        return h;
    }

private:
    Operator h0_;
    std::vector<Harmonic> harmonics_;
};

namespace detail {

/// e^{−i·k·φ1}·e^{−i·k·φ3} on the (1, 3) pair; e^{iB} = e^{2πif} times this for k = 1.
inline Operator loop_shift(int ncut1, int ncut3, int k = 1) {
    const Operator l1 = core::charge_lowering(ncut1);
    const Operator l3 = core::charge_lowering(ncut3);
    Operator p1 = l1, p3 = l3;
    for (int j = 1; j < k; ++j) {
        p1 = p1 * l1;
        p3 = p3 * l3;
    }
    return Operator(core::kron(p1.matrix(), p3.matrix()));
}

/// e^{iφ} = cos φ + i sin φ of an oscillator phase, from the exact projected cos/sin.
inline Operator osc_phasor(const OscillatorBasis& b) {
    return core::osc_cos_phase(b) + core::cplx(0.0, 1.0) * core::osc_sin_phase(b);
}

} // namespace detail

/// Full four-mode Hamiltonian family over flux.
inline FluxFamily full_hamiltonian_family(const CircuitParams& p, const TruncationSpec& t) {
    p.validate();
    t.validate();
    const auto [b4, b6] = mode_bases(p, t.n4, t.n6);
    const double ec = p.EC_GHz();
    const double ej = p.resolved_EJ_GHz();
    const double at = p.alpha_tilde();
    const double el_c = units::inductive_energy_ghz(p.Lc_nH);
    const double el_r = units::inductive_energy_ghz(p.LR_nH);

    const Operator i1 = Operator::identity(2 * t.ncut1 + 1);
    const Operator i3 = Operator::identity(2 * t.ncut3 + 1);
    const Operator i13 = Operator::identity(i1.dim() * i3.dim());
    const Operator i4 = Operator::identity(t.n4);
    const Operator i6 = Operator::identity(t.n6);
    const auto e4 = [&](const Operator& a, const Operator& b, const Operator& c, const Operator& d) {
        return core::tensor_embed({a, b, c, d}, t.cap);
    };
    const auto e3 = [&](const Operator& ab, const Operator& c, const Operator& d) {
        return core::tensor_embed({ab, c, d}, t.cap);
    };

    const Operator n1 = core::charge_number(t.ncut1);
    const Operator n3 = core::charge_number(t.ncut3);
    const Operator n4 = core::osc_charge(b4);

    Operator h = 4.0 * ec *
                 (e4(n1 * n1, i3, i4, i6) + e4(i1, n3 * n3, i4, i6) + 2.0 * e4(n1, i3, n4, i6) +
                  2.0 * e4(i1, n3, n4, i6) + (2.0 + 1.0 / at) * e4(i1, i3, core::osc_charge_squared(b4), i6) +
                  (p.CJ_fF / p.CR_fF) * e4(i1, i3, i4, core::osc_charge_squared(b6)));
    h -= ej * (e4(core::cos_phi(t.ncut1), i3, i4, i6) + e4(i1, core::cos_phi(t.ncut3), i4, i6));
    h += 0.5 * (el_c + el_r) * e3(i13, core::osc_phase_squared(b4), i6);
    h += 0.5 * el_r * e3(i13, i4, core::osc_phase_squared(b6));
    h += el_r * e3(i13, core::osc_phase(b4), core::osc_phase(b6));

    // −αE_J cos(φ4 + B) = −(αE_J/2)(e^{iB} e^{iφ4} + h.c.)
    std::vector<FluxFamily::Harmonic> hm;
    hm.push_back({1, core::cplx(-0.5 * p.alpha * ej, 0.0),
                  e3(detail::loop_shift(t.ncut1, t.ncut3), detail::osc_phasor(b4), i6)});
    return FluxFamily(std::move(h), std::move(hm));
}

/// Full four-mode Hamiltonian at flux fraction f.
inline Operator build_full_hamiltonian(const CircuitParams& p, const TruncationSpec& t, double f) {
    validate_flux(f);
    return full_hamiltonian_family(p, t).at(f);
}

/// Charge cutoffs and branch-4 levels for the qubit-only Hamiltonians.
struct QubitTruncation {
    int ncut1 = 8;
    int ncut3 = 8;
    int n4 = 10;
    Index cap = core::default_dimension_cap;

    [[nodiscard]] QubitTruncation doubled() const { return {2 * ncut1, 2 * ncut3, 2 * n4, cap}; }

    void validate() const {
        require(ncut1 >= 4 && ncut3 >= 4, ErrorKind::validation, "charge cutoffs ncut1, ncut3 must be >= 4");
        require(n4 >= 4, ErrorKind::validation, "oscillator levels n4 must be >= 4");
    }
};

/// Which qubit-only reduction to diagonalize.
///  adiabatic: φ4 eliminated; frozen-φ4 capacitances plus −½Leff·I_q² (two modes).
///  clamped_resonator: resonator phase held at φ6 = 0, φ4 kept quantum (three modes).
enum class QubitModel { adiabatic, clamped_resonator };

inline const char* to_string(QubitModel m) {
    return m == QubitModel::adiabatic ? "adiabatic" : "clamped_resonator";
}

/// Qubit-only Hamiltonian family under the chosen reduction.
inline FluxFamily qubit_hamiltonian_family(const CircuitParams& p, const QubitTruncation& t,
                                           QubitModel model = QubitModel::adiabatic) {
    p.validate();
    t.validate();
    const double ec = p.EC_GHz();
    const double ej = p.resolved_EJ_GHz();
    const double at = p.alpha_tilde();
    const Operator i1 = Operator::identity(2 * t.ncut1 + 1);
    const Operator i3 = Operator::identity(2 * t.ncut3 + 1);
    const Operator n1 = core::charge_number(t.ncut1);
    const Operator n3 = core::charge_number(t.ncut3);
    std::vector<FluxFamily::Harmonic> hm;

    if (model == QubitModel::adiabatic) {
        const auto e2 = [&](const Operator& a, const Operator& b) { return core::tensor_embed({a, b}, t.cap); };
        // inverse of C_J·[[1+α̃, α̃], [α̃, 1+α̃]]
        const double s = 1.0 / (1.0 + 2.0 * at);
        Operator h = 4.0 * ec * s *
                     ((1.0 + at) * (e2(n1 * n1, i3) + e2(i1, n3 * n3)) - 2.0 * at * e2(n1, n3));
        h -= ej * (e2(core::cos_phi(t.ncut1), i3) + e2(i1, core::cos_phi(t.ncut3)));
        // −½Leff(αI_C sin B)² = −(κ/4)(1 − cos 2B), κ = (αE_J)²/E_L(Leff)
        const double kappa = (p.alpha * ej) * (p.alpha * ej) / units::inductive_energy_ghz(p.Leff_nH());
        h -= 0.25 * kappa * Operator::identity(h.dim());
        hm.push_back({1, core::cplx(-0.5 * p.alpha * ej, 0.0), detail::loop_shift(t.ncut1, t.ncut3)});
        hm.push_back({2, core::cplx(0.125 * kappa, 0.0), detail::loop_shift(t.ncut1, t.ncut3, 2)});
        return FluxFamily(std::move(h), std::move(hm));
    }

    const auto b4 = mode_bases(p, t.n4, 4).mode4;
    const Operator i4 = Operator::identity(t.n4);
    const Operator i13 = Operator::identity(i1.dim() * i3.dim());
    const auto e3 = [&](const Operator& a, const Operator& b, const Operator& c) {
        return core::tensor_embed({a, b, c}, t.cap);
    };
    const auto e2 = [&](const Operator& ab, const Operator& c) { return core::tensor_embed({ab, c}, t.cap); };
    const Operator n4 = core::osc_charge(b4);
    Operator h = 4.0 * ec *
                 (e3(n1 * n1, i3, i4) + e3(i1, n3 * n3, i4) + 2.0 * e3(n1, i3, n4) + 2.0 * e3(i1, n3, n4) +
                  (2.0 + 1.0 / at) * e3(i1, i3, core::osc_charge_squared(b4)));
    h -= ej * (e3(core::cos_phi(t.ncut1), i3, i4) + e3(i1, core::cos_phi(t.ncut3), i4));
    const double el = units::inductive_energy_ghz(p.Lc_nH) + units::inductive_energy_ghz(p.LR_nH);
    h += 0.5 * el * e2(i13, core::osc_phase_squared(b4));
    hm.push_back({1, core::cplx(-0.5 * p.alpha * ej, 0.0),
                  e2(detail::loop_shift(t.ncut1, t.ncut3), detail::osc_phasor(b4))});
    return FluxFamily(std::move(h), std::move(hm));
}

inline Operator build_qubit_hamiltonian(const CircuitParams& p, const QubitTruncation& t, double f,
                                        QubitModel model = QubitModel::adiabatic) {
    validate_flux(f);
    return qubit_hamiltonian_family(p, t, model).at(f);
}

/// Small-junction current αI_C sin(φ4 + B) in nA on the qubit-only space (φ4 = 0 for the adiabatic model).
inline Operator qubit_current_operator(const CircuitParams& p, const QubitTruncation& t, double f,
                                       QubitModel model = QubitModel::adiabatic) {
    p.validate();
    t.validate();
    validate_flux(f);
    // sin X = (e^{iX} − e^{−iX})/2i
    Operator e = std::polar(1.0, 2.0 * std::numbers::pi * f) * detail::loop_shift(t.ncut1, t.ncut3);
    if (model == QubitModel::clamped_resonator) {
        e = core::tensor_embed({e, detail::osc_phasor(mode_bases(p, t.n4, 4).mode4)}, t.cap);
    }
    return (p.alpha * p.Ic_nA()) * (core::cplx(0.0, -0.5) * (e - e.adjoint()));
}

/// Linearized branch-4 potential (GHz) whose minimum defines φ4*:
/// U(φ4) = −αE_J sin(B)·φ4 + ½E_L(Lc)φ4² + ½E_L(LR)(φ6 + φ4)².
inline double phi4_potential(const CircuitParams& p, double phi1, double phi3, double phi6, double f, double phi4) {
    const double b = 2.0 * std::numbers::pi * f - phi1 - phi3;
    const double ej = p.resolved_EJ_GHz();
    return -p.alpha * ej * std::sin(b) * phi4 + 0.5 * units::inductive_energy_ghz(p.Lc_nH) * phi4 * phi4 +
           0.5 * units::inductive_energy_ghz(p.LR_nH) * (phi6 + phi4) * (phi6 + phi4);
}

/// φ4* = (αE_J/E_L(Leff))·sin B − Lc/(Lc+LR)·φ6, the minimum of phi4_potential.
inline double adiabatic_phi4(const CircuitParams& p, double phi1, double phi3, double phi6, double f) {
    p.validate();
    const double b = 2.0 * std::numbers::pi * f - phi1 - phi3;
    const double ratio = p.alpha * p.resolved_EJ_GHz() / units::inductive_energy_ghz(p.Leff_nH());
    return ratio * std::sin(b) - p.Lc_nH / (p.Lc_nH + p.LR_nH) * phi6;
}

} // namespace fluxusc::circuit
