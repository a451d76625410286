// qrm.hpp: quantum Rabi and Jaynes–Cummings models of a flux qubit coupled to
// one resonator mode, written in the persistent-current basis
//
// Space ordering: qubit ⊗ Fock, qubit index 0 ↔ σ_z = +1. Energies in GHz.

#pragma once

#include "fluxusc/core/eigensolver.hpp"
#include "fluxusc/core/operator.hpp"
#include "fluxusc/core/transition_label.hpp"
#include "fluxusc/units.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fluxusc::reduced {

using core::Operator;

struct QRMParams {
    double Delta_GHz = 0.0;
    double Ip_nA = 0.0;
    double omega_r_GHz = 0.0;
    double g_GHz = 0.0;
    int nfock = 40;

    void validate() const {
        auto check = [](double v, const char* name, bool allow_zero) {
            require(std::isfinite(v) && (allow_zero ? v >= 0.0 : v > 0.0), ErrorKind::validation,
                    std::string(name) + (allow_zero ? " must be non-negative" : " must be positive"));
        };
        check(Delta_GHz, "Delta_GHz", false);
        check(Ip_nA, "Ip_nA", true);
        check(omega_r_GHz, "omega_r_GHz", false);
        check(g_GHz, "g_GHz", true);
        require(nfock >= 4, ErrorKind::validation, "nfock must be >= 4");
    }
};

/// Fit values of the measured device.
inline QRMParams device_fit_params() { return {5.707, 11.619, 4.463, 0.578, 40}; }

/// ε/h = 2I_p(Φ_ext − Φ0/2)/h in GHz, with Φ_ext = phi_ext·Φ0.
inline double epsilon(double Ip_nA, double phi_ext) {
    return 2.0 * Ip_nA * units::nano * (phi_ext - 0.5) * units::flux_quantum / units::planck / units::giga;
}

/// Qubit frequency ω_q = √(ε² + Δ²) in GHz.
inline double qubit_frequency(const QRMParams& p, double phi_ext) {
    return std::hypot(epsilon(p.Ip_nA, phi_ext), p.Delta_GHz);
}

namespace detail {

inline Operator pauli(char which) {
    core::DenseMatrix m(2, 2);
    switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    case '+': m << 0, 1, 0, 0; break; // |0⟩⟨1|, raises σ_z
    default: m << 0, 0, 1, 0; break;  // '-'
    }
    return Operator::from_dense(m);
}

inline core::OscillatorBasis fock_basis(int nfock) { return {nfock, 1.0, 1.0}; }

inline Operator resonator_energy(const QRMParams& p) {
    std::vector<double> d;
    for (int n = 0; n < p.nfock; ++n) d.push_back(p.omega_r_GHz * (n + 0.5));
    return Operator::diagonal(d);
}

} // namespace detail

/// −(εσ_z + Δσ_x)/2 + ω_r(a†a + ½) + gσ_z(a + a†).
inline Operator qrm_hamiltonian(const QRMParams& p, double phi_ext) {
    p.validate();
    const double eps = epsilon(p.Ip_nA, phi_ext);
    const auto [a, ad] = core::osc_ladder(detail::fock_basis(p.nfock));
    const Operator i2 = Operator::identity(2);
    const Operator in = Operator::identity(p.nfock);
    const Operator sz = detail::pauli('z');
    const Operator sx = detail::pauli('x');
    return core::tensor_embed({-0.5 * eps * sz - 0.5 * p.Delta_GHz * sx, in}) +
           core::tensor_embed({i2, detail::resonator_energy(p)}) + p.g_GHz * core::tensor_embed({sz, a + ad});
}

/// Mixing angle θ = atan2(Δ, ε); θ = π/2 at the sweet spot.
inline double mixing_angle(const QRMParams& p, double phi_ext) {
    return std::atan2(p.Delta_GHz, epsilon(p.Ip_nA, phi_ext));
}

/// (ω_q/2)σ_z + ω_r(a†a + ½) − g sinθ(σ₊a + σ₋a†), σ_z in the qubit eigenbasis.
inline Operator jc_hamiltonian(const QRMParams& p, double phi_ext) {
    p.validate();
    const double wq = qubit_frequency(p, phi_ext);
    const double s = std::sin(mixing_angle(p, phi_ext));
    const auto [a, ad] = core::osc_ladder(detail::fock_basis(p.nfock));
    const Operator in = Operator::identity(p.nfock);
    return core::tensor_embed({0.5 * wq * detail::pauli('z'), in}) +
           core::tensor_embed({Operator::identity(2), detail::resonator_energy(p)}) -
           (p.g_GHz * s) * (core::tensor_embed({detail::pauli('+'), a}) + core::tensor_embed({detail::pauli('-'), ad}));
}

/// σ₊σ₋ + a†a on the qubit ⊗ Fock space.
inline Operator excitation_number(int nfock) {
    const Operator up = detail::pauli('+') * detail::pauli('-');
    return core::tensor_embed({up, Operator::identity(nfock)}) +
           core::tensor_embed({Operator::identity(2), core::osc_number(detail::fock_basis(nfock))});
}

enum class RabiModel { qrm, jc };

inline Operator model_hamiltonian(RabiModel m, const QRMParams& p, double phi_ext) {
    return m == RabiModel::qrm ? qrm_hamiltonian(p, phi_ext) : jc_hamiltonian(p, phi_ext);
}

/// Lowest k levels at the given Fock truncation.
inline std::vector<double> model_levels(RabiModel m, const QRMParams& p, double phi_ext, int k = 4) {
    return core::eigvals_hermitian(model_hamiltonian(m, p, phi_ext), k);
}

struct ConvergedLevels {
    std::vector<double> levels;
    int nfock = 0;          // truncation whose levels are reported
    double last_change = 0; // max level change at the final doubling (GHz)
};

/// Doubles nfock from p.nfock until the lowest k levels move by less than tol, up to max_nfock.
inline ConvergedLevels converged_levels(RabiModel m, QRMParams p, double phi_ext, int k = 4, double tol = 1e-7,
                                        int max_nfock = 640) {
    p.validate();
    std::vector<double> prev = model_levels(m, p, phi_ext, k);
    while (true) {
        QRMParams q = p;
        q.nfock = 2 * p.nfock;
        if (q.nfock > max_nfock) {
            throw Error(ErrorKind::numeric, "Fock truncation unconverged at nfock=" + std::to_string(p.nfock));
        }
        std::vector<double> next = model_levels(m, q, phi_ext, k);
        double change = 0.0;
        for (int i = 0; i < k; ++i) change = std::max(change, std::abs(next[i] - prev[i]));
        if (change < tol) return {std::move(prev), p.nfock, change};
        p = q;
        prev = std::move(next);
    }
}

inline double model_transition(RabiModel m, const QRMParams& p, double phi_ext, TransitionLabel l) {
    const auto lv = converged_levels(m, p, phi_ext, levels_needed(l));
    return transition_frequency(l, lv.levels);
}

/// Leading-order Bloch–Siegert shift g²/(ω_r + ω_q) in GHz.
inline double bs_shift_analytic(const QRMParams& p, double phi_ext) {
    p.validate();
    return p.g_GHz * p.g_GHz / (p.omega_r_GHz + qubit_frequency(p, phi_ext));
}

/// Coupling g that produces a given analytic shift: g = √(ω_BS(ω_r + ω_q)).
inline double g_from_bs_shift(double shift_GHz, double omega_r_GHz, double omega_q_GHz) {
    require(shift_GHz >= 0.0 && omega_r_GHz > 0.0 && omega_q_GHz > 0.0, ErrorKind::validation,
            "shift must be non-negative and frequencies positive");
    return std::sqrt(shift_GHz * (omega_r_GHz + omega_q_GHz));
}

/// ω(QRM) − ω(JC) for one transition, each at converged Fock truncation.
inline double bs_shift_numeric(const QRMParams& p, double phi_ext, TransitionLabel l = TransitionLabel::w01) {
    p.validate();
    if (p.g_GHz == 0.0) return 0.0;
    return model_transition(RabiModel::qrm, p, phi_ext, l) - model_transition(RabiModel::jc, p, phi_ext, l);
}

} // namespace fluxusc::reduced
