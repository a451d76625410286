// qubit.hpp: qubit gap Δ and persistent current I_p from the qubit-only circuit

#pragma once

#include "fluxusc/circuit/hamiltonian.hpp"
#include "fluxusc/core/eigensolver.hpp"
#include "fluxusc/io/text.hpp"

#include <cmath>

namespace fluxusc::circuit {

struct FluxWindow {
    double lo = 0.495;
    double hi = 0.505;
};

struct QubitEstimate {
    QubitModel model = QubitModel::adiabatic;
    double Delta_GHz = 0.0;
    double Ip_slope_nA = 0.0;          // (h/2)·asymptotic slope of ω01 versus Φ_ext (mean of both edges)
    double Ip_matrix_element_nA = 0.0; // |⟨0|Î_q|1⟩| at f = 0.5
    double edge_w01_GHz = 0.0;         // ω01 at the window edges (mean)
    double asymptotic_slope_GHz = 0.0; // s in ω01 = √(Δ² + s²(f − ½)²), GHz per flux quantum
};

/// Smallest (ω01(edge) − Δ)/Δ from which the asymptotic slope is still resolvable.
inline constexpr double min_relative_rise = 1e-6;

/// Slope of ε/h versus f equals 2I_pΦ0/h, so I_p[nA] = e·slope[Hz].
inline double ip_from_slope_na(double slope_ghz_per_flux) {
    return units::elementary_charge * slope_ghz_per_flux * units::giga / units::nano;
}

inline QubitEstimate qubit_gap_and_ip(const CircuitParams& p, const QubitTruncation& t, const FluxWindow& w = {},
                                      QubitModel model = QubitModel::adiabatic) {
    require(w.lo < 0.5 && w.hi > 0.5 && w.lo >= 0.0 && w.hi <= 1.0, ErrorKind::validation,
            "flux window must bracket f = 0.5 inside [0, 1]");
    const FluxFamily family = qubit_hamiltonian_family(p, t, model);
    core::EigenOptions vals_only;
    vals_only.want_vectors = false;
    const auto w01 = [&](double f) {
        const auto v = core::eigvals_hermitian(family.at(f), 2, vals_only);
        return v[1] - v[0];
    };

    QubitEstimate out;
    out.model = model;
    const auto sweet = core::eigs_hermitian(family.at(0.5), 2);
    out.Delta_GHz = sweet.values[1] - sweet.values[0];
    const Operator iq = qubit_current_operator(p, t, 0.5, model);
    const core::DenseMatrix& v = sweet.vectors;
    out.Ip_matrix_element_nA = std::abs((v.col(0).adjoint() * (iq.matrix() * v.col(1)))(0, 0));

    // hyperbola through (½, Δ) and (edge, ω01(edge)); its asymptote has slope 2I_pΦ0/h
    double s_sum = 0.0, w_sum = 0.0;
    for (double edge : {w.lo, w.hi}) {
        const double we = w01(edge);
        if (!(we - out.Delta_GHz >= min_relative_rise * out.Delta_GHz)) {
            throw Error(ErrorKind::estimation,
                        "flux window too narrow to estimate the persistent-current slope: w01 at f=" +
                            io::format_double(edge) + " rises only " + io::format_double(we - out.Delta_GHz) +
                            " GHz above the gap");
        }
        s_sum += std::sqrt(we * we - out.Delta_GHz * out.Delta_GHz) / std::abs(edge - 0.5);
        w_sum += we;
    }
    out.asymptotic_slope_GHz = s_sum / 2.0;
    out.edge_w01_GHz = w_sum / 2.0;
    out.Ip_slope_nA = ip_from_slope_na(out.asymptotic_slope_GHz);
    return out;
}

} // namespace fluxusc::circuit
