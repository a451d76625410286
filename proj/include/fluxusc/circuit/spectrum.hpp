// spectrum.hpp: flux sweeps of the full circuit with labeled transitions

#pragma once

#include "fluxusc/circuit/hamiltonian.hpp"
#include "fluxusc/core/eigensolver.hpp"
#include "fluxusc/core/transition_label.hpp"
#include "fluxusc/io/text.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fluxusc::circuit {

/// Levels E_n/h (GHz) per flux point, ascending, plus the five labeled transitions.
struct SpectrumTable {
    std::vector<double> flux;
    std::vector<std::vector<double>> levels;
    std::vector<std::array<double, 5>> transitions; // order of all_transition_labels

    [[nodiscard]] std::size_t size() const { return flux.size(); }
    [[nodiscard]] double transition(std::size_t i, TransitionLabel l) const {
        return transitions[i][static_cast<std::size_t>(l)];
    }
};

inline std::array<double, 5> labeled_transitions(std::span<const double> levels) {
    std::array<double, 5> out{};
    for (auto l : all_transition_labels) out[static_cast<std::size_t>(l)] = transition_frequency(l, levels);
    return out;
}

/// Lowest k levels of `family` at every flux point. Errors name the offending flux.
inline SpectrumTable sweep_family(const FluxFamily& family, std::span<const double> fluxes, int k,
                                  const core::EigenOptions& opt = {}) {
    require(!fluxes.empty(), ErrorKind::validation, "flux list must be non-empty");
    require(k >= 4, ErrorKind::validation, "need at least 4 levels for the labeled transitions");
    core::EigenOptions o = opt;
    o.want_vectors = false;
    SpectrumTable t;
    for (double f : fluxes) {
        validate_flux(f);
        std::vector<double> lv;
        try {
            lv = core::eigvals_hermitian(family.at(f), k, o);
        } catch (const Error& e) {
            throw Error(e.kind(), "at flux f=" + io::format_double(f) + ": " + e.message());
        }
        t.flux.push_back(f);
        t.transitions.push_back(labeled_transitions(lv));
        t.levels.push_back(std::move(lv));
    }
    return t;
}

/// Spectrum of the full four-mode circuit.
inline SpectrumTable spectrum_vs_flux(const CircuitParams& p, const TruncationSpec& trunc,
                                      std::span<const double> fluxes, int k = 6,
                                      const core::EigenOptions& opt = {}) {
    require(k >= 4, ErrorKind::validation, "need at least 4 levels for the labeled transitions");
    require(k <= trunc.dim(), ErrorKind::validation, "k exceeds the truncated dimension");
    for (double f : fluxes) validate_flux(f);
    return sweep_family(full_hamiltonian_family(p, trunc), fluxes, k, opt);
}

/// CSV columns: flux, E0 … E{k−1}, w01, w02, w12, w03_half, sideband3. Leading '#' lines carry metadata.
inline std::string to_csv(const SpectrumTable& t, const std::vector<std::string>& metadata = {}) {
    std::string s;
    for (const auto& m : metadata) s += "# " + m + "\n";
    const std::size_t k = t.levels.empty() ? 0 : t.levels.front().size();
    s += "flux";
    for (std::size_t n = 0; n < k; ++n) s += ",E" + std::to_string(n);
    for (auto l : all_transition_labels) s += "," + std::string(to_string(l));
    s += "\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        s += io::format_double(t.flux[i]);
        for (double e : t.levels[i]) s += "," + io::format_double(e);
        for (double w : t.transitions[i]) s += "," + io::format_double(w);
        s += "\n";
    }
    return s;
}

inline nlohmann::json to_json(const SpectrumTable& t) {
    nlohmann::json j;
    j["flux"] = t.flux;
    j["levels_GHz"] = t.levels;
    nlohmann::json tr;
    for (auto l : all_transition_labels) {
        std::vector<double> col;
        for (std::size_t i = 0; i < t.size(); ++i) col.push_back(t.transition(i, l));
        tr[std::string(to_string(l))] = col;
    }
    j["transitions_GHz"] = tr;
    return j;
}

} // namespace fluxusc::circuit
