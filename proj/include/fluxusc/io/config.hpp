// config.hpp: flat key=value run configuration with a closed, documented key set
//
// Every value read through a getter, explicit or defaulted, is recorded and can be
// dumped as the resolved configuration of a run.

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/io/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluxusc::io {

enum class KeyGroup { circuit, truncation, sweep, qrm, coupling, materials, spectro, output };

inline constexpr std::string_view to_string(KeyGroup g) {
    switch (g) {
    case KeyGroup::circuit: return "circuit";
    case KeyGroup::truncation: return "truncation";
    case KeyGroup::sweep: return "flux sweep";
    case KeyGroup::qrm: return "Rabi model";
    case KeyGroup::coupling: return "coupling";
    case KeyGroup::materials: return "materials";
    case KeyGroup::spectro: return "spectroscopy";
    case KeyGroup::output: return "output";
    }
    return "?";
}

struct KeySpec {
    std::string_view name;
    KeyGroup group;
    std::string_view description;
};

/// The closed key set. Physical quantities carry their unit as the name suffix.
inline const std::vector<KeySpec>& config_keys() {
    static const std::vector<KeySpec> keys{
        {"preset", KeyGroup::circuit, "design | estimated: starting parameter set, overridden by explicit keys"},
        {"EJ_GHz", KeyGroup::circuit, "Josephson energy of the large junctions, E_J/h"},
        {"EC_GHz", KeyGroup::circuit, "charging energy e^2/2C_J (alternative to CJ_fF)"},
        {"CJ_fF", KeyGroup::circuit, "junction capacitance of the large junctions"},
        {"alpha", KeyGroup::circuit, "small-junction area ratio"},
        {"Csh_fF", KeyGroup::circuit, "shunt capacitance across the small junction (unpublished; assumed 8.7 when omitted)"},
        {"LR_nH", KeyGroup::circuit, "resonator inductance"},
        {"CR_fF", KeyGroup::circuit, "resonator capacitance"},
        {"Lc_nH", KeyGroup::circuit, "coupling (kinetic) inductance"},
        {"Jc_uA_per_um2", KeyGroup::circuit, "critical current density; with junction_area_um2 sets EJ_GHz"},
        {"junction_area_um2", KeyGroup::circuit, "large-junction area"},
        {"model", KeyGroup::circuit, "full | qubit_clamped | qubit_adiabatic: Hamiltonian to diagonalize (simulate)"},
        {"ncut1", KeyGroup::truncation, "charge cutoff of mode 1 (states -ncut..ncut)"},
        {"ncut3", KeyGroup::truncation, "charge cutoff of mode 3"},
        {"n4", KeyGroup::truncation, "oscillator levels of the branch-4 mode"},
        {"n6", KeyGroup::truncation, "oscillator levels of the resonator mode (full model only)"},
        {"dimension_cap", KeyGroup::truncation, "largest Hilbert-space dimension allowed"},
        {"levels", KeyGroup::truncation, "number of eigenlevels reported per flux point (>= 4)"},
        {"residual_tol", KeyGroup::truncation, "eigen-residual tolerance of the iterative solver"},
        {"flux_list", KeyGroup::sweep, "comma-separated flux values in units of Phi_0"},
        {"flux_min", KeyGroup::sweep, "sweep start (Phi_0), with flux_max and flux_points"},
        {"flux_max", KeyGroup::sweep, "sweep end (Phi_0)"},
        {"flux_points", KeyGroup::sweep, "number of sweep points"},
        {"Delta_GHz", KeyGroup::qrm, "qubit gap"},
        {"Ip_nA", KeyGroup::qrm, "persistent current (also the coupling-estimate input)"},
        {"omega_r_GHz", KeyGroup::qrm, "resonator frequency"},
        {"g_GHz", KeyGroup::qrm, "qubit-resonator coupling"},
        {"nfock", KeyGroup::qrm, "initial Fock truncation (doubled until converged)"},
        {"phi_ext", KeyGroup::qrm, "external flux in units of Phi_0 for bs-shift"},
        {"transition", KeyGroup::qrm, "w01 | w02 | w12 | w03_half | sideband3"},
        {"force_unit_xi", KeyGroup::coupling, "true: set the renormalization factor xi_R to 1"},
        {"R_normal_ohm", KeyGroup::materials, "normal-state wire resistance"},
        {"Tc_K", KeyGroup::materials, "critical temperature"},
        {"length_um", KeyGroup::materials, "wire length (default 30)"},
        {"width_um", KeyGroup::materials, "wire width (default 0.487)"},
        {"thickness_nm", KeyGroup::materials, "film thickness (default 50)"},
        {"Lk_nH", KeyGroup::materials, "kinetic inductance for the sheet-inductance report"},
        {"flow_sccm", KeyGroup::materials, "oxygen flow of the grAl calibration"},
        {"baked", KeyGroup::materials, "true: use the post-bake column"},
        {"interpolate", KeyGroup::materials, "true: allow linear interpolation between table rows"},
        {"calibration_file", KeyGroup::materials, "calibration CSV (default: bundled table)"},
        {"rt_file", KeyGroup::materials, "R(T) CSV: temperature_K,resistance_ohm"},
        {"onset_window_fraction", KeyGroup::materials, "top fraction of the temperature range used for the onset"},
        {"map_file", KeyGroup::spectro, "S21 map, CSV or .json"},
        {"map_scale", KeyGroup::spectro, "dB | linear: magnitude scale of a CSV map"},
        {"ridge_source", KeyGroup::spectro, "raw | normalized: map searched for ridges (default raw)"},
        {"ridge_polarity", KeyGroup::spectro, "peak | dip: sign of transition features in the searched map"},
        {"prominence", KeyGroup::spectro, "minimum peak prominence, in units of the searched map"},
        {"per_flux_max_peaks", KeyGroup::spectro, "most prominent peaks kept per flux column"},
        {"max_jump_GHz", KeyGroup::spectro, "largest frequency step linking neighbouring flux columns"},
        {"min_branch_points", KeyGroup::spectro, "shorter ridge branches are discarded"},
        {"labels", KeyGroup::spectro, "comma-separated candidate labels for assignment"},
        {"ambiguity_tol_GHz", KeyGroup::spectro, "runner-up label within this mean deviation flags a branch"},
        {"max_label_dev_GHz", KeyGroup::spectro, "branches farther than this from every model curve are dropped"},
        {"label_override", KeyGroup::spectro, "comma-separated branch:label pairs, e.g. 3:w02"},
        {"fix", KeyGroup::spectro, "comma-separated parameters held fixed: omega_r_GHz, Delta_GHz, Ip_nA, g_GHz"},
        {"weight_w01", KeyGroup::spectro, "fit weight multiplier of w01 points"},
        {"weight_w02", KeyGroup::spectro, "fit weight multiplier of w02 points"},
        {"weight_w12", KeyGroup::spectro, "fit weight multiplier of w12 points"},
        {"weight_w03_half", KeyGroup::spectro, "fit weight multiplier of w03_half points"},
        {"weight_sideband3", KeyGroup::spectro, "fit weight multiplier of sideband3 points"},
        {"max_iterations", KeyGroup::spectro, "Levenberg-Marquardt iteration cap"},
        {"points_file", KeyGroup::spectro, "labeled transition points CSV: fit these instead of a map"},
        {"fit_file", KeyGroup::spectro, "fit result JSON (overlay input)"},
        {"overlay_labels", KeyGroup::spectro, "comma-separated labels drawn in the overlay"},
        {"output_dir", KeyGroup::output, "directory receiving every artifact (default .)"},
        {"output_prefix", KeyGroup::output, "file-name prefix of every artifact"},
    };
    return keys;
}

inline const KeySpec* find_key(std::string_view name) {
    for (const auto& k : config_keys())
        if (k.name == name) return &k;
    return nullptr;
}

/// Help text listing the keys of the given groups.
inline std::string describe_keys(const std::vector<KeyGroup>& groups) {
    std::string s = "Configuration keys (key = value; '#' starts a comment):\n";
    for (auto g : groups) {
        s += "  [" + std::string(to_string(g)) + "]\n";
        for (const auto& k : config_keys()) {
            if (k.group != g) continue;
            std::string name(k.name);
            name.resize(std::max<std::size_t>(name.size(), 24), ' ');
            s += "    " + name + " " + std::string(k.description) + "\n";
        }
    }
    return s;
}

class Config {
public:
    /// Parses `key = value` lines. Unknown or repeated keys are validation errors.
    static Config parse(std::string_view text, const std::string& source = "config") {
        Config c;
        std::size_t lineno = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto end = text.find('\n', start);
            std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
            ++lineno;
            start = end == std::string_view::npos ? text.size() + 1 : end + 1;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            const std::string where = source + ":" + std::to_string(lineno);
            require(eq != std::string_view::npos, ErrorKind::validation, where + ": expected key = value");
            const std::string key(trim(line.substr(0, eq)));
            require(!c.values_.count(key), ErrorKind::validation, where + ": key '" + key + "' given twice");
            c.set(key, std::string(trim(line.substr(eq + 1))), where);
        }
        return c;
    }

    static Config load(const std::string& path) { return parse(read_file(path), path); }

    /// Sets or overrides a key; the key must belong to the documented set.
    void set(const std::string& key, const std::string& value, const std::string& where = "command line") {
        require(find_key(key) != nullptr, ErrorKind::validation, where + ": unknown configuration key '" + key + "'");
        require(!value.empty(), ErrorKind::validation, where + ": key '" + key + "' has an empty value");
        values_[key] = value;
    }

    /// Parses "key=value" as given on the command line.
    void set_assignment(const std::string& kv) {
        const auto eq = kv.find('=');
        require(eq != std::string::npos, ErrorKind::validation, "--set expects key=value, got '" + kv + "'");
        set(std::string(trim(std::string_view(kv).substr(0, eq))), std::string(trim(std::string_view(kv).substr(eq + 1))));
    }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }

    [[nodiscard]] double number(const std::string& key) const {
        const auto v = raw(key);
        if (!v) throw Error(ErrorKind::missing_parameter, "required configuration key '" + key + "' is missing");
        return to_number(key, *v);
    }

    [[nodiscard]] double number(const std::string& key, double fallback) const {
        const auto v = raw(key);
        if (!v) {
            resolved_[key] = format_double(fallback);
            return fallback;
        }
        return to_number(key, *v);
    }

    [[nodiscard]] std::optional<double> optional_number(const std::string& key) const {
        const auto v = raw(key);
        if (!v) return std::nullopt;
        return to_number(key, *v);
    }

    [[nodiscard]] int integer(const std::string& key, int fallback) const {
        const double v = number(key, static_cast<double>(fallback));
        require(v == std::floor(v) && std::abs(v) < 2e9, ErrorKind::validation, "key '" + key + "' must be an integer");
        return static_cast<int>(v);
    }

    [[nodiscard]] bool flag(const std::string& key, bool fallback) const {
        const auto v = raw(key);
        if (!v) {
            resolved_[key] = fallback ? "true" : "false";
            return fallback;
        }
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw Error(ErrorKind::validation, "key '" + key + "' must be true or false, got '" + *v + "'");
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        const auto v = raw(key);
        if (!v) {
            resolved_[key] = fallback;
            return fallback;
        }
        return *v;
    }

    [[nodiscard]] std::string text(const std::string& key) const {
        const auto v = raw(key);
        if (!v) throw Error(ErrorKind::missing_parameter, "required configuration key '" + key + "' is missing");
        return *v;
    }

    [[nodiscard]] std::vector<std::string> list(const std::string& key, const std::string& fallback) const {
        std::vector<std::string> out;
        for (auto& s : split(text(key, fallback)))
            if (!s.empty()) out.push_back(s);
        return out;
    }

    [[nodiscard]] std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : list(key, ""))
            out.push_back(parse_double(s, "key '" + key + "'"));
        return out;
    }

    /// Every key read so far with the value used, sorted by key.
    [[nodiscard]] std::vector<std::string> resolved_lines() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : resolved_) out.push_back(k + "=" + v);
        return out;
    }

    [[nodiscard]] nlohmann::json resolved_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [k, v] : resolved_) j[k] = v;
        return j;
    }

    /// Records a derived value (e.g. a preset default) in the resolved set.
    void note(const std::string& key, const std::string& value) const { resolved_[key] = value; }

private:
    [[nodiscard]] std::optional<std::string> raw(const std::string& key) const {
        require(find_key(key) != nullptr, ErrorKind::validation, "internal: undocumented key '" + key + "'");
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        resolved_[key] = it->second;
        return it->second;
    }

    static double to_number(const std::string& key, const std::string& v) {
        const double x = parse_double(v, "key '" + key + "'");
        require(std::isfinite(x), ErrorKind::validation, "key '" + key + "' must be finite");
        return x;
    }

    std::map<std::string, std::string> values_;
    mutable std::map<std::string, std::string> resolved_;
};

} // namespace fluxusc::io
