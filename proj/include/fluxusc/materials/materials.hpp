// materials.hpp: thin-wire kinetic inductance and resistivity, Tc from R(T) curves
// and the grAl sheet-resistance calibration table

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/io/text.hpp"
#include "fluxusc/units.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fluxusc::materials {

/// Wire dimensions: length and width in µm, thickness in nm.
struct WireGeometry {
    double length_um = 0.0;
    double width_um = 0.0;
    double thickness_nm = 0.0;

    [[nodiscard]] double squares() const { return length_um / width_um; }

    void validate() const {
        require(length_um > 0.0 && width_um > 0.0 && thickness_nm > 0.0, ErrorKind::validation,
                "wire length, width and thickness must be positive");
    }
};

/// Coupler wire of the measured device: 30 µm × 487 nm × 50 nm.
inline constexpr WireGeometry coupler_geometry{30.0, 0.487, 50.0};

/// Dirty-limit, low-temperature kinetic inductance L_k = 0.18·ħR/(k_B·T_c), in nH.
inline double kinetic_inductance(double R_normal_ohm, double Tc_K) {
    require(R_normal_ohm > 0.0 && Tc_K > 0.0, ErrorKind::validation, "R_normal and Tc must be positive");
    return 0.18 * units::hbar * R_normal_ohm / (units::boltzmann * Tc_K) / units::nano;
}

/// ρ = R·width·thickness/length in µΩ·cm.
inline double resistivity(double R_ohm, const WireGeometry& g) {
    require(R_ohm > 0.0, ErrorKind::validation, "resistance must be positive");
    g.validate();
    const double rho_ohm_m = R_ohm * (g.width_um * 1e-6) * (g.thickness_nm * 1e-9) / (g.length_um * 1e-6);
    return rho_ohm_m * 1e8; // 1 Ω·m = 1e8 µΩ·cm
}

/// L_□ = L_k·width/length in pH per square.
inline double sheet_inductance(double Lk_total_nH, const WireGeometry& g) {
    require(Lk_total_nH > 0.0, ErrorKind::validation, "kinetic inductance must be positive");
    g.validate();
    return Lk_total_nH * 1e3 / g.squares();
}

// ------------------------------- R(T) curves -------------------------------

/// Samples sorted by strictly increasing temperature (K), resistances ≥ 0 (Ω).
class RTCurve {
public:
    RTCurve(std::vector<double> temperature_K, std::vector<double> resistance_ohm) {
        require(temperature_K.size() == resistance_ohm.size(), ErrorKind::validation,
                "temperature and resistance columns differ in length");
        require(temperature_K.size() >= 2, ErrorKind::validation, "R(T) curve needs at least two samples");
        std::vector<std::size_t> idx(temperature_K.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return temperature_K[a] < temperature_K[b]; });
        for (std::size_t i : idx) {
            require(std::isfinite(temperature_K[i]) && std::isfinite(resistance_ohm[i]), ErrorKind::validation,
                    "R(T) samples must be finite");
            require(resistance_ohm[i] >= 0.0, ErrorKind::validation, "resistances must be non-negative");
            if (!t_.empty()) {
                require(temperature_K[i] > t_.back(), ErrorKind::validation,
                        "duplicate temperature " + io::format_double(temperature_K[i]) + " K in R(T) curve");
            }
            t_.push_back(temperature_K[i]);
            r_.push_back(resistance_ohm[i]);
        }
    }

    [[nodiscard]] const std::vector<double>& temperature() const { return t_; }
    [[nodiscard]] const std::vector<double>& resistance() const { return r_; }
    [[nodiscard]] std::size_t size() const { return t_.size(); }

private:
    std::vector<double> t_;
    std::vector<double> r_;
};

/// Two-column CSV (temperature_K, resistance_ohm); optional header; '#' comments.
inline RTCurve read_rt_csv(const std::string& path) {
    const auto lines = io::read_data_lines(path);
    std::vector<double> t, r;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto cells = io::split(lines[i]);
        require(cells.size() == 2, ErrorKind::validation,
                path + ": line " + std::to_string(i + 1) + " must have two columns");
        if (i == 0 && !io::is_number(cells[0])) continue; // header
        t.push_back(io::parse_double(cells[0], path));
        r.push_back(io::parse_double(cells[1], path));
    }
    return RTCurve(std::move(t), std::move(r));
}

struct TcOptions {
    double onset_window_fraction = 0.10; // top fraction of the temperature range used for the onset median
};

struct TcResult {
    double Tc_K = 0.0;
    double delta_Tc_K = 0.0; // T10 − T90
    double T10_K = 0.0;      // resistance decreased by 10% of onset
    double T90_K = 0.0;      // resistance decreased by 90% of onset
    double onset_resistance_ohm = 0.0;
    double uncertainty_K = 0.0; // ΔTc/2
    double onset_window_low_K = 0.0;
    double onset_window_fraction = 0.0;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// All temperatures at which the piecewise-linear curve takes the value `level`.
inline std::vector<double> crossings(const RTCurve& c, double level) {
    const auto& t = c.temperature();
    const auto& r = c.resistance();
    std::vector<double> out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (r[i] == level) out.push_back(t[i]);
        if (i + 1 < c.size() && (r[i] - level) * (r[i + 1] - level) < 0.0) {
            const double u = (level - r[i]) / (r[i + 1] - r[i]);
            out.push_back(t[i] + u * (t[i + 1] - t[i]));
        }
    }
    return out;
}

inline double unique_crossing(const RTCurve& c, double level, const char* what) {
    const auto x = crossings(c, level);
    if (x.empty()) {
        throw Error(ErrorKind::no_transition, std::string("R(T) curve never reaches the ") + what + " level");
    }
    if (x.size() > 1) {
        std::string msg = std::string("ambiguous ") + what + " crossing; curve crosses R=" + io::format_double(level) +
                          " ohm at T =";
        for (double v : x) msg += " " + io::format_double(v);
        throw Error(ErrorKind::ambiguous, msg);
    }
    return x.front();
}

} // namespace detail

/// Tc where R has dropped to 50% of the onset value; T10/T90 at 90%/10% of onset.
inline TcResult tc_from_rt_curve(const RTCurve& c, const TcOptions& opt = {}) {
    require(opt.onset_window_fraction > 0.0 && opt.onset_window_fraction <= 1.0, ErrorKind::validation,
            "onset window fraction must lie in (0, 1]");
    const auto& t = c.temperature();
    const auto& r = c.resistance();
    const auto [rmin, rmax] = std::minmax_element(r.begin(), r.end());
    if (!(*rmax >= 2.0 * *rmin) || *rmax <= 0.0) {
        throw Error(ErrorKind::no_transition, "R(T) curve does not span a transition (max R < 2 x min R)");
    }
    const double tlow = t.back() - opt.onset_window_fraction * (t.back() - t.front());
    std::vector<double> plateau;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (t[i] >= tlow) plateau.push_back(r[i]);
    const double onset = detail::median(plateau);

    TcResult out;
    out.onset_resistance_ohm = onset;
    out.onset_window_low_K = tlow;
    out.onset_window_fraction = opt.onset_window_fraction;
    out.Tc_K = detail::unique_crossing(c, 0.5 * onset, "50%");
    out.T10_K = detail::unique_crossing(c, 0.9 * onset, "10%-drop");
    out.T90_K = detail::unique_crossing(c, 0.1 * onset, "90%-drop");
    out.delta_Tc_K = out.T10_K - out.T90_K;
    out.uncertainty_K = 0.5 * out.delta_Tc_K;
    return out;
}

// --------------------------- grAl calibration table ---------------------------

struct CalibrationRow {
    double flow_sccm;
    double Rs;          // Ω/□, as deposited
    double Rs_unc;
    double Rs_baked;    // Ω/□, after the bake
    double Rs_baked_unc;
};

/// 50 nm films at 0.2 nm/s; mirrored by data/gral_calibration_v1.csv.
inline constexpr std::array<CalibrationRow, 5> gral_table{{
    {0.0, 0.89, 0.06, 0.89, 0.05},
    {0.2, 2.96, 0.20, 2.75, 0.19},
    {0.4, 7.56, 2.97, 5.01, 0.77},
    {0.6, 17.31, 2.48, 14.57, 1.49},
    {0.8, 43.49, 25.09, 35.14, 19.96},
}};

struct SheetResistance {
    double Rs_ohm_sq = 0.0;
    double uncertainty_ohm_sq = 0.0;
    bool interpolated = false;
};

/// Tabulated sheet resistance; piecewise-linear between rows only when allowed.
inline SheetResistance gral_calibration(double flow_sccm, bool baked, bool allow_interpolation = false,
                                        std::span<const CalibrationRow> table = gral_table) {
    require(!table.empty(), ErrorKind::validation, "empty calibration table");
    const auto pick = [&](const CalibrationRow& row) {
        return std::pair{baked ? row.Rs_baked : row.Rs, baked ? row.Rs_baked_unc : row.Rs_unc};
    };
    for (const auto& row : table) {
        if (row.flow_sccm == flow_sccm) {
            const auto [v, u] = pick(row);
            return {v, u, false};
        }
    }
    if (!(flow_sccm >= table.front().flow_sccm && flow_sccm <= table.back().flow_sccm)) {
        throw Error(ErrorKind::range, "flow " + io::format_double(flow_sccm) + " sccm is outside the calibrated range [" +
                                          io::format_double(table.front().flow_sccm) + ", " +
                                          io::format_double(table.back().flow_sccm) + "]");
    }
    if (!allow_interpolation) {
        throw Error(ErrorKind::range, "flow " + io::format_double(flow_sccm) +
                                          " sccm is not a tabulated value; request interpolation explicitly");
    }
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        if (flow_sccm > table[i].flow_sccm && flow_sccm < table[i + 1].flow_sccm) {
            const double u = (flow_sccm - table[i].flow_sccm) / (table[i + 1].flow_sccm - table[i].flow_sccm);
            const auto [v0, e0] = pick(table[i]);
            const auto [v1, e1] = pick(table[i + 1]);
            return {v0 + u * (v1 - v0), e0 + u * (e1 - e0), true};
        }
    }
    throw Error(ErrorKind::range, "flow not bracketed by the calibration table");
}

/// Reads the versioned calibration CSV.
inline std::vector<CalibrationRow> read_calibration_csv(const std::string& path) {
    const auto lines = io::read_data_lines(path);
    require(!lines.empty(), ErrorKind::validation, path + ": empty calibration file");
    std::vector<CalibrationRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto c = io::split(lines[i]);
        require(c.size() == 5, ErrorKind::validation, path + ": calibration rows need five columns");
        rows.push_back({io::parse_double(c[0], path), io::parse_double(c[1], path), io::parse_double(c[2], path),
                        io::parse_double(c[3], path), io::parse_double(c[4], path)});
    }
    return rows;
}

} // namespace fluxusc::materials
