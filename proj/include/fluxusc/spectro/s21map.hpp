// s21map.hpp: transmission maps over frequency and external flux, with NaN repair
// and per-frequency-row normalization

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/io/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace fluxusc::spectro {

enum class MagnitudeScale { dB, linear, normalized };

inline const char* to_string(MagnitudeScale s) {
    switch (s) {
    case MagnitudeScale::dB: return "dB";
    case MagnitudeScale::linear: return "linear";
    case MagnitudeScale::normalized: return "normalized";
    }
    return "?";
}

inline MagnitudeScale parse_scale(const std::string& s) {
    if (s == "dB" || s == "db") return MagnitudeScale::dB;
    if (s == "linear") return MagnitudeScale::linear;
    if (s == "normalized") return MagnitudeScale::normalized;
    throw Error(ErrorKind::validation, "unknown magnitude scale '" + s + "' (dB, linear, normalized)");
}

/// Rows follow the frequency axis, columns the flux axis; value(i, j) = |S21|(f_i, Φ_j).
struct S21Map {
    std::vector<double> freq_GHz;
    std::vector<double> flux;
    std::vector<double> values; // row-major, freq_GHz.size() × flux.size()
    MagnitudeScale scale = MagnitudeScale::dB;
    std::vector<std::pair<std::size_t, std::size_t>> repaired_cells; // NaNs replaced by their row median
    std::vector<std::size_t> degenerate_rows;                        // set to zero by normalization

    [[nodiscard]] std::size_t rows() const { return freq_GHz.size(); }
    [[nodiscard]] std::size_t cols() const { return flux.size(); }
    [[nodiscard]] double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }
    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }

    void validate() const {
        require(!freq_GHz.empty() && !flux.empty(), ErrorKind::validation, "S21 map needs non-empty axes");
        require(values.size() == rows() * cols(), ErrorKind::validation, "S21 grid size does not match its axes");
        for (std::size_t i = 1; i < rows(); ++i)
            require(freq_GHz[i] > freq_GHz[i - 1], ErrorKind::validation, "frequency axis must be strictly ascending");
        for (std::size_t j = 1; j < cols(); ++j)
            require(flux[j] > flux[j - 1], ErrorKind::validation, "flux axis must be strictly ascending");
    }
};

/// Replaces NaN cells with the median of the finite cells in their row and records them.
inline void repair_nans(S21Map& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<double> finite;
        bool any_nan = false;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double v = m.at(i, j);
            if (std::isnan(v)) {
                any_nan = true;
            } else {
                require(std::isfinite(v), ErrorKind::validation, "S21 map contains an infinite value");
                finite.push_back(v);
            }
        }
        if (!any_nan) continue;
        require(!finite.empty(), ErrorKind::validation,
                "frequency row " + std::to_string(i) + " contains only NaN values");
        std::sort(finite.begin(), finite.end());
        const std::size_t n = finite.size();
        const double med = n % 2 == 1 ? finite[n / 2] : 0.5 * (finite[n / 2 - 1] + finite[n / 2]);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (std::isnan(m.at(i, j))) {
                m.at(i, j) = med;
                m.repaired_cells.emplace_back(i, j);
            }
        }
    }
}

/// CSV layout: first row holds the flux values after one leading label cell; every
/// further row is a frequency (GHz) followed by its magnitudes.
inline S21Map read_s21_csv(const std::string& path, MagnitudeScale scale = MagnitudeScale::dB) {
    const auto lines = io::read_data_lines(path);
    require(lines.size() >= 2, ErrorKind::validation, path + ": S21 CSV needs a flux row and at least one data row");
    S21Map m;
    m.scale = scale;
    const auto head = io::split(lines[0]);
    require(head.size() >= 2, ErrorKind::validation, path + ": flux header row needs at least one flux value");
    for (std::size_t j = 1; j < head.size(); ++j) m.flux.push_back(io::parse_double(head[j], path + " flux row"));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = io::split(lines[i]);
        require(cells.size() == head.size(), ErrorKind::validation,
                path + ": data row " + std::to_string(i) + " has " + std::to_string(cells.size()) +
                    " cells, expected " + std::to_string(head.size()));
        m.freq_GHz.push_back(io::parse_double(cells[0], path + " frequency column"));
        for (std::size_t j = 1; j < cells.size(); ++j) m.values.push_back(io::parse_double(cells[j], path));
    }
    m.validate();
    repair_nans(m);
    return m;
}

/// JSON schema: {"freq_GHz": [...], "flux": [...], "magnitude": [[row per frequency]], "scale": "dB"|"linear"}.
/// NaN cells are written as null.
inline S21Map s21_from_json(const nlohmann::json& j) {
    try {
        S21Map m;
        m.freq_GHz = j.at("freq_GHz").get<std::vector<double>>();
        m.flux = j.at("flux").get<std::vector<double>>();
        m.scale = parse_scale(j.value("scale", std::string("dB")));
        const auto& mag = j.at("magnitude");
        require(mag.is_array() && mag.size() == m.freq_GHz.size(), ErrorKind::validation,
                "magnitude must have one row per frequency");
        for (const auto& row : mag) {
            require(row.is_array() && row.size() == m.flux.size(), ErrorKind::validation,
                    "every magnitude row must have one value per flux point");
            for (const auto& v : row) m.values.push_back(v.is_null() ? std::nan("") : v.get<double>());
        }
        m.validate();
        repair_nans(m);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::validation, std::string("S21 JSON: ") + e.what());
    }
}

inline S21Map read_s21_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(io::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::validation, path + ": " + e.what());
    }
    return s21_from_json(j);
}

/// Dispatch on extension: .json → JSON schema, anything else → CSV.
inline S21Map read_s21(const std::string& path, MagnitudeScale csv_scale = MagnitudeScale::dB) {
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return json ? read_s21_json(path) : read_s21_csv(path, csv_scale);
}

inline std::string to_csv(const S21Map& m, const std::vector<std::string>& metadata = {}) {
    std::string s;
    for (const auto& line : metadata) s += "# " + line + "\n";
    s += "freq_GHz\\flux";
    for (double f : m.flux) s += "," + io::format_double(f);
    s += "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += io::format_double(m.freq_GHz[i]);
        for (std::size_t j = 0; j < m.cols(); ++j) s += "," + io::format_double(m.at(i, j));
        s += "\n";
    }
    return s;
}

inline nlohmann::json to_json(const S21Map& m) {
    nlohmann::json j;
    j["freq_GHz"] = m.freq_GHz;
    j["flux"] = m.flux;
    j["scale"] = to_string(m.scale);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        rows.push_back(std::vector<double>(m.values.begin() + static_cast<std::ptrdiff_t>(i * m.cols()),
                                           m.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.cols())));
    }
    j["magnitude"] = rows;
    return j;
}

/// Each frequency row becomes (|S21| − min_row)/std_row with the population standard
/// deviation. Rows with std_row ≤ 1e−12·|mean_row| become zero and are listed in degenerate_rows.
inline S21Map normalize_map(const S21Map& in) {
    in.validate();
    if (in.cols() < 2) {
        throw Error(ErrorKind::degenerate, "normalization needs at least two flux samples per frequency row");
    }
    S21Map out = in;
    out.scale = MagnitudeScale::normalized;
    out.degenerate_rows.clear();
    const auto n = static_cast<double>(in.cols());
    for (std::size_t i = 0; i < in.rows(); ++i) {
        double mean = 0.0, lo = in.at(i, 0);
        for (std::size_t j = 0; j < in.cols(); ++j) {
            mean += in.at(i, j);
            lo = std::min(lo, in.at(i, j));
        }
        mean /= n;
        double var = 0.0;
        for (std::size_t j = 0; j < in.cols(); ++j) var += (in.at(i, j) - mean) * (in.at(i, j) - mean);
        const double sd = std::sqrt(var / n);
        if (sd == 0.0 || sd <= 1e-12 * std::abs(mean)) {
            for (std::size_t j = 0; j < in.cols(); ++j) out.at(i, j) = 0.0;
            out.degenerate_rows.push_back(i);
            continue;
        }
        for (std::size_t j = 0; j < in.cols(); ++j) out.at(i, j) = (in.at(i, j) - lo) / sd;
    }
    return out;
}

} // namespace fluxusc::spectro
