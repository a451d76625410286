// points.hpp: flux-spectroscopy transition points and their CSV form

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/core/transition_label.hpp"
#include "fluxusc/io/text.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace fluxusc::spectro {

struct TransitionPoint {
    double flux = 0.0;    // Φ_ext/Φ0
    double freq_GHz = 0.0;
    std::optional<TransitionLabel> label; // empty until labeled
    double weight = 1.0;
    int branch = -1; // ridge branch id; −1 when not produced by ridge linking

    void validate() const {
        require(std::isfinite(flux), ErrorKind::validation, "transition point flux must be finite");
        require(std::isfinite(freq_GHz) && freq_GHz > 0.0, ErrorKind::validation,
                "transition point frequency must be positive");
        require(std::isfinite(weight) && weight > 0.0, ErrorKind::validation, "transition point weight must be positive");
    }
};

using TransitionPoints = std::vector<TransitionPoint>;

inline constexpr const char* points_csv_header = "flux,freq_GHz,label,weight,branch";

/// Columns flux,freq_GHz,label,weight,branch; an unlabeled point has an empty label cell.
inline std::string to_csv(const TransitionPoints& pts, const std::vector<std::string>& metadata = {}) {
    std::string s;
    for (const auto& line : metadata) s += "# " + line + "\n";
    s += points_csv_header;
    s += "\n";
    for (const auto& p : pts) {
        s += io::format_double(p.flux) + "," + io::format_double(p.freq_GHz) + "," +
             (p.label ? std::string(to_string(*p.label)) : std::string()) + "," + io::format_double(p.weight) + "," +
             std::to_string(p.branch) + "\n";
    }
    return s;
}

/// Accepts four columns (flux,freq_GHz,label,weight) or five (…,branch); a header row is optional.
inline TransitionPoints read_points_csv(const std::string& path) {
    const auto lines = io::read_data_lines(path);
    TransitionPoints out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto c = io::split(lines[i]);
        const std::string where = path + ": line " + std::to_string(i + 1);
        require(c.size() == 4 || c.size() == 5, ErrorKind::validation, where + " must have 4 or 5 columns");
        if (i == 0 && !io::is_number(c[0])) continue;
        TransitionPoint p;
        p.flux = io::parse_double(c[0], where + " flux");
        p.freq_GHz = io::parse_double(c[1], where + " freq_GHz");
        if (!c[2].empty()) p.label = parse_transition_label(c[2]);
        p.weight = c[3].empty() ? 1.0 : io::parse_double(c[3], where + " weight");
        if (c.size() == 5 && !c[4].empty()) p.branch = static_cast<int>(io::parse_double(c[4], where + " branch"));
        require(std::isfinite(p.flux) && std::isfinite(p.freq_GHz) && p.freq_GHz > 0.0, ErrorKind::validation,
                where + ": flux must be finite and freq_GHz positive");
        require(std::isfinite(p.weight) && p.weight > 0.0, ErrorKind::validation, where + ": weight must be positive");
        out.push_back(p);
    }
    return out;
}

} // namespace fluxusc::spectro
