// overlay.hpp: QRM and JC transition curves on a map's flux axis, as CSV and
// as an SVG drawn over the normalized map

#pragma once

#include "fluxusc/io/svg.hpp"
#include "fluxusc/spectro/points.hpp"
#include "fluxusc/spectro/qrm_model.hpp"
#include "fluxusc/spectro/s21map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fluxusc::spectro {

struct OverlayTable {
    std::vector<double> flux;
    std::array<std::vector<double>, 5> qrm; // indexed by TransitionLabel
    std::array<std::vector<double>, 5> jc;
};

/// Both models from identical parameters, each at its own converged Fock truncation.
inline OverlayTable overlay_curves(const std::vector<double>& flux, const reduced::QRMParams& p,
                                   double truncation_tol_GHz = 1e-10) {
    p.validate();
    require(!flux.empty(), ErrorKind::validation, "overlay needs at least one flux value");
    const ParamVector th = to_vector(p);
    const std::set<double> fset(flux.begin(), flux.end());
    OverlayTable t;
    t.flux = flux;
    for (auto model : {reduced::RabiModel::qrm, reduced::RabiModel::jc}) {
        const RabiEvaluator ev(converged_nfock(model, th, fset, truncation_tol_GHz));
        auto& dst = model == reduced::RabiModel::qrm ? t.qrm : t.jc;
        for (double f : flux) {
            const auto lv = ev.evaluate(model, th, f, false).levels;
            for (auto l : all_transition_labels) dst[static_cast<std::size_t>(l)].push_back(transition_frequency(l, lv));
        }
    }
    return t;
}

inline std::string overlay_csv_header() {
    std::string h = "flux";
    for (const char* m : {"qrm_", "jc_"})
        for (auto l : all_transition_labels) h += "," + std::string(m) + std::string(to_string(l));
    return h;
}

/// Shortest round-trip number formatting: re-reading reproduces every value bit-exactly.
inline std::string to_csv(const OverlayTable& t, const std::vector<std::string>& metadata = {}) {
    std::string s;
    for (const auto& line : metadata) s += "# " + line + "\n";
    s += overlay_csv_header() + "\n";
    for (std::size_t i = 0; i < t.flux.size(); ++i) {
        s += io::format_double(t.flux[i]);
        for (const auto* set : {&t.qrm, &t.jc})
            for (const auto& col : *set) s += "," + io::format_double(col[i]);
        s += "\n";
    }
    return s;
}

inline OverlayTable read_overlay_csv(const std::string& path) {
    const auto lines = io::read_data_lines(path);
    require(!lines.empty() && lines[0] == overlay_csv_header(), ErrorKind::validation,
            path + ": expected overlay header '" + overlay_csv_header() + "'");
    OverlayTable t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto c = io::split(lines[i]);
        require(c.size() == 11, ErrorKind::validation, path + ": overlay rows need 11 columns");
        t.flux.push_back(io::parse_double(c[0], path));
        for (std::size_t k = 0; k < 5; ++k) {
            t.qrm[k].push_back(io::parse_double(c[1 + k], path));
            t.jc[k].push_back(io::parse_double(c[6 + k], path));
        }
    }
    return t;
}

namespace detail {

inline void draw_overlay(io::SvgPlot& plot, const OverlayTable& t, const std::vector<TransitionLabel>& labels,
                         const TransitionPoints& points) {
    for (auto l : labels) {
        const auto k = static_cast<std::size_t>(l);
        const std::string name(to_string(l));
        plot.line(t.flux, t.qrm[k], {"#000000", 1.6, "6 4"}, "QRM " + name);
        plot.line(t.flux, t.jc[k], {"#e8403a", 1.2, "2 3"}, "JC " + name);
    }
    if (!points.empty()) {
        std::vector<double> x, y;
        for (const auto& p : points) {
            x.push_back(p.flux);
            y.push_back(p.freq_GHz);
        }
        plot.markers(x, y, "#1f77b4", 1.8, "ridge points");
    }
}

inline std::pair<double, double> padded(double lo, double hi) {
    if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

} // namespace detail

/// Heatmap of the map under dashed QRM and dotted JC curves, plus optional points.
/// Curves are clipped to the map's frequency range.
inline std::string overlay_svg(const S21Map& map, const OverlayTable& t, const std::vector<TransitionLabel>& labels,
                               const TransitionPoints& points = {}, const std::vector<std::string>& comments = {}) {
    map.validate();
    const auto [vmin, vmax] = std::minmax_element(map.values.begin(), map.values.end());
    const auto [x0, x1] = map.cols() > 1 ? std::pair{map.flux.front(), map.flux.back()} : detail::padded(map.flux[0], map.flux[0]);
    const auto [y0, y1] =
        map.rows() > 1 ? std::pair{map.freq_GHz.front(), map.freq_GHz.back()} : detail::padded(map.freq_GHz[0], map.freq_GHz[0]);
    io::SvgPlot plot("Transmission with QRM / JC transitions", "flux (Phi_ext / Phi_0)", "frequency (GHz)", x0, x1, y0, y1);
    plot.heatmap(map.flux, map.freq_GHz, map.values, *vmin, *vmax);
    detail::draw_overlay(plot, t, labels, points);
    return plot.render(comments);
}

/// Curves and points only, on axes spanning both.
inline std::string overlay_svg(const OverlayTable& t, const std::vector<TransitionLabel>& labels,
                               const TransitionPoints& points = {}, const std::vector<std::string>& comments = {}) {
    require(!t.flux.empty(), ErrorKind::validation, "overlay table is empty");
    double xlo = t.flux.front(), xhi = t.flux.front(), ylo = INFINITY, yhi = -INFINITY;
    auto grow = [&](double x, double y) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        if (std::isfinite(y)) {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    };
    for (auto l : labels)
        for (std::size_t i = 0; i < t.flux.size(); ++i) {
            grow(t.flux[i], t.qrm[static_cast<std::size_t>(l)][i]);
            grow(t.flux[i], t.jc[static_cast<std::size_t>(l)][i]);
        }
    for (const auto& p : points) grow(p.flux, p.freq_GHz);
    if (!std::isfinite(ylo)) ylo = yhi = 0.0;
    const auto [x0, x1] = detail::padded(xlo, xhi);
    const auto [y0, y1] = detail::padded(ylo, yhi);
    io::SvgPlot plot("QRM / JC transitions", "flux (Phi_ext / Phi_0)", "frequency (GHz)", x0, x1, y0, y1);
    detail::draw_overlay(plot, t, labels, points);
    return plot.render(comments);
}

} // namespace fluxusc::spectro
