// svg.hpp: minimal self-contained SVG plots on linear axes. Output depends only
// on the inputs; the first line is a version banner comment.

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/version.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace fluxusc::io {

struct Rgb {
    int r, g, b;
};

inline std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

/// Viridis sampled at nine anchors, linearly interpolated; t is clamped to [0, 1].
inline Rgb viridis(double t) {
    static constexpr std::array<Rgb, 9> anchors{{{68, 1, 84},    {71, 45, 123},  {59, 82, 139},
                                                 {44, 114, 142}, {33, 145, 140}, {39, 173, 129},
                                                 {92, 200, 99},  {170, 220, 50}, {253, 231, 37}}};
    if (!std::isfinite(t)) t = 0.0;
    t = std::clamp(t, 0.0, 1.0) * (anchors.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), anchors.size() - 2);
    const double u = t - static_cast<double>(i);
    auto mix = [&](int a, int b) { return static_cast<int>(std::lround(a + u * (b - a))); };
    return {mix(anchors[i].r, anchors[i + 1].r), mix(anchors[i].g, anchors[i + 1].g), mix(anchors[i].b, anchors[i + 1].b)};
}

/// Fixed two-decimal coordinates keep files small and byte-stable.
inline std::string coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Roughly n "nice" tick positions (1, 2, 5 × 10^k steps) inside [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi, int n = 6) {
    std::vector<double> out;
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct LineStyle {
    std::string color = "#000000";
    double width = 1.5;
    std::string dash; // SVG stroke-dasharray, empty for solid
};

class SvgPlot {
public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel, double xmin, double xmax, double ymin,
            double ymax, int width = 760, int height = 520)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)), x0_(xmin), x1_(xmax),
          y0_(ymin), y1_(ymax), w_(width), h_(height) {
        require(std::isfinite(xmin) && std::isfinite(xmax) && xmax > xmin && std::isfinite(ymin) &&
                    std::isfinite(ymax) && ymax > ymin,
                ErrorKind::validation, "plot ranges must be finite and non-empty");
    }

    /// Cells centred on the axis samples; values[i*nx + j] at (x[j], y[i]), colour-scaled to [vmin, vmax].
    /// Rows beyond max_rows are max-pooled in consecutive groups so narrow lines stay visible.
    void heatmap(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& values,
                 double vmin, double vmax, std::size_t max_rows = 400) {
        require(values.size() == x.size() * y.size() && !x.empty() && !y.empty() && max_rows >= 1,
                ErrorKind::validation, "heatmap grid does not match its axes");
        const auto xe = edges(x), ye = edges(y);
        const double span = vmax > vmin ? vmax - vmin : 1.0;
        const std::size_t group = (y.size() + max_rows - 1) / max_rows;
        body_ += "<g shape-rendering=\"crispEdges\">\n";
        for (std::size_t i0 = 0; i0 < y.size(); i0 += group) {
            const std::size_t i1 = std::min(i0 + group, y.size());
            for (std::size_t j = 0; j < x.size(); ++j) {
                double v = values[i0 * x.size() + j];
                for (std::size_t i = i0 + 1; i < i1; ++i) v = std::max(v, values[i * x.size() + j]);
                const double px0 = px(xe[j]), px1 = px(xe[j + 1]);
                const double py0 = py(ye[i1]), py1 = py(ye[i0]);
                body_ += "<rect x=\"" + coord(px0) + "\" y=\"" + coord(py0) + "\" width=\"" + coord(px1 - px0) +
                         "\" height=\"" + coord(py1 - py0) + "\" fill=\"" + hex(viridis((v - vmin) / span)) + "\"/>\n";
            }
        }
        body_ += "</g>\n";
    }

    /// Polyline broken at non-finite samples.
    void line(const std::vector<double>& x, const std::vector<double>& y, const LineStyle& s,
              const std::string& label = {}) {
        require(x.size() == y.size(), ErrorKind::validation, "line x and y differ in length");
        std::string pts;
        auto flush = [&] {
            if (!pts.empty()) {
                body_ += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"" + coord(s.width) + "\"" +
                         (s.dash.empty() ? "" : " stroke-dasharray=\"" + s.dash + "\"") + " points=\"" + pts + "\"/>\n";
            }
            pts.clear();
        };
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
                flush();
                continue;
            }
            if (!pts.empty()) pts += ' ';
            pts += coord(px(x[i])) + "," + coord(py(y[i]));
        }
        flush();
        if (!label.empty()) legend_.push_back({label, s, false});
    }

    void markers(const std::vector<double>& x, const std::vector<double>& y, const std::string& color,
                 double radius = 2.0, const std::string& label = {}) {
        require(x.size() == y.size(), ErrorKind::validation, "marker x and y differ in length");
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
            body_ += "<circle cx=\"" + coord(px(x[i])) + "\" cy=\"" + coord(py(y[i])) + "\" r=\"" + coord(radius) +
                     "\" fill=\"" + color + "\"/>\n";
        }
        if (!label.empty()) legend_.push_back({label, {color, radius, {}}, true});
    }

    /// Complete document; `comments` are emitted as XML comments after the banner.
    [[nodiscard]] std::string render(const std::vector<std::string>& comments = {}) const {
        std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        s += "<!-- fluxusc " + std::string(version) + " -->\n";
        for (const auto& c : comments) s += "<!-- " + xml_escape(sanitize_comment(c)) + " -->\n";
        s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) + "\" height=\"" +
             std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " + std::to_string(h_) +
             "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
        s += "<defs><clipPath id=\"plot-area\"><rect x=\"" + coord(left) + "\" y=\"" + coord(top) + "\" width=\"" +
             coord(pw()) + "\" height=\"" + coord(ph()) + "\"/></clipPath></defs>\n";
        s += "<g clip-path=\"url(#plot-area)\">\n" + body_ + "</g>\n";
        s += "<rect x=\"" + coord(left) + "\" y=\"" + coord(top) + "\" width=\"" + coord(pw()) + "\" height=\"" +
             coord(ph()) + "\" fill=\"none\" stroke=\"#000000\"/>\n";
        for (double v : nice_ticks(x0_, x1_)) {
            const double x = px(v);
            s += "<line x1=\"" + coord(x) + "\" y1=\"" + coord(top + ph()) + "\" x2=\"" + coord(x) + "\" y2=\"" +
                 coord(top + ph() + 5) + "\" stroke=\"#000000\"/>\n";
            s += "<text x=\"" + coord(x) + "\" y=\"" + coord(top + ph() + 18) + "\" text-anchor=\"middle\">" +
                 tick_label(v) + "</text>\n";
        }
        for (double v : nice_ticks(y0_, y1_)) {
            const double y = py(v);
            s += "<line x1=\"" + coord(left - 5) + "\" y1=\"" + coord(y) + "\" x2=\"" + coord(left) + "\" y2=\"" +
                 coord(y) + "\" stroke=\"#000000\"/>\n";
            s += "<text x=\"" + coord(left - 8) + "\" y=\"" + coord(y + 4) + "\" text-anchor=\"end\">" + tick_label(v) +
                 "</text>\n";
        }
        s += "<text x=\"" + coord(left + pw() / 2) + "\" y=\"" + coord(top - 14) +
             "\" text-anchor=\"middle\" font-size=\"14\">" + xml_escape(title_) + "</text>\n";
        s += "<text x=\"" + coord(left + pw() / 2) + "\" y=\"" + coord(h_ - 10.0) + "\" text-anchor=\"middle\">" +
             xml_escape(xlabel_) + "</text>\n";
        s += "<text x=\"16\" y=\"" + coord(top + ph() / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
             coord(top + ph() / 2) + ")\">" + xml_escape(ylabel_) + "</text>\n";
        double ly = top + 8;
        for (const auto& e : legend_) {
            const double lx = left + pw() + 12;
            if (e.marker) {
                s += "<circle cx=\"" + coord(lx + 12) + "\" cy=\"" + coord(ly) + "\" r=\"3\" fill=\"" + e.style.color +
                     "\"/>\n";
            } else {
                s += "<line x1=\"" + coord(lx) + "\" y1=\"" + coord(ly) + "\" x2=\"" + coord(lx + 24) + "\" y2=\"" +
                     coord(ly) + "\" stroke=\"" + e.style.color + "\" stroke-width=\"" + coord(e.style.width) + "\"" +
                     (e.style.dash.empty() ? "" : " stroke-dasharray=\"" + e.style.dash + "\"") + "/>\n";
            }
            s += "<text x=\"" + coord(lx + 30) + "\" y=\"" + coord(ly + 4) + "\">" + xml_escape(e.label) + "</text>\n";
            ly += 18;
        }
        s += "</svg>\n";
        return s;
    }

private:
    static constexpr double left = 70, right = 150, top = 40, bottom = 50;

    struct LegendEntry {
        std::string label;
        LineStyle style;
        bool marker;
    };

    [[nodiscard]] double pw() const { return w_ - left - right; }
    [[nodiscard]] double ph() const { return h_ - top - bottom; }
    [[nodiscard]] double px(double x) const { return left + (x - x0_) / (x1_ - x0_) * pw(); }
    [[nodiscard]] double py(double y) const { return top + (y1_ - y) / (y1_ - y0_) * ph(); }

    static std::vector<double> edges(const std::vector<double>& c) {
        std::vector<double> e(c.size() + 1);
        if (c.size() == 1) {
            e[0] = c[0] - 0.5;
            e[1] = c[0] + 0.5;
            return e;
        }
        for (std::size_t i = 1; i < c.size(); ++i) e[i] = 0.5 * (c[i - 1] + c[i]);
        e.front() = c.front() - (e[1] - c.front());
        e.back() = c.back() + (c.back() - e[c.size() - 1]);
        return e;
    }

    static std::string sanitize_comment(std::string c) {
        for (std::size_t p; (p = c.find("--")) != std::string::npos;) c.replace(p, 2, "- ");
        return c;
    }

    std::string title_, xlabel_, ylabel_;
    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::string body_;
    std::vector<LegendEntry> legend_;
};

} // namespace fluxusc::io
