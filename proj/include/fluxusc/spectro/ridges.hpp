// ridges.hpp: transition ridges in an S21 map (peaks along frequency per flux
// column) and their assignment to model transitions

#pragma once

#include "fluxusc/spectro/points.hpp"
#include "fluxusc/spectro/qrm_model.hpp"
#include "fluxusc/spectro/s21map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace fluxusc::spectro {

struct RidgeOptions {
    double prominence = 1.0;        // in units of the searched map
    int per_flux_max_peaks = 8;     // most prominent peaks kept per flux column
    double max_jump_GHz = 0.1;      // largest frequency step allowed when linking neighbouring columns
    int min_branch_points = 1;      // shorter branches are discarded
};

struct RidgeResult {
    TransitionPoints points; // unlabeled, branch ids 0,1,… in order of first appearance
    int branches = 0;
    std::vector<std::string> warnings;
};

/// Robust noise level from first differences along frequency: σ ≈ median|Δv|/(0.6745·√2).
inline double estimate_noise_sigma(const S21Map& m) {
    std::vector<double> d;
    for (std::size_t i = 1; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) d.push_back(std::abs(m.at(i, j) - m.at(i - 1, j)));
    if (d.empty()) return 0.0;
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    return *mid / (0.6745 * std::sqrt(2.0));
}

/// Copy with every value negated, so dips become peaks.
inline S21Map inverted(S21Map m) {
    for (double& v : m.values) v = -v;
    return m;
}

namespace detail {

struct Peak {
    double freq_GHz;
    double prominence;
    std::size_t row;
};

/// Interior local maxima of one flux column with their topographic prominence.
inline std::vector<Peak> column_peaks(const S21Map& m, std::size_t col) {
    const std::size_t n = m.rows();
    std::vector<Peak> out;
    if (n < 3) return out;
    auto v = [&](std::size_t i) { return m.at(i, col); };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // Strict on the left, non-strict on the right: a flat top counts once.
        if (!(v(i) > v(i - 1) && v(i) >= v(i + 1))) continue;
        double left_min = v(i);
        for (std::size_t k = i; k-- > 0;) {
            if (v(k) > v(i)) break;
            left_min = std::min(left_min, v(k));
        }
        double right_min = v(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            if (v(k) > v(i)) break;
            right_min = std::min(right_min, v(k));
        }
        const double prom = v(i) - std::max(left_min, right_min);
        // Three-point parabola through the maximum, offset clamped to half a pixel.
        const double a = v(i - 1), b = v(i), c = v(i + 1);
        const double den = a - 2.0 * b + c;
        double d = den < 0.0 ? 0.5 * (a - c) / den : 0.0;
        d = std::clamp(d, -0.5, 0.5);
        const double step = d >= 0.0 ? m.freq_GHz[i + 1] - m.freq_GHz[i] : m.freq_GHz[i] - m.freq_GHz[i - 1];
        out.push_back({m.freq_GHz[i] + d * step, prom, i});
    }
    return out;
}

} // namespace detail

/// Per-column peaks above the prominence threshold, linked across neighbouring flux
/// columns by greedy nearest-frequency matching under the jump cap.
inline RidgeResult extract_ridges(const S21Map& m, const RidgeOptions& opt = {}) {
    m.validate();
    require(opt.prominence >= 0.0 && opt.per_flux_max_peaks >= 1 && opt.max_jump_GHz >= 0.0 &&
                opt.min_branch_points >= 1,
            ErrorKind::validation, "invalid ridge options");

    struct Branch {
        std::vector<TransitionPoint> pts;
        std::size_t last_col;
    };
    std::vector<Branch> branches;

    for (std::size_t j = 0; j < m.cols(); ++j) {
        auto peaks = detail::column_peaks(m, j);
        std::erase_if(peaks, [&](const detail::Peak& p) { return !(p.prominence >= opt.prominence) || p.prominence <= 0; });
        std::stable_sort(peaks.begin(), peaks.end(),
                         [](const auto& a, const auto& b) { return a.prominence > b.prominence; });
        if (peaks.size() > static_cast<std::size_t>(opt.per_flux_max_peaks)) peaks.resize(opt.per_flux_max_peaks);
        std::stable_sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.freq_GHz < b.freq_GHz; });

        // Candidate links (distance, branch, peak), resolved shortest first.
        std::vector<std::tuple<double, std::size_t, std::size_t>> links;
        for (std::size_t b = 0; b < branches.size(); ++b) {
            if (j == 0 || branches[b].last_col != j - 1) continue;
            for (std::size_t p = 0; p < peaks.size(); ++p) {
                const double dist = std::abs(peaks[p].freq_GHz - branches[b].pts.back().freq_GHz);
                if (dist <= opt.max_jump_GHz) links.emplace_back(dist, b, p);
            }
        }
        std::sort(links.begin(), links.end());
        std::vector<bool> branch_used(branches.size(), false), peak_used(peaks.size(), false);
        for (const auto& [dist, b, p] : links) {
            if (branch_used[b] || peak_used[p]) continue;
            branch_used[b] = peak_used[p] = true;
            branches[b].pts.push_back({m.flux[j], peaks[p].freq_GHz, std::nullopt, 1.0, -1});
            branches[b].last_col = j;
        }
        for (std::size_t p = 0; p < peaks.size(); ++p) {
            if (peak_used[p]) continue;
            branches.push_back({{{m.flux[j], peaks[p].freq_GHz, std::nullopt, 1.0, -1}}, j});
        }
    }

    RidgeResult out;
    for (auto& b : branches) {
        if (static_cast<int>(b.pts.size()) < opt.min_branch_points) continue;
        for (auto& p : b.pts) {
            p.branch = out.branches;
            out.points.push_back(p);
        }
        ++out.branches;
    }
    if (out.points.empty()) out.warnings.push_back("no ridge found above prominence " + io::format_double(opt.prominence));
    return out;
}

// ------------------------------- labeling -------------------------------

struct LabelOptions {
    double ambiguity_tol_GHz = 0.005; // runner-up within this of the best mean |Δf| → flagged
    std::vector<TransitionLabel> candidates{all_transition_labels.begin(), all_transition_labels.end()};
    std::map<int, TransitionLabel> overrides; // branch id → label, applied after scoring
    double max_dev_GHz = std::numeric_limits<double>::infinity(); // farther groups stay unlabeled
};

struct BranchAssignment {
    int branch = -1;
    std::size_t npoints = 0;
    TransitionLabel label = TransitionLabel::w01;
    double mean_abs_dev_GHz = 0.0;
    std::optional<TransitionLabel> runner_up;
    double runner_up_dev_GHz = std::numeric_limits<double>::infinity();
    bool ambiguous = false;
    bool overridden = false;
    bool dropped = false; // best mean deviation above max_dev_GHz; points left unlabeled
};

struct LabelResult {
    TransitionPoints points;
    std::vector<BranchAssignment> report;

    [[nodiscard]] bool any_ambiguous() const {
        return std::any_of(report.begin(), report.end(), [](const auto& a) { return a.ambiguous && !a.overridden; });
    }
};

/// Groups points by branch (branch −1 points stand alone) and gives each group the label
/// whose model curve at `guess` minimizes the mean |f_obs − f_model|.
inline LabelResult label_transitions(const TransitionPoints& points, const reduced::QRMParams& guess,
                                     const LabelOptions& opt = {}) {
    guess.validate();
    require(!opt.candidates.empty(), ErrorKind::validation, "no candidate labels");
    require(opt.ambiguity_tol_GHz >= 0.0, ErrorKind::validation, "ambiguity tolerance must be non-negative");
    for (const auto& p : points) p.validate();

    const RabiEvaluator ev(guess.nfock);
    const ParamVector th = to_vector(guess);
    std::map<double, std::array<double, 4>> level_cache;
    auto model = [&](double flux, TransitionLabel l) {
        auto it = level_cache.find(flux);
        if (it == level_cache.end())
            it = level_cache.emplace(flux, ev.evaluate(reduced::RabiModel::qrm, th, flux, false).levels).first;
        return transition_frequency(l, it->second);
    };

    // Group indices: branch ≥ 0 shared; branch −1 individual, keyed below all branch ids.
    std::vector<std::pair<int, std::vector<std::size_t>>> groups;
    std::map<int, std::size_t> by_branch;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].branch < 0) {
            groups.push_back({-1, {i}});
            continue;
        }
        auto [it, fresh] = by_branch.emplace(points[i].branch, groups.size());
        if (fresh) groups.push_back({points[i].branch, {}});
        groups[it->second].second.push_back(i);
    }

    LabelResult out;
    out.points = points;
    for (const auto& [branch, idx] : groups) {
        std::vector<std::pair<double, TransitionLabel>> scores;
        for (auto l : opt.candidates) {
            double s = 0.0;
            for (std::size_t i : idx) s += std::abs(points[i].freq_GHz - model(points[i].flux, l));
            scores.emplace_back(s / static_cast<double>(idx.size()), l);
        }
        std::stable_sort(scores.begin(), scores.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        BranchAssignment a;
        a.branch = branch;
        a.npoints = idx.size();
        a.label = scores[0].second;
        a.mean_abs_dev_GHz = scores[0].first;
        if (scores.size() > 1) {
            a.runner_up = scores[1].second;
            a.runner_up_dev_GHz = scores[1].first;
            a.ambiguous = scores[1].first - scores[0].first <= opt.ambiguity_tol_GHz;
        }
        if (branch >= 0) {
            if (auto ov = opt.overrides.find(branch); ov != opt.overrides.end()) {
                a.label = ov->second;
                a.overridden = true;
            }
        }
        a.dropped = !a.overridden && a.mean_abs_dev_GHz > opt.max_dev_GHz;
        if (a.dropped) a.ambiguous = false;
        for (std::size_t i : idx) out.points[i].label = a.dropped ? std::nullopt : std::optional(a.label);
        out.report.push_back(a);
    }
    return out;
}

inline nlohmann::json to_json(const BranchAssignment& a) {
    nlohmann::json j;
    j["branch"] = a.branch;
    j["npoints"] = a.npoints;
    j["label"] = std::string(to_string(a.label));
    j["mean_abs_dev_GHz"] = a.mean_abs_dev_GHz;
    j["runner_up"] = a.runner_up ? nlohmann::json(std::string(to_string(*a.runner_up))) : nlohmann::json();
    j["runner_up_dev_GHz"] = std::isfinite(a.runner_up_dev_GHz) ? nlohmann::json(a.runner_up_dev_GHz) : nlohmann::json();
    j["ambiguous"] = a.ambiguous;
    j["overridden"] = a.overridden;
    j["dropped"] = a.dropped;
    return j;
}

} // namespace fluxusc::spectro
