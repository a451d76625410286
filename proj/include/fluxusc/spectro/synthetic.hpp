// synthetic.hpp: synthetic transmission maps with Gaussian transition lines,
// for round-trip checks of the analysis pipeline

#pragma once

#include "fluxusc/spectro/qrm_model.hpp"
#include "fluxusc/spectro/s21map.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <vector>

namespace fluxusc::spectro {

/// n points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
    require(n >= 1, ErrorKind::validation, "linspace needs at least one point");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

struct SyntheticMapOptions {
    double background = 1.0;
    double amplitude = 1.0;
    double linewidth_GHz = 0.006; // Gaussian standard deviation
    double noise = 0.0;           // additive Gaussian noise standard deviation
    std::uint64_t seed = 1;
};

/// value(f, Φ) = background + amplitude·Σ_lines exp(−(f − F_line(Φ))²/2σ²) + noise, linear scale.
inline S21Map synthetic_map(const std::vector<double>& freq_GHz, const std::vector<double>& flux,
                            const std::vector<std::function<double(double)>>& lines,
                            const SyntheticMapOptions& opt = {}) {
    require(opt.linewidth_GHz > 0.0 && opt.noise >= 0.0, ErrorKind::validation,
            "linewidth must be positive and noise non-negative");
    S21Map m;
    m.freq_GHz = freq_GHz;
    m.flux = flux;
    m.scale = MagnitudeScale::linear;
    m.values.assign(freq_GHz.size() * flux.size(), opt.background);
    m.validate();
    for (std::size_t j = 0; j < flux.size(); ++j) {
        for (const auto& line : lines) {
            const double centre = line(flux[j]);
            for (std::size_t i = 0; i < freq_GHz.size(); ++i) {
                const double x = (freq_GHz[i] - centre) / opt.linewidth_GHz;
                m.at(i, j) += opt.amplitude * std::exp(-0.5 * x * x);
            }
        }
    }
    if (opt.noise > 0.0) {
        std::mt19937_64 rng(opt.seed);
        std::normal_distribution<double> nd(0.0, opt.noise);
        for (double& v : m.values) v += nd(rng);
    }
    return m;
}

/// Lines of the given QRM transitions at converged Fock truncation.
inline S21Map synthetic_qrm_map(const reduced::QRMParams& p, const std::vector<double>& freq_GHz,
                                const std::vector<double>& flux, const std::vector<TransitionLabel>& labels,
                                const SyntheticMapOptions& opt = {}) {
    p.validate();
    const ParamVector th = to_vector(p);
    const auto ev = std::make_shared<RabiEvaluator>(
        converged_nfock(reduced::RabiModel::qrm, th, std::set<double>(flux.begin(), flux.end()), 1e-10));
    std::vector<std::function<double(double)>> lines;
    for (auto l : labels)
        lines.emplace_back([ev, th, l](double f) { return ev->transition(reduced::RabiModel::qrm, th, f, l); });
    return synthetic_map(freq_GHz, flux, lines, opt);
}

} // namespace fluxusc::spectro
