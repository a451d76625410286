// commands.hpp: the command-line operations as library functions. Each reads a
// Config and returns a JSON summary after writing its artifacts
//
// Artifacts are byte-deterministic for identical inputs; every artifact embeds the
// resolved configuration.

#pragma once

#include "fluxusc/circuit/params.hpp"
#include "fluxusc/circuit/qubit.hpp"
#include "fluxusc/circuit/spectrum.hpp"
#include "fluxusc/io/config.hpp"
#include "fluxusc/io/svg.hpp"
#include "fluxusc/materials/materials.hpp"
#include "fluxusc/reduced/coupling.hpp"
#include "fluxusc/reduced/qrm.hpp"
#include "fluxusc/spectro/fit.hpp"
#include "fluxusc/spectro/overlay.hpp"
#include "fluxusc/spectro/ridges.hpp"
#include "fluxusc/spectro/s21map.hpp"
#include "fluxusc/spectro/synthetic.hpp"
#include "fluxusc/version.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fluxusc::cli {

using io::Config;
using nlohmann::json;

// ------------------------------- shared helpers -------------------------------

/// output_dir/output_prefix + name; the directory is created on demand.
inline std::string output_path(const Config& c, const std::string& name) {
    const std::string dir = c.text("output_dir", ".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir + "': " + ec.message());
    return (std::filesystem::path(dir) / (c.text("output_prefix", "") + name)).string();
}

inline std::vector<std::string> provenance(const std::string& command, const Config& c) {
    std::vector<std::string> lines{"fluxusc " + std::string(version) + " " + command};
    for (const auto& l : c.resolved_lines()) lines.push_back("config " + l);
    return lines;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Writes a JSON artifact with the resolved configuration under "config".
inline void write_json(const std::string& path, json j, const Config& c, const std::string& command) {
    j["config"] = c.resolved_json();
    j["generator"] = "fluxusc " + std::string(version) + " " + command;
    io::write_file(path, dump(j));
}

struct CircuitFromConfig {
    circuit::CircuitParams params;
    bool csh_assumed = false;
};

/// Preset values overridden by explicit keys. Without Csh_fF the assumed value is used
/// unless `require_csh` is set.
inline CircuitFromConfig circuit_from_config(const Config& c, const std::string& default_preset, bool require_csh) {
    const std::string preset = c.text("preset", default_preset);
    CircuitFromConfig out;
    auto& p = out.params;
    if (preset == "design") {
        p = circuit::design_params();
    } else if (preset == "estimated") {
        p = circuit::estimated_device_params();
    } else {
        require(preset == "none", ErrorKind::validation, "preset must be design, estimated or none");
    }
    if (c.has("Csh_fF")) {
        p.Csh_fF = c.number("Csh_fF");
    } else if (require_csh) {
        throw Error(ErrorKind::missing_parameter,
                    "required configuration key 'Csh_fF' is missing (the shunt capacitance is not published; give it explicitly)");
    } else {
        p.Csh_fF = circuit::assumed_shunt_capacitance_ff;
        out.csh_assumed = true;
        c.note("Csh_fF", io::format_double(p.Csh_fF) + " (assumed)");
    }
    require(!(c.has("EC_GHz") && c.has("CJ_fF")), ErrorKind::validation, "give either EC_GHz or CJ_fF, not both");
    if (c.has("EC_GHz")) p = circuit::with_charging_energy(p, c.number("EC_GHz"));
    if (auto v = c.optional_number("CJ_fF")) p.CJ_fF = *v;
    if (auto v = c.optional_number("EJ_GHz")) {
        p.EJ_GHz = *v;
        p.Jc_uA_per_um2.reset();
        p.junction_area_um2.reset();
    }
    if (auto v = c.optional_number("Jc_uA_per_um2")) p.Jc_uA_per_um2 = *v;
    if (auto v = c.optional_number("junction_area_um2")) p.junction_area_um2 = *v;
    for (const auto& [key, field] : {std::pair{"alpha", &p.alpha}, std::pair{"LR_nH", &p.LR_nH},
                                     std::pair{"CR_fF", &p.CR_fF}, std::pair{"Lc_nH", &p.Lc_nH}}) {
        if (auto v = c.optional_number(key)) *field = *v;
    }
    if (p.Jc_uA_per_um2 && p.junction_area_um2) p.EJ_GHz = p.resolved_EJ_GHz();
    for (const auto& [key, value] :
         {std::pair{"EJ_GHz", p.resolved_EJ_GHz()}, std::pair{"CJ_fF", p.CJ_fF}, std::pair{"alpha", p.alpha},
          std::pair{"LR_nH", p.LR_nH}, std::pair{"CR_fF", p.CR_fF}, std::pair{"Lc_nH", p.Lc_nH}}) {
        if (!c.has(key)) c.note(key, io::format_double(value) + " (" + preset + ")");
    }
    p.validate();
    return out;
}

/// flux_list, or flux_min/flux_max/flux_points, or the given default sweep.
inline std::vector<double> flux_from_config(const Config& c, double lo, double hi, int n) {
    if (c.has("flux_list")) {
        require(!c.has("flux_min") && !c.has("flux_max") && !c.has("flux_points"), ErrorKind::validation,
                "give either flux_list or flux_min/flux_max/flux_points");
        auto v = c.numbers("flux_list");
        require(!v.empty(), ErrorKind::validation, "flux_list is empty");
        return v;
    }
    const double a = c.number("flux_min", lo), b = c.number("flux_max", hi);
    const int pts = c.integer("flux_points", n);
    require(pts >= 1 && (pts == 1 || b > a), ErrorKind::validation, "flux sweep needs flux_max > flux_min and flux_points >= 1");
    return spectro::linspace(a, b, static_cast<std::size_t>(pts));
}

inline reduced::QRMParams qrm_from_config(const Config& c) {
    reduced::QRMParams p{c.number("Delta_GHz"), c.number("Ip_nA"), c.number("omega_r_GHz"), c.number("g_GHz"),
                         c.integer("nfock", 40)};
    p.validate();
    return p;
}

inline json to_json(const reduced::QRMParams& p) {
    return {{"Delta_GHz", p.Delta_GHz}, {"Ip_nA", p.Ip_nA}, {"omega_r_GHz", p.omega_r_GHz}, {"g_GHz", p.g_GHz}};
}

inline std::vector<TransitionLabel> labels_from(const Config& c, const std::string& key) {
    std::vector<TransitionLabel> out;
    for (const auto& s : c.list(key, "w01,w02,w12,w03_half,sideband3")) out.push_back(parse_transition_label(s));
    require(!out.empty(), ErrorKind::validation, "key '" + key + "' lists no labels");
    return out;
}

inline std::string transitions_svg(const std::string& title, const std::vector<double>& flux,
                                   const std::array<std::vector<double>, 5>& curves,
                                   const std::vector<std::string>& comments) {
    static const std::array<const char*, 5> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    double ylo = INFINITY, yhi = -INFINITY;
    for (const auto& c : curves)
        for (double v : c)
            if (std::isfinite(v)) {
                ylo = std::min(ylo, v);
                yhi = std::max(yhi, v);
            }
    if (!std::isfinite(ylo)) ylo = yhi = 0.0;
    const auto [x0, x1] = spectro::detail::padded(flux.front(), flux.back());
    const auto [y0, y1] = spectro::detail::padded(ylo, yhi);
    io::SvgPlot plot(title, "flux (Phi_ext / Phi_0)", "frequency (GHz)", x0, x1, y0, y1);
    for (auto l : all_transition_labels) {
        const auto k = static_cast<std::size_t>(l);
        plot.line(flux, curves[k], {colors[k], 1.6, ""}, std::string(to_string(l)));
        if (flux.size() == 1) plot.markers(flux, curves[k], colors[k], 3.0);
    }
    return plot.render(comments);
}

// ------------------------------- simulate -------------------------------

/// Full-circuit (or qubit-only) spectrum versus flux.
inline json cmd_simulate(const Config& c) {
    const auto circ = circuit_from_config(c, "design", false);
    const std::string model = c.text("model", "full");
    const auto fluxes = flux_from_config(c, 0.48, 0.52, 5);
    const int k = c.integer("levels", 6);
    core::EigenOptions eo;
    eo.residual_tol = c.number("residual_tol", eo.residual_tol);
    const auto cap = static_cast<core::Index>(c.number("dimension_cap", static_cast<double>(core::default_dimension_cap)));

    circuit::FluxFamily family = [&] {
        if (model == "full") {
            circuit::TruncationSpec t{c.integer("ncut1", 6), c.integer("ncut3", 6), c.integer("n4", 8), c.integer("n6", 8), cap};
            t.validate();
            return circuit::full_hamiltonian_family(circ.params, t);
        }
        require(model == "qubit_clamped" || model == "qubit_adiabatic", ErrorKind::validation,
                "model must be full, qubit_clamped or qubit_adiabatic");
        circuit::QubitTruncation t{c.integer("ncut1", 8), c.integer("ncut3", 8), c.integer("n4", 10), cap};
        t.validate();
        return circuit::qubit_hamiltonian_family(circ.params, t,
                                                 model == "qubit_clamped" ? circuit::QubitModel::clamped_resonator
                                                                          : circuit::QubitModel::adiabatic);
    }();
    require(k >= 4 && k <= family.dim(), ErrorKind::validation, "levels must lie in [4, truncated dimension]");
    const auto table = circuit::sweep_family(family, fluxes, k, eo);

    // Qubit-like gap: clamped-resonator qubit model at the sweet spot.
    const circuit::QubitTruncation qt{8, 8, 10, cap};
    const auto qfam = circuit::qubit_hamiltonian_family(circ.params, qt, circuit::QubitModel::clamped_resonator);
    core::EigenOptions vo;
    vo.want_vectors = false;
    const auto qv = core::eigvals_hermitian(qfam.at(0.5), 2, vo);
    const double qubit_gap = qv[1] - qv[0];

    auto meta = provenance("simulate", c);
    meta.push_back("hilbert_dimension=" + std::to_string(family.dim()));
    meta.push_back("qubit_gap_GHz=" + io::format_double(qubit_gap) + " (clamped-resonator qubit model, flux 0.5)");
    if (circ.csh_assumed) {
        meta.push_back("assumption: Csh_fF=" + io::format_double(circ.params.Csh_fF) + " (shunt capacitance not published)");
    }
    io::write_file(output_path(c, "spectrum.csv"), circuit::to_csv(table, meta));
    json j;
    j["spectrum"] = circuit::to_json(table);
    j["qubit_gap_GHz"] = qubit_gap;
    j["hilbert_dimension"] = family.dim();
    j["csh_assumed"] = circ.csh_assumed;
    j["Csh_fF"] = circ.params.Csh_fF;
    write_json(output_path(c, "spectrum.json"), j, c, "simulate");
    std::array<std::vector<double>, 5> curves;
    for (std::size_t i = 0; i < table.size(); ++i)
        for (auto l : all_transition_labels) curves[static_cast<std::size_t>(l)].push_back(table.transition(i, l));
    io::write_file(output_path(c, "spectrum.svg"),
                   transitions_svg("Circuit transitions (" + model + ")", table.flux, curves, meta));

    json summary{{"command", "simulate"},        {"model", model},
                 {"flux_points", table.size()},  {"hilbert_dimension", family.dim()},
                 {"qubit_gap_GHz", qubit_gap},   {"csh_assumed", circ.csh_assumed},
                 {"Csh_fF", circ.params.Csh_fF}, {"files", {output_path(c, "spectrum.csv"), output_path(c, "spectrum.json"), output_path(c, "spectrum.svg")}}};
    return summary;
}

// ------------------------------- Rabi models -------------------------------

/// QRM and JC transitions versus flux: CSV and SVG.
inline json cmd_simulate_qrm(const Config& c) {
    const auto p = qrm_from_config(c);
    const auto fluxes = flux_from_config(c, 0.48, 0.52, 81);
    const auto t = spectro::overlay_curves(fluxes, p);
    const auto meta = provenance("simulate-qrm", c);
    io::write_file(output_path(c, "qrm.csv"), spectro::to_csv(t, meta));
    io::write_file(output_path(c, "qrm.svg"), spectro::overlay_svg(t, labels_from(c, "overlay_labels"), {}, meta));
    return {{"command", "simulate-qrm"}, {"flux_points", fluxes.size()},
            {"files", {output_path(c, "qrm.csv"), output_path(c, "qrm.svg")}}};
}

/// Numeric QRM − JC shifts of every transition and the analytic Bloch–Siegert shift.
inline json cmd_bs_shift(const Config& c) {
    const auto p = qrm_from_config(c);
    const double phi = c.number("phi_ext", 0.5);
    const auto focus = parse_transition_label(c.text("transition", "w01"));
    json shifts = json::object();
    for (auto l : all_transition_labels) shifts[std::string(to_string(l))] = reduced::bs_shift_numeric(p, phi, l);
    const double numeric = reduced::bs_shift_numeric(p, phi, focus);
    const double wq = reduced::qubit_frequency(p, phi);
    json j{{"params", to_json(p)},
           {"phi_ext", phi},
           {"transition", std::string(to_string(focus))},
           {"numeric_shift_GHz", numeric},
           {"numeric_shifts_GHz", shifts},
           {"analytic_shift_GHz", reduced::bs_shift_analytic(p, phi)},
           {"omega_q_GHz", wq},
           {"g_from_numeric_shift_GHz", reduced::g_from_bs_shift(std::abs(numeric), p.omega_r_GHz, wq)}};
    write_json(output_path(c, "bs_shift.json"), j, c, "bs-shift");
    j["command"] = "bs-shift";
    return j;
}

// ------------------------------- coupling -------------------------------

inline json cmd_estimate_coupling(const Config& c) {
    const auto circ = circuit_from_config(c, "none", true);
    const double ip = c.number("Ip_nA");
    reduced::CouplingOptions opt;
    opt.force_unit_xi = c.flag("force_unit_xi", false);
    const auto e = reduced::coupling_estimate(circ.params, ip, opt);
    const auto rr = reduced::renormalized_resonator(circ.params.LR_nH, circ.params.Lc_nH, circ.params.CR_fF);
    const double ratio = e.g_simple_GHz > 0.0 ? e.g_GHz / e.g_simple_GHz : 0.0;
    json j{{"g_GHz", e.g_GHz},
           {"g_over_omega_r", e.g_over_omega_R},
           {"Leff_nH", e.Leff_nH},
           {"omega_R_GHz", e.omega_R_bare_GHz},
           {"Irms_nA", e.Irms_nA},
           {"Z_R_ohm", e.Z_R_ohm},
           {"xi_R", e.xi_R},
           {"omega_A_GHz", e.omega_A_GHz},
           {"omega_4_GHz", e.omega_4_GHz},
           {"g_tilde_GHz", e.g_tilde_GHz},
           {"C_tot_fF", e.C_tot_fF},
           {"delta_mode_sq_GHz2", e.delta_mode_sq_GHz2},
           {"renormalized_omega_r_GHz", rr.omega_r_GHz},
           {"renormalized_Z_ohm", rr.Z_prime_ohm},
           {"simple_limit",
            {{"g_simple_GHz", e.g_simple_GHz},
             {"ratio", ratio},
             {"tolerance", reduced::simple_limit_tolerance},
             {"status", reduced::simple_limit_agrees(e) ? "agrees" : "differs"}}}};
    write_json(output_path(c, "coupling.json"), j, c, "estimate-coupling");
    j["command"] = "estimate-coupling";
    return j;
}

// ------------------------------- materials -------------------------------

inline json cmd_materials(const std::string& sub, const Config& c) {
    json j;
    if (sub == "lk") {
        const double r = c.number("R_normal_ohm"), tc = c.number("Tc_K");
        j = {{"Lk_nH", materials::kinetic_inductance(r, tc)}, {"R_normal_ohm", r}, {"Tc_K", tc}};
    } else if (sub == "rho") {
        const materials::WireGeometry g{c.number("length_um", materials::coupler_geometry.length_um),
                                        c.number("width_um", materials::coupler_geometry.width_um),
                                        c.number("thickness_nm", materials::coupler_geometry.thickness_nm)};
        const double r = c.number("R_normal_ohm");
        j = {{"rho_uOhm_cm", materials::resistivity(r, g)},
             {"squares", g.squares()},
             {"sheet_resistance_ohm_sq", r / g.squares()}};
        if (auto lk = c.optional_number("Lk_nH")) j["sheet_inductance_pH_sq"] = materials::sheet_inductance(*lk, g);
    } else if (sub == "tc") {
        const auto curve = materials::read_rt_csv(c.text("rt_file"));
        materials::TcOptions o;
        o.onset_window_fraction = c.number("onset_window_fraction", o.onset_window_fraction);
        const auto r = materials::tc_from_rt_curve(curve, o);
        j = {{"Tc_K", r.Tc_K},
             {"T10_K", r.T10_K},
             {"T90_K", r.T90_K},
             {"delta_Tc_K", r.delta_Tc_K},
             {"uncertainty_K", r.uncertainty_K},
             {"onset_resistance_ohm", r.onset_resistance_ohm},
             {"onset_window_low_K", r.onset_window_low_K},
             {"samples", curve.size()}};
    } else if (sub == "calib") {
        const double flow = c.number("flow_sccm");
        const bool baked = c.flag("baked", false), interp = c.flag("interpolate", false);
        materials::SheetResistance s;
        if (c.has("calibration_file")) {
            const auto rows = materials::read_calibration_csv(c.text("calibration_file"));
            s = materials::gral_calibration(flow, baked, interp, rows);
        } else {
            c.note("calibration_file", "bundled gral_calibration_v1");
            s = materials::gral_calibration(flow, baked, interp);
        }
        j = {{"Rs_ohm_sq", s.Rs_ohm_sq},
             {"uncertainty_ohm_sq", s.uncertainty_ohm_sq},
             {"interpolated", s.interpolated},
             {"flow_sccm", flow},
             {"baked", baked}};
    } else {
        throw Error(ErrorKind::validation, "unknown materials subcommand '" + sub + "' (lk, rho, tc, calib)");
    }
    write_json(output_path(c, "materials_" + sub + ".json"), j, c, "materials " + sub);
    j["command"] = "materials " + sub;
    return j;
}

// ------------------------------- spectroscopy -------------------------------

inline spectro::S21Map map_from_config(const Config& c) {
    return spectro::read_s21(c.text("map_file"), spectro::parse_scale(c.text("map_scale", "dB")));
}

inline std::string map_svg(const spectro::S21Map& m, const std::string& title, const std::vector<std::string>& comments) {
    const auto [vmin, vmax] = std::minmax_element(m.values.begin(), m.values.end());
    const auto [x0, x1] = m.cols() > 1 ? std::pair{m.flux.front(), m.flux.back()} : spectro::detail::padded(m.flux[0], m.flux[0]);
    const auto [y0, y1] =
        m.rows() > 1 ? std::pair{m.freq_GHz.front(), m.freq_GHz.back()} : spectro::detail::padded(m.freq_GHz[0], m.freq_GHz[0]);
    io::SvgPlot plot(title, "flux (Phi_ext / Phi_0)", "frequency (GHz)", x0, x1, y0, y1);
    plot.heatmap(m.flux, m.freq_GHz, m.values, *vmin, *vmax);
    return plot.render(comments);
}

inline json normalization_report(const spectro::S21Map& n) {
    json cells = json::array();
    for (const auto& [i, j] : n.repaired_cells) cells.push_back({i, j});
    return {{"rows", n.rows()}, {"cols", n.cols()}, {"degenerate_rows", n.degenerate_rows}, {"repaired_cells", cells}};
}

inline json cmd_normalize(const Config& c) {
    const auto m = map_from_config(c);
    const auto n = spectro::normalize_map(m);
    const auto meta = provenance("normalize", c);
    io::write_file(output_path(c, "normalized.csv"), spectro::to_csv(n, meta));
    write_json(output_path(c, "normalize.json"), normalization_report(n), c, "normalize");
    io::write_file(output_path(c, "normalized.svg"), map_svg(n, "Row-normalized transmission", meta));
    json j = normalization_report(n);
    j["command"] = "normalize";
    return j;
}

enum class FitStage { normalize, ridges, label, fit, overlay };

inline FitStage parse_stage(const std::string& s) {
    if (s == "normalize") return FitStage::normalize;
    if (s == "ridges") return FitStage::ridges;
    if (s == "label") return FitStage::label;
    if (s == "fit") return FitStage::fit;
    if (s == "overlay") return FitStage::overlay;
    throw Error(ErrorKind::validation, "unknown stage '" + s + "' (normalize, ridges, label, fit, overlay)");
}

inline const char* to_string(FitStage s) {
    switch (s) {
    case FitStage::normalize: return "normalize";
    case FitStage::ridges: return "ridges";
    case FitStage::label: return "label";
    case FitStage::fit: return "fit";
    case FitStage::overlay: return "overlay";
    }
    return "?";
}

/// Error raised inside a pipeline stage, carrying the stage name.
inline Error stage_error(FitStage s, const Error& e) {
    return Error(e.kind(), std::string("stage '") + to_string(s) + "' failed: " + e.message());
}

inline spectro::FitOptions fit_options_from(const Config& c) {
    spectro::FitOptions o;
    for (const auto& name : c.list("fix", "")) {
        bool found = false;
        for (std::size_t k = 0; k < 4; ++k) {
            if (name == spectro::param_names[k]) {
                o.fix[k] = true;
                found = true;
            }
        }
        require(found, ErrorKind::validation, "key 'fix': unknown parameter '" + name + "'");
    }
    for (auto l : all_transition_labels)
        o.label_weights[static_cast<std::size_t>(l)] = c.number("weight_" + std::string(to_string(l)), 1.0);
    o.max_iterations = c.integer("max_iterations", o.max_iterations);
    return o;
}

inline std::map<int, TransitionLabel> overrides_from(const Config& c) {
    std::map<int, TransitionLabel> out;
    for (const auto& item : c.list("label_override", "")) {
        const auto colon = item.find(':');
        require(colon != std::string::npos, ErrorKind::validation, "label_override entries are branch:label, got '" + item + "'");
        const double b = io::parse_double(item.substr(0, colon), "label_override branch");
        require(b >= 0 && b == std::floor(b), ErrorKind::validation, "label_override branch must be a non-negative integer");
        out[static_cast<int>(b)] = parse_transition_label(io::trim(item.substr(colon + 1)));
    }
    return out;
}

/// normalize → ridges → label → fit → overlay, writing each stage's artifact and stopping
/// after `stop_after`. With points_file set the map stages are skipped.
inline json cmd_fit(const Config& c, FitStage stop_after = FitStage::overlay) {
    json summary{{"command", "fit"}, {"stop_after", to_string(stop_after)}};
    json files = json::array();
    const auto meta = [&](const char* stage) { return provenance(std::string("fit/") + stage, c); };
    auto run = [&](FitStage s, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            throw stage_error(s, e);
        }
    };

    const bool from_points = c.has("points_file");
    std::optional<spectro::S21Map> raw, normalized;
    spectro::TransitionPoints points;

    if (!from_points) {
        run(FitStage::normalize, [&] {
            raw = map_from_config(c);
            normalized = spectro::normalize_map(*raw);
            io::write_file(output_path(c, "normalized.csv"), spectro::to_csv(*normalized, meta("normalize")));
            write_json(output_path(c, "normalize.json"), normalization_report(*normalized), c, "fit/normalize");
            files.push_back(output_path(c, "normalized.csv"));
            files.push_back(output_path(c, "normalize.json"));
            summary["degenerate_rows"] = normalized->degenerate_rows.size();
            summary["repaired_cells"] = normalized->repaired_cells.size();
        });
        if (stop_after == FitStage::normalize) {
            summary["files"] = files;
            return summary;
        }

        run(FitStage::ridges, [&] {
            const std::string source = c.text("ridge_source", "raw");
            require(source == "raw" || source == "normalized", ErrorKind::validation, "ridge_source must be raw or normalized");
            const std::string polarity = c.text("ridge_polarity", "peak");
            require(polarity == "peak" || polarity == "dip", ErrorKind::validation, "ridge_polarity must be peak or dip");
            spectro::S21Map searched = source == "raw" ? *raw : *normalized;
            if (polarity == "dip") searched = spectro::inverted(std::move(searched));
            spectro::RidgeOptions ro;
            const std::string prom = c.text("prominence", "auto");
            if (prom == "auto") {
                // eight robust noise standard deviations of the searched map
                ro.prominence = 8.0 * spectro::estimate_noise_sigma(searched);
                c.note("prominence", "auto=" + io::format_double(ro.prominence));
            } else {
                ro.prominence = io::parse_double(prom, "key 'prominence'");
            }
            ro.per_flux_max_peaks = c.integer("per_flux_max_peaks", 8);
            ro.max_jump_GHz = c.number("max_jump_GHz", 0.2);
            ro.min_branch_points = c.integer("min_branch_points", 3);
            const auto rr = spectro::extract_ridges(searched, ro);
            points = rr.points;
            summary["ridge_points"] = rr.points.size();
            summary["branches"] = rr.branches;
            summary["warnings"] = rr.warnings;
            io::write_file(output_path(c, "ridges.csv"), spectro::to_csv(points, meta("ridges")));
            files.push_back(output_path(c, "ridges.csv"));
        });
        if (stop_after == FitStage::ridges) {
            summary["files"] = files;
            return summary;
        }
    }

    const auto guess = qrm_from_config(c);

    if (!from_points) {
        run(FitStage::label, [&] {
            spectro::LabelOptions lo;
            lo.candidates = labels_from(c, "labels");
            lo.ambiguity_tol_GHz = c.number("ambiguity_tol_GHz", lo.ambiguity_tol_GHz);
            lo.max_dev_GHz = c.number("max_label_dev_GHz", 0.25);
            lo.overrides = overrides_from(c);
            const auto lr = spectro::label_transitions(points, guess, lo);
            json report = json::array();
            for (const auto& a : lr.report) report.push_back(spectro::to_json(a));
            write_json(output_path(c, "labels.json"), {{"assignments", report}}, c, "fit/label");
            files.push_back(output_path(c, "labels.json"));
            if (lr.any_ambiguous()) {
                std::string which;
                for (const auto& a : lr.report)
                    if (a.ambiguous && !a.overridden) which += " " + std::to_string(a.branch);
                throw Error(ErrorKind::ambiguous, "ambiguous label assignment for branch(es)" + which +
                                                      "; resolve with label_override (see labels.json)");
            }
            points.clear();
            for (const auto& p : lr.points)
                if (p.label) points.push_back(p);
            io::write_file(output_path(c, "points.csv"), spectro::to_csv(points, meta("label")));
            files.push_back(output_path(c, "points.csv"));
            summary["labeled_points"] = points.size();
        });
        if (stop_after == FitStage::label) {
            summary["files"] = files;
            return summary;
        }
    } else {
        run(FitStage::label, [&] { points = spectro::read_points_csv(c.text("points_file")); });
    }

    spectro::FitResult fit;
    run(FitStage::fit, [&] {
        fit = spectro::fit_qrm(points, guess, fit_options_from(c));
        write_json(output_path(c, "fit.json"), spectro::to_json(fit), c, "fit/fit");
        files.push_back(output_path(c, "fit.json"));
    });
    json params = json::object();
    for (std::size_t k = 0; k < 4; ++k)
        params[spectro::param_names[k]] = {{"value", fit.values[k]}, {"sigma", fit.sigmas[k]}};
    summary["parameters"] = params;
    summary["residual_rms_GHz"] = fit.residual_rms_GHz;
    summary["converged"] = fit.converged;
    if (stop_after == FitStage::fit) {
        summary["files"] = files;
        return summary;
    }

    run(FitStage::overlay, [&] {
        const auto labels = labels_from(c, "overlay_labels");
        const auto p = fit.params();
        if (normalized) {
            const auto t = spectro::overlay_curves(normalized->flux, p);
            io::write_file(output_path(c, "overlay.csv"), spectro::to_csv(t, meta("overlay")));
            io::write_file(output_path(c, "overlay.svg"), spectro::overlay_svg(*normalized, t, labels, points, meta("overlay")));
        } else {
            std::set<double> fs;
            for (const auto& pt : points) fs.insert(pt.flux);
            const auto t = spectro::overlay_curves(spectro::linspace(*fs.begin(), *fs.rbegin(), 201), p);
            io::write_file(output_path(c, "overlay.csv"), spectro::to_csv(t, meta("overlay")));
            io::write_file(output_path(c, "overlay.svg"), spectro::overlay_svg(t, labels, points, meta("overlay")));
        }
        files.push_back(output_path(c, "overlay.csv"));
        files.push_back(output_path(c, "overlay.svg"));
    });
    summary["files"] = files;
    return summary;
}

/// Overlay of a saved fit on a map (normalized first).
inline json cmd_overlay(const Config& c) {
    const std::string path = c.text("fit_file");
    const auto doc = nlohmann::json::parse(io::read_file(path), nullptr, false);
    require(!doc.is_discarded(), ErrorKind::validation, path + ": not valid JSON");
    const auto fit = spectro::fit_from_json(doc);
    const auto n = spectro::normalize_map(map_from_config(c));
    const auto t = spectro::overlay_curves(n.flux, fit.params());
    const auto meta = provenance("overlay", c);
    io::write_file(output_path(c, "overlay.csv"), spectro::to_csv(t, meta));
    io::write_file(output_path(c, "overlay.svg"), spectro::overlay_svg(n, t, labels_from(c, "overlay_labels"), {}, meta));
    return {{"command", "overlay"}, {"files", {output_path(c, "overlay.csv"), output_path(c, "overlay.svg")}}};
}

} // namespace fluxusc::cli
