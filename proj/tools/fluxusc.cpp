// Command-line front end. Parses arguments into a Config, runs one
// command and maps errors to exit codes (1 validation, 2 I/O, 3 numeric)

#include "fluxusc/cli/commands.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using fluxusc::io::Config;
using fluxusc::io::KeyGroup;

struct Common {
    std::string config_file;
    std::vector<std::string> assignments;
    std::string output_dir;
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c, const std::vector<KeyGroup>& groups) {
    sub->add_option("-c,--config", c.config_file, "key = value configuration file");
    sub->add_option("--set", c.assignments, "override one key, key=value (repeatable)")->take_all();
    sub->add_option("-o,--output-dir", c.output_dir, "directory for the artifacts (key output_dir)");
    sub->add_flag("-q,--quiet", c.quiet, "do not print the JSON summary");
    auto all = groups;
    all.push_back(KeyGroup::output);
    sub->footer("\n" + fluxusc::io::describe_keys(all));
}

Config build_config(const Common& c, const std::vector<std::pair<std::string, std::string>>& extra = {}) {
    Config cfg = c.config_file.empty() ? Config{} : Config::load(c.config_file);
    for (const auto& a : c.assignments) cfg.set_assignment(a);
    for (const auto& [k, v] : extra) cfg.set(k, v);
    if (!c.output_dir.empty()) cfg.set("output_dir", c.output_dir);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluxusc " + std::string(fluxusc::version) +
                 ": flux qubit / resonator ultrastrong-coupling toolkit (units: GHz, nH, fF, nA)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fluxusc::version));

    std::function<nlohmann::json()> action;
    Common common;
    using G = KeyGroup;

    auto* sim = app.add_subcommand("simulate", "full-circuit or qubit-only spectrum versus flux (CSV, JSON, SVG)");
    add_common(sim, common, {G::circuit, G::truncation, G::sweep});
    sim->callback([&] { action = [&] { return fluxusc::cli::cmd_simulate(build_config(common)); }; });

    auto* sq = app.add_subcommand("simulate-qrm", "quantum Rabi and Jaynes-Cummings transitions versus flux (CSV, SVG)");
    add_common(sq, common, {G::qrm, G::sweep, G::spectro});
    sq->callback([&] { action = [&] { return fluxusc::cli::cmd_simulate_qrm(build_config(common)); }; });

    auto* bs = app.add_subcommand("bs-shift", "Bloch-Siegert shift: numeric QRM - JC and analytic g^2/(w_r + w_q) (JSON)");
    add_common(bs, common, {G::qrm});
    bs->callback([&] { action = [&] { return fluxusc::cli::cmd_bs_shift(build_config(common)); }; });

    auto* ec = app.add_subcommand("estimate-coupling", "coupling strength from lumped elements and Ip_nA (JSON)");
    add_common(ec, common, {G::circuit, G::qrm, G::coupling});
    ec->callback([&] { action = [&] { return fluxusc::cli::cmd_estimate_coupling(build_config(common)); }; });

    auto* mat = app.add_subcommand("materials", "wire and film characterization (JSON)");
    mat->require_subcommand(1);
    std::vector<std::string> lk_args, rho_args, tc_args, calib_args;
    bool baked = false, interpolate = false;

    auto* lk = mat->add_subcommand("lk", "kinetic inductance from normal resistance and Tc: lk <R_normal_ohm> <Tc_K>");
    lk->add_option("values", lk_args, "R_normal_ohm Tc_K")->expected(0, 2);
    add_common(lk, common, {G::materials});
    lk->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, std::string>> kv;
            if (lk_args.size() >= 1) kv.emplace_back("R_normal_ohm", lk_args[0]);
            if (lk_args.size() >= 2) kv.emplace_back("Tc_K", lk_args[1]);
            return fluxusc::cli::cmd_materials("lk", build_config(common, kv));
        };
    });

    auto* rho = mat->add_subcommand("rho", "resistivity of a wire: rho <R_normal_ohm> (geometry keys default to the coupler wire)");
    rho->add_option("values", rho_args, "R_normal_ohm")->expected(0, 1);
    add_common(rho, common, {G::materials});
    rho->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, std::string>> kv;
            if (!rho_args.empty()) kv.emplace_back("R_normal_ohm", rho_args[0]);
            return fluxusc::cli::cmd_materials("rho", build_config(common, kv));
        };
    });

    auto* tc = mat->add_subcommand("tc", "critical temperature from an R(T) CSV (T_K,R_ohm): tc <rt_file>");
    tc->add_option("values", tc_args, "rt_file")->expected(0, 1);
    add_common(tc, common, {G::materials});
    tc->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, std::string>> kv;
            if (!tc_args.empty()) kv.emplace_back("rt_file", tc_args[0]);
            return fluxusc::cli::cmd_materials("tc", build_config(common, kv));
        };
    });

    auto* calib = mat->add_subcommand("calib", "sheet resistance from the GrAl calibration table: calib <flow_sccm> [--baked]");
    calib->add_option("values", calib_args, "flow_sccm")->expected(0, 1);
    calib->add_flag("--baked", baked, "use the post-bake column (key baked)");
    calib->add_flag("--interpolate", interpolate, "allow linear interpolation between rows (key interpolate)");
    add_common(calib, common, {G::materials});
    calib->callback([&] {
        action = [&] {
            std::vector<std::pair<std::string, std::string>> kv;
            if (!calib_args.empty()) kv.emplace_back("flow_sccm", calib_args[0]);
            if (baked) kv.emplace_back("baked", "true");
            if (interpolate) kv.emplace_back("interpolate", "true");
            return fluxusc::cli::cmd_materials("calib", build_config(common, kv));
        };
    });

    auto* norm = app.add_subcommand("normalize", "row-normalize a transmission map (CSV, JSON, SVG)");
    add_common(norm, common, {G::spectro});
    norm->callback([&] { action = [&] { return fluxusc::cli::cmd_normalize(build_config(common)); }; });

    std::string stop_after = "overlay";
    auto* fit = app.add_subcommand("fit", "normalize, extract ridges, label, fit the Rabi model and overlay (CSV, JSON, SVG)");
    fit->add_option("--stop-after", stop_after, "last stage to run: normalize, ridges, label, fit, overlay")
        ->check(CLI::IsMember({"normalize", "ridges", "label", "fit", "overlay"}));
    add_common(fit, common, {G::qrm, G::spectro});
    fit->callback([&] {
        action = [&] { return fluxusc::cli::cmd_fit(build_config(common), fluxusc::cli::parse_stage(stop_after)); };
    });

    auto* ov = app.add_subcommand("overlay", "draw a saved fit over a normalized map (CSV, SVG)");
    add_common(ov, common, {G::spectro});
    ov->callback([&] { action = [&] { return fluxusc::cli::cmd_overlay(build_config(common)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        const auto summary = action();
        if (!common.quiet) std::cout << summary.dump(2) << "\n";
        return 0;
    } catch (const fluxusc::Error& e) {
        std::cerr << "fluxusc: " << e.what() << "\n";
        return fluxusc::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "fluxusc: " << e.what() << "\n";
        return 3;
    }
}
