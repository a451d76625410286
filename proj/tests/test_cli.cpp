#include "fluxusc/reduced/qrm.hpp"
#include "fluxusc/spectro/s21map.hpp"
#include "fluxusc/spectro/synthetic.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace fluxusc;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FLUXUSC_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("fluxusc_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string files_in(const fs::path& d) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(d)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    std::string s;
    for (const auto& n : names) s += n + " ";
    return s;
}

// Noisy synthetic map of the two lowest transitions, written once per process.
const fs::path& synthetic_map_file() {
    static const fs::path path = [] {
        spectro::SyntheticMapOptions so;
        so.noise = 0.01;
        so.seed = 7;
        const auto m = spectro::synthetic_qrm_map(reduced::device_fit_params(), spectro::linspace(2.0, 9.0, 3501),
                                                  spectro::linspace(0.48, 0.52, 41),
                                                  {TransitionLabel::w01, TransitionLabel::w02}, so);
        const auto p = fresh_dir("map") / "map.csv";
        std::ofstream(p) << spectro::to_csv(m, {"synthetic"});
        return p;
    }();
    return path;
}

std::string fit_args(const fs::path& out) {
    return "fit --set map_file=" + synthetic_map_file().string() +
           " --set map_scale=linear --set Delta_GHz=5.6 --set Ip_nA=11.9 --set omega_r_GHz=4.45 --set g_GHz=0.60"
           " --set labels=w01,w02 -q -o " +
           out.string();
}

} // namespace

TEST(Cli, HelpExitsZeroEverywhere) {
    for (const char* sub : {"", "simulate", "simulate-qrm", "bs-shift", "estimate-coupling", "materials", "materials lk",
                            "materials rho", "materials tc", "materials calib", "normalize", "fit", "overlay"})
        EXPECT_EQ(run(std::string(sub) + " --help").code, 0) << sub;
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("no-such-command").code, 1);
    EXPECT_EQ(run("bs-shift --set bogus=1").code, 1);
    EXPECT_EQ(run("fit --stop-after nowhere").code, 1);
    // Csh is required for the coupling estimate
    EXPECT_EQ(run("estimate-coupling --set preset=estimated --set Ip_nA=19.6 -q -o " + fresh_dir("ec1").string()).code, 1);
}

TEST(Cli, MissingInputFileExitsTwo) {
    EXPECT_EQ(run("normalize --set map_file=/nonexistent/map.csv -q -o " + fresh_dir("io").string()).code, 2);
    EXPECT_EQ(run("materials tc /nonexistent/rt.csv -q -o " + fresh_dir("io2").string()).code, 2);
}

TEST(Cli, NumericFailuresExitThree) {
    const auto d = fresh_dir("num");
    EXPECT_EQ(run("simulate --set flux_list=0.5 --set dimension_cap=100 -q -o " + d.string()).code, 3);
}

TEST(Cli, MaterialsValues) {
    const auto d = fresh_dir("mat");
    const auto lk = run("materials lk 860 1.60 -o " + d.string());
    ASSERT_EQ(lk.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(lk.out)["Lk_nH"].get<double>(), 0.739, 1e-3);
    const auto rho = run("materials rho 960 -o " + d.string());
    ASSERT_EQ(rho.code, 0);
    EXPECT_NEAR(nlohmann::json::parse(rho.out)["rho_uOhm_cm"].get<double>() / 78.3, 1.0, 0.01);
    const auto cal = run("materials calib 0.4 --baked -o " + d.string());
    ASSERT_EQ(cal.code, 0);
    const auto j = nlohmann::json::parse(cal.out);
    EXPECT_EQ(j["Rs_ohm_sq"].get<double>(), 5.01);
    EXPECT_EQ(j["uncertainty_ohm_sq"].get<double>(), 0.77);
    EXPECT_EQ(run("materials calib 0.5 -q -o " + d.string()).code, 1);
    EXPECT_TRUE(fs::exists(d / "materials_lk.json"));
}

TEST(Cli, CouplingEstimateWithShunt) {
    const auto d = fresh_dir("ec2");
    const auto r = run("estimate-coupling --set preset=estimated --set Csh_fF=8.7 --set Ip_nA=19.6 -o " + d.string());
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["g_GHz"].get<double>(), 0.0);
}

TEST(Cli, SingleFluxSimulateGivesOneRow) {
    const auto d = fresh_dir("one");
    ASSERT_EQ(run("simulate --set model=qubit_clamped --set flux_list=0.5 -q -o " + d.string()).code, 0);
    std::ifstream in(d / "spectrum.csv");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') ++rows;
    EXPECT_EQ(rows, 2); // header plus one flux row
}

TEST(Cli, ArtifactsAreByteDeterministic) {
    const auto d = fresh_dir("det");
    const std::string args = "simulate-qrm --set Delta_GHz=5.707 --set Ip_nA=11.619 --set omega_r_GHz=4.463 --set g_GHz=0.578"
                             " --set flux_min=0.48 --set flux_max=0.52 --set flux_points=9 -q -o " + d.string();
    ASSERT_EQ(run(args).code, 0);
    const auto csv = slurp(d / "qrm.csv"), svg = slurp(d / "qrm.svg");
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(d / "qrm.csv"), csv);
    EXPECT_EQ(slurp(d / "qrm.svg"), svg);
    EXPECT_NE(csv.find("g_GHz"), std::string::npos); // resolved config embedded
}

TEST(Cli, StopAfterNormalizeWritesOnlyItsArtifacts) {
    const auto d = fresh_dir("stop");
    ASSERT_EQ(run(fit_args(d) + " --stop-after normalize").code, 0);
    EXPECT_EQ(files_in(d), "normalize.json normalized.csv ");
}

TEST(Cli, SyntheticFitRecoversParameters) {
    const auto d = fresh_dir("fit");
    ASSERT_EQ(run(fit_args(d)).code, 0);
    const auto j = nlohmann::json::parse(slurp(d / "fit.json"));
    const auto p = reduced::device_fit_params();
    const std::pair<const char*, double> truth[] = {
        {"Delta_GHz", p.Delta_GHz}, {"Ip_nA", p.Ip_nA}, {"omega_r_GHz", p.omega_r_GHz}, {"g_GHz", p.g_GHz}};
    for (const auto& [name, v] : truth)
        EXPECT_NEAR(j["parameters"][name]["value"].get<double>() / v, 1.0, 1e-3) << name;
    EXPECT_EQ(j["config"]["map_scale"], "linear");
    for (const char* f : {"normalized.csv", "ridges.csv", "labels.json", "points.csv", "overlay.csv", "overlay.svg"})
        EXPECT_TRUE(fs::exists(d / f)) << f;

    // refit from the saved points file, then redraw the overlay from the saved fit
    const auto d2 = fresh_dir("refit");
    ASSERT_EQ(run("fit --set points_file=" + (d / "points.csv").string() +
                  " --set Delta_GHz=5.6 --set Ip_nA=11.9 --set omega_r_GHz=4.45 --set g_GHz=0.60 -q -o " + d2.string())
                  .code,
              0);
    const auto j2 = nlohmann::json::parse(slurp(d2 / "fit.json"));
    EXPECT_NEAR(j2["parameters"]["g_GHz"]["value"].get<double>(), j["parameters"]["g_GHz"]["value"].get<double>(), 1e-9);
    const auto d3 = fresh_dir("overlay");
    EXPECT_EQ(run("overlay --set fit_file=" + (d / "fit.json").string() + " --set map_file=" + synthetic_map_file().string() +
                  " --set map_scale=linear -q -o " + d3.string())
                  .code,
              0);
    EXPECT_TRUE(fs::exists(d3 / "overlay.svg"));
}
