#include "fluxusc/materials/materials.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace fluxusc;
using namespace fluxusc::materials;

namespace {

// R(T) = (R_n/2)(1 + tanh((T − Tc)/w)), sampled every `step` kelvin.
RTCurve tanh_curve(double rn, double tc = 1.6, double w = 0.1, double step = 0.005, double lo = 1.0, double hi = 2.5) {
    std::vector<double> t, r;
    const int n = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n; ++i) {
        const double x = lo + i * step;
        t.push_back(x);
        r.push_back(0.5 * rn * (1.0 + std::tanh((x - tc) / w)));
    }
    return RTCurve(t, r);
}

std::string temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("fluxusc_test_" + name);
    std::ofstream(p) << content;
    return p.string();
}

} // namespace

TEST(KineticInductance, CouplerWire) {
    // 0.18·ħ·860 Ω/(k_B·1.60 K)
    const double ref = 0.18 * 1.054571817e-34 * 860.0 / (1.380649e-23 * 1.60) * 1e9;
    EXPECT_NEAR(kinetic_inductance(860.0, 1.60), ref, 1e-9 * ref);
    EXPECT_NEAR(kinetic_inductance(860.0, 1.60), 0.739, 0.001);
    EXPECT_THROW((void)kinetic_inductance(0.0, 1.6), Error);
    EXPECT_THROW((void)kinetic_inductance(860.0, -1.0), Error);
}

TEST(Resistivity, RoomTemperatureCoupler) {
    // 960 Ω · 0.487 µm · 50 nm / 30 µm in µΩ·cm
    EXPECT_NEAR(resistivity(960.0, coupler_geometry), 960.0 * 0.487e-6 * 50e-9 / 30e-6 * 1e8, 1e-9);
    EXPECT_NEAR(resistivity(960.0, coupler_geometry) / 78.3, 1.0, 0.01);
    EXPECT_THROW((void)resistivity(960.0, {30.0, 0.0, 50.0}), Error);
}

TEST(SheetInductance, PerSquare) {
    EXPECT_NEAR(coupler_geometry.squares(), 30.0 / 0.487, 1e-12);
    EXPECT_NEAR(sheet_inductance(0.74, coupler_geometry), 740.0 * 0.487 / 30.0, 1e-9);
}

TEST(Calibration, AllTenCellsExact) {
    const double flow[5] = {0.0, 0.2, 0.4, 0.6, 0.8};
    const double rs[5][2] = {{0.89, 0.06}, {2.96, 0.20}, {7.56, 2.97}, {17.31, 2.48}, {43.49, 25.09}};
    const double rb[5][2] = {{0.89, 0.05}, {2.75, 0.19}, {5.01, 0.77}, {14.57, 1.49}, {35.14, 19.96}};
    for (int i = 0; i < 5; ++i) {
        const auto a = gral_calibration(flow[i], false), b = gral_calibration(flow[i], true);
        EXPECT_EQ(a.Rs_ohm_sq, rs[i][0]);
        EXPECT_EQ(a.uncertainty_ohm_sq, rs[i][1]);
        EXPECT_EQ(b.Rs_ohm_sq, rb[i][0]);
        EXPECT_EQ(b.uncertainty_ohm_sq, rb[i][1]);
        EXPECT_FALSE(a.interpolated);
    }
}

TEST(Calibration, BundledFileMatchesTable) {
    const auto rows = read_calibration_csv(std::string(FLUXUSC_DATA_DIR) + "/gral_calibration_v1.csv");
    ASSERT_EQ(rows.size(), gral_table.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].flow_sccm, gral_table[i].flow_sccm);
        EXPECT_EQ(rows[i].Rs, gral_table[i].Rs);
        EXPECT_EQ(rows[i].Rs_baked_unc, gral_table[i].Rs_baked_unc);
    }
}

TEST(Calibration, InterpolationOnlyWhenRequested) {
    try {
        (void)gral_calibration(0.5, false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::range);
    }
    const auto s = gral_calibration(0.5, false, true);
    EXPECT_TRUE(s.interpolated);
    EXPECT_NEAR(s.Rs_ohm_sq, 0.5 * (7.56 + 17.31), 1e-12);
    EXPECT_THROW((void)gral_calibration(1.0, false, true), Error);
}

TEST(Tc, TanhTransitionMatchesAnalyticInverse) {
    const auto r = tc_from_rt_curve(tanh_curve(860.0));
    const double step = 0.005;
    EXPECT_NEAR(r.Tc_K, 1.6, step);
    EXPECT_NEAR(r.T10_K, 1.6 + 0.1 * std::atanh(0.8), step);
    EXPECT_NEAR(r.T90_K, 1.6 - 0.1 * std::atanh(0.8), step);
    EXPECT_NEAR(r.uncertainty_K, 0.5 * r.delta_Tc_K, 1e-15);
    EXPECT_NEAR(r.onset_resistance_ohm, 860.0, 1e-3);
}

TEST(Tc, InvariantUnderResistanceScaling) {
    const auto a = tc_from_rt_curve(tanh_curve(860.0)), b = tc_from_rt_curve(tanh_curve(7.0 * 860.0));
    EXPECT_NEAR(a.Tc_K, b.Tc_K, 1e-12);
    EXPECT_NEAR(a.T10_K, b.T10_K, 1e-12);
    EXPECT_NEAR(a.T90_K, b.T90_K, 1e-12);
}

TEST(Tc, FlatCurveHasNoTransition) {
    try {
        (void)tc_from_rt_curve(RTCurve({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::no_transition);
    }
}

TEST(Tc, NonMonotonicCurveIsAmbiguous) {
    try {
        (void)tc_from_rt_curve(RTCurve({1.0, 1.5, 2.0, 2.5, 3.0}, {0.0, 10.0, 0.0, 10.0, 10.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ambiguous);
    }
}

TEST(RTCurve, RejectsDuplicateTemperaturesAndSortsInput) {
    EXPECT_THROW(RTCurve({1.0, 1.0}, {1.0, 2.0}), Error);
    const RTCurve c({2.0, 1.0}, {5.0, 0.0});
    EXPECT_EQ(c.temperature().front(), 1.0);
    EXPECT_EQ(c.resistance().front(), 0.0);
}

TEST(RTCurve, CsvWithHeader) {
    const auto path = temp_file("rt.csv", "# sample A\nT_K,R_ohm\n1.0,0\n2.0,10\n3.0,10\n");
    const auto c = read_rt_csv(path);
    EXPECT_EQ(c.size(), 3u);
    const auto bad = temp_file("rt_bad.csv", "1.0,0,3\n");
    EXPECT_THROW((void)read_rt_csv(bad), Error);
    try {
        (void)read_rt_csv("/nonexistent/rt.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}
