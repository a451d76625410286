#include "fluxusc/circuit/params.hpp"
#include "fluxusc/reduced/coupling.hpp"
#include "fluxusc/reduced/qrm.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace fluxusc;
using namespace fluxusc::reduced;

namespace {

// Jaynes–Cummings levels in closed form: ground state plus the (n, ±) doublets.
std::vector<double> jc_closed_form(const QRMParams& p, double phi, int k) {
    const double wq = qubit_frequency(p, phi), wr = p.omega_r_GHz;
    const double gs = p.g_GHz * std::sin(mixing_angle(p, phi));
    std::vector<double> e{-0.5 * wq + 0.5 * wr};
    for (int n = 0; n < 40; ++n) {
        const double mean = (n + 1.0) * wr;
        const double half = std::sqrt(0.25 * (wq - wr) * (wq - wr) + gs * gs * (n + 1.0));
        e.push_back(mean - half);
        e.push_back(mean + half);
    }
    std::sort(e.begin(), e.end());
    e.resize(static_cast<std::size_t>(k));
    return e;
}

} // namespace

TEST(QRM, EpsilonArithmetic) {
    // 2·11.619 nA·0.01·Φ0/h
    EXPECT_NEAR(epsilon(11.619, 0.51), 0.72520, 1e-4);
    EXPECT_DOUBLE_EQ(epsilon(11.619, 0.5), 0.0);
    EXPECT_NEAR(epsilon(11.619, 0.49), -epsilon(11.619, 0.51), 1e-15);
    const auto p = device_fit_params();
    EXPECT_NEAR(qubit_frequency(p, 0.51), std::hypot(5.707, epsilon(11.619, 0.51)), 1e-15);
}

TEST(QRM, HamiltonianIsHermitianWithExpectedDimension) {
    auto p = device_fit_params();
    p.nfock = 12;
    const auto h = qrm_hamiltonian(p, 0.503);
    EXPECT_EQ(h.dim(), 24);
    EXPECT_LT(h.hermiticity_defect(), 1e-14);
}

TEST(QRM, UncoupledLevelsAreSums) {
    auto p = device_fit_params();
    p.g_GHz = 0.0;
    p.nfock = 10;
    for (double phi : {0.5, 0.52}) {
        const double wq = qubit_frequency(p, phi), wr = p.omega_r_GHz;
        std::vector<double> ref;
        for (int n = 0; n < 10; ++n)
            for (double s : {-0.5, 0.5}) ref.push_back(s * wq + (n + 0.5) * wr);
        std::sort(ref.begin(), ref.end());
        for (auto m : {RabiModel::qrm, RabiModel::jc}) {
            const auto lv = model_levels(m, p, phi, 6);
            for (int i = 0; i < 6; ++i) EXPECT_NEAR(lv[i], ref[i], 1e-12);
        }
    }
}

TEST(QRM, VanishingGapGivesDisplacedOscillator) {
    // Δ → 0 at the sweet spot: σ_z conserved, each branch shifted by −g²/ω_r.
    QRMParams p{1e-9, 0.0, 4.0, 0.8, 60};
    const auto lv = model_levels(RabiModel::qrm, p, 0.5, 4);
    const double shift = 0.8 * 0.8 / 4.0;
    EXPECT_NEAR(lv[0], 2.0 - shift, 1e-8);
    EXPECT_NEAR(lv[1], 2.0 - shift, 1e-8);
    EXPECT_NEAR(lv[2], 6.0 - shift, 1e-8);
    EXPECT_NEAR(lv[3], 6.0 - shift, 1e-8);
}

TEST(JC, MatchesClosedForm) {
    auto p = device_fit_params();
    for (double phi : {0.5, 0.505, 0.52}) {
        const auto ref = jc_closed_form(p, phi, 8);
        const auto lv = model_levels(RabiModel::jc, p, phi, 8);
        for (int i = 0; i < 8; ++i) EXPECT_NEAR(lv[i], ref[i], 1e-10) << phi;
    }
}

TEST(JC, ConservesExcitationNumber) {
    auto p = device_fit_params();
    p.nfock = 10;
    const auto h = jc_hamiltonian(p, 0.51).matrix();
    const auto n = excitation_number(10).matrix();
    const core::SparseMatrix c = h * n - n * h;
    EXPECT_LT(c.norm(), 1e-12);
}

TEST(QRM, FockTruncationConverges) {
    const auto r = converged_levels(RabiModel::qrm, device_fit_params(), 0.5, 4, 1e-9);
    EXPECT_LE(r.last_change, 1e-9);
    EXPECT_LE(r.nfock, 80);
    QRMParams tiny = device_fit_params();
    tiny.nfock = 4;
    EXPECT_THROW((void)converged_levels(RabiModel::qrm, tiny, 0.5, 4, 1e-30, 16), Error);
}

TEST(QRM, FluxReflectionSymmetry) {
    const auto p = device_fit_params();
    for (auto m : {RabiModel::qrm, RabiModel::jc}) {
        const auto a = model_levels(m, p, 0.49, 4), b = model_levels(m, p, 0.51, 4);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
    }
}

TEST(BlochSiegert, NumericShiftAtSweetSpot) {
    const auto p = device_fit_params();
    const double s01 = bs_shift_numeric(p, 0.5, TransitionLabel::w01);
    const double s02 = bs_shift_numeric(p, 0.5, TransitionLabel::w02);
    EXPECT_NEAR(s01, -0.023249, 5e-6);
    EXPECT_NEAR(s02, 0.022965, 5e-6);
    EXPECT_LT(s01 * s02, 0.0);
}

TEST(BlochSiegert, AnalyticFormulaAndInverse) {
    const auto p = device_fit_params();
    // 0.578² / (4.463 + 5.707)
    EXPECT_NEAR(bs_shift_analytic(p, 0.5), 0.334084 / 10.17, 1e-9);
    // √(0.023 · 10.17)
    EXPECT_NEAR(g_from_bs_shift(0.023, 4.463, 5.707), 0.4836424, 1e-6);
    EXPECT_NEAR(g_from_bs_shift(bs_shift_analytic(p, 0.5), 4.463, 5.707), 0.578, 1e-12);
    EXPECT_THROW((void)g_from_bs_shift(-1e-3, 4.463, 5.707), Error);
}

TEST(BlochSiegert, ZeroCouplingGivesZeroShift) {
    auto p = device_fit_params();
    p.g_GHz = 0.0;
    EXPECT_EQ(bs_shift_numeric(p, 0.5), 0.0);
    EXPECT_EQ(bs_shift_analytic(p, 0.5), 0.0);
}

TEST(BlochSiegert, ShiftScalesQuadraticallyAtWeakCoupling) {
    auto p = device_fit_params();
    p.g_GHz = 0.02;
    const double a = bs_shift_numeric(p, 0.5);
    p.g_GHz = 0.04;
    const double b = bs_shift_numeric(p, 0.5);
    EXPECT_NEAR(b / a, 4.0, 0.02);
}

TEST(QRMParams, Validation) {
    auto p = device_fit_params();
    p.Delta_GHz = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = device_fit_params();
    p.g_GHz = -0.1;
    EXPECT_THROW(p.validate(), Error);
    p = device_fit_params();
    p.nfock = 2;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Resonator, RenormalizedFrequencyAndImpedance) {
    // 1/(2π√(1.64 nH · 740 fF)) and √(1.64 nH / 740 fF)
    const auto r = renormalized_resonator(0.9, 0.74, 740.0);
    EXPECT_NEAR(r.omega_r_GHz, 4.56859, 1e-4);
    EXPECT_NEAR(r.Z_prime_ohm, 47.0767, 1e-3);
    EXPECT_THROW((void)renormalized_resonator(0.0, 0.74, 740.0), Error);
}

TEST(Coupling, SimpleLimitArithmetic) {
    // 0.5 nH · 10 nA · 50 nA / h
    EXPECT_NEAR(g_simple_limit(0.5, 10.0, 50.0), 2.5e-25 / 6.62607015e-34 / 1e9, 1e-9);
}

TEST(Coupling, EstimatedDeviceParameters) {
    const auto e = coupling_estimate(circuit::estimated_device_params(), 19.6);
    EXPECT_NEAR(e.g_GHz / 0.61, 1.0, 0.10);
    EXPECT_GE(e.g_over_omega_R, 0.1);
    EXPECT_NEAR(e.Leff_nH, 0.8986 * 0.74 / (0.8986 + 0.74), 1e-12);
    EXPECT_NEAR(e.Z_R_ohm, std::sqrt(0.8986e-9 / 742.3e-15), 1e-9);
    EXPECT_NEAR(e.xi_R * e.xi_R, e.omega_R_bare_GHz / e.omega_A_GHz, 1e-12);
    EXPECT_GT(e.xi_R, 1.0);
}

TEST(Coupling, ZeroPersistentCurrentGivesZero) {
    const auto e = coupling_estimate(circuit::estimated_device_params(), 0.0);
    EXPECT_EQ(e.g_GHz, 0.0);
    EXPECT_TRUE(simple_limit_agrees(e));
}

TEST(Coupling, LargeResonatorInductanceReachesSimpleLimit) {
    auto p = circuit::estimated_device_params();
    p.LR_nH = 100.0;
    p.Lc_nH = 0.1;
    const auto e = coupling_estimate(p, 19.6);
    EXPECT_NEAR(e.g_GHz / e.g_simple_GHz, 1.0, 2e-3);
    EXPECT_TRUE(simple_limit_agrees(e));
    EXPECT_FALSE(simple_limit_agrees(coupling_estimate(circuit::estimated_device_params(), 19.6)));
}

TEST(Coupling, ForcedUnitXi) {
    const auto p = circuit::estimated_device_params();
    const auto a = coupling_estimate(p, 19.6), b = coupling_estimate(p, 19.6, {true});
    EXPECT_EQ(b.xi_R, 1.0);
    EXPECT_NEAR(a.g_GHz / b.g_GHz, a.xi_R, 1e-12);
    EXPECT_EQ(a.omega_A_GHz, b.omega_A_GHz);
}

TEST(Coupling, RejectsInvalidInputs) {
    auto p = circuit::estimated_device_params();
    EXPECT_THROW((void)coupling_estimate(p, -1.0), Error);
    p.Lc_nH = 0.0;
    EXPECT_THROW((void)coupling_estimate(p, 19.6), Error);
}
