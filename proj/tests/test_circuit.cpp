#include "fluxusc/circuit/qubit.hpp"
#include "fluxusc/circuit/spectrum.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <numbers>

using namespace fluxusc;
using namespace fluxusc::circuit;
using core::DenseMatrix;

namespace {

using cplx = std::complex<double>;

DenseMatrix kron4(const DenseMatrix& a, const DenseMatrix& b, const DenseMatrix& c, const DenseMatrix& d) {
    return Eigen::kroneckerProduct(Eigen::kroneckerProduct(a, b).eval(), Eigen::kroneckerProduct(c, d).eval()).eval();
}

DenseMatrix charge_diag(int ncut) {
    DenseMatrix n = DenseMatrix::Zero(2 * ncut + 1, 2 * ncut + 1);
    for (int k = -ncut; k <= ncut; ++k) n(k + ncut, k + ncut) = k;
    return n;
}

// e^{-iφ}|n⟩ = |n−1⟩ in the charge basis.
DenseMatrix charge_lower(int ncut) {
    DenseMatrix m = DenseMatrix::Zero(2 * ncut + 1, 2 * ncut + 1);
    for (int i = 1; i < 2 * ncut + 1; ++i) m(i - 1, i) = 1.0;
    return m;
}

struct Quadratures {
    DenseMatrix phi, n, phi2, n2, eiphi;
};

// Exact matrix elements of φ, n, φ², n² and e^{iφ} on the lowest `keep` Fock states,
// taken from a much larger space (matrix exponential, then projection).
Quadratures fock_quadratures(const core::OscillatorBasis& b, int keep, int big = 90) {
    DenseMatrix a = DenseMatrix::Zero(big, big);
    for (int k = 1; k < big; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    const DenseMatrix ad = a.adjoint();
    const DenseMatrix phi = b.phase_zpf() * (a + ad);
    const DenseMatrix n = cplx(0.0, b.charge_zpf()) * (ad - a);
    const DenseMatrix iphi = cplx(0.0, 1.0) * phi;
    const DenseMatrix e = iphi.exp();
    auto cut = [&](const DenseMatrix& m) { return DenseMatrix(m.topLeftCorner(keep, keep)); };
    return {cut(phi), cut(n), cut(phi * phi), cut(n * n), cut(e)};
}

std::vector<double> dense_levels(const DenseMatrix& h, int k) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h, Eigen::EigenvaluesOnly);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + k);
    return v;
}

// Full Hamiltonian written out term by term with dense Kronecker products.
DenseMatrix oracle_full(const CircuitParams& p, const TruncationSpec& t, double f) {
    const auto [b4, b6] = mode_bases(p, t.n4, t.n6);
    const auto q4 = fock_quadratures(b4, t.n4);
    const auto q6 = fock_quadratures(b6, t.n6);
    const DenseMatrix n1 = charge_diag(t.ncut1), n3 = charge_diag(t.ncut3);
    const DenseMatrix l1 = charge_lower(t.ncut1), l3 = charge_lower(t.ncut3);
    const DenseMatrix c1 = 0.5 * (l1 + DenseMatrix(l1.adjoint())), c3 = 0.5 * (l3 + DenseMatrix(l3.adjoint()));
    const DenseMatrix i1 = DenseMatrix::Identity(n1.rows(), n1.rows()), i3 = DenseMatrix::Identity(n3.rows(), n3.rows());
    const DenseMatrix i4 = DenseMatrix::Identity(t.n4, t.n4), i6 = DenseMatrix::Identity(t.n6, t.n6);

    const double ec = p.EC_GHz(), ej = p.resolved_EJ_GHz(), at = p.alpha_tilde();
    const double elc = units::inductive_energy_ghz(p.Lc_nH), elr = units::inductive_energy_ghz(p.LR_nH);
    DenseMatrix h = 4.0 * ec *
                    (kron4(n1 * n1, i3, i4, i6) + kron4(i1, n3 * n3, i4, i6) + 2.0 * kron4(n1, i3, q4.n, i6) +
                     2.0 * kron4(i1, n3, q4.n, i6) + (2.0 + 1.0 / at) * kron4(i1, i3, q4.n2, i6) +
                     (p.CJ_fF / p.CR_fF) * kron4(i1, i3, i4, q6.n2));
    h -= ej * (kron4(c1, i3, i4, i6) + kron4(i1, c3, i4, i6));
    // cos(φ4 + B), B = 2πf − φ1 − φ3
    const DenseMatrix eib = std::polar(1.0, 2.0 * std::numbers::pi * f) * kron4(l1, l3, q4.eiphi, i6);
    h -= 0.5 * p.alpha * ej * (eib + DenseMatrix(eib.adjoint()));
    h += 0.5 * elc * kron4(i1, i3, q4.phi2, i6);
    h += 0.5 * elr * (kron4(i1, i3, q4.phi2, i6) + kron4(i1, i3, i4, q6.phi2) + 2.0 * kron4(i1, i3, q4.phi, q6.phi));
    return h;
}

const TruncationSpec small{4, 4, 5, 4};

} // namespace

TEST(FullCircuit, DimensionIsProductOfModeSizes) {
    const auto fam = full_hamiltonian_family(design_params(), small);
    EXPECT_EQ(fam.dim(), 9 * 9 * 5 * 4);
    EXPECT_EQ(small.dim(), 9 * 9 * 5 * 4);
}

TEST(FullCircuit, HermitianAtSeveralFluxes) {
    const auto fam = full_hamiltonian_family(design_params(), small);
    for (double f : {0.0, 0.25, 0.48, 0.5, 0.73, 1.0}) {
        const auto h = fam.at(f);
        EXPECT_LT(h.hermiticity_defect(), 1e-12 * h.max_abs()) << "f=" << f;
    }
}

TEST(FullCircuit, MatchesIndependentDenseConstruction) {
    const auto p = design_params();
    const TruncationSpec t{4, 4, 4, 4};
    const auto fam = full_hamiltonian_family(p, t);
    for (double f : {0.47}) {
        const auto ref = dense_levels(oracle_full(p, t, f), 6);
        const auto got = core::eigvals_hermitian(fam.at(f), 6);
        for (int i = 0; i < 6; ++i) EXPECT_NEAR(got[i], ref[i], 1e-8 * std::abs(ref[i]) + 1e-9) << "f=" << f << " i=" << i;
    }
}

TEST(FullCircuit, FluxReflectionSymmetry) {
    const auto fam = full_hamiltonian_family(design_params(), small);
    for (double d : {0.005, 0.02, 0.1}) {
        const auto a = core::eigvals_hermitian(fam.at(0.5 - d), 6);
        const auto b = core::eigvals_hermitian(fam.at(0.5 + d), 6);
        for (int i = 0; i < 6; ++i) EXPECT_NEAR(a[i], b[i], 1e-8);
    }
}

TEST(FullCircuit, SweepTableLayout) {
    const std::vector<double> fl{0.49, 0.5};
    const auto t = spectrum_vs_flux(design_params(), small, fl, 5);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t.levels[0].size(), 5u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_DOUBLE_EQ(t.transition(i, TransitionLabel::w01), t.levels[i][1] - t.levels[i][0]);
        EXPECT_DOUBLE_EQ(t.transition(i, TransitionLabel::w02), t.levels[i][2] - t.levels[i][0]);
    }
    const auto csv = to_csv(t, {"note"});
    EXPECT_EQ(csv.rfind("# note\nflux,E0,E1,E2,E3,E4,w01,w02,w12,w03_half,sideband3\n", 0), 0u);
    const auto j = to_json(t);
    EXPECT_EQ(j["flux"].size(), 2u);
    EXPECT_EQ(j["transitions_GHz"]["w01"].size(), 2u);
}

TEST(FullCircuit, SingleFluxPointGivesOneRow) {
    const std::vector<double> fl{0.5};
    const auto t = spectrum_vs_flux(design_params(), small, fl, 4);
    EXPECT_EQ(t.size(), 1u);
}

TEST(FullCircuit, FluxOutsideUnitIntervalRejected) {
    const auto fam = full_hamiltonian_family(design_params(), small);
    try {
        (void)fam.at(1.2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::validation);
    }
    const std::vector<double> fl{0.5, -0.1};
    EXPECT_THROW((void)spectrum_vs_flux(design_params(), small, fl), Error);
}

TEST(FullCircuit, TruncationCapIsAResourceError) {
    TruncationSpec t = small;
    t.cap = 100;
    try {
        (void)full_hamiltonian_family(design_params(), t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::truncation_too_large);
        EXPECT_EQ(exit_code(e.kind()), 3);
    }
}

TEST(Params, InvalidValuesRejected) {
    auto p = design_params();
    p.alpha = 1.5;
    EXPECT_THROW(p.validate(), Error);
    p = design_params();
    p.LR_nH = 0.0;
    EXPECT_THROW(p.validate(), Error);
    p = design_params();
    p.Jc_uA_per_um2 = 0.66;
    try {
        p.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::missing_parameter);
    }
}

TEST(Params, JunctionAreaReproducesDesignJosephsonEnergy) {
    const auto p = estimated_device_params();
    EXPECT_NEAR(p.resolved_EJ_GHz(), 93.46, 1e-9);
    EXPECT_NEAR(p.Lc_nH, 0.74, 0.0);
}

TEST(Params, ChargingEnergyRoundTrip) {
    const auto p = with_charging_energy(design_params(), 4.94);
    EXPECT_NEAR(p.EC_GHz(), 4.94, 1e-12);
}

TEST(QubitModels, HermitianAndSymmetric) {
    const QubitTruncation t{5, 5, 6};
    for (auto m : {QubitModel::adiabatic, QubitModel::clamped_resonator}) {
        const auto fam = qubit_hamiltonian_family(design_params(), t, m);
        EXPECT_LT(fam.at(0.47).hermiticity_defect(), 1e-12 * fam.at(0.47).max_abs());
        const auto a = core::eigvals_hermitian(fam.at(0.49), 4);
        const auto b = core::eigvals_hermitian(fam.at(0.51), 4);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], b[i], 1e-9);
    }
}

TEST(QubitModels, GapIsMinimalAtSweetSpot) {
    const QubitTruncation t{5, 5, 6};
    const auto fam = qubit_hamiltonian_family(design_params(), t, QubitModel::clamped_resonator);
    auto gap = [&](double f) {
        const auto v = core::eigvals_hermitian(fam.at(f), 2);
        return v[1] - v[0];
    };
    EXPECT_LT(gap(0.5), gap(0.499));
    EXPECT_LT(gap(0.5), gap(0.501));
}

TEST(QubitEstimator, SlopeInvertsToPersistentCurrent) {
    // slope = 2I_pΦ0/h = I_p/e: 1 GHz per flux quantum is 0.1602 nA
    EXPECT_NEAR(ip_from_slope_na(1.0), 0.16021766, 1e-8);
    EXPECT_NEAR(ip_from_slope_na(72.5), 72.5 * 0.16021766, 1e-6);
}

TEST(QubitEstimator, HyperbolaPassesThroughEdgeSamples) {
    const QubitTruncation t{5, 5, 6};
    const auto est = qubit_gap_and_ip(design_params(), t, {0.495, 0.505}, QubitModel::clamped_resonator);
    EXPECT_GT(est.Delta_GHz, 0.0);
    EXPECT_GT(est.Ip_slope_nA, 0.0);
    const double s = est.asymptotic_slope_GHz;
    EXPECT_NEAR(std::sqrt(est.Delta_GHz * est.Delta_GHz + s * s * 0.005 * 0.005), est.edge_w01_GHz, 1e-9);
}

TEST(QubitEstimator, TooNarrowWindowIsAnEstimationError) {
    const QubitTruncation t{5, 5, 6};
    try {
        (void)qubit_gap_and_ip(design_params(), t, {0.5 - 1e-9, 0.5 + 1e-9});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::estimation);
    }
    EXPECT_THROW((void)qubit_gap_and_ip(design_params(), t, {0.51, 0.52}), Error);
}
