#include "fluxusc/core/eigensolver.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <random>

using namespace fluxusc;
using namespace fluxusc::core;

namespace {

DenseMatrix random_hermitian(Index n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix a(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

// Oracle independent of the Hermitian solvers: general complex Schur route.
std::vector<double> general_oracle(const DenseMatrix& h) {
    Eigen::ComplexEigenSolver<DenseMatrix> es(h, false);
    std::vector<double> v;
    for (Index i = 0; i < h.rows(); ++i) v.push_back(es.eigenvalues()(i).real());
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST(Eigs, DiagonalCase) {
    const std::vector<double> d{3.0, 1.0, 2.0};
    const auto r = eigs_hermitian(Operator::diagonal(d), 2);
    ASSERT_EQ(r.values.size(), 2u);
    EXPECT_DOUBLE_EQ(r.values[0], 1.0);
    EXPECT_DOUBLE_EQ(r.values[1], 2.0);
}

TEST(Eigs, PauliX) {
    DenseMatrix sx(2, 2);
    sx << 0, 1, 1, 0;
    const auto r = eigs_hermitian(Operator::from_dense(sx), 2);
    EXPECT_NEAR(r.values[0], -1.0, 1e-15);
    EXPECT_NEAR(r.values[1], 1.0, 1e-15);
}

TEST(Eigs, RandomHermitianMatchesGeneralOracle) {
    const DenseMatrix h = random_hermitian(60, 42);
    const auto oracle = general_oracle(h);
    const Operator op = Operator::from_dense(h);
    for (EigenMethod m : {EigenMethod::dense, EigenMethod::real_embedding}) {
        EigenOptions o;
        o.method = m;
        const auto r = eigs_hermitian(op, 60, o);
        for (std::size_t i = 0; i < 60; ++i) EXPECT_NEAR(r.values[i], oracle[i], 1e-9);
        EXPECT_LT(r.diagnostics.orthonormality_error, 1e-10);
        EXPECT_LE(r.diagnostics.max_residual, 1e-8 * op.max_abs());
    }
}

TEST(Eigs, RealEmbeddingReportsEachEigenvalueOnce) {
    // 10×10 complex Hermitian with a three-fold and a two-fold degeneracy
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    DenseMatrix q(10, 10);
    for (Index i = 0; i < 10; ++i)
        for (Index j = 0; j < 10; ++j) q(i, j) = cplx(g(rng), g(rng));
    Eigen::HouseholderQR<DenseMatrix> qr(q);
    const DenseMatrix u = qr.householderQ();
    Eigen::VectorXd spec(10);
    spec << -2.0, -2.0, -2.0, -0.5, 0.3, 1.0, 1.0, 2.5, 4.0, 7.0;
    const DenseMatrix h = u * spec.cast<cplx>().asDiagonal() * u.adjoint();
    const DenseMatrix hh = 0.5 * (h + h.adjoint());
    ASSERT_GT(hh.imag().cwiseAbs().maxCoeff(), 0.1); // genuinely complex

    EigenOptions o;
    o.method = EigenMethod::real_embedding;
    const auto r = eigs_hermitian(Operator::from_dense(hh), 10, o);
    const auto oracle = general_oracle(hh);
    ASSERT_EQ(r.values.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(r.values[i], oracle[i], 1e-10);
    for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(r.values[i], spec(static_cast<Index>(i)), 1e-10);
    EXPECT_LT(r.diagnostics.orthonormality_error, 1e-10);
    EXPECT_LT(r.diagnostics.max_residual, 1e-10);
}

TEST(Eigs, DavidsonMatchesDenseOnSparseChain) {
    // tight-binding chain with complex hopping and a confining potential
    const Index n = 3000;
    std::vector<Triplet> t;
    for (Index i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) - n / 2.0) / 200.0;
        t.emplace_back(i, i, 40.0 * x * x);
        if (i + 1 < n) {
            const cplx hop(-1.0, 0.3);
            t.emplace_back(i, i + 1, hop);
            t.emplace_back(i + 1, i, std::conj(hop));
        }
    }
    const Operator h = Operator::from_triplets(n, t);
    EigenOptions o;
    o.method = EigenMethod::davidson;
    const auto r = eigs_hermitian(h, 5, o);
    // gauge transform removes the hopping phase: real tridiagonal with |hop| off-diagonals
    Eigen::VectorXd diag(n), off(n - 1);
    for (Index i = 0; i < n; ++i) diag(i) = h(i, i).real();
    off.setConstant(std::abs(cplx(-1.0, 0.3)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.values[i], tri.eigenvalues()(static_cast<Index>(i)), 1e-8);
    EXPECT_GT(r.diagnostics.matvecs, 0);
    EXPECT_LT(r.diagnostics.orthonormality_error, 1e-10);
}

TEST(Eigs, RejectsNonHermitian) {
    DenseMatrix m(2, 2);
    m << 0, 1, 0.5, 0;
    try {
        eigs_hermitian(Operator::from_dense(m), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::hermiticity);
    }
}

TEST(Eigs, RejectsBadK) {
    const std::vector<double> d{1.0, 2.0};
    EXPECT_THROW(eigs_hermitian(Operator::diagonal(d), 0), Error);
    EXPECT_THROW(eigs_hermitian(Operator::diagonal(d), 3), Error);
}

TEST(Eigs, DavidsonReportsIterationDiagnosticsOnFailure) {
    const DenseMatrix h = random_hermitian(400, 3);
    EigenOptions o;
    o.method = EigenMethod::davidson;
    o.max_iterations = 2;
    try {
        eigs_hermitian(Operator::from_dense(h), 4, o);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::numeric);
        EXPECT_NE(std::string(e.what()).find("mat-vecs"), std::string::npos);
    }
}

TEST(Eigs, RepeatedCallsAreBitIdentical) {
    const Operator h = Operator::from_dense(random_hermitian(50, 11));
    const auto a = eigs_hermitian(h, 6);
    const auto b = eigs_hermitian(h, 6);
    EXPECT_EQ(a.values, b.values);
}
