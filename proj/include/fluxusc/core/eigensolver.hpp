// eigensolver.hpp: lowest eigenpairs of Hermitian operators
//
// Three routes behind one contract:
//   dense           Eigen::SelfAdjointEigenSolver on the complex matrix
//   real_embedding  2N×2N real-symmetric embedding [[Re, −Im], [Im, Re]]; every
//                   eigenvalue appears twice there and is reported once
//   davidson        block Davidson with a diagonal (Jacobi) preconditioner for
//                   large sparse Hamiltonians
// Results are sorted ascending and deterministic for identical input.

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/core/operator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fluxusc::core {

enum class EigenMethod { automatic, dense, real_embedding, davidson };

struct EigenOptions {
    EigenMethod method = EigenMethod::automatic;
    double hermiticity_tol = 1e-12; // relative to ‖H‖_max
    double residual_tol = 1e-8;     // ‖Hv − λv‖ ≤ residual_tol · ‖H‖_max
    double orthonormality_tol = 1e-10;
    Index dense_threshold = 1500;   // automatic: dense at or below this dimension
    int max_iterations = 2000;      // Davidson outer iterations
    int extra_block = 2;            // Davidson block size beyond k
    bool want_vectors = true;
};

struct SolverDiagnostics {
    EigenMethod method = EigenMethod::dense;
    int iterations = 0;
    long matvecs = 0;
    double max_residual = 0.0;
    double orthonormality_error = 0.0;
};

struct EigenPairs {
    std::vector<double> values; // ascending
    DenseMatrix vectors;        // columns, matching values (empty if not requested)
    SolverDiagnostics diagnostics;
};

namespace detail {

inline void check_hermitian(const Operator& h, double tol) {
    const double scale = h.max_abs();
    const double defect = h.hermiticity_defect();
    if (defect > tol * std::max(scale, std::numeric_limits<double>::min())) {
        std::ostringstream os;
        os << "operator is not Hermitian: ‖H−H†‖_max = " << defect << " with ‖H‖_max = " << scale;
        throw Error(ErrorKind::hermiticity, os.str());
    }
}

inline double orthonormality_error(const DenseMatrix& v) {
    if (v.cols() == 0) return 0.0;
    const DenseMatrix g = v.adjoint() * v - DenseMatrix::Identity(v.cols(), v.cols());
    return g.cwiseAbs().maxCoeff();
}

inline double max_residual(const SparseMatrix& h, const std::vector<double>& vals, const DenseMatrix& vecs) {
    double worst = 0.0;
    for (Index i = 0; i < vecs.cols(); ++i) {
        const Eigen::VectorXcd r = h * vecs.col(i) - vals[static_cast<std::size_t>(i)] * vecs.col(i);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

inline EigenPairs solve_dense(const Operator& h, Index k, const EigenOptions& opt) {
    const DenseMatrix d = h.dense();
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(d, opt.want_vectors ? Eigen::ComputeEigenvectors
                                                                      : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "dense Hermitian eigensolver failed");
    EigenPairs out;
    out.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    if (opt.want_vectors) out.vectors = es.eigenvectors().leftCols(k);
    out.diagnostics.method = EigenMethod::dense;
    return out;
}

// Each complex eigenpair (λ, u) yields two real eigenvectors of the embedding,
// [Re u; Im u] and [−Im u; Re u]. Eigenvalues are grouped into clusters; a
// cluster of 2m real vectors spans an m-dimensional complex eigenspace, which is
// recovered by Gram-Schmidt on the complexified vectors.
inline EigenPairs solve_real_embedding(const Operator& h, Index k, const EigenOptions& opt) {
    const Index n = h.dim();
    const DenseMatrix d = h.dense();
    Eigen::MatrixXd big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = d.real();
    big.topRightCorner(n, n) = -d.imag();
    big.bottomLeftCorner(n, n) = d.imag();
    big.bottomRightCorner(n, n) = d.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(big);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "real-embedding eigensolver failed");

    const Eigen::VectorXd& ev = es.eigenvalues();
    const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
    const double cluster_tol = 1e-9 * scale;

    EigenPairs out;
    out.diagnostics.method = EigenMethod::real_embedding;
    std::vector<Eigen::VectorXcd> kept;
    Index i = 0;
    while (i < 2 * n && static_cast<Index>(out.values.size()) < k) {
        Index j = i + 1;
        while (j < 2 * n && ev(j) - ev(j - 1) <= cluster_tol) ++j;
        const Index size = j - i;
        if (size % 2 != 0) {
            throw Error(ErrorKind::numeric, "real embedding produced an odd-sized eigenvalue cluster; "
                                            "degeneracy pairing failed");
        }
        double mean = 0.0;
        for (Index q = i; q < j; ++q) mean += ev(q);
        mean /= static_cast<double>(size);
        // complexify and orthonormalize
        std::vector<Eigen::VectorXcd> basis;
        for (Index q = i; q < j && static_cast<Index>(basis.size()) < size / 2; ++q) {
            Eigen::VectorXcd u(n);
            for (Index r = 0; r < n; ++r) u(r) = cplx(es.eigenvectors()(r, q), es.eigenvectors()(r + n, q));
            for (const auto& b : basis) u -= b * b.dot(u);
            for (const auto& b : basis) u -= b * b.dot(u);
            const double nrm = u.norm();
            if (nrm > 1e-6) basis.push_back(u / nrm);
        }
        if (static_cast<Index>(basis.size()) != size / 2) {
            throw Error(ErrorKind::numeric, "real embedding: could not recover complex eigenspace");
        }
        for (auto& b : basis) {
            if (static_cast<Index>(out.values.size()) == k) break;
            out.values.push_back(mean);
            kept.push_back(std::move(b));
        }
        i = j;
    }
    if (static_cast<Index>(out.values.size()) < k) throw Error(ErrorKind::numeric, "real embedding: too few eigenpairs");
    if (opt.want_vectors) {
        out.vectors.resize(n, k);
        for (Index c = 0; c < k; ++c) out.vectors.col(c) = kept[static_cast<std::size_t>(c)];
    }
    return out;
}

// Deterministic pseudo-random fill independent of the standard library's
// distribution implementations.
inline double hash_unit(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53 - 0.5;
}

inline int orthonormalize_against(DenseMatrix& block, const DenseMatrix& basis, Index basis_cols) {
    // classical Gram-Schmidt against the basis, repeated when a column lost most of its norm
    if (basis_cols > 0) {
        const auto q = basis.leftCols(basis_cols);
        const Eigen::VectorXd before = block.colwise().norm();
        block -= q * (q.adjoint() * block);
        const Eigen::VectorXd after = block.colwise().norm();
        if ((after.array() < 0.7 * before.array()).any()) block -= q * (q.adjoint() * block);
    }
    int kept = 0;
    for (Index c = 0; c < block.cols(); ++c) {
        Eigen::VectorXcd v = block.col(c);
        const double before = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (Index p = 0; p < kept; ++p) v -= block.col(p) * block.col(p).dot(v);
        }
        const double after = v.norm();
        if (after > 1e-10 * std::max(before, 1e-300) && after > 1e-14) {
            block.col(kept) = v / after;
            ++kept;
        }
    }
    return kept;
}

inline EigenPairs solve_davidson(const Operator& h, Index k, const EigenOptions& opt) {
    const SparseMatrix& a = h.matrix();
    const Index n = h.dim();
    const Index nb = std::min<Index>(k + opt.extra_block, n);
    const Index max_sub = std::min<Index>(std::max<Index>(6 * nb, 40), n);
    const double hmax = h.max_abs();
    const double tol = opt.residual_tol * hmax;

    Eigen::VectorXd diag(n);
    for (Index i = 0; i < n; ++i) diag(i) = a.coeff(i, i).real();

    // start from the unit vectors on the lowest diagonal entries, slightly perturbed
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::partial_sort(order.begin(), order.begin() + nb, order.end(),
                      [&](Index x, Index y) { return diag(x) < diag(y) || (diag(x) == diag(y) && x < y); });

    DenseMatrix v(n, max_sub + nb);
    DenseMatrix hv(n, max_sub + nb);
    DenseMatrix block(n, nb);
    for (Index c = 0; c < nb; ++c) {
        for (Index r = 0; r < n; ++r) {
            block(r, c) = 1e-3 * hash_unit(static_cast<std::uint64_t>(r * 7919 + c * 104729 + 1));
        }
        block(order[static_cast<std::size_t>(c)], c) += 1.0;
    }
    Index m = orthonormalize_against(block, v, 0);
    v.leftCols(m) = block.leftCols(m);
    hv.leftCols(m) = a * v.leftCols(m);

    SolverDiagnostics diag_out;
    diag_out.method = EigenMethod::davidson;
    diag_out.matvecs = m;

    // projected matrix V†HV, extended column-block by column-block
    DenseMatrix proj = DenseMatrix::Zero(max_sub + nb, max_sub + nb);
    const auto extend_projection = [&](Index from, Index to) {
        const DenseMatrix cols = v.leftCols(to).adjoint() * hv.middleCols(from, to - from);
        proj.block(0, from, to, to - from) = cols;
        proj.block(from, 0, to - from, to) = cols.adjoint();
    };
    extend_projection(0, m);

    Eigen::VectorXd theta;
    DenseMatrix y;
    std::vector<double> res(static_cast<std::size_t>(nb));
    for (int it = 0; it < opt.max_iterations; ++it) {
        DenseMatrix t = proj.topLeftCorner(m, m);
        t = 0.5 * (t + t.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(t);
        if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Davidson: projected eigenproblem failed");
        theta = es.eigenvalues();
        y = es.eigenvectors();
        const Index nr = std::min(nb, m);
        const DenseMatrix x = v.leftCols(m) * y.leftCols(nr);
        const DenseMatrix hx = hv.leftCols(m) * y.leftCols(nr);
        DenseMatrix r = hx;
        for (Index c = 0; c < nr; ++c) r.col(c) -= theta(c) * x.col(c);

        bool done = nr >= k;
        for (Index c = 0; c < nr; ++c) {
            res[static_cast<std::size_t>(c)] = r.col(c).norm();
            if (c < k && res[static_cast<std::size_t>(c)] > tol) done = false;
        }
        diag_out.iterations = it + 1;
        if (done) {
            EigenPairs out;
            out.values.assign(theta.data(), theta.data() + k);
            out.vectors = x.leftCols(k);
            out.diagnostics = diag_out;
            return out;
        }

        // Jacobi-preconditioned corrections for the unconverged Ritz pairs
        DenseMatrix corr(n, nr);
        Index nc = 0;
        for (Index c = 0; c < nr; ++c) {
            if (res[static_cast<std::size_t>(c)] <= tol) continue;
            for (Index row = 0; row < n; ++row) {
                double den = diag(row) - theta(c);
                if (std::abs(den) < 1e-8) den = den < 0 ? -1e-8 : 1e-8;
                corr(row, nc) = r(row, c) / den;
            }
            ++nc;
        }
        corr.conservativeResize(n, nc);

        if (m + nc > max_sub) {
            // thick restart on the current Ritz block
            v.leftCols(nr) = x;
            hv.leftCols(nr) = hx;
            m = nr;
            proj.topLeftCorner(nr, nr) = theta.head(nr).cast<cplx>().asDiagonal();
        }
        const int added = orthonormalize_against(corr, v, m);
        if (added == 0) {
            std::ostringstream os;
            os << "Davidson stalled after " << it + 1 << " iterations (" << diag_out.matvecs
               << " mat-vecs); residuals:";
            for (Index c = 0; c < k && c < nr; ++c) os << ' ' << res[static_cast<std::size_t>(c)];
            throw Error(ErrorKind::numeric, os.str());
        }
        v.middleCols(m, added) = corr.leftCols(added);
        hv.middleCols(m, added) = a * corr.leftCols(added);
        diag_out.matvecs += added;
        extend_projection(m, m + added);
        m += added;
    }
    std::ostringstream os;
    os << "Davidson did not converge in " << opt.max_iterations << " iterations (" << diag_out.matvecs
       << " mat-vecs); tolerance " << tol << ", residuals:";
    for (Index c = 0; c < k; ++c) os << ' ' << res[static_cast<std::size_t>(c)];
    throw Error(ErrorKind::numeric, os.str());
}

} // namespace detail

/// The k lowest eigenpairs of a Hermitian operator, ascending.
inline EigenPairs eigs_hermitian(const Operator& h, Index k, const EigenOptions& opt = {}) {
    require(h.dim() > 0, ErrorKind::validation, "eigs_hermitian: empty operator");
    require(k >= 1 && k <= h.dim(), ErrorKind::validation,
            "eigs_hermitian: need 1 <= k <= dim, got k=" + std::to_string(k) + " dim=" + std::to_string(h.dim()));
    detail::check_hermitian(h, opt.hermiticity_tol);

    EigenMethod method = opt.method;
    if (method == EigenMethod::automatic) {
        method = h.dim() <= opt.dense_threshold ? EigenMethod::dense : EigenMethod::davidson;
    }
    if (method == EigenMethod::davidson && k + opt.extra_block + 8 >= h.dim()) method = EigenMethod::dense;

    EigenOptions local = opt;
    if (method == EigenMethod::davidson) local.want_vectors = true;

    EigenPairs out;
    switch (method) {
    case EigenMethod::dense: out = detail::solve_dense(h, k, local); break;
    case EigenMethod::real_embedding: out = detail::solve_real_embedding(h, k, local); break;
    case EigenMethod::davidson: out = detail::solve_davidson(h, k, local); break;
    case EigenMethod::automatic: break;
    }

    if (out.vectors.cols() > 0) {
        out.diagnostics.max_residual = detail::max_residual(h.matrix(), out.values, out.vectors);
        out.diagnostics.orthonormality_error = detail::orthonormality_error(out.vectors);
        const double scale = std::max(h.max_abs(), std::numeric_limits<double>::min());
        if (out.diagnostics.max_residual > std::max(opt.residual_tol, 1e-8) * scale * 1.0001 ||
            out.diagnostics.orthonormality_error > std::max(opt.orthonormality_tol, 1e-10)) {
            std::ostringstream os;
            os << "eigenpairs failed verification: residual " << out.diagnostics.max_residual << ", orthonormality "
               << out.diagnostics.orthonormality_error;
            throw Error(ErrorKind::numeric, os.str());
        }
    }
    if (!opt.want_vectors) out.vectors.resize(0, 0);
    return out;
}

/// Eigenvalues only.
inline std::vector<double> eigvals_hermitian(const Operator& h, Index k, EigenOptions opt = {}) {
    opt.want_vectors = false;
    return eigs_hermitian(h, k, opt).values;
}

} // namespace fluxusc::core
