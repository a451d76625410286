// qrm_model.hpp: real dense evaluator of quantum Rabi / Jaynes–Cummings levels
// and their parameter derivatives, for fitting and plotting
//
// Both Hamiltonians are linear in θ = (ω_r, Δ, I_p, g), so every level
// derivative is an expectation value of a fixed matrix.

#pragma once

#include "fluxusc/core/transition_label.hpp"
#include "fluxusc/reduced/qrm.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <set>
#include <string>

namespace fluxusc::spectro {

enum class ParamIndex : std::size_t { omega_r = 0, Delta = 1, Ip = 2, g = 3 };

inline constexpr std::array<const char*, 4> param_names{"omega_r_GHz", "Delta_GHz", "Ip_nA", "g_GHz"};

using ParamVector = std::array<double, 4>;

inline ParamVector to_vector(const reduced::QRMParams& p) { return {p.omega_r_GHz, p.Delta_GHz, p.Ip_nA, p.g_GHz}; }

inline reduced::QRMParams to_params(const ParamVector& v, int nfock) { return {v[1], v[2], v[0], v[3], nfock}; }

struct LevelEval {
    std::array<double, 4> levels{};
    std::array<ParamVector, 4> d_levels{}; // d_levels[n][j] = ∂E_n/∂θ_j
};

class RabiEvaluator {
public:
    explicit RabiEvaluator(int nfock) : n_(nfock) {
        require(nfock >= 4, ErrorKind::validation, "nfock must be >= 4");
        const Eigen::Index d = 2 * n_;
        num_ = Eigen::MatrixXd::Zero(d, d);
        sx_ = Eigen::MatrixXd::Zero(d, d);
        sz_ = Eigen::MatrixXd::Zero(d, d);
        coup_ = Eigen::MatrixXd::Zero(d, d);
        jc_ = Eigen::MatrixXd::Zero(d, d);
        for (int q = 0; q < 2; ++q) {
            const double z = q == 0 ? 1.0 : -1.0;
            for (int k = 0; k < n_; ++k) {
                const Eigen::Index i = idx(q, k);
                num_(i, i) = k + 0.5;
                sz_(i, i) = z;
                sx_(i, idx(1 - q, k)) = 1.0;
                if (k + 1 < n_) {
                    const double s = std::sqrt(static_cast<double>(k + 1));
                    coup_(i, idx(q, k + 1)) = z * s;
                    coup_(idx(q, k + 1), i) = z * s;
                }
            }
        }
        // σ₊a + σ₋a†: |0,k⟩⟨1,k+1| + h.c.
        for (int k = 0; k + 1 < n_; ++k) {
            const double s = std::sqrt(static_cast<double>(k + 1));
            jc_(idx(0, k), idx(1, k + 1)) = s;
            jc_(idx(1, k + 1), idx(0, k)) = s;
        }
    }

    [[nodiscard]] int nfock() const { return n_; }

    /// Lowest four levels and ∂E_n/∂θ at flux fraction `flux`.
    [[nodiscard]] LevelEval evaluate(reduced::RabiModel model, const ParamVector& th, double flux,
                                     bool derivatives = true) const {
        const double kappa = reduced::epsilon(1.0, flux); // ε per nA of I_p
        const double eps = th[2] * kappa;
        Eigen::MatrixXd h;
        // dH/dθ_j = terms[j]
        std::array<const Eigen::MatrixXd*, 4> terms{};
        Eigen::MatrixXd dq_dDelta, dq_dIp, dq_dg;
        if (model == reduced::RabiModel::qrm) {
            h = th[0] * num_ - 0.5 * th[1] * sx_ - 0.5 * eps * sz_ + th[3] * coup_;
            dq_dDelta = -0.5 * sx_;
            dq_dIp = -0.5 * kappa * sz_;
            terms = {&num_, &dq_dDelta, &dq_dIp, &coup_};
        } else {
            const double wq = std::hypot(eps, th[1]);
            const double s = wq > 0.0 ? th[1] / wq : 1.0; // sinθ with θ = atan2(Δ, ε)
            h = 0.5 * wq * sz_ + th[0] * num_ - th[3] * s * jc_;
            if (derivatives) {
                // ∂ω_q/∂Δ = Δ/ω_q, ∂ω_q/∂ε = ε/ω_q, ∂s/∂Δ = ε²/ω_q³, ∂s/∂ε = −Δε/ω_q³
                const double w3 = wq * wq * wq;
                dq_dDelta = 0.5 * (th[1] / wq) * sz_ - th[3] * (eps * eps / w3) * jc_;
                dq_dIp = kappa * (0.5 * (eps / wq) * sz_ + th[3] * (th[1] * eps / w3) * jc_);
                dq_dg = -s * jc_;
            }
            terms = {&num_, &dq_dDelta, &dq_dIp, &dq_dg};
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, derivatives ? Eigen::ComputeEigenvectors
                                                                          : Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error(ErrorKind::numeric, "Rabi-model eigensolver failed");
        LevelEval out;
        for (int n = 0; n < 4; ++n) out.levels[static_cast<std::size_t>(n)] = es.eigenvalues()(n);
        if (derivatives) {
            for (int n = 0; n < 4; ++n) {
                const Eigen::VectorXd v = es.eigenvectors().col(n);
                for (std::size_t j = 0; j < 4; ++j) out.d_levels[static_cast<std::size_t>(n)][j] = v.dot(*terms[j] * v);
            }
        }
        return out;
    }

    [[nodiscard]] double transition(reduced::RabiModel model, const ParamVector& th, double flux,
                                    TransitionLabel l) const {
        return transition_frequency(l, evaluate(model, th, flux, false).levels);
    }

private:
    [[nodiscard]] Eigen::Index idx(int q, int k) const { return static_cast<Eigen::Index>(q) * n_ + k; }

    int n_;
    Eigen::MatrixXd num_, sx_, sz_, coup_, jc_;
};

/// Transition frequency and its gradient with respect to θ.
inline std::pair<double, ParamVector> transition_with_gradient(const LevelEval& e, TransitionLabel l) {
    const auto c = transition_coefficients(l);
    double f = 0.0;
    ParamVector grad{};
    for (std::size_t n = 0; n < 4; ++n) {
        f += c[n] * e.levels[n];
        for (std::size_t j = 0; j < 4; ++j) grad[j] += c[n] * e.d_levels[n][j];
    }
    return {f, grad};
}

/// Smallest Fock truncation from {8, 12, 16, 24, 32, …} whose four lowest levels move by at most
/// tol when doubled, at every flux in `fluxes`.
inline int converged_nfock(reduced::RabiModel model, const ParamVector& th, const std::set<double>& fluxes,
                           double tol, int start = 8, int max_nfock = 512) {
    for (int n = start; n <= max_nfock; n = n < 12 ? 12 : (n % 3 == 0 ? n * 4 / 3 : n * 3 / 2)) {
        const RabiEvaluator a(n), b(2 * n);
        bool ok = true;
        for (double f : fluxes) {
            const auto la = a.evaluate(model, th, f, false).levels;
            const auto lb = b.evaluate(model, th, f, false).levels;
            for (std::size_t k = 0; k < 4 && ok; ++k) ok = std::abs(la[k] - lb[k]) <= tol;
            if (!ok) break;
        }
        if (ok) return n;
    }
    throw Error(ErrorKind::numeric, "Fock truncation unconverged at nfock=" + std::to_string(max_nfock));
}

} // namespace fluxusc::spectro
