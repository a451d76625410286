// fit.hpp: weighted least-squares fit of the quantum Rabi model to labeled
// transition points (Levenberg–Marquardt with Marquardt diagonal scaling)

#pragma once

#include "fluxusc/spectro/points.hpp"
#include "fluxusc/spectro/qrm_model.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fluxusc::spectro {

using FixMask = std::array<bool, 4>; // true → parameter held at its guess value

struct FitOptions {
    FixMask fix{false, false, false, false};
    std::array<double, 5> label_weights{1.0, 1.0, 1.0, 1.0, 1.0}; // multiply the per-point weights, by label
    int max_iterations = 200;
    double rel_cost_tol = 1e-14; // stop when an accepted step lowers the cost by less than this fraction
    double rel_step_tol = 1e-12; // or moves every free parameter by less than this fraction
    double gradient_tol = 1e-14; // or the scaled gradient falls below this
    double lambda0 = 1e-3;
    double rank_tol = 1e-10; // relative singular-value floor of the column-scaled Jacobian
    int nfock = 0;                  // 0 → smallest truncation meeting truncation_tol
    double truncation_tol_GHz = 1e-10; // max level change when the truncation is doubled
};

struct FitResult {
    ParamVector values{};     // |ω_r|, |Δ|, |I_p|, |g|
    ParamVector sigmas{};     // 1σ, zero for fixed parameters
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
    FixMask fixed{};
    double residual_rms_GHz = 0.0; // √(Σwr²/Σw)
    double cost = 0.0;             // Σ w r²
    std::size_t npoints = 0;
    int dof = 0;
    int iterations = 0;
    int rejected_steps = 0;
    bool converged = false;
    std::string stop_reason;
    std::vector<double> cost_trace; // cost at the guess and after every accepted step; non-increasing
    std::vector<double> residuals_GHz; // f_obs − f_model, input order
    int nfock = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] reduced::QRMParams params() const { return to_params(values, nfock); }
};

namespace detail {

struct Residuals {
    Eigen::VectorXd r;           // √w·(f_obs − f_model)
    Eigen::MatrixXd J;           // ∂(√w·f_model)/∂θ, all four columns
    std::vector<double> raw;     // f_obs − f_model
};

inline Residuals evaluate_residuals(const RabiEvaluator& ev, const TransitionPoints& pts,
                                    const std::vector<double>& w, const ParamVector& th, bool jacobian) {
    std::map<double, LevelEval> cache;
    Residuals out;
    const auto n = static_cast<Eigen::Index>(pts.size());
    out.r.resize(n);
    if (jacobian) out.J.resize(n, 4);
    out.raw.resize(pts.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = pts[static_cast<std::size_t>(i)];
        auto it = cache.find(p.flux);
        if (it == cache.end()) it = cache.emplace(p.flux, ev.evaluate(reduced::RabiModel::qrm, th, p.flux, jacobian)).first;
        const auto [f, grad] = transition_with_gradient(it->second, *p.label);
        const double sw = std::sqrt(w[static_cast<std::size_t>(i)]);
        out.raw[static_cast<std::size_t>(i)] = p.freq_GHz - f;
        out.r(i) = sw * (p.freq_GHz - f);
        if (jacobian)
            for (Eigen::Index j = 0; j < 4; ++j) out.J(i, j) = sw * grad[static_cast<std::size_t>(j)];
    }
    return out;
}

inline std::string trace_summary(const std::vector<double>& trace) {
    std::string s;
    const std::size_t start = trace.size() > 8 ? trace.size() - 8 : 0;
    if (start > 0) s += "... ";
    for (std::size_t i = start; i < trace.size(); ++i) s += (i > start ? ", " : "") + io::format_double(trace[i]);
    return s;
}

} // namespace detail

/// Levenberg–Marquardt at one Fock truncation.
/// Covariance = s²(JᵀWJ)⁻¹ with s² = cost/dof over the free parameters.
inline FitResult fit_qrm_fixed_truncation(const TransitionPoints& points, const reduced::QRMParams& guess,
                                          const FitOptions& opt, int nfock) {
    guess.validate();
    require(opt.max_iterations >= 1 && opt.lambda0 > 0.0, ErrorKind::validation, "invalid fit options");
    for (double w : opt.label_weights)
        require(std::isfinite(w) && w > 0.0, ErrorKind::validation, "label weights must be positive");
    std::set<double> fluxes;
    std::vector<double> w;
    for (const auto& p : points) {
        p.validate();
        require(p.label.has_value(), ErrorKind::validation, "every fitted point needs a transition label");
        fluxes.insert(p.flux);
        w.push_back(p.weight * opt.label_weights[static_cast<std::size_t>(*p.label)]);
    }
    std::vector<Eigen::Index> free;
    for (Eigen::Index j = 0; j < 4; ++j)
        if (!opt.fix[static_cast<std::size_t>(j)]) free.push_back(j);
    const auto nfree = static_cast<Eigen::Index>(free.size());
    if (points.size() < 4 || fluxes.size() < 2) {
        throw Error(ErrorKind::rank, "fit needs at least 4 points spanning at least 2 flux values (got " +
                                         std::to_string(points.size()) + " points at " +
                                         std::to_string(fluxes.size()) + " flux values)");
    }
    require(static_cast<Eigen::Index>(points.size()) >= nfree, ErrorKind::rank, "fewer points than free parameters");

    const RabiEvaluator ev(nfock);
    ParamVector th = to_vector(guess);
    auto free_jacobian = [&](const Eigen::MatrixXd& J) {
        Eigen::MatrixXd Jf(J.rows(), nfree);
        for (Eigen::Index k = 0; k < nfree; ++k) Jf.col(k) = J.col(free[static_cast<std::size_t>(k)]);
        return Jf;
    };
    auto check_rank = [&](const Eigen::MatrixXd& Jf, const char* where) {
        if (nfree == 0) return;
        Eigen::MatrixXd s = Jf;
        for (Eigen::Index k = 0; k < nfree; ++k) {
            const double nrm = s.col(k).norm();
            if (nrm == 0.0) {
                throw Error(ErrorKind::rank, std::string("Jacobian column of ") + param_names[free[k]] + " vanishes " + where);
            }
            s.col(k) /= nrm;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
        const auto& sv = svd.singularValues();
        if (sv(nfree - 1) <= opt.rank_tol * sv(0)) {
            throw Error(ErrorKind::rank, std::string("under-determined fit: Jacobian is rank-deficient ") + where);
        }
    };

    FitResult res;
    res.fixed = opt.fix;
    res.nfock = nfock;
    res.npoints = points.size();

    auto cur = detail::evaluate_residuals(ev, points, w, th, true);
    double cost = cur.r.squaredNorm();
    res.cost_trace.push_back(cost);
    check_rank(free_jacobian(cur.J), "at the initial guess");

    double lambda = opt.lambda0;
    int it = 0;
    while (nfree > 0) {
        if (it >= opt.max_iterations) {
            throw Error(ErrorKind::convergence, "fit did not converge in " + std::to_string(opt.max_iterations) +
                                                    " iterations; cost trace: " + detail::trace_summary(res.cost_trace));
        }
        ++it;
        const Eigen::MatrixXd Jf = free_jacobian(cur.J);
        const Eigen::MatrixXd A = Jf.transpose() * Jf;
        const Eigen::VectorXd gvec = Jf.transpose() * cur.r;
        // Scaled gradient: |gⱼ|/√(Aⱼⱼ·cost) is scale-free.
        double gmax = 0.0;
        for (Eigen::Index k = 0; k < nfree; ++k)
            gmax = std::max(gmax, std::abs(gvec(k)) / std::sqrt(A(k, k) * std::max(cost, 1e-300)));
        if (gmax <= opt.gradient_tol || cost == 0.0) {
            res.converged = true;
            res.stop_reason = "gradient";
            break;
        }
        bool accepted = false;
        bool small_step = false;
        while (!accepted) {
            Eigen::MatrixXd M = A;
            for (Eigen::Index k = 0; k < nfree; ++k) M(k, k) += lambda * A(k, k);
            const Eigen::VectorXd delta = M.ldlt().solve(gvec);
            ParamVector trial = th;
            double rel_step = 0.0;
            for (Eigen::Index k = 0; k < nfree; ++k) {
                const auto j = static_cast<std::size_t>(free[static_cast<std::size_t>(k)]);
                trial[j] += delta(k);
                rel_step = std::max(rel_step, std::abs(delta(k)) / std::max(std::abs(th[j]), 1e-12));
            }
            const auto tr = detail::evaluate_residuals(ev, points, w, trial, false);
            const double tcost = tr.r.squaredNorm();
            if (tcost <= cost) {
                accepted = true;
                const double drop = (cost - tcost) / std::max(cost, 1e-300);
                th = trial;
                cost = tcost;
                res.cost_trace.push_back(cost);
                cur = detail::evaluate_residuals(ev, points, w, th, true);
                lambda = std::max(lambda / 10.0, 1e-12);
                small_step = drop <= opt.rel_cost_tol || rel_step <= opt.rel_step_tol;
            } else {
                ++res.rejected_steps;
                lambda *= 10.0;
                if (rel_step <= opt.rel_step_tol || lambda > 1e16) {
                    // No further decrease is resolvable at this precision.
                    small_step = true;
                    break;
                }
            }
        }
        if (small_step) {
            res.converged = true;
            res.stop_reason = accepted ? "cost" : "step";
            break;
        }
    }
    if (nfree == 0) {
        res.converged = true;
        res.stop_reason = "all parameters fixed";
    }

    const Eigen::MatrixXd Jf = free_jacobian(cur.J);
    check_rank(Jf, "at the optimum");
    res.iterations = it;
    res.cost = cost;
    double wsum = 0.0;
    for (double x : w) wsum += x;
    res.residual_rms_GHz = std::sqrt(cost / wsum);
    res.residuals_GHz = cur.raw;
    res.dof = static_cast<int>(points.size()) - static_cast<int>(nfree);
    double s2 = 1.0;
    if (res.dof > 0) {
        s2 = cost / res.dof;
    } else {
        res.warnings.push_back("zero degrees of freedom: covariance not scaled by the residual variance");
    }
    if (nfree > 0) {
        const Eigen::MatrixXd cinv = (Jf.transpose() * Jf).inverse() * s2;
        for (Eigen::Index a = 0; a < nfree; ++a)
            for (Eigen::Index b = 0; b < nfree; ++b)
                res.covariance(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(b)]) = cinv(a, b);
    }
    // The spectrum is invariant under sign flips of Δ, I_p and g: report magnitudes,
    // flipping the matching covariance rows and columns.
    for (std::size_t j = 0; j < 4; ++j) {
        if (th[j] < 0.0) {
            th[j] = -th[j];
            res.covariance.row(static_cast<Eigen::Index>(j)) *= -1.0;
            res.covariance.col(static_cast<Eigen::Index>(j)) *= -1.0;
        }
    }
    res.values = th;
    for (std::size_t j = 0; j < 4; ++j)
        res.sigmas[j] = std::sqrt(std::max(0.0, res.covariance(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))));
    return res;
}

/// Minimizes Σ wᵢ(f_obs,i − f_model(labelᵢ, Φᵢ; θ))² from the single guess θ₀.
/// With opt.nfock = 0 the truncation is chosen at the guess and re-verified at the optimum.
inline FitResult fit_qrm(const TransitionPoints& points, const reduced::QRMParams& guess, const FitOptions& opt = {}) {
    if (opt.nfock > 0) return fit_qrm_fixed_truncation(points, guess, opt, opt.nfock);
    guess.validate();
    require(opt.truncation_tol_GHz > 0.0, ErrorKind::validation, "truncation tolerance must be positive");
    std::set<double> fluxes;
    for (const auto& p : points) fluxes.insert(p.flux);
    int n = converged_nfock(reduced::RabiModel::qrm, to_vector(guess), fluxes, opt.truncation_tol_GHz);
    while (true) {
        FitResult r = fit_qrm_fixed_truncation(points, guess, opt, n);
        const int need = converged_nfock(reduced::RabiModel::qrm, r.values, fluxes, opt.truncation_tol_GHz, n);
        if (need == n) return r;
        n = need;
    }
}

// ------------------------------- JSON -------------------------------

inline nlohmann::json to_json(const FitResult& r) {
    nlohmann::json j;
    nlohmann::json params = nlohmann::json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        params[param_names[k]] = {{"value", r.values[k]}, {"sigma", r.sigmas[k]}, {"fixed", r.fixed[k]}};
    }
    j["parameters"] = params;
    j["parameter_order"] = std::vector<std::string>(param_names.begin(), param_names.end());
    nlohmann::json cov = nlohmann::json::array();
    for (Eigen::Index a = 0; a < 4; ++a) {
        std::vector<double> row;
        for (Eigen::Index b = 0; b < 4; ++b) row.push_back(r.covariance(a, b));
        cov.push_back(row);
    }
    j["covariance"] = cov;
    j["residual_rms_GHz"] = r.residual_rms_GHz;
    j["cost"] = r.cost;
    j["npoints"] = r.npoints;
    j["dof"] = r.dof;
    j["nfock"] = r.nfock;
    j["diagnostics"] = {{"converged", r.converged},  {"iterations", r.iterations},
                        {"rejected_steps", r.rejected_steps}, {"stop_reason", r.stop_reason},
                        {"cost_trace", r.cost_trace}, {"warnings", r.warnings}};
    j["residuals_GHz"] = r.residuals_GHz;
    return j;
}

inline FitResult fit_from_json(const nlohmann::json& j) {
    try {
        FitResult r;
        const auto& params = j.at("parameters");
        for (std::size_t k = 0; k < 4; ++k) {
            const auto& p = params.at(param_names[k]);
            r.values[k] = p.at("value").get<double>();
            r.sigmas[k] = p.at("sigma").get<double>();
            r.fixed[k] = p.value("fixed", false);
        }
        const auto& cov = j.at("covariance");
        require(cov.size() == 4, ErrorKind::validation, "covariance must be 4x4");
        for (std::size_t a = 0; a < 4; ++a) {
            require(cov[a].size() == 4, ErrorKind::validation, "covariance must be 4x4");
            for (std::size_t b = 0; b < 4; ++b)
                r.covariance(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = cov[a][b].get<double>();
        }
        r.residual_rms_GHz = j.at("residual_rms_GHz").get<double>();
        r.cost = j.value("cost", 0.0);
        r.npoints = j.value("npoints", std::size_t{0});
        r.dof = j.value("dof", 0);
        r.nfock = j.value("nfock", 40);
        if (j.contains("diagnostics")) {
            const auto& d = j["diagnostics"];
            r.converged = d.value("converged", false);
            r.iterations = d.value("iterations", 0);
            r.rejected_steps = d.value("rejected_steps", 0);
            r.stop_reason = d.value("stop_reason", std::string());
            r.cost_trace = d.value("cost_trace", std::vector<double>{});
            r.warnings = d.value("warnings", std::vector<std::string>{});
        }
        r.residuals_GHz = j.value("residuals_GHz", std::vector<double>{});
        for (double s : r.sigmas) require(s >= 0.0, ErrorKind::validation, "uncertainties must be non-negative");
        require(std::isfinite(r.residual_rms_GHz), ErrorKind::validation, "residual_rms_GHz must be finite");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::validation, std::string("fit JSON: ") + e.what());
    }
}

} // namespace fluxusc::spectro
