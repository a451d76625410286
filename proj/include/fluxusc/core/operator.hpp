// operator.hpp: sparse complex operators, charge/oscillator bases, Kronecker embedding

#pragma once

#include "fluxusc/core/errors.hpp"
#include "fluxusc/units.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace fluxusc::core {

using Index = Eigen::Index;
using cplx = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using DenseMatrix = Eigen::MatrixXcd;
using Triplet = Eigen::Triplet<cplx>;

/// Largest composite dimension tensor_embed will build unless told otherwise.
inline constexpr Index default_dimension_cap = 1'000'000;

/// Square complex operator held in compressed row storage.
class Operator {
public:
    Operator() = default;

    explicit Operator(SparseMatrix m) : m_(std::move(m)) {
        require(m_.rows() == m_.cols(), ErrorKind::validation,
                "operator must be square, got " + std::to_string(m_.rows()) + "x" +
                    std::to_string(m_.cols()));
        m_.makeCompressed();
    }

    static Operator identity(Index n) {
        SparseMatrix m(n, n);
        m.setIdentity();
        return Operator(std::move(m));
    }

    static Operator zero(Index n) { return Operator(SparseMatrix(n, n)); }

    static Operator diagonal(std::span<const double> d) {
        const auto n = static_cast<Index>(d.size());
        std::vector<Triplet> t;
        t.reserve(d.size());
        for (Index i = 0; i < n; ++i) {
            if (d[static_cast<std::size_t>(i)] != 0.0) t.emplace_back(i, i, d[static_cast<std::size_t>(i)]);
        }
        SparseMatrix m(n, n);
        m.setFromTriplets(t.begin(), t.end());
        return Operator(std::move(m));
    }

    static Operator from_dense(const DenseMatrix& d) {
        SparseMatrix m = d.sparseView(0.0, 0.0);
        return Operator(std::move(m));
    }

    static Operator from_triplets(Index n, const std::vector<Triplet>& t) {
        SparseMatrix m(n, n);
        m.setFromTriplets(t.begin(), t.end());
        return Operator(std::move(m));
    }

    Index dim() const noexcept { return m_.rows(); }
    const SparseMatrix& matrix() const noexcept { return m_; }
    DenseMatrix dense() const { return DenseMatrix(m_); }

    cplx operator()(Index r, Index c) const { return m_.coeff(r, c); }

    Operator adjoint() const { return Operator(SparseMatrix(m_.adjoint())); }

    /// Largest entry magnitude, ‖A‖_max.
    double max_abs() const {
        double best = 0.0;
        for (Index k = 0; k < m_.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(m_, k); it; ++it) best = std::max(best, std::abs(it.value()));
        }
        return best;
    }

    /// ‖A − A†‖_max.
    double hermiticity_defect() const {
        SparseMatrix diff = m_ - SparseMatrix(m_.adjoint());
        double best = 0.0;
        for (Index k = 0; k < diff.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(diff, k); it; ++it) best = std::max(best, std::abs(it.value()));
        }
        return best;
    }

    bool is_hermitian(double rel_tol = 1e-12) const {
        return hermiticity_defect() <= rel_tol * std::max(max_abs(), std::numeric_limits<double>::min());
    }

    double trace_real() const {
        double t = 0.0;
        for (Index i = 0; i < dim(); ++i) t += m_.coeff(i, i).real();
        return t;
    }

    Operator& operator+=(const Operator& o) {
        check_same(o);
        m_ += o.m_;
        return *this;
    }
    Operator& operator-=(const Operator& o) {
        check_same(o);
        m_ -= o.m_;
        return *this;
    }
    Operator& operator*=(cplx s) {
        m_ *= s;
        return *this;
    }

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(double s, Operator a) { return a *= cplx(s, 0.0); }
    friend Operator operator*(const Operator& a, const Operator& b) {
        a.check_same(b);
        return Operator(SparseMatrix(a.m_ * b.m_));
    }

private:
    void check_same(const Operator& o) const {
        require(o.dim() == dim(), ErrorKind::validation,
                "operator dimension mismatch: " + std::to_string(dim()) + " vs " + std::to_string(o.dim()));
    }

    SparseMatrix m_;
};

/// Commutator [A, B].
inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ------------------------------- charge basis --------------------------------

/// Cooper-pair number states n ∈ [−ncut, ncut].
struct ChargeBasis {
    int ncut = 0;
    Index dim() const noexcept { return 2 * static_cast<Index>(ncut) + 1; }
};

inline void validate(const ChargeBasis& b) {
    require(b.ncut >= 1, ErrorKind::invalid_basis, "charge basis needs ncut >= 1, got " + std::to_string(b.ncut));
}

inline Operator charge_number(int ncut) {
    validate(ChargeBasis{ncut});
    std::vector<double> d;
    for (int n = -ncut; n <= ncut; ++n) d.push_back(n);
    return Operator::diagonal(d);
}

/// e^{−iφ}: |n⟩ → |n−1⟩. The top state |ncut⟩ is mapped and |−ncut⟩ is annihilated.
inline Operator charge_lowering(int ncut) {
    validate(ChargeBasis{ncut});
    const Index d = ChargeBasis{ncut}.dim();
    std::vector<Triplet> t;
    for (Index i = 0; i + 1 < d; ++i) t.emplace_back(i, i + 1, 1.0);
    return Operator::from_triplets(d, t);
}

inline Operator cos_phi(int ncut) {
    const Operator lo = charge_lowering(ncut);
    return 0.5 * (lo + lo.adjoint());
}

inline Operator sin_phi(int ncut) {
    // e^{iφ} = lowering†
    const Operator lo = charge_lowering(ncut);
    return cplx(0.0, -0.5) * (lo.adjoint() - lo);
}

// ----------------------------- oscillator basis ------------------------------

/// Truncated Fock basis of an LC mode. The impedance fixes the zero-point
/// amplitudes: φ_zpf = sqrt(4π Z / R_K), n_zpf = 1 / (2 φ_zpf).
struct OscillatorBasis {
    int nlevels = 0;
    double frequency_ghz = 0.0;
    double impedance_ohm = 0.0;

    static OscillatorBasis from_lc(int nlevels, double inductance_nh, double capacitance_ff) {
        const double l = inductance_nh * units::nano;
        const double c = capacitance_ff * units::femto;
        return {nlevels, 1.0 / (2.0 * std::numbers::pi * std::sqrt(l * c)) / units::giga, std::sqrt(l / c)};
    }

    double phase_zpf() const { return std::sqrt(4.0 * std::numbers::pi * impedance_ohm / units::von_klitzing); }
    double charge_zpf() const { return 0.5 / phase_zpf(); }
};

inline void validate(const OscillatorBasis& b) {
    require(b.nlevels >= 2, ErrorKind::invalid_basis, "oscillator basis needs nlevels >= 2");
    require(b.frequency_ghz > 0.0 && std::isfinite(b.frequency_ghz), ErrorKind::invalid_basis,
            "oscillator frequency must be positive");
    require(b.impedance_ohm > 0.0 && std::isfinite(b.impedance_ohm), ErrorKind::invalid_basis,
            "oscillator impedance must be positive");
}

struct Ladder {
    Operator a;
    Operator a_dagger;
};

inline Ladder osc_ladder(const OscillatorBasis& b) {
    validate(b);
    std::vector<Triplet> t;
    for (Index n = 1; n < b.nlevels; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    Operator a = Operator::from_triplets(b.nlevels, t);
    Operator ad = a.adjoint();
    return {std::move(a), std::move(ad)};
}

inline Operator osc_number(const OscillatorBasis& b) {
    validate(b);
    std::vector<double> d;
    for (int n = 0; n < b.nlevels; ++n) d.push_back(n);
    return Operator::diagonal(d);
}

/// φ = φ_zpf (a + a†).
inline Operator osc_phase(const OscillatorBasis& b) {
    const auto [a, ad] = osc_ladder(b);
    return b.phase_zpf() * (a + ad);
}

/// n = i n_zpf (a† − a), so that [φ, n] = i on the interior block.
inline Operator osc_charge(const OscillatorBasis& b) {
    const auto [a, ad] = osc_ladder(b);
    return cplx(0.0, b.charge_zpf()) * (ad - a);
}

namespace detail {

// Matrix elements of (a + a†)² or −(a† − a)² projected onto the truncated space
// (not the square of the truncated operator, which is wrong on the top row).
inline Operator quadrature_squared(const OscillatorBasis& b, double sign_offdiag, double scale) {
    validate(b);
    std::vector<Triplet> t;
    const Index n = b.nlevels;
    for (Index k = 0; k < n; ++k) {
        t.emplace_back(k, k, scale * (2.0 * static_cast<double>(k) + 1.0));
        if (k + 2 < n) {
            const double v = sign_offdiag * scale * std::sqrt(static_cast<double>((k + 1) * (k + 2)));
            t.emplace_back(k, k + 2, v);
            t.emplace_back(k + 2, k, v);
        }
    }
    return Operator::from_triplets(n, t);
}

// ⟨m| exp(iλ(a + a†)) |n⟩ via displacement-operator Laguerre formula; returned
// as real part (cos) or imaginary part (sin) of the exponential.
inline DenseMatrix displacement_trig(int nlevels, double lambda, bool want_cos) {
    DenseMatrix out = DenseMatrix::Zero(nlevels, nlevels);
    const double y = lambda * lambda;
    const double pref = std::exp(-0.5 * y);
    for (int m = 0; m < nlevels; ++m) {
        for (int n = 0; n <= m; ++n) {
            const int k = m - n;
            if ((k % 2 == 0) != want_cos) continue;
            // generalized Laguerre L_n^{(k)}(y)
            double lm1 = 1.0;
            double l = 1.0;
            if (n >= 1) {
                l = 1.0 + k - y;
                for (int j = 1; j < n; ++j) {
                    const double next = ((2.0 * j + 1.0 + k - y) * l - (j + k) * lm1) / (j + 1.0);
                    lm1 = l;
                    l = next;
                }
            }
            // sqrt(n!/m!) λ^k
            const double log_ratio = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
            double mag = std::exp(log_ratio + (k > 0 ? k * std::log(std::abs(lambda)) : 0.0));
            if (k > 0 && lambda < 0.0 && (k % 2 == 1)) mag = -mag;
            // i^k: real for even k (sign (−1)^{k/2}); for odd k the sin part is i^{k−1}
            const double phase = want_cos ? ((k / 2) % 2 == 0 ? 1.0 : -1.0) : (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0);
            const double v = phase * pref * mag * l;
            out(m, n) = v;
            out(n, m) = v;
        }
    }
    return out;
}

} // namespace detail

/// φ² with exact truncated matrix elements.
inline Operator osc_phase_squared(const OscillatorBasis& b) {
    const double z = b.phase_zpf();
    return detail::quadrature_squared(b, +1.0, z * z);
}

/// n² with exact truncated matrix elements.
inline Operator osc_charge_squared(const OscillatorBasis& b) {
    const double z = b.charge_zpf();
    return detail::quadrature_squared(b, -1.0, z * z);
}

/// cos(φ) with exact matrix elements between retained Fock states.
inline Operator osc_cos_phase(const OscillatorBasis& b) {
    validate(b);
    return Operator::from_dense(detail::displacement_trig(b.nlevels, b.phase_zpf(), true));
}

/// sin(φ) with exact matrix elements between retained Fock states.
inline Operator osc_sin_phase(const OscillatorBasis& b) {
    validate(b);
    return Operator::from_dense(detail::displacement_trig(b.nlevels, b.phase_zpf(), false));
}

// ------------------------------ tensor products ------------------------------

inline SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    const Index rb = b.rows();
    const Index cb = b.cols();
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Index i = 0; i < a.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator ia(a, i); ia; ++ia) {
            for (Index j = 0; j < b.outerSize(); ++j) {
                for (SparseMatrix::InnerIterator ib(b, j); ib; ++ib) {
                    t.emplace_back(ia.row() * rb + ib.row(), ia.col() * cb + ib.col(), ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(a.rows() * rb, a.cols() * cb);
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

/// Kronecker product in the given mode order (first factor is the slowest index).
inline Operator tensor_embed(std::span<const Operator> factors, Index cap = default_dimension_cap) {
    require(!factors.empty(), ErrorKind::validation, "tensor_embed needs at least one factor");
    double total = 1.0;
    for (const auto& f : factors) total *= static_cast<double>(f.dim());
    require(total <= static_cast<double>(cap), ErrorKind::truncation_too_large,
            "composite dimension " + std::to_string(static_cast<long long>(total)) + " exceeds cap " +
                std::to_string(cap));
    SparseMatrix acc = factors.front().matrix();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i].matrix());
    return Operator(std::move(acc));
}

inline Operator tensor_embed(std::initializer_list<Operator> factors, Index cap = default_dimension_cap) {
    return tensor_embed(std::span<const Operator>(factors.begin(), factors.size()), cap);
}

/// Place `op` at position `slot` of a product space with the given mode dimensions.
inline Operator embed(const Operator& op, std::size_t slot, std::span<const Index> dims,
                      Index cap = default_dimension_cap) {
    require(slot < dims.size() && dims[slot] == op.dim(), ErrorKind::validation, "embed: slot/dimension mismatch");
    std::vector<Operator> f;
    f.reserve(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) f.push_back(i == slot ? op : Operator::identity(dims[i]));
    return tensor_embed(std::span<const Operator>(f), cap);
}

} // namespace fluxusc::core
