#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "anisowave/grid.hpp"
#include "anisowave/parallel.hpp"
#include "anisowave/symbols.hpp"

namespace aniso {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Vector to_vector(const Signal& s) {
    Vector v(static_cast<Eigen::Index>(s.samples.size()));
    for (std::size_t i = 0; i < s.samples.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.samples[i];
    return v;
}

inline Signal to_signal(const Grid& g, const Vector& v) {
    std::vector<cplx> s(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s[i] = v(static_cast<Eigen::Index>(i));
    return Signal(g, std::move(s));
}

struct QuantizeResult {
    Matrix op;
    double hermitian_defect = 0.0;  // max |M - M*|/2 entry removed for real symbols
};

constexpr std::size_t kQuantizeMaxN = 1024;

namespace detail {

// Row-wise DFT quadrature of the Weyl kernel:
//   M[i][j] = (1/n) sum_l a((x_i + x_j)/2, xi_l) e^{i xi_l (x_i - x_j)}.
template <typename SymbolAt>
inline Matrix weyl_matrix(const Grid& g, SymbolAt&& value_at) {
    const std::size_t n = g.n;
    Matrix M(n, n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx acc(0.0, 0.0);
            double diff = g.x(i) - g.x(j);
            for (std::size_t l = 0; l < n; ++l)
                acc += value_at(i, j, l) * std::polar(1.0, g.xi(l) * diff);
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc / static_cast<double>(n);
        }
    });
    return M;
}

inline void hermitify(QuantizeResult& r) {
    Matrix adj = r.op.adjoint();
    r.hermitian_defect = (r.op - adj).cwiseAbs().maxCoeff() / 2.0;
    r.op = 0.5 * (r.op + adj);
}

}  // namespace detail

// Dense Weyl quantization of a descriptor. Separable polynomial variants use
// the exact multiplier + diagonal split; everything else goes through the
// generic midpoint quadrature. Real symbols are Hermitified afterwards and
// the removed defect recorded.
inline QuantizeResult quantize(const SymbolDescriptor& s, const Grid& g) {
    if (g.n > kQuantizeMaxN) throw std::invalid_argument("quantize: grid too large (n <= 1024)");
    const std::size_t n = g.n;
    QuantizeResult r;
    using Kind = SymbolDescriptor::Kind;
    if (s.kind == Kind::poly_xi_plus_vx || s.kind == Kind::poly_x_plus_vxi) {
        // multiplier part via one dense DFT-quadrature pass on p, diagonal for
        // the linear part; exact for grid frequencies
        Matrix M = Matrix::Zero(n, n);
        if (s.kind == Kind::poly_xi_plus_vx) {
            M = detail::weyl_matrix(g, [&](std::size_t, std::size_t, std::size_t l) {
                return cplx(detail::polyval(s.p_coeffs, g.xi(l)), 0.0);
            });
            for (std::size_t i = 0; i < n; ++i)
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += s.v * g.x(i);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = detail::polyval(s.p_coeffs, g.x(i));
            Matrix D = detail::weyl_matrix(g, [&](std::size_t, std::size_t, std::size_t l) {
                return cplx(-s.v * g.xi(l), 0.0);
            });
            M += D;
        }
        r.op = std::move(M);
    } else {
        r.op = detail::weyl_matrix(g, [&](std::size_t i, std::size_t j, std::size_t l) {
            PhasePoint z(0.5 * (g.x(i) + g.x(j)), g.xi(l));
            double v = eval_symbol_real(s, z);
            if (!std::isfinite(v)) throw std::runtime_error("quantize: symbol non-finite on quadrature set");
            return cplx(v, 0.0);
        });
    }
    if (s.is_real()) detail::hermitify(r);
    if (s.imag_shift != 0.0) r.op += cplx(0.0, s.imag_shift) * Matrix::Identity(n, n);
    return r;
}

// Quantization of a sampled field; midpoints interpolate linearly along x.
inline QuantizeResult quantize(const SymbolField& f, const Grid& g) {
    if (f.grid != g) throw std::invalid_argument("quantize: field grid mismatch");
    if (g.n > kQuantizeMaxN) throw std::invalid_argument("quantize: grid too large (n <= 1024)");
    const std::size_t n = g.n;
    QuantizeResult r;
    r.op = detail::weyl_matrix(g, [&](std::size_t i, std::size_t j, std::size_t l) {
        // (x_i + x_j)/2 sits on the half grid; average the two flanking rows
        std::size_t lo = (i + j) / 2;
        if ((i + j) % 2 == 0) return cplx(f.at(lo, l), 0.0);
        return cplx(0.5 * (f.at(lo, l) + f.at(std::min(lo + 1, n - 1), l)), 0.0);
    });
    detail::hermitify(r);
    return r;
}

namespace detail {

inline double power_iteration_norm(const Matrix& B, int iters, std::uint64_t seed = 11) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(B.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();
    Matrix BtB = B.adjoint() * B;  // power-iterate on B*B for the 2-norm
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector w = BtB * v;
        lam = w.norm();
        if (lam == 0.0) return 0.0;
        v = w / lam;
    }
    return std::sqrt(lam);
}

}  // namespace detail

// Self-adjointness defect of the raw quadrature: operator-norm estimate of
// quantize(a)* - quantize(a) via power iteration (50 steps). Zero for real
// symbols up to rounding; 2 |imag_const| for shifted ones.
inline double adjoint_defect(const SymbolDescriptor& s, const Grid& g) {
    SymbolDescriptor base = s;
    base.imag_shift = 0.0;
    // raw quadrature without Hermitification
    Matrix op = detail::weyl_matrix(g, [&](std::size_t i, std::size_t j, std::size_t l) {
        PhasePoint z(0.5 * (g.x(i) + g.x(j)), g.xi(l));
        return cplx(eval_symbol_real(base, z), 0.0);
    });
    if (s.imag_shift != 0.0)
        op += cplx(0.0, s.imag_shift) * Matrix::Identity(static_cast<Eigen::Index>(g.n), static_cast<Eigen::Index>(g.n));
    Matrix B = op.adjoint() - op;
    return detail::power_iteration_norm(B, 50);
}

}  // namespace aniso
