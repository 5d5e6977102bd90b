#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anisowave/geometry.hpp"
#include "anisowave/grid.hpp"

namespace aniso {

// Closed family of phase-space symbols with exact analytic gradients.
//   poly_xi_plus_vx : p(xi) + v x            (d = 1)
//   poly_x_plus_vxi : p(x) - v xi            (d = 1)
//   radial_power    : c psi_delta(z) (|x|^{2k} + |xi|^{2m})^{(1/k + 1/m)/2}
//   quadratic       : (x, xi) A (x, xi)^T, A symmetric 2x2   (d = 1)
//   nonsmooth_sum   : psi_delta(z) (c1 |x|^{2k/(2k-1)} + c2 |xi|^{2k}); C^1
//                     but not smooth at x = 0, flagged non_smooth_warning
// Any variant may carry an additive imaginary constant (imag_shift).
struct SymbolDescriptor {
    enum class Kind { poly_xi_plus_vx, poly_x_plus_vxi, radial_power, quadratic, nonsmooth_sum };
    Kind kind = Kind::quadratic;

    std::vector<double> p_coeffs;  // ascending powers, degree >= 1
    double v = 0.0;
    double c = 1.0, c2 = 0.0;
    int k = 1, m = 1;
    double delta = 0.1;
    double axx = 0.5, axxi = 0.0, axixi = 0.5;  // A = [[axx, axxi], [axxi, axixi]]
    double imag_shift = 0.0;
    bool non_smooth_warning = false;

    static SymbolDescriptor poly_xi_plus_vx(std::vector<double> p, double v_) {
        if (p.size() < 2) throw std::invalid_argument("symbol: polynomial degree must be >= 1");
        SymbolDescriptor s; s.kind = Kind::poly_xi_plus_vx; s.p_coeffs = std::move(p); s.v = v_;
        return s;
    }
    static SymbolDescriptor poly_x_plus_vxi(std::vector<double> p, double v_) {
        if (p.size() < 2) throw std::invalid_argument("symbol: polynomial degree must be >= 1");
        SymbolDescriptor s; s.kind = Kind::poly_x_plus_vxi; s.p_coeffs = std::move(p); s.v = v_;
        return s;
    }
    static SymbolDescriptor radial_power(double c_, int k_, int m_, double delta_) {
        if (k_ < 1 || m_ < 1) throw std::invalid_argument("radial_power: k, m must be >= 1");
        if (!(delta_ > 0.0)) throw std::invalid_argument("radial_power: delta must be positive");
        SymbolDescriptor s; s.kind = Kind::radial_power; s.c = c_; s.k = k_; s.m = m_; s.delta = delta_;
        return s;
    }
    static SymbolDescriptor quadratic(double a11, double a12, double a22) {
        SymbolDescriptor s; s.kind = Kind::quadratic; s.axx = a11; s.axxi = a12; s.axixi = a22;
        return s;
    }
    static SymbolDescriptor harmonic(double scale = 0.5) { return quadratic(scale, 0.0, scale); }
    // Example-2 style symbol: representable, but flagged as outside the smooth
    // calculus (the |x|^{2k/(2k-1)} term is not smooth at x = 0).
    static SymbolDescriptor nonsmooth_sum(double c1_, double c2_, int k_, double delta_) {
        if (k_ < 1) throw std::invalid_argument("nonsmooth_sum: k must be >= 1");
        if (!(delta_ > 0.0)) throw std::invalid_argument("nonsmooth_sum: delta must be positive");
        SymbolDescriptor s; s.kind = Kind::nonsmooth_sum; s.c = c1_; s.c2 = c2_; s.k = k_; s.delta = delta_;
        s.non_smooth_warning = true;
        return s;
    }
    static SymbolDescriptor shifted(SymbolDescriptor base, double imag_const) {
        base.imag_shift += imag_const;
        return base;
    }

    SymbolDescriptor conjugated() const {
        SymbolDescriptor s = *this;
        s.imag_shift = -s.imag_shift;
        return s;
    }
    bool is_real() const { return imag_shift == 0.0; }

    // Natural sigma for the homogeneous variants.
    double natural_sigma() const {
        switch (kind) {
            case Kind::poly_xi_plus_vx: return 1.0 / (static_cast<double>(p_coeffs.size() - 1) - 1.0);
            case Kind::poly_x_plus_vxi: return static_cast<double>(p_coeffs.size() - 1) - 1.0;
            case Kind::radial_power: return static_cast<double>(k) / static_cast<double>(m);
            case Kind::quadratic: return 1.0;
            case Kind::nonsmooth_sum: return 1.0 / (2.0 * k - 1.0);
        }
        return 1.0;
    }
};

namespace detail {

inline double polyval(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

inline double polyder(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) r = r * x + c[i] * static_cast<double>(i);
    return r;
}

}  // namespace detail

struct SymbolGradient {
    std::vector<double> gx, gxi;  // gradient of the real part
};

inline double eval_symbol_real(const SymbolDescriptor& s, const PhasePoint& z) {
    using Kind = SymbolDescriptor::Kind;
    switch (s.kind) {
        case Kind::poly_xi_plus_vx:
            if (z.dim() != 1) throw std::invalid_argument("poly symbol: d = 1 only");
            return detail::polyval(s.p_coeffs, z.xi[0]) + s.v * z.x[0];
        case Kind::poly_x_plus_vxi:
            if (z.dim() != 1) throw std::invalid_argument("poly symbol: d = 1 only");
            return detail::polyval(s.p_coeffs, z.x[0]) - s.v * z.xi[0];
        case Kind::radial_power: {
            double r2 = 0.0;
            for (double t : z.x) r2 += t * t;
            for (double t : z.xi) r2 += t * t;
            double psi = cutoff_ramp(r2, s.delta);
            if (psi == 0.0) return 0.0;
            double p = 0.5 * (1.0 / s.k + 1.0 / s.m);
            double core = std::pow(z.x_norm(), 2.0 * s.k) + std::pow(z.xi_norm(), 2.0 * s.m);
            return s.c * psi * std::pow(core, p);
        }
        case Kind::quadratic: {
            if (z.dim() != 1) throw std::invalid_argument("quadratic symbol: d = 1 only");
            double x = z.x[0], xi = z.xi[0];
            return s.axx * x * x + 2.0 * s.axxi * x * xi + s.axixi * xi * xi;
        }
        case Kind::nonsmooth_sum: {
            if (z.dim() != 1) throw std::invalid_argument("nonsmooth symbol: d = 1 only");
            double r2 = z.x[0] * z.x[0] + z.xi[0] * z.xi[0];
            double psi = cutoff_ramp(r2, s.delta);
            if (psi == 0.0) return 0.0;
            double px = 2.0 * s.k / (2.0 * s.k - 1.0);
            return psi * (s.c * std::pow(std::abs(z.x[0]), px) + s.c2 * std::pow(std::abs(z.xi[0]), 2.0 * s.k));
        }
    }
    return 0.0;
}

inline cplx eval_symbol(const SymbolDescriptor& s, const PhasePoint& z) {
    return cplx(eval_symbol_real(s, z), s.imag_shift);
}

// Exact analytic gradient of the real part; no finite differences. Inside a
// cutoff dead zone the symbol vanishes identically and the gradient is an
// exact zero.
inline SymbolGradient eval_gradient(const SymbolDescriptor& s, const PhasePoint& z) {
    using Kind = SymbolDescriptor::Kind;
    SymbolGradient g;
    g.gx.assign(z.dim(), 0.0);
    g.gxi.assign(z.dim(), 0.0);
    switch (s.kind) {
        case Kind::poly_xi_plus_vx:
            g.gx[0] = s.v;
            g.gxi[0] = detail::polyder(s.p_coeffs, z.xi[0]);
            break;
        case Kind::poly_x_plus_vxi:
            g.gx[0] = detail::polyder(s.p_coeffs, z.x[0]);
            g.gxi[0] = -s.v;
            break;
        case Kind::radial_power: {
            double r2 = 0.0;
            for (double t : z.x) r2 += t * t;
            for (double t : z.xi) r2 += t * t;
            double psi = cutoff_ramp(r2, s.delta);
            if (psi == 0.0) break;  // dead zone: exact zero
            double nx = z.x_norm(), nxi = z.xi_norm();
            double p = 0.5 * (1.0 / s.k + 1.0 / s.m);
            double core = std::pow(nx, 2.0 * s.k) + std::pow(nxi, 2.0 * s.m);
            double val = std::pow(core, p);
            double dpsi = cutoff_ramp_derivative(r2, s.delta);
            // d core / d x_i = 2k |x|^{2k-2} x_i, likewise in xi with m
            double cx = 2.0 * s.k * std::pow(nx, 2.0 * (s.k - 1));
            double cxi = 2.0 * s.m * std::pow(nxi, 2.0 * (s.m - 1));
            double dval = (core > 0.0) ? p * std::pow(core, p - 1.0) : 0.0;
            for (std::size_t i = 0; i < z.dim(); ++i) {
                g.gx[i] = s.c * (dpsi * 2.0 * z.x[i] * val + psi * dval * cx * z.x[i]);
                g.gxi[i] = s.c * (dpsi * 2.0 * z.xi[i] * val + psi * dval * cxi * z.xi[i]);
            }
            break;
        }
        case Kind::quadratic:
            g.gx[0] = 2.0 * (s.axx * z.x[0] + s.axxi * z.xi[0]);
            g.gxi[0] = 2.0 * (s.axxi * z.x[0] + s.axixi * z.xi[0]);
            break;
        case Kind::nonsmooth_sum: {
            double x = z.x[0], xi = z.xi[0];
            double r2 = x * x + xi * xi;
            double psi = cutoff_ramp(r2, s.delta);
            if (psi == 0.0) break;
            double px = 2.0 * s.k / (2.0 * s.k - 1.0);
            double val = s.c * std::pow(std::abs(x), px) + s.c2 * std::pow(std::abs(xi), 2.0 * s.k);
            double dpsi = cutoff_ramp_derivative(r2, s.delta);
            double sgnx = (x > 0.0) - (x < 0.0);
            double dvx = (x != 0.0) ? s.c * px * std::pow(std::abs(x), px - 1.0) * sgnx : 0.0;
            double dvxi = s.c2 * 2.0 * s.k * std::pow(std::abs(xi), 2.0 * s.k - 1.0) * ((xi > 0.0) - (xi < 0.0));
            g.gx[0] = dpsi * 2.0 * x * val + psi * dvx;
            g.gxi[0] = dpsi * 2.0 * xi * val + psi * dvxi;
            break;
        }
    }
    return g;
}

// {f, g} = <grad_xi f, grad_x g> - <grad_x f, grad_xi g>, exact.
inline double poisson_bracket(const SymbolDescriptor& f, const SymbolDescriptor& gsym, const PhasePoint& z) {
    SymbolGradient a = eval_gradient(f, z), b = eval_gradient(gsym, z);
    double s = 0.0;
    for (std::size_t i = 0; i < z.dim(); ++i) s += a.gxi[i] * b.gx[i] - a.gx[i] * b.gxi[i];
    return s;
}

struct HomogeneityReport {
    double order = 0.0;
    double max_rel_err = 0.0;
    bool pass = false;
    double tolerance = 1e-10;
    int samples = 0;
};

// Checks a(Lambda_sigma(lambda) z) = lambda^order a(z) on random unit points
// and lambda in [1, 100]; cutoff symbols are probed where psi == 1 on both
// sides (|z| = 1 >= delta and |Lambda z| >= 1).
inline HomogeneityReport check_homogeneity(const SymbolDescriptor& s, const AnisotropyIndex& a, double order,
                                           int samples, std::uint64_t seed = 42) {
    if (samples < 1) throw std::invalid_argument("check_homogeneity: samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> lam(1.0, 100.0);
    HomogeneityReport rep;
    rep.order = order;
    rep.samples = samples;
    for (int i = 0; i < samples; ++i) {
        PhasePoint z = unit_direction(ang(rng));
        double l = lam(rng);
        double base = eval_symbol_real(s, z);
        double scaled = eval_symbol_real(s, aniso_scale(z, l, a));
        double expect = std::pow(l, order) * base;
        double denom = std::max({std::abs(scaled), std::abs(expect), 1e-300});
        rep.max_rel_err = std::max(rep.max_rel_err, std::abs(scaled - expect) / denom);
    }
    rep.pass = rep.max_rel_err <= rep.tolerance;
    return rep;
}

// Symbol sampled on the STFT phase-grid layout (x rows, xi columns).
struct SymbolField {
    Grid grid;
    std::vector<double> vals;  // rows = x index, cols = xi index, size n*n

    double& at(std::size_t j, std::size_t k) { return vals[j * grid.n + k]; }
    double at(std::size_t j, std::size_t k) const { return vals[j * grid.n + k]; }
};

inline SymbolField sample_symbol(const SymbolDescriptor& s, const Grid& g) {
    SymbolField f;
    f.grid = g;
    f.vals.resize(g.n * g.n);
    parallel_for(g.n, [&](std::size_t j) {
        for (std::size_t k = 0; k < g.n; ++k)
            f.vals[j * g.n + k] = eval_symbol_real(s, PhasePoint(g.x(j), g.xi(k)));
    });
    return f;
}

// --- JSON (experiment configs) ---------------------------------------------

inline nlohmann::json symbol_to_json(const SymbolDescriptor& s) {
    nlohmann::json j;
    using Kind = SymbolDescriptor::Kind;
    switch (s.kind) {
        case Kind::poly_xi_plus_vx: j["variant"] = "poly_xi_plus_vx"; j["p"] = s.p_coeffs; j["v"] = s.v; break;
        case Kind::poly_x_plus_vxi: j["variant"] = "poly_x_plus_vxi"; j["p"] = s.p_coeffs; j["v"] = s.v; break;
        case Kind::radial_power:
            j["variant"] = "radial_power"; j["c"] = s.c; j["k"] = s.k; j["m"] = s.m; j["delta"] = s.delta;
            break;
        case Kind::quadratic:
            j["variant"] = "quadratic"; j["a"] = {s.axx, s.axxi, s.axixi};
            break;
        case Kind::nonsmooth_sum:
            j["variant"] = "nonsmooth_sum"; j["c1"] = s.c; j["c2"] = s.c2; j["k"] = s.k; j["delta"] = s.delta;
            break;
    }
    if (s.imag_shift != 0.0) j["imag_shift"] = s.imag_shift;
    if (s.non_smooth_warning) j["non_smooth_warning"] = true;
    return j;
}

inline SymbolDescriptor symbol_from_json(const nlohmann::json& j) {
    std::string variant = j.at("variant").get<std::string>();
    SymbolDescriptor s;
    if (variant == "poly_xi_plus_vx")
        s = SymbolDescriptor::poly_xi_plus_vx(j.at("p").get<std::vector<double>>(), j.at("v").get<double>());
    else if (variant == "poly_x_plus_vxi")
        s = SymbolDescriptor::poly_x_plus_vxi(j.at("p").get<std::vector<double>>(), j.at("v").get<double>());
    else if (variant == "radial_power")
        s = SymbolDescriptor::radial_power(j.at("c").get<double>(), j.at("k").get<int>(), j.at("m").get<int>(),
                                           j.at("delta").get<double>());
    else if (variant == "quadratic") {
        auto a = j.at("a").get<std::vector<double>>();
        if (a.size() != 3) throw std::invalid_argument("symbol_from_json: quadratic needs 3 entries");
        s = SymbolDescriptor::quadratic(a[0], a[1], a[2]);
    } else if (variant == "nonsmooth_sum")
        s = SymbolDescriptor::nonsmooth_sum(j.at("c1").get<double>(), j.at("c2").get<double>(), j.at("k").get<int>(),
                                            j.at("delta").get<double>());
    else
        throw std::invalid_argument("symbol_from_json: unknown variant " + variant);
    if (j.contains("imag_shift")) s.imag_shift = j["imag_shift"].get<double>();
    return s;
}

}  // namespace aniso
