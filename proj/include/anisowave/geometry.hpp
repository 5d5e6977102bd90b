#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace aniso {

// Anisotropy parameter sigma > 0; rational kind carries (k, m) with
// sigma = k/m, required by the w_{k,m} weight.
struct AnisotropyIndex {
    enum class Kind { rational, real };
    Kind kind = Kind::rational;
    int k = 1, m = 1;
    double sigma_real = 1.0;

    static AnisotropyIndex rational(int k, int m) {
        if (k < 1 || m < 1) throw std::invalid_argument("AnisotropyIndex: k, m must be >= 1");
        AnisotropyIndex a; a.kind = Kind::rational; a.k = k; a.m = m;
        a.sigma_real = static_cast<double>(k) / static_cast<double>(m);
        return a;
    }
    static AnisotropyIndex real(double s) {
        if (!(s > 0.0)) throw std::invalid_argument("AnisotropyIndex: sigma must be positive");
        AnisotropyIndex a; a.kind = Kind::real; a.sigma_real = s;
        return a;
    }

    double sigma() const { return sigma_real; }
    bool is_rational() const { return kind == Kind::rational; }
};

// Point (x, xi) of phase space, any dimension d >= 1.
struct PhasePoint {
    std::vector<double> x, xi;

    PhasePoint() = default;
    PhasePoint(std::vector<double> x_, std::vector<double> xi_) : x(std::move(x_)), xi(std::move(xi_)) {
        if (x.size() != xi.size() || x.empty()) throw std::invalid_argument("PhasePoint: dimension mismatch");
    }
    PhasePoint(double x1, double xi1) : x{x1}, xi{xi1} {}

    std::size_t dim() const { return x.size(); }
    double x_norm() const {
        double s = 0.0;
        for (double v : x) s += v * v;
        return std::sqrt(s);
    }
    double xi_norm() const {
        double s = 0.0;
        for (double v : xi) s += v * v;
        return std::sqrt(s);
    }
    double norm() const { return std::hypot(x_norm(), xi_norm()); }
    bool finite() const {
        for (double v : x) if (!std::isfinite(v)) return false;
        for (double v : xi) if (!std::isfinite(v)) return false;
        return true;
    }
};

inline PhasePoint unit_direction(double angle_rad) { return PhasePoint(std::cos(angle_rad), std::sin(angle_rad)); }

inline double direction_angle_deg(const PhasePoint& p) {
    if (p.dim() != 1) throw std::invalid_argument("direction_angle_deg: d = 1 only");
    double a = std::atan2(p.xi[0], p.x[0]) * 180.0 / M_PI;
    return a < 0.0 ? a + 360.0 : a;
}

// theta_sigma(x, xi) = 1 + |x| + |xi|^{1/sigma}
inline double theta_weight(const PhasePoint& z, const AnisotropyIndex& a) {
    return 1.0 + z.x_norm() + std::pow(z.xi_norm(), 1.0 / a.sigma());
}

// w_{k,m}(x, xi) = (1 + |x|^{2k} + |xi|^{2m})^{1/2}; rational kind only.
inline double wkm_weight(const PhasePoint& z, const AnisotropyIndex& a) {
    if (!a.is_rational()) throw std::invalid_argument("wkm_weight: rational anisotropy required");
    return std::sqrt(1.0 + std::pow(z.x_norm(), 2.0 * a.k) + std::pow(z.xi_norm(), 2.0 * a.m));
}

// Lambda_sigma(lambda)(x, xi) = (lambda x, lambda^sigma xi)
inline PhasePoint aniso_scale(const PhasePoint& z, double lambda, const AnisotropyIndex& a) {
    if (!(lambda > 0.0)) throw std::invalid_argument("aniso_scale: lambda must be positive");
    PhasePoint out = z;
    double ls = std::pow(lambda, a.sigma());
    for (auto& v : out.x) v *= lambda;
    for (auto& v : out.xi) v *= ls;
    return out;
}

// J(x, xi) = (xi, -x)
inline PhasePoint symplectic_j(const PhasePoint& z) {
    PhasePoint out;
    out.x = z.xi;
    out.xi = z.x;
    for (auto& v : out.xi) v = -v;
    return out;
}

struct SphereDecomposition {
    double lambda = 1.0;
    PhasePoint unit;
};

// Unique (lambda, u) with |u| = 1 and Lambda_sigma(lambda) u = z. The scale
// solves g(lambda) = |x|^2/lambda^2 + |xi|^2/lambda^{2 sigma} - 1 = 0, which
// is strictly decreasing; bracket by {|z|, |z|^{1/sigma}, 1}, bisect, then
// polish with Newton.
inline SphereDecomposition sphere_decompose(const PhasePoint& z, const AnisotropyIndex& a) {
    const double nx = z.x_norm(), nxi = z.xi_norm();
    const double nz = std::hypot(nx, nxi);
    if (!(nz > 0.0)) throw std::invalid_argument("sphere_decompose: z must be nonzero");
    const double s = a.sigma();

    auto g = [&](double lam) {
        double t1 = nx / lam;
        double t2 = nxi / std::pow(lam, s);
        return t1 * t1 + t2 * t2 - 1.0;
    };
    double c1 = nz, c2 = std::pow(nz, 1.0 / s);
    double lo = std::min({c1, c2, 1.0});
    double hi = std::max({c1, c2, 1.0});
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    double lam = 0.5 * (lo + hi);
    for (int it = 0; it < 20; ++it) {
        double t1 = nx / lam, t2 = nxi / std::pow(lam, s);
        double val = t1 * t1 + t2 * t2 - 1.0;
        double der = -2.0 * t1 * t1 / lam - 2.0 * s * t2 * t2 / lam;
        if (der == 0.0) break;
        double next = lam - val / der;
        if (next > 0.0 && std::isfinite(next)) lam = next;
    }

    SphereDecomposition out;
    out.lambda = lam;
    out.unit = z;
    double ls = std::pow(lam, s);
    for (auto& v : out.unit.x) v /= lam;
    for (auto& v : out.unit.xi) v /= ls;
    return out;
}

// Smooth radial cutoff psi_delta: 0 on B_{delta/2}, 1 outside B_delta.
// Fixed ramp chi(t) = e(t - d^2/4) / (e(t - d^2/4) + e(d^2 - t)) with
// e(s) = exp(-1/s) for s > 0 else 0, evaluated at t = |z|^2.
inline double cutoff_ramp(double t, double delta) {
    auto e = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    double d2 = delta * delta;
    double a = e(t - 0.25 * d2);
    double b = e(d2 - t);
    if (a == 0.0) return 0.0;
    if (b == 0.0) return 1.0;
    return a / (a + b);
}

inline double cutoff_psi(const PhasePoint& z, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("cutoff_psi: delta must be positive");
    double r = z.norm();
    return cutoff_ramp(r * r, delta);
}

// d/dt of the ramp; used by exact symbol gradients.
inline double cutoff_ramp_derivative(double t, double delta) {
    auto e = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
    auto ep = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; };
    double d2 = delta * delta;
    double sa = t - 0.25 * d2, sb = d2 - t;
    double a = e(sa), b = e(sb);
    if (a == 0.0 || b == 0.0) return 0.0;
    double da = ep(sa), db = -ep(sb);
    double denom = a + b;
    return (da * denom - a * (da + db)) / (denom * denom);
}

}  // namespace aniso
