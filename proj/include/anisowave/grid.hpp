#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anisowave/fft.hpp"
#include "anisowave/parallel.hpp"

namespace aniso {

// Uniform periodic 1-D grid, n a power of two. The frequency grid is the
// exact discrete dual: xi_k = (k - n/2) * dxi with dxi = 2 pi / (n dx).
struct Grid {
    std::size_t n = 0;
    double x0 = 0.0;
    double dx = 0.0;

    Grid() = default;
    Grid(std::size_t n_, double x0_, double dx_) : n(n_), x0(x0_), dx(dx_) {
        if (!is_pow2(n) || n < 16) throw std::invalid_argument("Grid: n must be a power of two >= 16");
        if (!(dx > 0.0)) throw std::invalid_argument("Grid: dx must be positive");
    }

    double length() const { return static_cast<double>(n) * dx; }
    double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
    double dxi() const { return 2.0 * M_PI / (static_cast<double>(n) * dx); }
    double xi(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(n) / 2.0) * dxi(); }
    double xi_nyquist() const { return M_PI / dx; }
    bool self_dual() const { return std::abs(dx - dxi()) <= 1e-12 * dx; }

    bool operator==(const Grid& o) const { return n == o.n && x0 == o.x0 && dx == o.dx; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    // Grid of the physical Fourier transform.
    Grid dual() const { return Grid(n, -static_cast<double>(n) / 2.0 * dxi(), dxi()); }
};

inline Grid make_grid(std::size_t n, double length, double center) {
    if (!is_pow2(n) || n < 16) throw std::invalid_argument("make_grid: n must be a power of two >= 16");
    if (!(length > 0.0)) throw std::invalid_argument("make_grid: length must be positive");
    double dx = length / static_cast<double>(n);
    return Grid(n, center - length / 2.0, dx);
}

// Self-dual grid: dx == dxi, i.e. length = sqrt(2 pi n).
inline Grid make_self_dual_grid(std::size_t n, double center = 0.0) {
    return make_grid(n, std::sqrt(2.0 * M_PI * static_cast<double>(n)), center);
}

struct Signal {
    Grid grid;
    std::vector<cplx> samples;

    Signal() = default;
    Signal(const Grid& g, std::vector<cplx> s) : grid(g), samples(std::move(s)) {
        if (samples.size() != grid.n) throw std::invalid_argument("Signal: sample count != grid.n");
        for (const auto& v : samples)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("Signal: non-finite sample");
    }

    // L2 norm with the dx quadrature weight.
    double l2_norm() const {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = std::norm(samples[i]);
        return std::sqrt(grid.dx * pairwise_sum(sq));
    }
};

inline cplx l2_inner(const Signal& a, const Signal& b) {
    if (a.grid != b.grid) throw std::invalid_argument("l2_inner: grid mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < a.samples.size(); ++i) s += a.samples[i] * std::conj(b.samples[i]);
    return s * a.grid.dx;
}

enum class SignalWarning {
    boundary_mass,   // more than 1e-10 of the L2 mass in the outer 5% strips
    nyquist_phase,   // instantaneous frequency exceeds the Nyquist frequency
};

struct Synthesis {
    Signal signal;
    std::vector<SignalWarning> warnings;

    bool has_warning(SignalWarning w) const {
        for (auto v : warnings)
            if (v == w) return true;
        return false;
    }
};

struct CanonicalDatum {
    enum class Tag { gaussian, delta, constant, chirp, hermite, plane_wave };
    Tag tag = Tag::gaussian;
    double width = 1.0;   // gaussian
    double center = 0.0;  // delta (x_c) / plane_wave (xi_c)
    double chirp_rate = 0.5;
    int degree = 2;       // chirp
    int order = 0;        // hermite

    static CanonicalDatum gaussian(double w) {
        if (!(w > 0.0)) throw std::invalid_argument("gaussian: width must be positive");
        CanonicalDatum d; d.tag = Tag::gaussian; d.width = w; return d;
    }
    static CanonicalDatum delta(double xc) { CanonicalDatum d; d.tag = Tag::delta; d.center = xc; return d; }
    static CanonicalDatum constant() { CanonicalDatum d; d.tag = Tag::constant; return d; }
    static CanonicalDatum chirp(double c, int m) {
        if (m < 2) throw std::invalid_argument("chirp: degree must be >= 2");
        CanonicalDatum d; d.tag = Tag::chirp; d.chirp_rate = c; d.degree = m; return d;
    }
    static CanonicalDatum hermite(int k) {
        if (k < 0) throw std::invalid_argument("hermite: order must be >= 0");
        CanonicalDatum d; d.tag = Tag::hermite; d.order = k; return d;
    }
    static CanonicalDatum plane_wave(double xic) { CanonicalDatum d; d.tag = Tag::plane_wave; d.center = xic; return d; }
};

namespace detail {

inline void check_boundary_mass(Synthesis& out) {
    const auto& u = out.signal.samples;
    const std::size_t n = u.size();
    std::size_t strip = std::max<std::size_t>(1, n / 20);
    double edge = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m = std::norm(u[i]);
        total += m;
        if (i < strip || i >= n - strip) edge += m;
    }
    if (total > 0.0 && edge > 1e-10 * total) out.warnings.push_back(SignalWarning::boundary_mass);
}

}  // namespace detail

// Build a canonical test signal. Deterministic: equal inputs give bit-equal
// samples. Emits warnings rather than failing when the periodic model is
// strained (boundary mass, phase beyond Nyquist).
inline Synthesis synthesize(const CanonicalDatum& datum, const Grid& g) {
    Synthesis out;
    std::vector<cplx> u(g.n, cplx(0.0, 0.0));
    using Tag = CanonicalDatum::Tag;
    switch (datum.tag) {
        case Tag::gaussian: {
            std::vector<double> raw(g.n);
            double s2 = 2.0 * datum.width * datum.width;
            for (std::size_t j = 0; j < g.n; ++j) raw[j] = std::exp(-g.x(j) * g.x(j) / s2);
            double nrm = 0.0;
            for (double v : raw) nrm += v * v;
            nrm = std::sqrt(g.dx * nrm);
            for (std::size_t j = 0; j < g.n; ++j) u[j] = raw[j] / nrm;
            break;
        }
        case Tag::delta: {
            double idx = (datum.center - g.x0) / g.dx;
            if (idx < -0.5 || idx > static_cast<double>(g.n) - 0.5)
                throw std::invalid_argument("synthesize: delta center outside grid");
            std::size_t j = static_cast<std::size_t>(std::llround(idx)) % g.n;
            u[j] = cplx(1.0 / g.dx, 0.0);
            break;
        }
        case Tag::constant:
            for (auto& v : u) v = cplx(1.0, 0.0);
            break;
        case Tag::chirp: {
            double worst = 0.0;
            for (std::size_t j = 0; j < g.n; ++j) {
                double x = g.x(j);
                u[j] = std::polar(1.0, datum.chirp_rate * std::pow(x, datum.degree));
                worst = std::max(worst, std::abs(datum.chirp_rate * datum.degree * std::pow(x, datum.degree - 1)));
            }
            if (worst > g.xi_nyquist()) out.warnings.push_back(SignalWarning::nyquist_phase);
            break;
        }
        case Tag::hermite: {
            // normalized Hermite functions h_k by the stable two-term recurrence
            std::vector<double> h0(g.n), h1(g.n);
            for (std::size_t j = 0; j < g.n; ++j) {
                double x = g.x(j);
                h0[j] = std::pow(M_PI, -0.25) * std::exp(-x * x / 2.0);
                h1[j] = std::sqrt(2.0) * x * h0[j];
            }
            const std::vector<double>* cur = &h0;
            std::vector<double> a = h0, b = h1, c(g.n);
            if (datum.order == 0) cur = &a;
            else if (datum.order == 1) cur = &b;
            else {
                for (int k = 2; k <= datum.order; ++k) {
                    for (std::size_t j = 0; j < g.n; ++j)
                        c[j] = g.x(j) * std::sqrt(2.0 / k) * b[j] - std::sqrt((k - 1.0) / k) * a[j];
                    a.swap(b);
                    b.swap(c);
                }
                cur = &b;
            }
            double nrm = 0.0;
            for (double v : *cur) nrm += v * v;
            nrm = std::sqrt(g.dx * nrm);
            for (std::size_t j = 0; j < g.n; ++j) u[j] = (*cur)[j] / nrm;
            break;
        }
        case Tag::plane_wave: {
            if (std::abs(datum.center) > g.xi_nyquist())
                throw std::invalid_argument("synthesize: plane wave frequency beyond Nyquist");
            for (std::size_t j = 0; j < g.n; ++j) u[j] = std::polar(1.0, datum.center * g.x(j));
            break;
        }
    }
    out.signal = Signal(g, std::move(u));
    detail::check_boundary_mass(out);
    return out;
}

// Physical Fourier transform with the (2 pi)^{-1/2} normalization; output
// lives on the dual grid. Exact Parseval: l2_norm is preserved.
inline Signal fourier_transform(const Signal& s) {
    const Grid& g = s.grid;
    std::vector<cplx> a(g.n);
    for (std::size_t m = 0; m < g.n; ++m) a[m] = (m % 2 == 0) ? s.samples[m] : -s.samples[m];
    fft_pow2(a, -1);
    Grid gd = g.dual();
    const double scale = g.dx / std::sqrt(2.0 * M_PI);
    for (std::size_t k = 0; k < g.n; ++k) a[k] *= scale * std::polar(1.0, -g.x0 * g.xi(k));
    return Signal(gd, std::move(a));
}

inline Signal inverse_fourier_transform(const Signal& shat, const Grid& target) {
    if (shat.grid.n != target.n) throw std::invalid_argument("inverse_fourier_transform: size mismatch");
    const std::size_t n = target.n;
    std::vector<cplx> a(n);
    for (std::size_t k = 0; k < n; ++k) a[k] = shat.samples[k] * std::polar(1.0, target.x0 * target.xi(k));
    fft_pow2(a, +1);
    const double scale = target.dxi() / std::sqrt(2.0 * M_PI);
    for (std::size_t m = 0; m < n; ++m) {
        a[m] *= scale;
        if (m % 2 != 0) a[m] = -a[m];
    }
    return Signal(target, std::move(a));
}

// --- file I/O -------------------------------------------------------------
// {"n": int, "x0": float, "dx": float, "re": [...], "im": [...]}, 17
// significant digits, bit-exact round trip.

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline void save_signal(const Signal& s, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_signal: cannot open " + path);
    f << "{\n  \"n\": " << s.grid.n << ",\n  \"x0\": " << detail::fmt17(s.grid.x0)
      << ",\n  \"dx\": " << detail::fmt17(s.grid.dx) << ",\n  \"re\": [";
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        f << (i ? ", " : "") << detail::fmt17(s.samples[i].real());
    f << "],\n  \"im\": [";
    for (std::size_t i = 0; i < s.samples.size(); ++i)
        f << (i ? ", " : "") << detail::fmt17(s.samples[i].imag());
    f << "]\n}\n";
    if (!f) throw std::runtime_error("save_signal: write failed for " + path);
}

inline Signal load_signal(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_signal: cannot open " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("load_signal: malformed JSON: ") + e.what());
    }
    if (!j.contains("n") || !j.contains("x0") || !j.contains("dx") || !j.contains("re") || !j.contains("im"))
        throw std::runtime_error("load_signal: missing header field");
    std::size_t n = j["n"].get<std::size_t>();
    if (!is_pow2(n) || n < 16) throw std::runtime_error("load_signal: n must be a power of two >= 16");
    Grid g(n, j["x0"].get<double>(), j["dx"].get<double>());
    const auto& re = j["re"];
    const auto& im = j["im"];
    if (re.size() != n || im.size() != n) throw std::runtime_error("load_signal: array length mismatch");
    std::vector<cplx> u(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = re[i].get<double>(), b = im[i].get<double>();
        if (!std::isfinite(a) || !std::isfinite(b)) throw std::runtime_error("load_signal: non-finite sample");
        u[i] = cplx(a, b);
    }
    return Signal(g, std::move(u));
}

}  // namespace aniso
