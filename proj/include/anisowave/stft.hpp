#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "anisowave/geometry.hpp"
#include "anisowave/grid.hpp"
#include "anisowave/parallel.hpp"

namespace aniso {

// Gaussian analysis window, unit L2 norm on the grid.
struct WindowSpec {
    double width = 1.0;
    explicit WindowSpec(double w = 1.0) : width(w) {
        if (!(w > 0.0)) throw std::invalid_argument("WindowSpec: width must be positive");
    }
};

// n x n complex field on (x_j, xi_k); rows are space shifts, columns the
// frequency grid with spacing xi_step (the grid dual spacing for STFTs, half
// of it for Wigner fields).
struct PhaseGridMatrix {
    Grid grid;
    std::size_t rows = 0, cols = 0;
    double xi_step = 0.0;
    double scale = 1.0;  // continuous-limit factor applied to the raw DFT
    std::vector<cplx> vals;

    cplx& at(std::size_t j, std::size_t k) { return vals[j * cols + k]; }
    const cplx& at(std::size_t j, std::size_t k) const { return vals[j * cols + k]; }
    double xi_of(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(cols) / 2.0) * xi_step; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : vals) m = std::max(m, std::abs(v));
        return m;
    }

    // Bilinear interpolation of the modulus; returns NaN outside the grid.
    double interp_abs(double X, double XI) const {
        double fx = (X - grid.x0) / grid.dx;
        double fk = XI / xi_step + static_cast<double>(cols) / 2.0;
        double i0f = std::floor(fx), k0f = std::floor(fk);
        if (i0f < 0.0 || k0f < 0.0 || i0f + 1.0 > static_cast<double>(rows - 1) ||
            k0f + 1.0 > static_cast<double>(cols - 1))
            return std::numeric_limits<double>::quiet_NaN();
        std::size_t i0 = static_cast<std::size_t>(i0f), k0 = static_cast<std::size_t>(k0f);
        double tx = fx - i0f, tk = fk - k0f;
        double v00 = std::abs(at(i0, k0)), v10 = std::abs(at(i0 + 1, k0));
        double v01 = std::abs(at(i0, k0 + 1)), v11 = std::abs(at(i0 + 1, k0 + 1));
        return (1 - tx) * (1 - tk) * v00 + tx * (1 - tk) * v10 + (1 - tx) * tk * v01 + tx * tk * v11;
    }
};

namespace detail {

// Window samples on the zero-centered circular offset grid tau_p = p*dx.
inline std::vector<double> window_samples(const Grid& g, const WindowSpec& w) {
    if (w.width / g.dx < 4.0)
        throw std::invalid_argument("window aliases: fewer than 4 samples per standard deviation");
    std::vector<double> phi(g.n);
    double s2 = 2.0 * w.width * w.width;
    for (std::size_t p = 0; p < g.n; ++p) {
        double tau = (static_cast<double>((p + g.n / 2) % g.n) - static_cast<double>(g.n) / 2.0) * g.dx;
        phi[p] = std::exp(-tau * tau / s2);
    }
    double nrm = 0.0;
    for (double v : phi) nrm += v * v;
    nrm = std::sqrt(g.dx * nrm);
    for (auto& v : phi) v /= nrm;
    return phi;
}

}  // namespace detail

// Discrete STFT with the paper's (2 pi)^{-d/2} normalization: row j holds
// V(x_j, xi_k) ~ (2 pi)^{-1/2} int u(y) conj(phi(y - x_j)) e^{-i y xi_k} dy,
// computed as dx/sqrt(2 pi) times a phase-corrected FFT. Circular shifts.
inline PhaseGridMatrix stft(const Signal& u, const WindowSpec& w) {
    const Grid& g = u.grid;
    const std::size_t n = g.n;
    std::vector<double> phi = detail::window_samples(g, w);

    PhaseGridMatrix V;
    V.grid = g;
    V.rows = V.cols = n;
    V.xi_step = g.dxi();
    V.scale = g.dx * std::sqrt(static_cast<double>(n) / (2.0 * M_PI));
    V.vals.resize(n * n);

    std::vector<cplx> colphase(n);
    for (std::size_t k = 0; k < n; ++k)
        colphase[k] = (g.dx / std::sqrt(2.0 * M_PI)) * std::polar(1.0, -g.x0 * g.xi(k));

    parallel_for(n, [&](std::size_t j) {
        std::vector<cplx> f(n);
        for (std::size_t m = 0; m < n; ++m) {
            cplx v = u.samples[m] * phi[(m + n - j) % n];
            f[m] = (m % 2 == 0) ? v : -v;
        }
        fft_pow2(f, -1);
        for (std::size_t k = 0; k < n; ++k) V.vals[j * n + k] = colphase[k] * f[k];
    });
    return V;
}

// Adjoint/inverse of stft with matching scale: istft(stft(u)) == u up to
// rounding (the full-lattice Gabor system is a tight frame).
inline Signal istft(const PhaseGridMatrix& V, const WindowSpec& w) {
    const Grid& g = V.grid;
    const std::size_t n = g.n;
    if (V.rows != n || V.cols != n) throw std::invalid_argument("istft: shape mismatch");
    std::vector<double> phi = detail::window_samples(g, w);

    const double front = g.dxi() * g.dx / std::sqrt(2.0 * M_PI);
    unsigned nt = std::min<std::size_t>(thread_budget(), n);
    std::vector<std::vector<cplx>> acc(nt, std::vector<cplx>(n, cplx(0, 0)));
    std::size_t chunk = (n + nt - 1) / nt;

    parallel_for(nt, [&](std::size_t t) {
        std::size_t lo = t * chunk, hi = std::min<std::size_t>(n, lo + chunk);
        std::vector<cplx> row(n);
        for (std::size_t j = lo; j < hi; ++j) {
            for (std::size_t k = 0; k < n; ++k)
                row[k] = V.vals[j * n + k] * std::polar(1.0, g.x0 * g.xi(k));
            fft_pow2(row, +1);  // row[m] = sum_k . e^{+2 pi i m k / n}
            for (std::size_t m = 0; m < n; ++m) {
                cplx gjm = (m % 2 == 0) ? row[m] : -row[m];
                acc[t][m] += phi[(m + n - j) % n] * gjm;
            }
        }
    });
    std::vector<cplx> out(n, cplx(0, 0));
    for (unsigned t = 0; t < nt; ++t)
        for (std::size_t m = 0; m < n; ++m) out[m] += acc[t][m];
    for (auto& v : out) v *= front;
    return Signal(g, std::move(out));
}

// Cross-Wigner distribution, normalized so that the phase-space integral of
// W(f, f) equals ||f||^2 (the unnormalized transform carries an extra 2 pi).
// Columns live on the half-spacing frequency grid xi_step = dxi/2.
inline PhaseGridMatrix wigner(const Signal& f, const Signal& gsig) {
    if (f.grid != gsig.grid) throw std::invalid_argument("wigner: grid mismatch");
    const Grid& g = f.grid;
    const std::size_t n = g.n;

    PhaseGridMatrix W;
    W.grid = g;
    W.rows = W.cols = n;
    W.xi_step = 0.5 * g.dxi();
    W.scale = g.dx / M_PI;
    W.vals.resize(n * n);

    parallel_for(n, [&](std::size_t i) {
        std::vector<cplx> r(n);
        for (std::size_t j = 0; j < n; ++j) {
            cplx v = gsig.samples[(i + j) % n] * std::conj(f.samples[(i + n - j) % n]);
            r[j] = (j % 2 == 0) ? v : -v;
        }
        fft_pow2(r, -1);
        for (std::size_t k = 0; k < n; ++k) W.vals[i * n + k] = (g.dx / M_PI) * r[k];
    });
    return W;
}

// || u ||_{M_{sigma,s}}: quadrature of |V|^2 theta^{2s} over the phase grid.
// Returns +inf on overflow.
inline double modulation_norm(const Signal& u, const AnisotropyIndex& a, double s, const WindowSpec& w) {
    PhaseGridMatrix V = stft(u, w);
    const Grid& g = u.grid;
    std::vector<double> terms(g.n * g.n);
    parallel_for(g.n, [&](std::size_t j) {
        for (std::size_t k = 0; k < g.n; ++k) {
            double th = theta_weight(PhasePoint(g.x(j), V.xi_of(k)), a);
            terms[j * g.n + k] = std::norm(V.at(j, k)) * std::pow(th, 2.0 * s);
        }
    });
    double total = pairwise_sum(terms) * g.dx * g.dxi();
    if (!std::isfinite(total)) return std::numeric_limits<double>::infinity();
    return std::sqrt(total);
}

// Localization operator A_a u = istft(a . stft(u)) for a real field sampled
// on the STFT layout.
inline Signal localization_apply(const std::vector<double>& a_vals, const Signal& u, const WindowSpec& w) {
    PhaseGridMatrix V = stft(u, w);
    if (a_vals.size() != V.vals.size()) throw std::invalid_argument("localization_apply: shape mismatch");
    for (std::size_t i = 0; i < V.vals.size(); ++i) V.vals[i] *= a_vals[i];
    return istft(V, w);
}

// --- exports ---------------------------------------------------------------

// 16-bit P5 PGM of log10 modulus clipped to [-16, 0].
inline void export_pgm(const PhaseGridMatrix& V, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("export_pgm: cannot open " + path);
    f << "P5\n" << V.cols << " " << V.rows << "\n65535\n";
    for (std::size_t j = 0; j < V.rows; ++j) {
        for (std::size_t k = 0; k < V.cols; ++k) {
            double lv = std::log10(std::abs(V.at(j, k)) + 1e-300);
            lv = std::clamp(lv, -16.0, 0.0);
            unsigned v = static_cast<unsigned>(std::lround((lv + 16.0) / 16.0 * 65535.0));
            unsigned char hi = static_cast<unsigned char>(v >> 8), lo = static_cast<unsigned char>(v & 0xff);
            f.put(static_cast<char>(hi));
            f.put(static_cast<char>(lo));
        }
    }
    if (!f) throw std::runtime_error("export_pgm: write failed");
}

// CSV (x, xi, |V|), row-major.
inline void export_csv(const PhaseGridMatrix& V, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("export_csv: cannot open " + path);
    f << "x,xi,abs\n";
    for (std::size_t j = 0; j < V.rows; ++j)
        for (std::size_t k = 0; k < V.cols; ++k)
            f << V.grid.x(j) << "," << V.xi_of(k) << "," << std::abs(V.at(j, k)) << "\n";
}

}  // namespace aniso
