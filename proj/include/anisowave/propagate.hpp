#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisowave/grid.hpp"
#include "anisowave/quantize.hpp"
#include "anisowave/stft.hpp"
#include "anisowave/symbols.hpp"

namespace aniso {

// Airy-Schroedinger Hamiltonian p(D) + v x with real polynomial p of degree
// m >= 2 and nonzero v; the propagation-relevant anisotropy is 1/(m - 1).
struct AirySpec {
    std::vector<double> p_coeffs;  // ascending powers
    double v = 1.0;

    AirySpec() : p_coeffs{0.0, 0.0, 1.0} {}
    AirySpec(std::vector<double> p, double v_) : p_coeffs(std::move(p)), v(v_) {
        if (p_coeffs.size() < 3 || p_coeffs.back() == 0.0)
            throw std::invalid_argument("AirySpec: polynomial degree must be >= 2 with nonzero leading coefficient");
        if (v == 0.0) throw std::invalid_argument("AirySpec: v must be nonzero");
    }

    int degree() const { return static_cast<int>(p_coeffs.size()) - 1; }
    double sigma_principal() const { return 1.0 / (degree() - 1.0); }

    SymbolDescriptor full_symbol() const { return SymbolDescriptor::poly_xi_plus_vx(p_coeffs, v); }
    SymbolDescriptor principal_symbol() const {
        std::vector<double> lead(p_coeffs.size(), 0.0);
        lead.back() = p_coeffs.back();
        return SymbolDescriptor::poly_xi_plus_vx(lead, 0.0);
    }
};

namespace detail {

// Coefficients of phi_t(xi) = (q(xi - t v) - q(xi)) / v with q' = p, q(0) = 0,
// expanded exactly by the binomial theorem.
inline std::vector<double> airy_phase_coeffs(const AirySpec& spec, double t) {
    std::size_t deg = spec.p_coeffs.size();  // q has degree deg
    std::vector<double> q(deg + 1, 0.0);
    for (std::size_t i = 0; i < deg; ++i) q[i + 1] = spec.p_coeffs[i] / static_cast<double>(i + 1);
    // q(xi - a) - q(xi) with a = t v
    double a = t * spec.v;
    std::vector<double> out(deg + 1, 0.0);
    for (std::size_t j = 0; j <= deg; ++j) {
        if (q[j] == 0.0) continue;
        // (xi - a)^j = sum_r binom(j, r) xi^r (-a)^{j - r}
        double binom = 1.0;
        double apow = 1.0;  // (-a)^{j-r} built from r = j downwards
        std::vector<double> term(j + 1, 0.0);
        // iterate r from j down to 0
        for (std::size_t idx = 0; idx <= j; ++idx) {
            std::size_t r = j - idx;
            term[r] = binom * apow;
            // update binom: C(j, r-1) = C(j, r) * r / (j - r + 1)
            if (r > 0) binom = binom * static_cast<double>(r) / static_cast<double>(j - r + 1);
            apow *= -a;
        }
        for (std::size_t r = 0; r <= j; ++r) out[r] += q[j] * term[r];
        out[j] -= q[j];  // subtract q(xi)
    }
    for (auto& c : out) c /= spec.v;
    return out;
}

}  // namespace detail

// phi_t(xi) via Horner on the exactly expanded coefficients.
inline double airy_phase(const AirySpec& spec, double t, double xi) {
    std::vector<double> c = detail::airy_phase_coeffs(spec, t);
    return detail::polyval(c, xi);
}

struct Propagation {
    Signal signal;
    std::vector<std::string> warnings;
};

// K_t u = M_{-t v} F^{-1}(e^{i phi_t} u^). Exactly unitary on the grid up to
// one FFT round trip.
inline Propagation airy_propagate(const Signal& u0, const AirySpec& spec, double t) {
    Propagation out;
    const Grid& g = u0.grid;
    if (std::abs(t * spec.v) > 0.5 * g.length())
        out.warnings.push_back("airy_propagate: |t v| exceeds half the domain length");
    std::vector<double> pc = detail::airy_phase_coeffs(spec, t);
    // phase-gradient alias check: |phi_t'(xi)| against the representable range
    double worst = 0.0;
    for (std::size_t k = 0; k < g.n; ++k) worst = std::max(worst, std::abs(detail::polyder(pc, g.xi(k))));
    if (worst > 0.5 * g.length())
        out.warnings.push_back("airy_propagate: multiplier phase gradient exceeds the domain half-length");

    Signal uh = fourier_transform(u0);
    for (std::size_t k = 0; k < g.n; ++k) uh.samples[k] *= std::polar(1.0, detail::polyval(pc, uh.grid.x(k)));
    Signal back = inverse_fourier_transform(uh, g);
    for (std::size_t j = 0; j < g.n; ++j) back.samples[j] *= std::polar(1.0, -t * spec.v * g.x(j));
    out.signal = std::move(back);
    return out;
}

// Fourier side: e^{-i phi_{-t}(x)} u0(x + t v), the solution of the
// transformed equation; the translation is an exact spectral fractional
// shift, conjugate to airy_propagate under the DFT.
inline Propagation fourier_side_propagate(const Signal& u0, const AirySpec& spec, double t) {
    Propagation out;
    const Grid& g = u0.grid;
    double shift = t * spec.v;
    if (std::abs(shift) > 0.4 * g.length())
        out.warnings.push_back("fourier_side_propagate: shift exceeds the safe domain margin");
    Signal uh = fourier_transform(u0);
    for (std::size_t k = 0; k < g.n; ++k) uh.samples[k] *= std::polar(1.0, shift * uh.grid.x(k));
    Signal shifted = inverse_fourier_transform(uh, g);
    std::vector<double> pc = detail::airy_phase_coeffs(spec, -t);
    for (std::size_t j = 0; j < g.n; ++j)
        shifted.samples[j] *= std::polar(1.0, -detail::polyval(pc, g.x(j)));
    out.signal = std::move(shifted);
    return out;
}

constexpr std::size_t kMehlerMaxN = 1024;

// Exact oracle for the Hamiltonian c (x^2 + xi^2): u(t) = e^{-i c t} F_theta u
// with the fractional Fourier angle theta = 2 c t (Mehler kernel).
//
// The angle is reduced by exact quarter turns (the physical DFT on a
// self-dual grid) to a remainder in [pi/4, pi/2], where the sampled kernel
// is alias-free for window-contained data; the engine evolves on whichever
// side (space or Fourier) carries less mass near the box edge.
inline Signal harmonic_propagate(const Signal& u0, double c, double t) {
    const Grid& g = u0.grid;
    if (g.n > kMehlerMaxN) throw std::invalid_argument("harmonic_propagate: n <= 1024");
    if (!g.self_dual()) throw std::invalid_argument("harmonic_propagate: self-dual grid required");

    auto edge_mass = [&](const Signal& s) {
        std::size_t strip = s.grid.n / 10;
        double e = 0.0;
        for (std::size_t i = 0; i < strip; ++i) e += std::norm(s.samples[i]) + std::norm(s.samples[s.grid.n - 1 - i]);
        return e;
    };

    double theta = 2.0 * c * t;
    Signal work = u0;
    Signal uhat = fourier_transform(u0);
    // pick the better-contained side: u = F^{-1} uhat, so F_theta u = F_{theta - pi/2} uhat
    if (edge_mass(uhat) < 0.25 * edge_mass(work)) {
        work = Signal(g, std::move(uhat.samples));  // identical self-dual grid
        theta -= M_PI / 2.0;
    }

    long m = static_cast<long>(std::floor(theta / (M_PI / 2.0)));
    double rho = theta - static_cast<double>(m) * (M_PI / 2.0);
    double thp;
    if (rho < M_PI / 4.0) {
        thp = rho - M_PI / 2.0;
        ++m;
    } else {
        thp = rho;
    }
    long quarters = ((m % 4) + 4) % 4;
    for (long q = 0; q < quarters; ++q) {
        Signal f = fourier_transform(work);
        work = Signal(g, std::move(f.samples));
    }
    if (std::abs(thp) > 1e-12) {
        double ct = std::cos(thp) / std::sin(thp);
        double cs = 1.0 / std::sin(thp);
        cplx pref = std::sqrt(cplx(1.0, -ct)) / std::sqrt(2.0 * M_PI);
        const std::size_t n = g.n;
        std::vector<cplx> out(n);
        parallel_for(n, [&](std::size_t i) {
            double xi_ = g.x(i);
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                double yj = g.x(j);
                double phase = 0.5 * ct * (xi_ * xi_ + yj * yj) - cs * xi_ * yj;
                acc += std::polar(1.0, phase) * work.samples[j];
            }
            out[i] = g.dx * pref * acc;
        });
        work = Signal(g, std::move(out));
    }
    cplx gphase = std::polar(1.0, -c * t);
    for (auto& v : work.samples) v *= gphase;
    return work;
}

struct EvolutionRun {
    std::vector<double> times;        // checkpoint times
    std::vector<Signal> states;       // states at checkpoints
    std::vector<double> step_times;   // per-step diagnostics
    std::vector<double> l2_norms;
    std::vector<std::pair<double, double>> norm_requests;  // (sigma, s)
    std::vector<std::vector<double>> m_norms;              // per checkpoint, per request
    std::vector<std::string> warnings;
};

// Crank-Nicolson for d_t u + i a^w u = 0: one LU factorization of
// (I + i h/2 A), reused every step. Exactly norm-preserving for Hermitian A.
inline EvolutionRun cn_evolve(const SymbolDescriptor& s, const Signal& u0, double t_final, int steps,
                              const std::vector<std::pair<double, double>>& track = {},
                              int checkpoint_every = 0, double window_width = 1.0) {
    if (steps < 1) throw std::invalid_argument("cn_evolve: steps must be >= 1");
    const Grid& g = u0.grid;
    QuantizeResult q = quantize(s, g);
    const double h = t_final / steps;
    const std::size_t n = g.n;

    const auto ni = static_cast<Eigen::Index>(n);
    Matrix M1 = Matrix::Identity(ni, ni) + cplx(0.0, 0.5 * h) * q.op;
    Matrix M2 = Matrix::Identity(ni, ni) - cplx(0.0, 0.5 * h) * q.op;
    Eigen::PartialPivLU<Matrix> lu(M1);

    EvolutionRun run;
    run.norm_requests = track;
    Vector u = to_vector(u0);

    auto checkpoint = [&](double tm, const Vector& v) {
        run.times.push_back(tm);
        Signal st = to_signal(g, v);
        if (!track.empty()) {
            std::vector<double> norms;
            for (const auto& [sg, so] : track)
                norms.push_back(modulation_norm(st, AnisotropyIndex::real(sg), so, WindowSpec(window_width)));
            run.m_norms.push_back(std::move(norms));
        }
        run.states.push_back(std::move(st));
    };

    checkpoint(0.0, u);
    for (int i = 1; i <= steps; ++i) {
        u = lu.solve(M2 * u);
        double tm = h * i;
        run.step_times.push_back(tm);
        run.l2_norms.push_back(std::sqrt(g.dx) * u.norm());
        if ((checkpoint_every > 0 && i % checkpoint_every == 0) || i == steps) checkpoint(tm, u);
    }
    return run;
}

}  // namespace aniso
