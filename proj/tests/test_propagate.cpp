#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anisowave/propagate.hpp"

using namespace aniso;

namespace {

double rel_l2_diff(const Signal& a, const Signal& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        num += std::norm(a.samples[i] - b.samples[i]);
        den += std::norm(b.samples[i]);
    }
    return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("airy phase values and cocycle", "[propagate]") {
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);  // p = xi^2, v = 1
    for (double xi : {-2.0, 0.0, 1.5}) CHECK(airy_phase(spec, 0.0, xi) == 0.0);
    // phi_t(xi) = -t xi^2 + t^2 xi - t^3/3, so phi_1(0) = -1/3
    CHECK(airy_phase(spec, 1.0, 0.0) == Catch::Approx(-1.0 / 3.0));
    CHECK(airy_phase(spec, 0.5, 2.0) == Catch::Approx(-0.5 * 4.0 + 0.25 * 2.0 - 0.125 / 3.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> par(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        double t1 = par(rng), t2 = par(rng), xi = 3.0 * par(rng);
        double lhs = airy_phase(spec, t1, xi - t2 * spec.v) + airy_phase(spec, t2, xi);
        double rhs = airy_phase(spec, t1 + t2, xi);
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("airy propagator at t = 0 and unitarity", "[propagate]") {
    Grid g = make_grid(1024, 40.0, 0.0);
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;

    Signal id = airy_propagate(u, spec, 0.0).signal;
    CHECK(rel_l2_diff(id, u) < 1e-13);

    Signal ut = airy_propagate(u, spec, 0.7).signal;
    CHECK(std::abs(ut.l2_norm() - u.l2_norm()) < 1e-12);
}

TEST_CASE("airy group law", "[propagate]") {
    Grid g = make_grid(1024, 40.0, 0.0);
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    Signal two = airy_propagate(airy_propagate(u, spec, 0.4).signal, spec, 0.3).signal;
    Signal one = airy_propagate(u, spec, 0.7).signal;
    CHECK(rel_l2_diff(two, one) < 1e-10);
}

TEST_CASE("airy adjoint relation", "[propagate]") {
    Grid g = make_grid(512, 40.0, 0.0);
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    Signal v = synthesize(CanonicalDatum::hermite(2), g).signal;
    cplx lhs = l2_inner(airy_propagate(u, spec, 0.6).signal, v);
    cplx rhs = l2_inner(u, airy_propagate(v, spec, -0.6).signal);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("fourier side propagator", "[propagate]") {
    Grid g = make_grid(1024, 40.0, 0.0);
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    const double t = 0.5;

    // conjugacy with the space-side propagator under the Fourier transform
    Signal lhs = fourier_side_propagate(u, spec, t).signal;
    Signal inv = inverse_fourier_transform(u, g);
    Signal via = fourier_transform(airy_propagate(Signal(g, inv.samples), spec, t).signal);
    CHECK(rel_l2_diff(lhs, Signal(g, via.samples)) < 1e-8);

    // t = 0 identity
    CHECK(rel_l2_diff(fourier_side_propagate(u, spec, 0.0).signal, u) < 1e-12);

    // |u(t, x)| = |u0(x + t v)| pointwise: the chirp factor is unimodular
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.n; ++j) {
        double xs = g.x(j) + t;
        if (std::abs(xs) > 15.0) continue;
        double expect = std::pow(M_PI, -0.25) * std::exp(-xs * xs / 2.0);
        maxerr = std::max(maxerr, std::abs(std::abs(lhs.samples[j]) - expect));
    }
    CHECK(maxerr < 1e-10);
}

TEST_CASE("harmonic propagator: hermite eigenfunctions", "[propagate]") {
    Grid g = make_self_dual_grid(512);
    for (int k : {0, 1, 3}) {
        Signal h = synthesize(CanonicalDatum::hermite(k), g).signal;
        for (double t : {0.3, M_PI / 4.0, 2.0}) {
            Signal out = harmonic_propagate(h, 0.5, t);
            cplx phase = std::polar(1.0, -t * (k + 0.5));  // 2c = 1
            double maxerr = 0.0;
            for (std::size_t i = 0; i < g.n; ++i)
                maxerr = std::max(maxerr, std::abs(out.samples[i] - phase * h.samples[i]));
            CHECK(maxerr < 1e-6);
            CHECK(std::abs(out.l2_norm() - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("harmonic propagator: quarter turn is the Fourier transform", "[propagate]") {
    Grid g = make_self_dual_grid(512);
    Signal u = synthesize(CanonicalDatum::gaussian(1.3), g).signal;
    // theta = pi/2 at c = 1/2 means t = pi/2; overall phase e^{-i pi/4}
    Signal out = harmonic_propagate(u, 0.5, M_PI / 2.0);
    Signal ft = fourier_transform(u);
    cplx phase = std::polar(1.0, -M_PI / 4.0);
    double maxerr = 0.0;
    for (std::size_t i = 0; i < g.n; ++i)
        maxerr = std::max(maxerr, std::abs(out.samples[i] - phase * ft.samples[i]));
    CHECK(maxerr < 1e-8);
}

TEST_CASE("harmonic propagator: t = 0 and group law", "[propagate]") {
    Grid g = make_self_dual_grid(512);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    CHECK(rel_l2_diff(harmonic_propagate(u, 0.5, 0.0), u) < 1e-13);
    Signal two = harmonic_propagate(harmonic_propagate(u, 0.5, 0.3), 0.5, 0.45);
    Signal one = harmonic_propagate(u, 0.5, 0.75);
    CHECK(rel_l2_diff(two, one) < 1e-10);
}

TEST_CASE("cn evolution conserves the norm for real symbols", "[propagate]") {
    Grid g = make_grid(512, 40.0, 0.0);
    auto s = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0);  // a = xi^2
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    EvolutionRun run = cn_evolve(s, u, 1.0, 200);
    double drift = 0.0;
    for (double n : run.l2_norms) drift = std::max(drift, std::abs(n - u.l2_norm()));
    CHECK(drift < 1e-10);
}

TEST_CASE("cn matches the exact airy propagator", "[propagate]") {
    Grid g = make_grid(512, 40.0, 0.0);
    AirySpec spec({0.0, 0.0, 1.0}, 1.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    Signal exact = airy_propagate(u, spec, 0.5).signal;
    EvolutionRun run = cn_evolve(spec.full_symbol(), u, 0.5, 400);
    CHECK(rel_l2_diff(run.states.back(), exact) < 1e-4);
}

TEST_CASE("imaginary symbol part drives exponential growth", "[propagate]") {
    Grid g = make_grid(256, 40.0, 0.0);
    auto base = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    const double t = 0.5;
    for (double sgn : {+1.0, -1.0}) {
        EvolutionRun run = cn_evolve(SymbolDescriptor::shifted(base, sgn), u, t, 1500);
        double ratio = run.states.back().l2_norm() / u.l2_norm();
        CHECK(std::abs(ratio / std::exp(sgn * t) - 1.0) < 1e-6);
    }
}

TEST_CASE("cn tracks modulation norms at checkpoints", "[propagate]") {
    Grid g = make_grid(256, 40.0, 0.0);
    auto s = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0);
    Signal u = synthesize(CanonicalDatum::gaussian(1.0), g).signal;
    EvolutionRun run = cn_evolve(s, u, 0.2, 50, {{1.0, 0.0}});
    REQUIRE_FALSE(run.m_norms.empty());
    // M_{sigma,0} = L2
    CHECK(run.m_norms.back()[0] == Catch::Approx(run.states.back().l2_norm()).margin(1e-6));
}
