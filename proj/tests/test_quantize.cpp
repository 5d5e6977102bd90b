#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anisowave/quantize.hpp"

using namespace aniso;

namespace {

SymbolDescriptor const_symbol(double c) {
    // degree-1 polynomial with zero slope realizes a constant symbol
    return SymbolDescriptor::poly_xi_plus_vx({c, 0.0}, 0.0);
}

}  // namespace

TEST_CASE("quantize(1) is the identity", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    QuantizeResult q = quantize(const_symbol(1.0), g);
    Matrix I = Matrix::Identity(64, 64);
    CHECK((q.op - I).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("quantize(x) is the coordinate diagonal", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto xsym = SymbolDescriptor::poly_x_plus_vxi({0.0, 1.0}, 0.0);
    QuantizeResult q = quantize(xsym, g);
    double offdiag = 0.0, diag_err = 0.0;
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            if (i == j)
                diag_err = std::max(diag_err, std::abs(q.op(i, j) - cplx(g.x(i), 0.0)));
            else
                offdiag = std::max(offdiag, std::abs(q.op(i, j)));
        }
    }
    CHECK(diag_err < 1e-10);
    CHECK(offdiag < 1e-10);
}

TEST_CASE("quantize(xi) is the exact Fourier multiplier", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto xisym = SymbolDescriptor::poly_xi_plus_vx({0.0, 1.0}, 0.0);
    QuantizeResult q = quantize(xisym, g);
    // plane wave at a grid frequency away from Nyquist is an eigenvector
    double xic = 5.0 * g.dxi();
    Signal pw = synthesize(CanonicalDatum::plane_wave(xic), g).signal;
    Vector v = to_vector(pw);
    Vector Av = q.op * v;
    double err = (Av - xic * v).norm() / v.norm();
    CHECK(err < 1e-8);
}

TEST_CASE("quantized real symbols are Hermitian with real Rayleigh quotients", "[quantize]") {
    Grid g = make_grid(128, 20.0, 0.0);
    std::vector<SymbolDescriptor> corpus = {SymbolDescriptor::harmonic(0.5),
                                            SymbolDescriptor::radial_power(1.0, 1, 2, 0.1),
                                            SymbolDescriptor::quadratic(0.3, 0.2, 0.6)};
    for (const auto& s : corpus) {
        QuantizeResult q = quantize(s, g);
        CHECK((q.op - q.op.adjoint()).cwiseAbs().maxCoeff() == 0.0);  // Hermitified exactly
        for (auto datum : {CanonicalDatum::gaussian(1.0), CanonicalDatum::hermite(2)}) {
            Vector v = to_vector(synthesize(datum, g).signal);
            cplx r = v.dot(q.op * v);
            CHECK(std::abs(r.imag()) < 1e-12 * std::abs(r.real() + 1.0));
        }
    }
}

TEST_CASE("quantize is linear in the symbol", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto f = SymbolDescriptor::quadratic(0.5, 0.1, 0.2);
    auto h = SymbolDescriptor::quadratic(-0.2, 0.3, 0.6);
    auto sum = SymbolDescriptor::quadratic(0.3, 0.4, 0.8);
    Matrix lhs = quantize(sum, g).op;
    Matrix rhs = quantize(f, g).op + quantize(h, g).op;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("commutator of quadratics equals the quantized bracket on the corpus", "[quantize]") {
    Grid g = make_grid(128, 20.0, 0.0);
    auto f = SymbolDescriptor::quadratic(0.5, 0.3, 0.2);
    auto h = SymbolDescriptor::quadratic(0.1, -0.4, 0.6);
    Matrix A = quantize(f, g).op, B = quantize(h, g).op;
    // {f, h} is again a quadratic form; assemble it from the exact gradients
    auto fx = [&](const PhasePoint& z) { return poisson_bracket(f, h, z); };
    double b11 = 0.5 * fx(PhasePoint(1.0, 0.0)) + 0.5 * fx(PhasePoint(-1.0, 0.0));
    double b22 = 0.5 * fx(PhasePoint(0.0, 1.0)) + 0.5 * fx(PhasePoint(0.0, -1.0));
    double b12 = 0.5 * (fx(PhasePoint(1.0, 1.0)) - b11 - b22);
    Matrix C = quantize(SymbolDescriptor::quadratic(b11 / 1.0, b12 / 1.0, b22 / 1.0), g).op;
    Matrix comm = cplx(0.0, 1.0) * (A * B - B * A);

    double cnorm = C.operatorNorm();
    for (auto datum : {CanonicalDatum::gaussian(1.0), CanonicalDatum::hermite(3), CanonicalDatum::gaussian(0.5)}) {
        Vector v = to_vector(synthesize(datum, g).signal);
        double rel = ((comm - C) * v).norm() / (cnorm * v.norm());
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("adjoint defect", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    CHECK(adjoint_defect(SymbolDescriptor::quadratic(0.5, 0.1, 0.5), g) < 1e-10);
    CHECK(adjoint_defect(SymbolDescriptor::poly_x_plus_vxi({0.0, 1.0}, 0.0), g) < 1e-12);
    double d = adjoint_defect(SymbolDescriptor::shifted(SymbolDescriptor::harmonic(0.5), 1.0), g);
    CHECK(d == Catch::Approx(2.0).margin(1e-8));
}

TEST_CASE("quantize rejects oversized grids", "[quantize]") {
    Grid g = make_grid(2048, 40.0, 0.0);
    CHECK_THROWS_AS(quantize(SymbolDescriptor::harmonic(0.5), g), std::invalid_argument);
}

TEST_CASE("field quantization matches the descriptor path for separable symbols", "[quantize]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto s = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0);  // xi^2, x-independent
    SymbolField f = sample_symbol(s, g);
    Matrix a = quantize(s, g).op, b = quantize(f, g).op;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9 * a.cwiseAbs().maxCoeff());
}
