#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "anisowave/hamilton.hpp"

using namespace aniso;

TEST_CASE("hamilton_rhs", "[hamilton]") {
    auto h = SymbolDescriptor::harmonic(0.5);
    PhasePoint r = hamilton_rhs(h, PhasePoint(1.0, 0.0));
    CHECK(r.x[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(r.xi[0] == Catch::Approx(-1.0));

    auto free = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0);
    PhasePoint rf = hamilton_rhs(free, PhasePoint(0.3, 2.0));
    CHECK(rf.x[0] == Catch::Approx(4.0));
    CHECK(rf.xi[0] == 0.0);

    auto pot = SymbolDescriptor::poly_x_plus_vxi({0.0, 0.0, 1.0}, 0.0);
    PhasePoint rp = hamilton_rhs(pot, PhasePoint(1.5, 0.0));
    CHECK(rp.x[0] == 0.0);
    CHECK(rp.xi[0] == Catch::Approx(-3.0));
}

TEST_CASE("harmonic flow is a rotation", "[hamilton]") {
    FlowOracle o(SymbolDescriptor::harmonic(0.5));
    FlowTrajectory tr = integrate_flow(o, PhasePoint(1.0, 0.0), M_PI / 2.0);
    REQUIRE_FALSE(tr.aborted);
    const PhasePoint& end = tr.points.back();
    CHECK(std::abs(end.x[0] - 0.0) < 1e-9);
    CHECK(std::abs(end.xi[0] + 1.0) < 1e-9);
}

TEST_CASE("free flow is exact for RK4", "[hamilton]") {
    FlowOracle o(SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0));
    PhasePoint end = flow_endpoint(o, PhasePoint(0.0, 1.0), 1.0);
    CHECK(std::abs(end.x[0] - 2.0) < 1e-10);
    CHECK(std::abs(end.xi[0] - 1.0) < 1e-10);
}

TEST_CASE("energy is conserved along radial_power flow", "[hamilton]") {
    FlowOracle o(SymbolDescriptor::radial_power(1.0, 1, 2, 0.1));
    FlowTrajectory tr = integrate_flow(o, PhasePoint(1.0, 0.0), 10.0);
    REQUIRE_FALSE(tr.aborted);
    double e0 = tr.energy.front();
    for (double e : tr.energy) CHECK(std::abs(e - e0) < 1e-8);
}

TEST_CASE("group law and reversibility", "[hamilton]") {
    FlowOracle o(SymbolDescriptor::radial_power(1.0, 1, 2, 0.05));
    PhasePoint z0(0.8, 0.6);
    PhasePoint mid = flow_endpoint(o, z0, 0.25);
    PhasePoint two = flow_endpoint(o, mid, 0.35);
    PhasePoint direct = flow_endpoint(o, z0, 0.6);
    CHECK(std::abs(two.x[0] - direct.x[0]) < 1e-7);
    CHECK(std::abs(two.xi[0] - direct.xi[0]) < 1e-7);

    PhasePoint back = flow_endpoint(o, direct, -0.6);
    CHECK(std::abs(back.x[0] - z0.x[0]) < 1e-8);
    CHECK(std::abs(back.xi[0] - z0.xi[0]) < 1e-8);
}

TEST_CASE("flow Jacobian has unit determinant", "[hamilton]") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    for (auto s : {SymbolDescriptor::harmonic(0.5), SymbolDescriptor::radial_power(1.0, 1, 2, 0.05)}) {
        FlowOracle o(s);
        for (int i = 0; i < 5; ++i) {
            PhasePoint z = unit_direction(ang(rng));
            const double t = 0.3, h = 1e-5;
            auto flow = [&](double dx_, double dxi_) {
                PhasePoint p(z.x[0] + dx_, z.xi[0] + dxi_);
                return flow_endpoint(o, p, t);
            };
            PhasePoint xp = flow(h, 0), xm = flow(-h, 0), yp = flow(0, h), ym = flow(0, -h);
            double j11 = (xp.x[0] - xm.x[0]) / (2 * h), j12 = (yp.x[0] - ym.x[0]) / (2 * h);
            double j21 = (xp.xi[0] - xm.xi[0]) / (2 * h), j22 = (yp.xi[0] - ym.xi[0]) / (2 * h);
            CHECK(std::abs(j11 * j22 - j12 * j21 - 1.0) < 1e-5);
        }
    }
}

TEST_CASE("step halving shows fourth order convergence", "[hamilton]") {
    PhasePoint z0(1.0, 0.0);
    const double T = 1.0;
    PhasePoint exact(std::cos(T), -std::sin(T));
    auto err = [&](double h) {
        FlowOracle o(SymbolDescriptor::harmonic(0.5), h);
        PhasePoint e = flow_endpoint(o, z0, T);
        return std::hypot(e.x[0] - exact.x[0], e.xi[0] - exact.xi[0]);
    };
    double r = err(2e-3) / err(1e-3);
    CHECK(r > 8.0);
    CHECK(r < 32.0);
}

TEST_CASE("scaling commutation for homogeneous symbols", "[hamilton]") {
    auto quad = SymbolDescriptor::harmonic(0.5);
    CommutationReport r1 = check_scaling_commutation(FlowOracle(quad), AnisotropyIndex::rational(1, 1), 0.3, 8);
    CHECK_FALSE(r1.any_abort);
    CHECK(r1.max_rel_discrepancy < 1e-8);

    auto rad = SymbolDescriptor::radial_power(1.0, 1, 2, 0.01);
    CommutationReport r2 =
        check_scaling_commutation(FlowOracle(rad), AnisotropyIndex::rational(1, 2), 0.2, 8, 7, {0.5, 2.0, 8.0}, 1.0);
    CHECK_FALSE(r2.any_abort);
    CHECK(r2.max_rel_discrepancy < 1e-6);

    // control: the v x term breaks commutation by orders of magnitude
    auto bad = SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 1.0);
    CommutationReport r3 = check_scaling_commutation(FlowOracle(bad), AnisotropyIndex::rational(1, 1), 0.2, 8);
    CHECK(r3.max_rel_discrepancy > 1e3 * r2.max_rel_discrepancy);
}

TEST_CASE("flow of direction", "[hamilton]") {
    auto iso = AnisotropyIndex::rational(1, 1);
    FlowOracle harm(SymbolDescriptor::harmonic(0.5));
    PhasePoint d0 = unit_direction(30.0 * M_PI / 180.0);
    PhasePoint moved = flow_of_direction(harm, iso, d0, 0.4);
    double expect = 30.0 - 0.4 * 180.0 / M_PI;
    CHECK(std::abs(direction_angle_deg(moved) - expect) < 0.1);

    FlowOracle free(SymbolDescriptor::poly_xi_plus_vx({0.0, 0.0, 1.0}, 0.0));
    PhasePoint m2 = flow_of_direction(free, iso, PhasePoint(0.0, 1.0), 1.0);
    double n = std::hypot(2.0, 1.0);
    CHECK(std::abs(m2.x[0] - 2.0 / n) < 1e-8);
    CHECK(std::abs(m2.xi[0] - 1.0 / n) < 1e-8);

    PhasePoint id = flow_of_direction(free, iso, d0, 0.0);
    CHECK(id.x[0] == d0.x[0]);
    CHECK(id.xi[0] == d0.xi[0]);
}

TEST_CASE("trajectories abort near the origin", "[hamilton]") {
    // constant-gradient flow driving straight through zero
    auto lin = SymbolDescriptor::poly_xi_plus_vx({0.0, 1.0}, 0.0);  // a = xi, x' = 1
    FlowOracle o(lin);
    FlowTrajectory tr = integrate_flow(o, PhasePoint(-0.5, 0.0), 1.0);
    CHECK(tr.aborted);
}

TEST_CASE("transported symbol follows the rotation", "[hamilton]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto q0 = SymbolDescriptor::poly_x_plus_vxi({0.0, 1.0}, 0.0);  // q0(x, xi) = x
    FlowOracle flow(SymbolDescriptor::harmonic(0.5));
    const double t = 0.5, delta = 0.5;
    SymbolField f = transport_symbol(q0, flow, t, delta, g);
    // chi_{-t}(x, xi) = (x cos t - xi sin t, x sin t + xi cos t); q0 = x picks the first component
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.n; j += 3) {
        for (std::size_t k = 0; k < g.n; k += 3) {
            PhasePoint z(g.x(j), g.xi(k));
            if (z.norm() < 1.5 * delta || z.norm() > 6.0) continue;
            double expect = z.x[0] * std::cos(t) - z.xi[0] * std::sin(t);
            maxerr = std::max(maxerr, std::abs(f.at(j, k) - expect));
        }
    }
    CHECK(maxerr < 1e-6);

    // t = 0: psi_delta q0, dead zone exactly zero
    SymbolField f0 = transport_symbol(q0, flow, 0.0, delta, g);
    for (std::size_t j = 0; j < g.n; ++j)
        for (std::size_t k = 0; k < g.n; ++k) {
            PhasePoint z(g.x(j), g.xi(k));
            if (z.norm() < delta / 2.0)
                CHECK(f0.at(j, k) == 0.0);
            else if (z.norm() > delta)
                CHECK(f0.at(j, k) == Catch::Approx(eval_symbol_real(q0, z)).margin(1e-12));
        }
}

TEST_CASE("transport by t then -t recovers the symbol where psi = 1", "[hamilton]") {
    Grid g = make_grid(64, 16.0, 0.0);
    auto q0 = SymbolDescriptor::quadratic(1.0, 0.3, 0.5);
    FlowOracle flow(SymbolDescriptor::harmonic(0.5));
    const double delta = 0.5, t = 0.4;
    // composed transport evaluated without re-sampling: the -t transport of
    // the t-transported symbol at z equals psi(z) psi(chi_t z) q0(z)
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.n; j += 3) {
        for (std::size_t k = 0; k < g.n; k += 3) {
            PhasePoint z(g.x(j), g.xi(k));
            if (z.norm() < 2.0 * delta || z.norm() > 6.0) continue;
            PhasePoint fwd = flow_endpoint(flow, z, t);
            double composed = cutoff_psi(z, delta) * cutoff_psi(fwd, delta) *
                              eval_symbol_real(q0, flow_endpoint(flow, fwd, -t));
            maxerr = std::max(maxerr, std::abs(composed - eval_symbol_real(q0, z)));
        }
    }
    CHECK(maxerr < 1e-6);
}
