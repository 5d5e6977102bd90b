#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "anisowave/geometry.hpp"
#include "anisowave/parallel.hpp"
#include "anisowave/symbols.hpp"

namespace aniso {

// Right-hand side of Hamilton's equation: (x', xi') = (grad_xi a, -grad_x a).
inline PhasePoint hamilton_rhs(const SymbolDescriptor& s, const PhasePoint& z) {
    SymbolGradient g = eval_gradient(s, z);
    PhasePoint out;
    out.x = g.gxi;
    out.xi = g.gx;
    for (auto& v : out.xi) v = -v;
    return out;
}

struct FlowOracle {
    SymbolDescriptor symbol;
    double step = 1e-3;  // fixed RK4 step

    FlowOracle() = default;
    explicit FlowOracle(SymbolDescriptor s, double h = 1e-3) : symbol(std::move(s)), step(h) {
        if (!(h > 0.0)) throw std::invalid_argument("FlowOracle: step must be positive");
    }
};

struct FlowTrajectory {
    std::vector<double> times;
    std::vector<PhasePoint> points;
    std::vector<double> energy;  // a(chi_t z) per sample
    bool aborted = false;        // origin ball or non-finite state
};

namespace detail {

inline PhasePoint axpy(const PhasePoint& z, double h, const PhasePoint& d) {
    PhasePoint out = z;
    for (std::size_t i = 0; i < z.dim(); ++i) {
        out.x[i] += h * d.x[i];
        out.xi[i] += h * d.xi[i];
    }
    return out;
}

inline PhasePoint rk4_step(const SymbolDescriptor& s, const PhasePoint& z, double h) {
    PhasePoint k1 = hamilton_rhs(s, z);
    PhasePoint k2 = hamilton_rhs(s, axpy(z, h / 2, k1));
    PhasePoint k3 = hamilton_rhs(s, axpy(z, h / 2, k2));
    PhasePoint k4 = hamilton_rhs(s, axpy(z, h, k3));
    PhasePoint out = z;
    for (std::size_t i = 0; i < z.dim(); ++i) {
        out.x[i] += h / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
        out.xi[i] += h / 6 * (k1.xi[i] + 2 * k2.xi[i] + 2 * k3.xi[i] + k4.xi[i]);
    }
    return out;
}

}  // namespace detail

// Fixed-step RK4 integration of chi_t, forward or backward. Trajectories
// entering |z| < 1e-8 or turning non-finite abort rather than continue.
inline FlowTrajectory integrate_flow(const FlowOracle& o, const PhasePoint& z0, double t_final) {
    if (!(z0.norm() > 0.0)) throw std::invalid_argument("integrate_flow: z0 must be nonzero");
    FlowTrajectory tr;
    std::size_t nst = static_cast<std::size_t>(std::llround(std::abs(t_final) / o.step));
    double h = (nst == 0) ? 0.0 : t_final / static_cast<double>(nst);
    tr.times.reserve(nst + 1);
    tr.points.reserve(nst + 1);
    tr.energy.reserve(nst + 1);
    PhasePoint z = z0;
    tr.times.push_back(0.0);
    tr.points.push_back(z);
    tr.energy.push_back(eval_symbol_real(o.symbol, z));
    for (std::size_t i = 1; i <= nst; ++i) {
        z = detail::rk4_step(o.symbol, z, h);
        if (!z.finite() || z.norm() < 1e-8) {
            tr.aborted = true;
            break;
        }
        tr.times.push_back(static_cast<double>(i) * h);
        tr.points.push_back(z);
        tr.energy.push_back(eval_symbol_real(o.symbol, z));
    }
    return tr;
}

inline PhasePoint flow_endpoint(const FlowOracle& o, const PhasePoint& z0, double t) {
    FlowTrajectory tr = integrate_flow(o, z0, t);
    if (tr.aborted) throw std::runtime_error("flow aborted near the origin or went non-finite");
    return tr.points.back();
}

struct CommutationReport {
    double max_rel_discrepancy = 0.0;
    int samples = 0;
    bool any_abort = false;
    std::vector<double> lambdas;
};

// chi_t(Lambda_sigma(lambda) z) vs Lambda_sigma(lambda) chi_t(z) on random
// unit points; reports the max relative discrepancy.
inline CommutationReport check_scaling_commutation(const FlowOracle& o, const AnisotropyIndex& a, double t,
                                                   int samples, std::uint64_t seed = 7,
                                                   std::vector<double> lambdas = {0.5, 2.0, 8.0},
                                                   double min_scaled_norm = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    CommutationReport rep;
    rep.samples = samples;
    rep.lambdas = lambdas;
    for (int i = 0; i < samples; ++i) {
        PhasePoint z = unit_direction(ang(rng));
        for (double lam : lambdas) {
            PhasePoint zs = aniso_scale(z, lam, a);
            if (zs.norm() < min_scaled_norm) continue;
            FlowTrajectory t1 = integrate_flow(o, zs, t);
            FlowTrajectory t2 = integrate_flow(o, z, t);
            if (t1.aborted || t2.aborted) {
                rep.any_abort = true;
                continue;
            }
            PhasePoint lhs = t1.points.back();
            PhasePoint rhs = aniso_scale(t2.points.back(), lam, a);
            double num = 0.0, den = 0.0;
            for (std::size_t d = 0; d < lhs.dim(); ++d) {
                num += (lhs.x[d] - rhs.x[d]) * (lhs.x[d] - rhs.x[d]) + (lhs.xi[d] - rhs.xi[d]) * (lhs.xi[d] - rhs.xi[d]);
                den += rhs.x[d] * rhs.x[d] + rhs.xi[d] * rhs.xi[d];
            }
            rep.max_rel_discrepancy = std::max(rep.max_rel_discrepancy, std::sqrt(num / den));
        }
    }
    return rep;
}

// Flow action on sigma-conic directions: integrate from the unit direction,
// then take the unit part of the sphere decomposition of the endpoint.
inline PhasePoint flow_of_direction(const FlowOracle& o, const AnisotropyIndex& a, const PhasePoint& dir, double t) {
    if (std::abs(dir.norm() - 1.0) > 1e-9) throw std::invalid_argument("flow_of_direction: dir must be unit");
    if (t == 0.0) return dir;
    PhasePoint end = flow_endpoint(o, dir, t);
    return sphere_decompose(end, a).unit;
}

// Transported leading symbol psi_delta(z) q0(chi_{-t}(z)) sampled per node.
// Nodes inside B_{delta/2} are exact zeros without any flow evaluation.
inline SymbolField transport_symbol(const SymbolDescriptor& q0, const FlowOracle& flow, double t, double delta,
                                    const Grid& g) {
    SymbolField f;
    f.grid = g;
    f.vals.assign(g.n * g.n, 0.0);
    parallel_for(g.n, [&](std::size_t j) {
        for (std::size_t k = 0; k < g.n; ++k) {
            PhasePoint z(g.x(j), g.xi(k));
            double psi = cutoff_psi(z, delta);
            if (psi == 0.0) continue;
            PhasePoint back = (t == 0.0) ? z : flow_endpoint(flow, z, -t);
            f.vals[j * g.n + k] = psi * eval_symbol_real(q0, back);
        }
    });
    return f;
}

}  // namespace aniso
