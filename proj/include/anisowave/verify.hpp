#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "anisowave/hamilton.hpp"
#include "anisowave/propagate.hpp"
#include "anisowave/wavefront.hpp"

namespace aniso {

enum class Engine { airy, harmonic, cn };

inline const char* engine_name(Engine e) {
    switch (e) {
        case Engine::airy: return "airy";
        case Engine::harmonic: return "harmonic";
        case Engine::cn: return "cn";
    }
    return "?";
}

struct VerifyOptions {
    Engine engine = Engine::airy;
    AirySpec airy;               // airy / cn default Hamiltonian
    double harmonic_c = 0.5;     // harmonic engine coefficient
    std::optional<SymbolDescriptor> cn_symbol;  // cn engine symbol (else airy.full_symbol())
    int cn_steps = 2000;
    double flow_step = 1e-3;
};

struct PropagationReport {
    WaveFrontEstimate initial;
    WaveFrontEstimate evolved;
    std::vector<double> predicted_angles_deg;  // flow image of the initial singular set
    double hausdorff_deg = 0.0;
    bool low_confidence = false;
    bool flow_abort = false;
    std::vector<std::string> warnings;
};

// Detects WF(u0), pushes each singular direction through the Hamilton flow of
// the principal symbol, evolves u0 with the requested engine, detects the
// evolved wave front set, and compares by the angular Hausdorff distance.
inline PropagationReport verify_propagation(const Signal& u0, const SymbolDescriptor& principal,
                                            const AnisotropyIndex& a, double t, const VerifyOptions& opt,
                                            const WindowSpec& w = WindowSpec(1.0), const RayPlan& plan = RayPlan()) {
    PropagationReport rep;
    rep.initial = estimate_wavefront(u0, a, w, plan);

    FlowOracle flow(principal, opt.flow_step);
    for (double ang : rep.initial.singular_angles_deg) {
        try {
            PhasePoint moved = flow_of_direction(flow, a, unit_direction(ang * M_PI / 180.0), t);
            rep.predicted_angles_deg.push_back(direction_angle_deg(moved));
        } catch (const std::exception&) {
            rep.flow_abort = true;
        }
    }

    Signal evolved = u0;
    switch (opt.engine) {
        case Engine::airy: {
            Propagation p = airy_propagate(u0, opt.airy, t);
            rep.warnings = p.warnings;
            evolved = std::move(p.signal);
            break;
        }
        case Engine::harmonic:
            evolved = harmonic_propagate(u0, opt.harmonic_c, t);
            break;
        case Engine::cn: {
            SymbolDescriptor s = opt.cn_symbol ? *opt.cn_symbol : opt.airy.full_symbol();
            EvolutionRun run = cn_evolve(s, u0, t, opt.cn_steps);
            evolved = run.states.back();
            break;
        }
    }

    rep.evolved = estimate_wavefront(evolved, a, w, plan);
    rep.hausdorff_deg = hausdorff_angle_deg(rep.evolved.singular_angles_deg, rep.predicted_angles_deg);
    rep.low_confidence = rep.initial.low_confidence || rep.evolved.low_confidence;
    return rep;
}

}  // namespace aniso
