#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "anisowave/geometry.hpp"
#include "anisowave/grid.hpp"
#include "anisowave/parallel.hpp"
#include "anisowave/stft.hpp"

namespace aniso {

// Sampling plan for the decay rays: unit directions theta_i = 2 pi i / n_dir,
// a geometric lambda ladder capped per direction by the grid budget, and a
// small angular neighborhood realizing the open set U of the definition.
struct RayPlan {
    int n_dir = 360;
    double lambda_min = 1.0;
    double ratio = std::pow(2.0, 1.0 / 8.0);
    double u_half_deg = 2.0;
    int n_offsets = 3;
    double threshold = 6.0;      // fitted-order cutoff for a singular verdict
    double residual_max = 1.0;   // rms log-fit residual gate
    int min_rungs = 12;
    double trust = 0.9;          // fraction of space range / Nyquist probed
    double floor_rel = 1e-13;    // dynamic-range cut relative to max |V|

    std::vector<double> ladder(double lambda_cap) const {
        std::vector<double> l;
        for (double v = lambda_min; v <= lambda_cap; v *= ratio) {
            l.push_back(v);
            if (l.size() > 4096) break;
        }
        return l;
    }
};

enum class Verdict { regular, singular, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::regular: return "regular";
        case Verdict::singular: return "singular";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct DecayProfile {
    PhasePoint direction;
    double angle_deg = 0.0;
    double fitted_order = 0.0;  // -slope of log|V| against log lambda
    double residual = 0.0;      // rms fit error
    int rungs_used = 0;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::pair<double, double>> curve;  // (lambda, max |V| over U)
};

struct WaveFrontEstimate {
    AnisotropyIndex sigma = AnisotropyIndex::rational(1, 1);
    std::vector<DecayProfile> profiles;
    std::vector<double> singular_angles_deg;
    bool low_confidence = false;  // > 30% of the rays inconclusive
};

// Decay profile of |V| along lambda -> (lambda x0, lambda^sigma xi0) with the
// max taken over the in-region U offsets; rungs outside the trusted region
// (90% of the space range and of Nyquist, and a dynamic-range floor) are
// discarded. Fewer than min_rungs retained rungs gives an inconclusive
// verdict rather than an exception.
inline DecayProfile sample_ray(const PhaseGridMatrix& V, const PhasePoint& dir, const AnisotropyIndex& a,
                               const RayPlan& plan, double abs_floor) {
    DecayProfile prof;
    prof.direction = dir;
    prof.angle_deg = direction_angle_deg(dir);

    const double xmax = plan.trust * 0.5 * V.grid.length();
    const double ximax = plan.trust * V.grid.xi_nyquist();
    const double s = a.sigma();
    const double base = std::atan2(dir.xi[0], dir.x[0]);

    std::vector<double> offs(plan.n_offsets);
    if (plan.n_offsets == 1)
        offs[0] = 0.0;
    else
        for (int i = 0; i < plan.n_offsets; ++i)
            offs[i] = (-plan.u_half_deg + 2.0 * plan.u_half_deg * i / (plan.n_offsets - 1)) * M_PI / 180.0;

    double cap = std::max(xmax, std::pow(ximax, 1.0 / s)) * 2.0;
    for (double lam : plan.ladder(cap)) {
        double best = -1.0;
        double ls = std::pow(lam, s);
        for (double o : offs) {
            double X = lam * std::cos(base + o);
            double XI = ls * std::sin(base + o);
            if (std::abs(X) > xmax || std::abs(XI) > ximax) continue;
            double v = V.interp_abs(X, XI);
            if (std::isfinite(v)) best = std::max(best, v);
        }
        if (best < 0.0 || best < abs_floor) continue;
        prof.curve.emplace_back(lam, best);
    }

    prof.rungs_used = static_cast<int>(prof.curve.size());
    if (prof.rungs_used < plan.min_rungs) {
        prof.verdict = Verdict::inconclusive;
        return prof;
    }

    // least squares of log(value + eps_floor) against log lambda
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double nrm = static_cast<double>(prof.rungs_used);
    for (const auto& [lam, val] : prof.curve) {
        double lx = std::log(lam), ly = std::log(val + 1e-300);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    double denom = nrm * sxx - sx * sx;
    double slope = (nrm * sxy - sx * sy) / denom;
    double inter = (sy - slope * sx) / nrm;
    double r2 = 0;
    for (const auto& [lam, val] : prof.curve) {
        double e = std::log(val + 1e-300) - (slope * std::log(lam) + inter);
        r2 += e * e;
    }
    prof.fitted_order = -slope;
    prof.residual = std::sqrt(r2 / nrm);
    prof.verdict = (prof.fitted_order < plan.threshold && prof.residual < plan.residual_max)
                       ? Verdict::singular
                       : Verdict::regular;
    return prof;
}

inline WaveFrontEstimate estimate_wavefront(const Signal& u, const AnisotropyIndex& a, const WindowSpec& w,
                                            const RayPlan& plan = RayPlan()) {
    PhaseGridMatrix V = stft(u, w);
    WaveFrontEstimate est;
    est.sigma = a;
    est.profiles.resize(plan.n_dir);
    const double abs_floor = plan.floor_rel * V.max_abs();
    parallel_for(static_cast<std::size_t>(plan.n_dir), [&](std::size_t i) {
        double th = 2.0 * M_PI * static_cast<double>(i) / plan.n_dir;
        est.profiles[i] = sample_ray(V, unit_direction(th), a, plan, abs_floor);
    });
    int inconclusive = 0;
    for (const auto& p : est.profiles) {
        if (p.verdict == Verdict::singular) est.singular_angles_deg.push_back(p.angle_deg);
        if (p.verdict == Verdict::inconclusive) ++inconclusive;
    }
    est.low_confidence = inconclusive * 10 > plan.n_dir * 3;
    return est;
}

// Symmetric angular Hausdorff distance between two finite direction sets in
// degrees. Empty vs empty is 0; empty vs nonempty is 180.
inline double hausdorff_angle_deg(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() && b.empty()) return 0.0;
    if (a.empty() || b.empty()) return 180.0;
    auto dist = [](double p, double q) {
        double d = std::fmod(std::abs(p - q), 360.0);
        return std::min(d, 360.0 - d);
    };
    double h = 0.0;
    for (double p : a) {
        double best = 1e300;
        for (double q : b) best = std::min(best, dist(p, q));
        h = std::max(h, best);
    }
    for (double q : b) {
        double best = 1e300;
        for (double p : a) best = std::min(best, dist(p, q));
        h = std::max(h, best);
    }
    return h;
}

struct FourierCheckReport {
    WaveFrontEstimate hat_side;     // WF^sigma(u^) on the dual grid
    WaveFrontEstimate mapped_side;  // J WF^{1/sigma}(u)
    double hausdorff_deg = 0.0;
    bool low_confidence = false;
};

// Verifies WF^sigma(u^) = J WF^{1/sigma}(u) by detecting both sides; the
// J map sends the direction angle phi to phi - 90 degrees.
inline FourierCheckReport fourier_wavefront_check(const Signal& u, const AnisotropyIndex& a, const WindowSpec& w,
                                                  const RayPlan& plan = RayPlan()) {
    FourierCheckReport rep;
    Signal uhat = fourier_transform(u);
    rep.hat_side = estimate_wavefront(uhat, a, w, plan);

    AnisotropyIndex inv = a.is_rational() ? AnisotropyIndex::rational(a.m, a.k) : AnisotropyIndex::real(1.0 / a.sigma());
    rep.mapped_side = estimate_wavefront(u, inv, w, plan);
    for (auto& ang : rep.mapped_side.singular_angles_deg) {
        ang -= 90.0;
        if (ang < 0.0) ang += 360.0;
    }
    std::sort(rep.mapped_side.singular_angles_deg.begin(), rep.mapped_side.singular_angles_deg.end());

    rep.hausdorff_deg = hausdorff_angle_deg(rep.hat_side.singular_angles_deg, rep.mapped_side.singular_angles_deg);
    rep.low_confidence = rep.hat_side.low_confidence || rep.mapped_side.low_confidence;
    return rep;
}

// --- exports ----------------------------------------------------------------

inline void export_decay_csv(const WaveFrontEstimate& est, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("export_decay_csv: cannot open " + path);
    f << "direction_angle_deg,lambda,value,retained\n";
    for (const auto& p : est.profiles)
        for (const auto& [lam, val] : p.curve)
            f << p.angle_deg << "," << lam << "," << val << ",1\n";
}

}  // namespace aniso
