// Command-line front end: wave front detection, Hamilton flows, propagators,
// and propagation verification with reproducible run archives.
//
// Exit codes: 0 success, 1 usage or input error, 2 low-confidence result.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "anisowave/grid.hpp"
#include "anisowave/hamilton.hpp"
#include "anisowave/propagate.hpp"
#include "anisowave/stft.hpp"
#include "anisowave/symbols.hpp"
#include "anisowave/verify.hpp"
#include "anisowave/wavefront.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aniso;

namespace {

struct ExperimentConfig {
    int schema_version = 1;
    std::uint64_t seed = 0;
    std::string command = "wf";
    std::string datum = "gaussian:1";
    std::string sigma = "1";
    std::size_t n = 1024;
    double length = 0.0;  // 0 selects the self-dual length sqrt(2 pi n)
    double center = 0.0;
    double window_width = 1.0;
    double threshold = 6.0;
    double u_half_deg = 2.0;
    double lambda_min = 1.0;
    double ratio_log2_inv = 8.0;
    int n_dir = 360;
    double t = 0.5;
    int steps = 2000;
    std::string engine = "airy";
    std::vector<double> airy_p = {0.0, 0.0, 1.0};
    double airy_v = 1.0;
    double harmonic_c = 0.5;
    std::string symbol_json;  // optional SymbolDescriptor for flow / cn
    std::vector<double> z0 = {1.0, 0.0};
    double flow_step = 1e-3;
    std::string out = "run";
};

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["schema_version"] = c.schema_version;
    j["seed"] = c.seed;
    j["command"] = c.command;
    j["datum"] = c.datum;
    j["sigma"] = c.sigma;
    j["n"] = c.n;
    j["length"] = c.length;
    j["center"] = c.center;
    j["window_width"] = c.window_width;
    j["threshold"] = c.threshold;
    j["u_half_deg"] = c.u_half_deg;
    j["lambda_min"] = c.lambda_min;
    j["ratio_log2_inv"] = c.ratio_log2_inv;
    j["n_dir"] = c.n_dir;
    j["t"] = c.t;
    j["steps"] = c.steps;
    j["engine"] = c.engine;
    j["airy_p"] = c.airy_p;
    j["airy_v"] = c.airy_v;
    j["harmonic_c"] = c.harmonic_c;
    j["symbol_json"] = c.symbol_json;
    j["z0"] = c.z0;
    j["flow_step"] = c.flow_step;
    j["out"] = c.out;
    return j;
}

void config_from_json(const json& j, ExperimentConfig& c) {
    c.schema_version = j.value("schema_version", 1);
    c.seed = j.value("seed", std::uint64_t{0});
    c.command = j.value("command", c.command);
    c.datum = j.value("datum", c.datum);
    c.sigma = j.value("sigma", c.sigma);
    c.n = j.value("n", c.n);
    c.length = j.value("length", c.length);
    c.center = j.value("center", c.center);
    c.window_width = j.value("window_width", c.window_width);
    c.threshold = j.value("threshold", c.threshold);
    c.u_half_deg = j.value("u_half_deg", c.u_half_deg);
    c.lambda_min = j.value("lambda_min", c.lambda_min);
    c.ratio_log2_inv = j.value("ratio_log2_inv", c.ratio_log2_inv);
    c.n_dir = j.value("n_dir", c.n_dir);
    c.t = j.value("t", c.t);
    c.steps = j.value("steps", c.steps);
    c.engine = j.value("engine", c.engine);
    if (j.contains("airy_p")) c.airy_p = j["airy_p"].get<std::vector<double>>();
    c.airy_v = j.value("airy_v", c.airy_v);
    c.harmonic_c = j.value("harmonic_c", c.harmonic_c);
    c.symbol_json = j.value("symbol_json", c.symbol_json);
    if (j.contains("z0")) c.z0 = j["z0"].get<std::vector<double>>();
    c.flow_step = j.value("flow_step", c.flow_step);
    c.out = j.value("out", c.out);
}

CanonicalDatum parse_datum(const std::string& s) {
    auto colon = s.find(':');
    std::string tag = s.substr(0, colon);
    std::vector<double> par;
    if (colon != std::string::npos) {
        std::stringstream ss(s.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) par.push_back(std::stod(item));
    }
    if (tag == "gaussian") return CanonicalDatum::gaussian(par.empty() ? 1.0 : par[0]);
    if (tag == "delta") return CanonicalDatum::delta(par.empty() ? 0.0 : par[0]);
    if (tag == "constant") return CanonicalDatum::constant();
    if (tag == "chirp")
        return CanonicalDatum::chirp(par.empty() ? 0.5 : par[0], par.size() > 1 ? static_cast<int>(par[1]) : 2);
    if (tag == "hermite") return CanonicalDatum::hermite(par.empty() ? 0 : static_cast<int>(par[0]));
    if (tag == "plane") return CanonicalDatum::plane_wave(par.empty() ? 0.0 : par[0]);
    throw std::invalid_argument("unknown datum tag: " + tag);
}

AnisotropyIndex parse_sigma(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos)
        return AnisotropyIndex::rational(std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1)));
    double v = std::stod(s);
    // integer sigma values stay rational so the w_{k,m} machinery is usable
    if (v == std::floor(v) && v >= 1.0 && v < 1e6) return AnisotropyIndex::rational(static_cast<int>(v), 1);
    return AnisotropyIndex::real(v);
}

Grid grid_from_config(const ExperimentConfig& c) {
    if (c.length > 0.0) return make_grid(c.n, c.length, c.center);
    return make_self_dual_grid(c.n, c.center);
}

RayPlan plan_from_config(const ExperimentConfig& c) {
    RayPlan p;
    p.n_dir = c.n_dir;
    p.threshold = c.threshold;
    p.u_half_deg = c.u_half_deg;
    p.lambda_min = c.lambda_min;
    p.ratio = std::pow(2.0, 1.0 / c.ratio_log2_inv);
    return p;
}

SymbolDescriptor symbol_from_config(const ExperimentConfig& c) {
    if (!c.symbol_json.empty()) return symbol_from_json(json::parse(c.symbol_json));
    return AirySpec(c.airy_p, c.airy_v).full_symbol();
}

json estimate_to_json(const WaveFrontEstimate& est, double threshold) {
    json j;
    j["sigma"] = est.sigma.sigma();
    j["threshold"] = threshold;
    j["singular_angles_deg"] = est.singular_angles_deg;
    j["low_confidence"] = est.low_confidence;
    return j;
}

// Archives are assembled in a staging directory and renamed into place.
struct RunArchive {
    fs::path final_dir, tmp_dir;
    explicit RunArchive(const std::string& out) : final_dir(out), tmp_dir(out + ".partial") {
        fs::remove_all(tmp_dir);
        fs::create_directories(tmp_dir);
    }
    void commit() {
        fs::remove_all(final_dir);
        fs::rename(tmp_dir, final_dir);
    }
    fs::path path(const std::string& name) const { return tmp_dir / name; }
};

void write_json(const fs::path& p, const json& j) {
    std::ofstream f(p);
    f << j.dump(2) << "\n";
}

int cmd_wf(const ExperimentConfig& cfg) {
    Grid g = grid_from_config(cfg);
    Synthesis syn = synthesize(parse_datum(cfg.datum), g);
    if (syn.has_warning(SignalWarning::boundary_mass))
        std::cerr << "warning: signal mass in the boundary strips exceeds 1e-10 of the total\n";
    if (syn.has_warning(SignalWarning::nyquist_phase))
        std::cerr << "warning: instantaneous frequency exceeds Nyquist\n";

    WaveFrontEstimate est = estimate_wavefront(syn.signal, parse_sigma(cfg.sigma), WindowSpec(cfg.window_width),
                                               plan_from_config(cfg));

    RunArchive ar(cfg.out);
    write_json(ar.path("config.json"), config_to_json(cfg));
    write_json(ar.path("estimate.json"), estimate_to_json(est, cfg.threshold));
    export_decay_csv(est, ar.path("decay.csv").string());
    export_pgm(stft(syn.signal, WindowSpec(cfg.window_width)), ar.path("stft.pgm").string());
    ar.commit();

    std::cout << "singular angles (deg):";
    for (double a : est.singular_angles_deg) std::cout << " " << a;
    std::cout << "\nlow_confidence: " << (est.low_confidence ? "true" : "false") << "\n";
    return est.low_confidence ? 2 : 0;
}

int cmd_flow(const ExperimentConfig& cfg, bool check_commutation) {
    SymbolDescriptor sym = symbol_from_config(cfg);
    FlowOracle oracle(sym, cfg.flow_step);
    if (check_commutation) {
        AnisotropyIndex a = parse_sigma(cfg.sigma);
        CommutationReport rep = check_scaling_commutation(oracle, a, cfg.t, 16, cfg.seed);
        std::cout << "commutation max relative discrepancy: " << rep.max_rel_discrepancy << "\n";
        std::cout << (rep.max_rel_discrepancy < 1e-6 ? "pass" : "fail") << "\n";
        return rep.max_rel_discrepancy < 1e-6 ? 0 : 2;
    }
    if (cfg.z0.size() != 2) throw std::invalid_argument("flow: z0 must be x,xi");
    FlowTrajectory tr = integrate_flow(oracle, PhasePoint(cfg.z0[0], cfg.z0[1]), cfg.t);

    RunArchive ar(cfg.out);
    write_json(ar.path("config.json"), config_to_json(cfg));
    {
        std::ofstream f(ar.path("trajectory.csv"));
        f << "t,x,xi,energy\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            f << tr.times[i] << "," << tr.points[i].x[0] << "," << tr.points[i].xi[0] << "," << tr.energy[i] << "\n";
    }
    ar.commit();
    const PhasePoint& last = tr.points.back();
    std::cout << "final: t=" << tr.times.back() << " x=" << last.x[0] << " xi=" << last.xi[0]
              << (tr.aborted ? " (aborted)" : "") << "\n";
    return tr.aborted ? 2 : 0;
}

int cmd_propagate(const ExperimentConfig& cfg) {
    Grid g = grid_from_config(cfg);
    Synthesis syn = synthesize(parse_datum(cfg.datum), g);

    RunArchive ar(cfg.out);
    fs::create_directories(ar.path("states"));
    write_json(ar.path("config.json"), config_to_json(cfg));
    save_signal(syn.signal, (ar.path("states") / "initial.json").string());

    json report;
    report["engine"] = cfg.engine;
    report["t"] = cfg.t;
    Signal evolved = syn.signal;
    std::ofstream diag(ar.path("diagnostics.csv"));
    diag << "t,l2_norm\n";
    if (cfg.engine == "airy") {
        Propagation p = airy_propagate(syn.signal, AirySpec(cfg.airy_p, cfg.airy_v), cfg.t);
        evolved = std::move(p.signal);
        report["warnings"] = p.warnings;
        diag << cfg.t << "," << evolved.l2_norm() << "\n";
    } else if (cfg.engine == "harmonic") {
        evolved = harmonic_propagate(syn.signal, cfg.harmonic_c, cfg.t);
        diag << cfg.t << "," << evolved.l2_norm() << "\n";
    } else if (cfg.engine == "cn") {
        EvolutionRun run = cn_evolve(symbol_from_config(cfg), syn.signal, cfg.t, cfg.steps);
        for (std::size_t i = 0; i < run.step_times.size(); ++i)
            diag << run.step_times[i] << "," << run.l2_norms[i] << "\n";
        evolved = run.states.back();
    } else {
        throw CLI::ValidationError("--engine", "unknown engine " + cfg.engine);
    }
    save_signal(evolved, (ar.path("states") / "final.json").string());
    report["l2_initial"] = syn.signal.l2_norm();
    report["l2_final"] = evolved.l2_norm();
    write_json(ar.path("report.json"), report);
    ar.commit();
    std::cout << "final L2 norm: " << evolved.l2_norm() << "\n";
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg) {
    Grid g = grid_from_config(cfg);
    Synthesis syn = synthesize(parse_datum(cfg.datum), g);
    AnisotropyIndex a = parse_sigma(cfg.sigma);

    VerifyOptions opt;
    opt.airy = AirySpec(cfg.airy_p, cfg.airy_v);
    opt.harmonic_c = cfg.harmonic_c;
    opt.cn_steps = cfg.steps;
    opt.flow_step = cfg.flow_step;
    SymbolDescriptor principal;
    if (cfg.engine == "airy") {
        opt.engine = Engine::airy;
        principal = opt.airy.principal_symbol();
    } else if (cfg.engine == "harmonic") {
        opt.engine = Engine::harmonic;
        principal = SymbolDescriptor::harmonic(cfg.harmonic_c);
    } else if (cfg.engine == "cn") {
        opt.engine = Engine::cn;
        opt.cn_symbol = symbol_from_config(cfg);
        principal = *opt.cn_symbol;
    } else {
        throw CLI::ValidationError("--engine", "unknown engine " + cfg.engine);
    }

    PropagationReport rep = verify_propagation(syn.signal, principal, a, cfg.t, opt, WindowSpec(cfg.window_width),
                                               plan_from_config(cfg));

    RunArchive ar(cfg.out);
    write_json(ar.path("config.json"), config_to_json(cfg));
    json report;
    report["engine"] = cfg.engine;
    report["sigma"] = a.sigma();
    report["t"] = cfg.t;
    report["initial_singular_deg"] = rep.initial.singular_angles_deg;
    report["predicted_deg"] = rep.predicted_angles_deg;
    report["evolved_singular_deg"] = rep.evolved.singular_angles_deg;
    report["hausdorff_deg"] = rep.hausdorff_deg;
    report["low_confidence"] = rep.low_confidence;
    report["flow_abort"] = rep.flow_abort;
    write_json(ar.path("report.json"), report);
    ar.commit();

    std::cout << "hausdorff_deg: " << rep.hausdorff_deg << "\n";
    return (rep.low_confidence || rep.flow_abort) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic Gabor wave front toolkit"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_file;
    bool check_commutation = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file");
        sub->add_option("--datum", cfg.datum, "TAG:PARAMS (gaussian:w, delta:xc, constant, chirp:c,m, hermite:k, plane:xic)");
        sub->add_option("--sigma", cfg.sigma, "anisotropy, k/m or decimal");
        sub->add_option("--n", cfg.n, "grid size (power of two)");
        sub->add_option("--length", cfg.length, "domain length (0 = self-dual)");
        sub->add_option("--window-width", cfg.window_width, "Gaussian window width");
        sub->add_option("--threshold", cfg.threshold, "singular order threshold");
        sub->add_option("--u-half-deg", cfg.u_half_deg, "angular half-width of U");
        sub->add_option("--t", cfg.t, "evolution / flow time");
        sub->add_option("--steps", cfg.steps, "Crank-Nicolson steps");
        sub->add_option("--engine", cfg.engine, "airy | harmonic | cn");
        sub->add_option("--out", cfg.out, "run directory");
        sub->add_option("--seed", cfg.seed, "seed for randomized sampling");
        sub->add_option("--symbol", cfg.symbol_json, "symbol descriptor as JSON");
        sub->add_option("--z0", cfg.z0, "flow start point x,xi")->expected(2);
        sub->add_option("--harmonic-c", cfg.harmonic_c, "harmonic coefficient");
        sub->add_option("--airy-p", cfg.airy_p, "Airy polynomial coefficients, ascending");
        sub->add_option("--airy-v", cfg.airy_v, "Airy linear coefficient v");
    };

    CLI::App* wf = app.add_subcommand("wf", "detect and export a wave front set");
    add_common(wf);
    CLI::App* flow = app.add_subcommand("flow", "integrate and export a Hamilton flow");
    add_common(flow);
    flow->add_flag("--check-commutation", check_commutation, "verify flow/scaling commutation");
    CLI::App* prop = app.add_subcommand("propagate", "evolve a datum and archive the run");
    add_common(prop);
    CLI::App* verify = app.add_subcommand("verify", "verify propagation of singularities");
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) {
            // --config supplies the full parameter set; other flags are ignored
            std::ifstream f(config_file);
            if (!f) throw std::runtime_error("cannot open config " + config_file);
            json j;
            f >> j;
            config_from_json(j, cfg);
        }
        if (wf->parsed()) { cfg.command = "wf"; return cmd_wf(cfg); }
        if (flow->parsed()) { cfg.command = "flow"; return cmd_flow(cfg, check_commutation); }
        if (prop->parsed()) { cfg.command = "propagate"; return cmd_propagate(cfg); }
        if (verify->parsed()) { cfg.command = "verify"; return cmd_verify(cfg); }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
