// Command-line front end: designs closed trochoidal swarm trajectories,
// validates them against the distance constraints, and drives the
// simulation, injection, coverage, and perturbation studies.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "troch/csv.hpp"
#include "troch/design.hpp"
#include "troch/design_io.hpp"
#include "troch/injection.hpp"
#include "troch/region.hpp"
#include "troch/sim.hpp"
#include "troch/svg.hpp"
#include "troch/trajectory.hpp"

namespace fs = std::filesystem;
using namespace troch;

namespace {

int log_level() {
    static const int level = [] {
        const char* env = std::getenv("TROCHOID_LOG");
        return env ? std::atoi(env) : 0;
    }();
    return level;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[trochoswarm] " << msg << "\n";
}

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitEmptyRegion = 2;

struct ConstraintOptions {
    double delta = 0.0;
    double cusp_epsilon = 0.0;
};

ConstraintSet build_constraints(const Eigenstructure& eig, const DesignSpec& spec,
                                const ConstraintOptions& opt) {
    ConstraintSet cs = constraint_halfplanes(eig, spec);
    if (opt.delta > 0.0) cs = apply_perturbation_margin(std::move(cs), opt.delta);
    const double eps = opt.cusp_epsilon > 0.0 ? opt.cusp_epsilon : spec.cusp_epsilon;
    if (eps > 0.0) {
        const auto bands = cusp_exclusion_bands(eig, eps);
        cs.disjunctions.insert(cs.disjunctions.end(), bands.begin(), bands.end());
    }
    return cs;
}

int run_design(const std::string& config_path, const std::string& out_dir, bool auto_point,
               double delta_flag, double cusp_flag) {
    const std::string config_bytes = read_file(config_path);
    DesignConfig cfg = parse_design_config(config_bytes);
    if (auto_point) cfg.auto_point = true;
    ConstraintOptions opt;
    opt.delta = delta_flag > 0.0 ? delta_flag : cfg.delta;
    opt.cusp_epsilon = cusp_flag;

    const auto eig =
        eigenstructure(design_beta(cfg.spec.triple, cfg.spec.k, cfg.spec.type), cfg.spec.k,
                       cfg.spec.type);
    const ConstraintSet cs = build_constraints(eig, cfg.spec, opt);

    fs::create_directories(out_dir);
    FeasibleRegion region;
    try {
        region = enumerate_regions(cs);
    } catch (const EmptyRegionError& e) {
        write_file(out_dir + "/region.svg", plot_regions(eig, nullptr, nullptr, std::nullopt));
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyRegion;
    }

    double R_c = cfg.R_c, d_c = cfg.d_c;
    if (cfg.auto_point) {
        size_t best = 0;
        for (size_t i = 1; i < region.polygons.size(); ++i)
            if (region.polygons[i].area() > region.polygons[best].area()) best = i;
        const Vec2 p = deepest_point(region.polygons[best]);
        R_c = p.x;
        d_c = p.y;
        info("auto-selected design point (" + std::to_string(R_c) + ", " + std::to_string(d_c) +
             ")");
    } else {
        const auto cls = classify_point(cs, R_c, d_c);
        if (!cls.feasible) {
            std::cerr << "error: requested point (" << R_c << ", " << d_c
                      << ") is infeasible; violated:";
            for (const auto& tag : cls.violated) std::cerr << " [" << tag.label() << "]";
            std::cerr << "\n";
            return kExitEmptyRegion;
        }
    }

    DesignDocument doc =
        build_design_document(cfg.spec, eig, R_c, d_c, cfg.auto_point, config_bytes);
    write_file(out_dir + "/design.json", save_design_document(doc));
    write_file(out_dir + "/region.csv", region_csv(region));
    write_file(out_dir + "/region.svg", plot_regions(eig, &region, nullptr, Vec2{R_c, d_c}));
    info("design written to " + out_dir);
    std::cout << "design feasible: R_c=" << R_c << " d_c=" << d_c << " positions ("
              << doc.initial_positions[0].x << ", " << doc.initial_positions[1].x << ", "
              << doc.initial_positions[2].x << ")\n";
    return kExitOk;
}

// duration semantics: negative = one period, zero = empty run, else as given.
int run_simulate(const std::string& design_path, const std::string& out_dir, double dt,
                 double duration, double scale, const std::string& integrator, bool track,
                 double k_p, double k_i, double v_max, double omega_max) {
    const DesignDocument doc = load_design_document(read_file(design_path));
    SimConfig cfg;
    cfg.dt = dt;
    cfg.scale = scale;
    cfg.k_p = k_p;
    cfg.k_i = k_i;
    if (v_max > 0.0) cfg.v_max = v_max;
    if (omega_max > 0.0) cfg.omega_max = omega_max;
    if (integrator == "euler")
        cfg.integrator = Integrator::Euler;
    else if (integrator != "rk4")
        throw ConfigError("integrator must be rk4 or euler");

    // scaling the gains re-derives the closed form from the same positions
    const auto beta = scale_beta(doc.eig.beta, scale);
    const auto eig = eigenstructure(beta, doc.eig.k, doc.eig.type);
    const auto state = recompute_from_positions(eig, doc.initial_positions);
    const auto reference = trochoids_from_state(eig, state);
    cfg.duration = duration < 0.0 ? reference[0].period() : duration;

    fs::create_directories(out_dir);
    json report{{"schema_version", kSchemaVersion},
                {"config",
                 json{{"dt", cfg.dt},
                      {"duration", cfg.duration},
                      {"scale", scale},
                      {"integrator", integrator},
                      {"k_p", cfg.k_p},
                      {"k_i", cfg.k_i}}},
                {"design_hash", doc.input_hash}};

    if (cfg.duration == 0.0) {
        write_file(out_dir + "/trajectory.csv", std::string(kTrajectoryCsvHeader) + "\n");
        report["samples"] = 0;
        report["max_closed_form_deviation"] = 0.0;
        write_file(out_dir + "/sim_report.json", report.dump(2) + "\n");
        std::cout << "simulate: empty run\n";
        return kExitOk;
    }

    const CpTrace trace = integrate_cp(beta, doc.initial_positions, cfg);
    double max_dev = 0.0, sum_sq = 0.0;
    double max_amp_drift = 0.0;
    for (size_t n = 0; n < trace.t.size(); ++n) {
        for (int i = 0; i < 3; ++i) {
            const double err =
                (trace.x[n][i] - trochoid_position(reference[i], trace.t[n])).norm();
            max_dev = std::max(max_dev, err);
            sum_sq += err * err;
        }
        if (n % 64 == 0) {
            const auto st = recompute_from_positions(eig, trace.x[n]);
            if (state.R_c > 0.0)
                max_amp_drift = std::max(max_amp_drift, std::abs(st.R_c - state.R_c) / state.R_c);
            if (state.d_c > 0.0)
                max_amp_drift = std::max(max_amp_drift, std::abs(st.d_c - state.d_c) / state.d_c);
        }
    }
    report["samples"] = trace.t.size();
    report["max_closed_form_deviation"] = max_dev;
    report["rms_closed_form_deviation"] =
        std::sqrt(sum_sq / (3.0 * static_cast<double>(trace.t.size())));
    report["max_amplitude_drift"] = max_amp_drift;

    if (track) {
        json tr = json::array();
        for (int i = 0; i < 3; ++i) {
            const auto res = unicycle_track(reference[i], cfg);
            tr.push_back(json{{"agent_id", i + 1},
                              {"rms_err", res.rms_err},
                              {"max_err", res.max_err},
                              {"peak_v", res.peak_v},
                              {"peak_omega", res.peak_omega},
                              {"omega_saturated", res.omega_saturated},
                              {"v_saturated", res.v_saturated}});
        }
        report["tracking"] = tr;
    }

    write_file(out_dir + "/trajectory.csv", trace_csv(trace, beta, reference));
    write_file(out_dir + "/sim_report.json", report.dump(2) + "\n");
    info("simulation written to " + out_dir);
    std::cout << "simulate: max closed-form deviation " << max_dev << "\n";
    return kExitOk;
}

int run_inject(const std::string& design_path, const std::string& out_dir) {
    const DesignDocument doc = load_design_document(read_file(design_path));
    const InjectionPlan plan = injection_feasible(doc.trochoids, doc.spec.d_ct);
    fs::create_directories(out_dir);
    json j{{"schema_version", kSchemaVersion},
           {"design_hash", doc.input_hash},
           {"injection", detail::plan_to_json(plan)}};
    write_file(out_dir + "/injection.json", j.dump(2) + "\n");
    std::cout << "inject: " << plan.total_agents << " agents total; offsets per path ("
              << plan.feasible_offsets[0].size() << ", " << plan.feasible_offsets[1].size()
              << ", " << plan.feasible_offsets[2].size() << ")\n";
    return kExitOk;
}

int run_coverage(const std::string& design_path, const std::string& out_dir, double r_sense) {
    const DesignDocument doc = load_design_document(read_file(design_path));
    const double r = r_sense > 0.0 ? r_sense : doc.spec.sense_radius;
    if (!(r > 0.0)) throw ConfigError("sensing radius must be positive (--r-sense or config)");
    const CoverageReport rep = sensing_area(doc.trochoids, r);
    fs::create_directories(out_dir);
    json j{{"schema_version", kSchemaVersion},
           {"design_hash", doc.input_hash},
           {"r_sense", r},
           {"arc_length", rep.arc_length},
           {"area", rep.area},
           {"total", rep.total}};
    write_file(out_dir + "/coverage.json", j.dump(2) + "\n");
    std::cout << "coverage: total " << rep.total << "\n";
    return kExitOk;
}

int run_perturb(const std::string& design_path, const std::string& out_dir, double epsilon,
                int count, unsigned seed, double delta) {
    const DesignDocument doc = load_design_document(read_file(design_path));
    std::mt19937 rng(seed);
    json by_tag = json::object();
    int violations_total = 0;
    double worst_origin_min = 1e300;
    double worst_pair_min = 1e300;
    for (int n = 0; n < count; ++n) {
        const auto rep = perturb_random(doc.eig, doc.spec, doc.R_c, doc.d_c, epsilon, rng);
        violations_total += static_cast<int>(rep.violations.size());
        for (const auto& v : rep.violations)
            by_tag[v] = by_tag.contains(v) ? by_tag[v].get<int>() + 1 : 1;
        for (int i = 0; i < 3; ++i)
            worst_origin_min = std::min(worst_origin_min, rep.origin_min[i]);
        for (int i = 0; i < 3; ++i) worst_pair_min = std::min(worst_pair_min, rep.pair_min[i]);
    }
    json j{{"schema_version", kSchemaVersion},
           {"design_hash", doc.input_hash},
           {"seed", seed},
           {"count", count},
           {"epsilon", epsilon},
           {"violations_total", violations_total},
           {"violations_by_tag", by_tag},
           {"worst_origin_min", worst_origin_min},
           {"worst_pair_min", worst_pair_min}};
    if (delta > 0.0) {
        const auto cs =
            apply_perturbation_margin(constraint_halfplanes(doc.eig, doc.spec), delta);
        j["hardened_point_feasible"] = classify_point(cs, doc.R_c, doc.d_c).feasible;
        j["delta"] = delta;
    }
    fs::create_directories(out_dir);
    write_file(out_dir + "/perturb_report.json", j.dump(2) + "\n");
    std::cout << "perturb: " << violations_total << " violations over " << count << " draws\n";
    return kExitOk;
}

int run_plot(const std::string& design_path, const std::string& what, std::string out_path,
             bool injected) {
    const DesignDocument doc = load_design_document(read_file(design_path));
    if (out_path.empty()) out_path = what + ".svg";
    std::string svg;
    if (what == "regions") {
        const auto cs = build_constraints(doc.eig, doc.spec, {});
        std::optional<FeasibleRegion> shrunk;
        try {
            const FeasibleRegion region = enumerate_regions(cs);
            if (injected || doc.injection) {
                auto cs2 = cs;
                const auto extra = injection_constraint_disjunctions(doc.eig, doc.spec.d_ct);
                cs2.disjunctions.insert(cs2.disjunctions.end(), extra.begin(), extra.end());
                try {
                    shrunk = enumerate_regions(cs2);
                } catch (const EmptyRegionError&) {
                }
            }
            svg = plot_regions(doc.eig, &region, shrunk ? &*shrunk : nullptr,
                               Vec2{doc.R_c, doc.d_c});
        } catch (const EmptyRegionError&) {
            svg = plot_regions(doc.eig, nullptr, nullptr, std::nullopt);
        }
    } else if (what == "paths") {
        std::optional<InjectionPlan> plan = doc.injection;
        if (!plan && injected) plan = injection_feasible(doc.trochoids, doc.spec.d_ct);
        svg = plot_paths(doc.trochoids, plan ? &*plan : nullptr);
    } else if (what == "speeds") {
        svg = plot_speeds(doc.trochoids);
    } else {
        throw ConfigError("unknown plot kind: " + what + " (expected regions|paths|speeds)");
    }
    write_file(out_path, svg);
    std::cout << "plot written to " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed trochoidal trajectory design for a three-agent consensus swarm"};
    app.require_subcommand(1);

    std::string config_path, design_path, out_dir = ".", out_path, what = "regions";
    std::string integrator = "rk4";
    bool auto_point = false, track = false, injected = false;
    double delta = 0.0, cusp_eps = 0.0, dt = 1e-4, duration = -1.0, scale = 1.0;
    double epsilon = 0.0, r_sense = 0.0, k_p = 4.0, k_i = 0.5, v_max = 0.0, omega_max = 0.0;
    int count = 100;
    unsigned seed = 0;

    auto* design = app.add_subcommand("design", "compute a feasible design from a config");
    design->add_option("--config", config_path, "design config JSON")->required();
    design->add_option("--out-dir", out_dir, "output directory");
    design->add_flag("--auto-point", auto_point, "pick the deepest point of the largest region");
    design->add_option("--delta", delta, "perturbation-hardening margin on d0_min");
    design->add_option("--epsilon-cusp", cusp_eps, "cusp-band half width to exclude");

    auto* simulate = app.add_subcommand("simulate", "integrate the protocol against the design");
    simulate->add_option("--design", design_path, "design document")->required();
    simulate->add_option("--out-dir", out_dir, "output directory");
    simulate->add_option("--dt", dt, "integration step");
    simulate->add_option("--duration", duration, "run length (default one period)");
    simulate->add_option("--scale", scale, "gain-scaling factor");
    simulate->add_option("--integrator", integrator, "rk4 or euler");
    simulate->add_flag("--track", track, "also run the unicycle tracking controller");
    simulate->add_option("--kp", k_p, "heading proportional gain");
    simulate->add_option("--ki", k_i, "heading integral gain");
    simulate->add_option("--v-max", v_max, "linear speed limit");
    simulate->add_option("--omega-max", omega_max, "turn-rate limit");

    auto* inject = app.add_subcommand("inject", "evaluate extra-agent injection offsets");
    inject->add_option("--design", design_path, "design document")->required();
    inject->add_option("--out-dir", out_dir, "output directory");

    auto* coverage = app.add_subcommand("coverage", "sensing-area report over one period");
    coverage->add_option("--design", design_path, "design document")->required();
    coverage->add_option("--out-dir", out_dir, "output directory");
    coverage->add_option("--r-sense", r_sense, "sensing radius override");

    auto* perturb = app.add_subcommand("perturb", "seeded perturbation study");
    perturb->add_option("--design", design_path, "design document")->required();
    perturb->add_option("--out-dir", out_dir, "output directory");
    perturb->add_option("--epsilon", epsilon, "max perturbation magnitude")->required();
    perturb->add_option("--count", count, "number of draws");
    perturb->add_option("--seed", seed, "random seed");
    perturb->add_option("--delta", delta, "report feasibility under this hardening margin");

    auto* plot = app.add_subcommand("plot", "emit an SVG view of the design");
    plot->add_option("--design", design_path, "design document")->required();
    plot->add_option("--what", what, "regions|paths|speeds");
    plot->add_option("--out", out_path, "output SVG path");
    plot->add_flag("--injected", injected, "include injected agents");

    CLI11_PARSE(app, argc, argv);

    try {
        if (design->parsed())
            return run_design(config_path, out_dir, auto_point, delta, cusp_eps);
        if (simulate->parsed())
            return run_simulate(design_path, out_dir, dt, duration, scale, integrator, track,
                                k_p, k_i, v_max, omega_max);
        if (inject->parsed()) return run_inject(design_path, out_dir);
        if (coverage->parsed()) return run_coverage(design_path, out_dir, r_sense);
        if (perturb->parsed())
            return run_perturb(design_path, out_dir, epsilon, count, seed, delta);
        if (plot->parsed()) return run_plot(design_path, what, out_path, injected);
    } catch (const EmptyRegionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEmptyRegion;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
