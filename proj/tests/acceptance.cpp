// Acceptance suite: every release criterion of the design pipeline, one
// pass/fail line each.  Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "troch/design.hpp"
#include "troch/detail/minimize.hpp"
#include "troch/injection.hpp"
#include "troch/region.hpp"
#include "troch/sim.hpp"
#include "troch/trajectory.hpp"

using namespace troch;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail,
            double elapsed_s) {
    std::printf("[%s] %2d. %-34s %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str(), elapsed_s);
    if (!ok) ++failures;
}

Eigenstructure make_eig(std::array<int, 3> triple, int k, TrochoidType type) {
    return eigenstructure(design_beta(triple, k, type), k, type);
}

DesignSpec spec_with(std::array<int, 3> triple, double d0_min, double d0_max, double d_ct,
                     double d_cr) {
    DesignSpec s;
    s.k = 2;
    s.triple = triple;
    s.d0_min = d0_min;
    s.d0_max = d0_max;
    s.d_ct = d_ct;
    s.d_cr = d_cr;
    return s;
}

void criterion_1() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto a = initial_positions(eig, 2500.0, 0.0).positions;
    const auto b = initial_positions(eig, 2000.0, 1200.0).positions;
    double worst = 0.0;
    const std::array<double, 3> want_a{-5.121, 2.276, 7.207};
    const std::array<double, 3> want_b{-3.004, -1.821, 9.225};
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(a[i].x - want_a[i]));
        worst = std::max(worst, std::abs(b[i].x - want_b[i]));
        worst = std::max(worst, std::abs(a[i].y));
        worst = std::max(worst, std::abs(b[i].y));
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max position error %.2e (tol 2e-3)", worst);
    report(1, "reference initial positions", worst <= 2e-3 && elapsed < 1.0, buf, elapsed);
}

void criterion_2() {
    const auto t0 = Clock::now();
    const auto small = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto big = make_eig({7, 24, 25}, 2, TrochoidType::Epitrochoid);
    const auto a = initial_positions(small, 500.0, 0.0).positions;
    const auto b = initial_positions(big, 1000.0, 1250.0).positions;
    const std::array<double, 3> want_a{-1.024, 0.455, 1.441};
    const std::array<double, 3> want_b{-0.160, -0.949, 1.584};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        worst = std::max(worst, std::abs(a[i].x - want_a[i]));
        worst = std::max(worst, std::abs(b[i].x - want_b[i]));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max position error %.2e (tol 2e-3)", worst);
    report(2, "laboratory-scale positions", worst <= 2e-3,
           buf, std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_3() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto spec = spec_with({5, 12, 13}, 1.5, 15.0, 0.5, 15.0);
    const auto region = enumerate_regions(constraint_halfplanes(eig, spec));
    const std::vector<Vec2> expected{
        {1449.5, 929.2}, {1574.4, 1054.0}, {2379.0, 1657.5}, {2539.5, 1256.2},
        {343.5, 2420.5}, {0.0, 1647.8},    {0.0, 2535.0},
        {2892.6, 373.5}, {3042.0, 0.0},    {1647.7, 0.0}};
    int missing = 0;
    double worst = 0.0;
    for (const Vec2& want : expected) {
        double best = 1e300;
        for (const auto& poly : region.polygons)
            for (const Vec2& v : poly.verts)
                best = std::min(best, std::max(std::abs(v.x - want.x), std::abs(v.y - want.y)));
        worst = std::max(worst, best);
        if (best > 1.0) ++missing;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu polygons, worst vertex error %.3f (tol 1.0)",
                  region.polygons.size(), worst);
    report(3, "reference region vertices", missing == 0,
           buf, std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_4() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto slopes = cusp_ray_slopes(eig);
    const std::array<double, 3> want{0.75, 0.1, 1.0 / 3.0};
    bool ok = true;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (!slopes[i]) {
            ok = false;
            continue;
        }
        worst = std::max(worst, std::abs(*slopes[i] - want[i]));
    }
    ok = ok && worst <= 1e-9;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max slope error %.2e (tol 1e-9)", worst);
    report(4, "cusp ray slopes", ok, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_5() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto paths = trochoid_coefficients(eig, 2400.0, 1525.0);
    const double q = M_PI / 2.0, p = M_PI, q3 = 1.5 * M_PI;
    struct Want {
        int path;
        double phi;
        Vec2 pos;
    };
    // Published start markers; the pi-offset marker of path 3 follows from
    // the k-even identity that the offset agent sits at the negated base
    // marker: -(11.315, 0).
    const std::vector<Want> wanted{
        {0, 0.0, {-3.528, 0.0}},  {1, 0.0, {-2.443, 0.0}}, {2, 0.0, {11.315, 0.0}},
        {0, q, {0.0, -6.304}},    {1, q, {0.0, 6.813}},    {2, q, {0.0, 2.523}},
        {0, p, {3.528, 0.0}},     {1, p, {2.443, 0.0}},    {2, p, {-11.315, 0.0}},
        {0, q3, {0.0, 6.304}},    {1, q3, {0.0, -6.813}},  {2, q3, {0.0, -2.523}}};
    double worst = 0.0;
    for (const Want& w : wanted) {
        const Vec2 got = injected_position(paths[w.path], w.phi, 0.0);
        worst = std::max({worst, std::abs(got.x - w.pos.x), std::abs(got.y - w.pos.y)});
    }
    const auto plan = injection_feasible(paths, 0.5);
    const bool all_offsets = plan.total_agents == 12;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "marker error %.2e (tol 2e-3), %d agents", worst,
                  plan.total_agents);
    report(5, "injection start markers", worst <= 2e-3 && all_offsets, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_6() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({5, 12, 13}, 2, TrochoidType::Epitrochoid);
    const auto circles = trochoid_coefficients(eig, 2500.0, 0.0);
    const auto troch = trochoid_coefficients(eig, 2000.0, 1200.0);
    const double ratio = sensing_area(troch, 1.0).total / sensing_area(circles, 1.0).total;
    const double want = 243.84 / 146.98;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "ratio %.4f vs reference %.4f (tol 1%%)", ratio, want);
    report(6, "sensing-area ratio", std::abs(ratio - want) <= 0.01 * want, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_7() {
    const auto t0 = Clock::now();
    std::mt19937 rng(2024);
    double worst = 0.0;
    for (int n = 0; n < 200; ++n) {
        const auto d = testsup::random_valid_draw(rng);
        const auto eig = make_eig(d.triple, d.k, d.type);
        const double expect =
            d.type == TrochoidType::Epitrochoid ? d.k + 1.0 : -(d.k - 1.0);
        worst = std::max(worst,
                         std::abs(eig.lambda_max / eig.lambda_min - expect) / std::abs(expect));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "200 draws, worst relative error %.2e (tol 1e-9)", worst);
    report(7, "integer eigenvalue ratios", worst <= 1e-9, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_8() {
    const auto t0 = Clock::now();
    std::mt19937 rng(31415);
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
        const auto rd = testsup::random_feasible_design(rng);
        const auto place = initial_positions(rd.eig, rd.R_c, rd.d_c);
        const auto paths = trochoid_coefficients(rd.eig, rd.R_c, rd.d_c);
        SimConfig cfg;
        cfg.dt = 1e-4;
        cfg.duration = paths[0].period();
        const auto trace = integrate_cp(rd.eig.beta, place.positions, cfg);
        for (size_t s = 0; s < trace.t.size(); ++s)
            for (int i = 0; i < 3; ++i)
                worst = std::max(
                    worst,
                    (trace.x[s][i] - trochoid_position(paths[i], trace.t[s])).norm());
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "20 designs, max deviation %.2e (tol 1e-6)", worst);
    report(8, "dynamics oracle equivalence", worst <= 1e-6 && elapsed < 30.0, buf, elapsed);
}

void criterion_9() {
    const auto t0 = Clock::now();
    std::mt19937 rng(27182);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const auto rd = testsup::random_feasible_design(rng, /*epi_only=*/true);
        const auto paths = trochoid_coefficients(rd.eig, rd.R_c, rd.d_c);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                for (double phi : kInjectionOffsets) {
                    const double closed =
                        phi == M_PI
                            ? min_separation_phase_pi(paths[i], paths[j], rd.spec.d_ct)
                            : min_separation_phase_quadrature(paths[i], paths[j], rd.spec.d_ct);
                    const double oracle = brute_force_min_separation(paths[i], paths[j], phi,
                                                                     1000000, rd.spec.d_ct);
                    worst = std::max(worst, std::abs(closed - oracle) /
                                                std::max(1.0, std::abs(oracle)));
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "100 designs x 18 pairs, worst rel. error %.2e (tol 1e-6)",
                  worst);
    report(9, "injection oracle equivalence", worst <= 1e-6, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_10() {
    const auto t0 = Clock::now();
    struct Case {
        DesignSpec spec;
        double delta;
    };
    std::vector<Case> cases;
    cases.push_back({spec_with({5, 12, 13}, 1.5, 15.0, 0.5, 15.0), 0.1});
    cases.push_back({spec_with({7, 24, 25}, 0.01, 1.8, 0.5, 4.0), 0.005});
    int violations = 0;
    double worst_pair_gap = 0.0;
    std::mt19937 rng(99991);
    for (const Case& c : cases) {
        const auto eig = make_eig(c.spec.triple, c.spec.k, c.spec.type);
        auto cs = apply_perturbation_margin(constraint_halfplanes(eig, c.spec), c.delta);
        const auto region = enumerate_regions(cs);
        size_t best = 0;
        for (size_t i = 1; i < region.polygons.size(); ++i)
            if (region.polygons[i].area() > region.polygons[best].area()) best = i;
        const Vec2 p = deepest_point(region.polygons[best]);
        for (int n = 0; n < 1000; ++n) {
            const auto rep = perturb_random(eig, c.spec, p.x, p.y, c.delta, rng, 2048);
            violations += static_cast<int>(rep.violations.size());
            if (n % 20 == 0) {
                // dense-sampled pairwise minima against the closed form
                const auto perturbed = trochoids_from_state(eig, rep.state);
                const double T = perturbed[0].period();
                int slot = 0;
                for (int i = 0; i < 3; ++i) {
                    for (int j = i + 1; j < 3; ++j, ++slot) {
                        const double sampled =
                            detail::grid_refine_min(
                                [&](double t) {
                                    return (trochoid_position(perturbed[i], t) -
                                            trochoid_position(perturbed[j], t))
                                        .norm();
                                },
                                0.0, T, 4096)
                                .second;
                        worst_pair_gap =
                            std::max(worst_pair_gap, std::abs(sampled - rep.pair_min[slot]));
                    }
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "2x1000 draws, %d violations, pair-min formula gap %.2e (tol 1e-6)",
                  violations, worst_pair_gap);
    report(10, "perturbation safety", violations == 0 && worst_pair_gap <= 1e-6, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_11() {
    const auto t0 = Clock::now();
    std::mt19937 rng(55555);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    double worst_pos = 0.0, worst_peak = 0.0;
    for (int n = 0; n < 50; ++n) {
        const auto rd = testsup::random_feasible_design(rng);
        const auto place = initial_positions(rd.eig, rd.R_c, rd.d_c);
        const auto base =
            trochoids_from_state(rd.eig, recompute_from_positions(rd.eig, place.positions));
        for (double s : {0.0015, 0.01, 10.0}) {
            const auto eig_s = eigenstructure(scale_beta(rd.eig.beta, s), rd.eig.k, rd.eig.type);
            const auto scaled =
                trochoids_from_state(eig_s, recompute_from_positions(eig_s, place.positions));
            for (double t : {0.0, 0.09, 0.51, 1.7}) {
                for (int i = 0; i < 3; ++i) {
                    const Vec2 a = trochoid_position(scaled[i], t);
                    const Vec2 b = trochoid_position(base[i], s * t);
                    worst_pos = std::max({worst_pos, std::abs(a.x - b.x), std::abs(a.y - b.y)});
                }
            }
            for (int i = 0; i < 3; ++i) {
                const double pv = peak_speed(scaled[i]) / (s * peak_speed(base[i]));
                worst_peak = std::max(worst_peak, std::abs(pv - 1.0));
                const double base_w = peak_turn_rate(base[i]);
                if (base_w > 0.0) {
                    const double pw = peak_turn_rate(scaled[i]) / (s * base_w);
                    worst_peak = std::max(worst_peak, std::abs(pw - 1.0));
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "50 designs, position error %.2e (tol 1e-8), peak ratio error %.2e (tol 1e-6)",
                  worst_pos, worst_peak);
    report(11, "gain-scaling invariance", worst_pos <= 1e-8 && worst_peak <= 1e-6, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

void criterion_12() {
    const auto t0 = Clock::now();
    const auto eig = make_eig({7, 24, 25}, 2, TrochoidType::Epitrochoid);
    const auto paths = trochoid_coefficients(eig, 1000.0, 1250.0);
    const double d0_max = 1.8;
    SimConfig cfg;
    cfg.dt = 1e-4;
    double worst = 0.0;
    for (const auto& ref : paths) worst = std::max(worst, unicycle_track(ref, cfg).rms_err);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst RMS %.2e (tol %.2e)", worst, 0.01 * d0_max);
    report(12, "tracking sanity", worst < 0.01 * d0_max, buf,
           std::chrono::duration<double>(Clock::now() - t0).count());
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures;
}
