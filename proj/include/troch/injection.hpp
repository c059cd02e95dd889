#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "troch/design.hpp"
#include "troch/detail/minimize.hpp"
#include "troch/errors.hpp"
#include "troch/geometry.hpp"
#include "troch/region.hpp"

namespace troch {

namespace detail {
inline void require_epitrochoid(const AgentTrochoid& t) {
    if (t.type != TrochoidType::Epitrochoid)
        throw UnsupportedTypeError("injection analysis is defined for epitrochoids only");
}
}  // namespace detail

/// Position of an agent riding path `t` at parameter theta, offset along
/// the path by phase phi.  Normalized designs (centre at the origin).
inline Vec2 injected_position(const AgentTrochoid& t, double phi, double theta) {
    detail::require_epitrochoid(t);
    const double u = theta + phi;
    const double kk = static_cast<double>(t.k + 1);
    return {kk * t.r_signed * std::cos(u) - t.d_signed * std::cos(kk * u),
            kk * t.r_signed * std::sin(u) - t.d_signed * std::sin(kk * u)};
}

/// Grid minimisation of the squared separation between an agent injected
/// on path i (offset phi) and the agent tracing path j, followed by
/// golden-section refinement around the best sample.  Returns
/// min d^2 - d_ct^2.
inline double brute_force_min_separation(const AgentTrochoid& ti, const AgentTrochoid& tj,
                                         double phi, int grid_n, double d_ct) {
    detail::require_epitrochoid(ti);
    detail::require_epitrochoid(tj);
    const int n = std::max(grid_n, 1000);
    const double h = 2.0 * M_PI / n;
    const int k1 = ti.k + 1;
    const double ri = k1 * ti.r_signed, di = ti.d_signed;
    const double rj = k1 * tj.r_signed, dj = tj.d_signed;

    auto dist_sq = [&](double theta) {
        const double u = theta + phi, ku = k1 * u, kt = k1 * theta;
        const double dx = ri * std::cos(u) - di * std::cos(ku) - rj * std::cos(theta) + dj * std::cos(kt);
        const double dy = ri * std::sin(u) - di * std::sin(ku) - rj * std::sin(theta) + dj * std::sin(kt);
        return dx * dx + dy * dy;
    };

    // Four phasors advanced by rotation recurrences; re-seeded with exact
    // trig every block to bound drift.
    const double ch = std::cos(h), sh = std::sin(h);
    const double chk = std::cos(k1 * h), shk = std::sin(k1 * h);
    double best = dist_sq(0.0);
    int best_idx = 0;
    constexpr int kBlock = 8192;
    double cu = 0, su = 0, cku = 0, sku = 0, cw = 0, sw = 0, ckw = 0, skw = 0;
    for (int idx = 0; idx < n; ++idx) {
        if (idx % kBlock == 0) {
            const double theta = idx * h, u = theta + phi;
            cu = std::cos(u); su = std::sin(u);
            cku = std::cos(k1 * u); sku = std::sin(k1 * u);
            cw = std::cos(theta); sw = std::sin(theta);
            ckw = std::cos(k1 * theta); skw = std::sin(k1 * theta);
        } else {
            double c, s;
            c = cu * ch - su * sh; s = su * ch + cu * sh; cu = c; su = s;
            c = cku * chk - sku * shk; s = sku * chk + cku * shk; cku = c; sku = s;
            c = cw * ch - sw * sh; s = sw * ch + cw * sh; cw = c; sw = s;
            c = ckw * chk - skw * shk; s = skw * chk + ckw * shk; ckw = c; skw = s;
        }
        const double dx = ri * cu - di * cku - rj * cw + dj * ckw;
        const double dy = ri * su - di * sku - rj * sw + dj * skw;
        const double d2 = dx * dx + dy * dy;
        if (d2 < best) {
            best = d2;
            best_idx = idx;
        }
    }
    auto [theta_min, refined] = detail::golden_min(dist_sq, (best_idx - 1) * h, (best_idx + 1) * h);
    (void)theta_min;
    return std::min(best, refined) - d_ct * d_ct;
}

/// Closed-form minimum separation margin for quadrature offsets
/// (phi = pi/2 and 3pi/2 share the same bound).
inline double min_separation_phase_quadrature(const AgentTrochoid& ti, const AgentTrochoid& tj,
                                              double d_ct) {
    detail::require_epitrochoid(ti);
    detail::require_epitrochoid(tj);
    const int k = ti.k;
    const double kk = k + 1;
    const double rad = kk * std::hypot(ti.r_signed, tj.r_signed);
    double osc;
    if (k % 2 == 0) {
        osc = std::hypot(ti.d_signed, tj.d_signed);
    } else {
        // The fast-mode phase shift (k+1)*pi/2 lands on a multiple of pi;
        // its sign decides how the two d terms combine.
        const double sigma = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        osc = std::abs(tj.d_signed - sigma * ti.d_signed);
    }
    const double m = rad - osc;
    return m * m - d_ct * d_ct;
}

/// Closed-form minimum separation margin for the phi = pi offset.  The
/// four sign cases collapse to two once the parametric signs are kept;
/// a vanishing discriminating product falls back to the grid oracle.
inline double min_separation_phase_pi(const AgentTrochoid& ti, const AgentTrochoid& tj,
                                      double d_ct) {
    detail::require_epitrochoid(ti);
    detail::require_epitrochoid(tj);
    const int k = ti.k;
    const double kk = k + 1;
    const double r_sum = ti.r_signed + tj.r_signed;
    const double osc = k % 2 == 0 ? ti.d_signed + tj.d_signed : tj.d_signed - ti.d_signed;
    const double product = r_sum * osc;
    const double scale = (std::abs(ti.r_signed) + std::abs(tj.r_signed)) *
                         (std::abs(ti.d_signed) + std::abs(tj.d_signed));
    if (std::abs(product) <= 1e-12 * scale) {
        // Sign-degenerate: closed form cannot pick a branch; both agree in
        // the limit but the oracle settles it.
        if (scale == 0.0 || osc == 0.0) {
            const double m = kk * r_sum;
            return m * m - d_ct * d_ct;
        }
        return brute_force_min_separation(ti, tj, M_PI, 100000, d_ct);
    }
    const double m = product > 0.0 ? kk * r_sum - osc : kk * r_sum + osc;
    return m * m - d_ct * d_ct;
}

struct InjectionPlan {
    struct Entry {
        int path_i = 0;  // path carrying the injected agent
        int path_j = 0;  // path whose tracing agent must be avoided
        double phi = 0.0;
        double delta_sq_min = 0.0;
    };
    std::vector<Entry> table;  // all ordered pairs x offsets, fixed order
    std::array<std::vector<double>, 3> feasible_offsets;
    std::array<double, 3> refresh_period{};
    int total_agents = 3;
};

inline constexpr std::array<double, 3> kInjectionOffsets{M_PI / 2.0, M_PI, 1.5 * M_PI};

/// The added separation constraints as half-plane disjunctions in the
/// (R_c, d_c) plane: |x R_c - y d_c| >= d_ct with (x, y) the closed-form
/// coefficient pair for each path pair and offset.  Appending these to a
/// base constraint set yields the injection-feasible region.
inline std::vector<Disjunction> injection_constraint_disjunctions(const Eigenstructure& eig,
                                                                  double d_ct) {
    if (eig.type != TrochoidType::Epitrochoid)
        throw UnsupportedTypeError("injection analysis is defined for epitrochoids only");
    const int k = eig.k;
    const Vec3& ar = eig.alpha_r;
    const Vec3& ad = eig.alpha_d;
    std::vector<Disjunction> out;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            for (double phi : kInjectionOffsets) {
                double x, y;
                if (phi == M_PI) {
                    x = std::abs(ar[i] + ar[j]);
                    y = k % 2 == 0 ? std::abs(ad[i] + ad[j]) : std::abs(ad[i] - ad[j]);
                } else {
                    x = std::hypot(ar[i], ar[j]);
                    if (k % 2 == 0) {
                        y = std::hypot(ad[i], ad[j]);
                    } else {
                        const double sigma = ((k + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
                        y = std::abs(sigma * ad[i] - ad[j]);
                    }
                }
                ConstraintTag tag{ConstraintKind::Injection, i + 1, j + 1, phi, 0};
                Disjunction dj;
                dj.branch[0] = {x, -y, d_ct, tag};
                tag.branch = 1;
                dj.branch[1] = {-x, y, d_ct, tag};
                out.push_back(dj);
            }
        }
    }
    return out;
}

/// Sweeps the added separation constraints for every (path, offset) pair
/// and reports which offsets admit an extra agent.  Infeasible offsets
/// are excluded, not errors.
inline InjectionPlan injection_feasible(const std::array<AgentTrochoid, 3>& paths, double d_ct) {
    for (const auto& t : paths) detail::require_epitrochoid(t);
    InjectionPlan plan;
    const double T = paths[0].period();
    for (int i = 0; i < 3; ++i) {
        for (double phi : kInjectionOffsets) {
            bool ok = true;
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                const double d2 = phi == M_PI
                                      ? min_separation_phase_pi(paths[i], paths[j], d_ct)
                                      : min_separation_phase_quadrature(paths[i], paths[j], d_ct);
                plan.table.push_back({i + 1, j + 1, phi, d2});
                if (d2 < 0.0) ok = false;
            }
            if (ok) plan.feasible_offsets[i].push_back(phi);
        }
        const int extra = static_cast<int>(plan.feasible_offsets[i].size());
        plan.refresh_period[i] = T / (extra + 1);
        plan.total_agents += extra;
    }
    return plan;
}

}  // namespace troch
