#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "troch/design.hpp"
#include "troch/detail/minimize.hpp"
#include "troch/errors.hpp"
#include "troch/geometry.hpp"

namespace troch {

inline Vec2 trochoid_position(const AgentTrochoid& t, double time) {
    const double ar = t.lambda_min * time + t.phi_r;
    const double ad = t.lambda_max * time + t.phi_d;
    return {t.c_r * std::cos(ar) + t.c_d * std::cos(ad) + t.cor.x,
            t.c_r * std::sin(ar) + t.c_d * std::sin(ad) + t.cor.y};
}

inline Vec2 trochoid_velocity(const AgentTrochoid& t, double time) {
    const double ar = t.lambda_min * time + t.phi_r;
    const double ad = t.lambda_max * time + t.phi_d;
    return {-t.c_r * t.lambda_min * std::sin(ar) - t.c_d * t.lambda_max * std::sin(ad),
            t.c_r * t.lambda_min * std::cos(ar) + t.c_d * t.lambda_max * std::cos(ad)};
}

inline Vec2 trochoid_acceleration(const AgentTrochoid& t, double time) {
    const double ar = t.lambda_min * time + t.phi_r;
    const double ad = t.lambda_max * time + t.phi_d;
    const double l1 = t.lambda_min * t.lambda_min, l2 = t.lambda_max * t.lambda_max;
    return {-t.c_r * l1 * std::cos(ar) - t.c_d * l2 * std::cos(ad),
            -t.c_r * l1 * std::sin(ar) - t.c_d * l2 * std::sin(ad)};
}

inline std::array<Vec2, 3> evaluate(const std::array<AgentTrochoid, 3>& ts, double time) {
    return {trochoid_position(ts[0], time), trochoid_position(ts[1], time),
            trochoid_position(ts[2], time)};
}

/// Physical linear speed at time t.
inline double speed_at(const AgentTrochoid& t, double time) {
    return trochoid_velocity(t, time).norm();
}

/// Physical turn rate (heading rate) at time t; throws at cusps where the
/// speed vanishes and the heading is discontinuous.
inline double turn_rate_at(const AgentTrochoid& t, double time) {
    const Vec2 v = trochoid_velocity(t, time);
    const Vec2 a = trochoid_acceleration(t, time);
    const double v2 = v.norm_sq();
    const double scale = std::abs(t.lambda_min) * (std::abs(t.c_r) + std::abs(t.c_d));
    if (v2 <= 1e-18 * scale * scale)
        throw CuspSingularityError("turn rate undefined: speed vanishes (cusp)");
    return v.cross(a) / v2;
}

struct SpeedSample {
    double v = 0.0;      // parametric speed |dx/dtheta|, nonnegative
    double omega = 0.0;  // parametric turn rate d(heading)/dtheta
};

/// Parametric speed and turn rate at path parameter theta
/// (theta = |lambda_min| t).  Physical rates are these times |lambda_min|.
inline SpeedSample speed_profile(const AgentTrochoid& t, double theta) {
    const double time = theta / std::abs(t.lambda_min);
    SpeedSample s;
    s.v = speed_at(t, time) / std::abs(t.lambda_min);
    s.omega = turn_rate_at(t, time) / std::abs(t.lambda_min);
    return s;
}

/// Parametric epitrochoid speed (k+1)sqrt(r^2 + d^2 - 2 r d cos(k theta)).
inline double parametric_speed(double r, double d, int k, double theta) {
    const double c = std::cos(k * theta);
    return (k + 1) * std::sqrt(std::max(0.0, r * r + d * d - 2.0 * r * d * c));
}

/// Parametric turn rate evaluated at a given value of cos(k theta):
/// (r^2 + d^2 (k+1) - r d (k+2) c) / (r^2 + d^2 - 2 r d c).
inline double parametric_turn_rate_at_cos(double r, double d, int k, double c) {
    const double den = r * r + d * d - 2.0 * r * d * c;
    const double scale = r * r + d * d;
    if (den <= 1e-18 * scale)
        throw CuspSingularityError("turn rate undefined: parametric speed vanishes (cusp)");
    return (r * r + d * d * (k + 1) - r * d * (k + 2) * c) / den;
}

inline double parametric_turn_rate(double r, double d, int k, double theta) {
    return parametric_turn_rate_at_cos(r, d, k, std::cos(k * theta));
}

/// Largest physical speed over one period, located by grid search with
/// golden-section refinement.
inline double peak_speed(const AgentTrochoid& t, int grid = 20000) {
    return detail::grid_refine_max([&](double tt) { return speed_at(t, tt); }, 0.0, t.period(),
                                   grid)
        .second;
}

/// Largest physical turn-rate magnitude over one period.  Found by search
/// rather than the anti-cusp closed form: near r = d the extremum can sit
/// at the other critical point.  Cusp samples are skipped.
inline double peak_turn_rate(const AgentTrochoid& t, int grid = 20000) {
    return detail::grid_refine_max(
               [&](double tt) {
                   try {
                       return std::abs(turn_rate_at(t, tt));
                   } catch (const CuspSingularityError&) {
                       return 0.0;
                   }
               },
               0.0, t.period(), grid)
        .second;
}

struct OriginExtrema {
    double d_min = 0.0;
    double d_max = 0.0;
    double t_min = 0.0;  // earliest nonnegative time of closest approach
    double t_max = 0.0;  // earliest nonnegative time of farthest excursion
};

/// Closest/farthest origin distance of a normalized path (centre at the
/// origin), with the times they first occur.  The distance oscillates at
/// rate lambda_max - lambda_min; which phase is the minimum depends on the
/// sign of c_r * c_d.
inline OriginExtrema extremal_origin_distances(const AgentTrochoid& t) {
    OriginExtrema e;
    e.d_min = std::abs(std::abs(t.c_r) - std::abs(t.c_d));
    e.d_max = std::abs(t.c_r) + std::abs(t.c_d);

    const double omega = t.lambda_max - t.lambda_min;
    const double dphi = t.phi_d - t.phi_r;
    auto first_time = [&](double target) {
        double a = target - dphi;
        a = std::fmod(a, 2.0 * M_PI);
        if (a < 0.0) a += 2.0 * M_PI;
        return a / omega;
    };
    if (t.c_r * t.c_d >= 0.0) {
        e.t_min = first_time(M_PI);
        e.t_max = first_time(0.0);
    } else {
        e.t_min = first_time(0.0);
        e.t_max = first_time(M_PI);
    }
    return e;
}

struct PairExtrema {
    double d_min = 0.0;
    double d_max = 0.0;
};

/// Pairwise distance extrema: the difference trajectory is itself a
/// trochoid with amplitudes c_ir - c_jr and c_id - c_jd.
inline PairExtrema pairwise_extremal_distances(const AgentTrochoid& a, const AgentTrochoid& b) {
    const double dr = std::abs(a.c_r - b.c_r);
    const double dd = std::abs(a.c_d - b.c_d);
    return {std::abs(dr - dd), dr + dd};
}

namespace detail {

/// Adaptive Simpson with interval bisection; evaluation cap 1e6.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol) {
    struct Seg {
        double a, b, fa, fm, fb, s;
    };
    auto simpson = [](double fa, double fm, double fb, double h) {
        return (fa + 4.0 * fm + fb) * h / 6.0;
    };
    long evals = 3;
    auto make = [&](double lo, double hi, double flo, double fhi) {
        const double m = 0.5 * (lo + hi);
        const double fm = f(m);
        return Seg{lo, hi, flo, fm, fhi, simpson(flo, fm, fhi, hi - lo)};
    };
    const double fa = f(a), fb = f(b);
    Seg root = make(a, b, fa, fb);
    const double tol0 = rel_tol * (1.0 + std::abs(root.s));

    double total = 0.0;
    struct Frame {
        Seg seg;
        double tol;
    };
    std::vector<Frame> stack;
    stack.push_back({root, tol0});
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        const Seg& s = fr.seg;
        const double m = 0.5 * (s.a + s.b);
        Seg left = make(s.a, m, s.fa, s.fm);
        Seg right = make(m, s.b, s.fm, s.fb);
        evals += 2;
        const double err = (left.s + right.s - s.s) / 15.0;
        if (std::abs(err) <= fr.tol || evals >= 1000000) {
            total += left.s + right.s + err;
        } else {
            stack.push_back({left, 0.5 * fr.tol});
            stack.push_back({right, 0.5 * fr.tol});
        }
    }
    return total;
}

}  // namespace detail

/// Path length of one full period, integrated adaptively.  The interval
/// is pre-split into a segment count coprime to the lobe symmetry so the
/// error estimate cannot alias on the periodic integrand.
inline double arc_length(const AgentTrochoid& t, double rel_tol = 1e-8) {
    const double T = t.period();
    const int segments = 4 * t.k + 3;
    double total = 0.0;
    for (int s = 0; s < segments; ++s) {
        total += detail::adaptive_simpson([&](double time) { return speed_at(t, time); },
                                          s * T / segments, (s + 1) * T / segments, rel_tol);
    }
    return total;
}

struct CoverageReport {
    std::array<double, 3> arc_length{};
    std::array<double, 3> area{};
    double total = 0.0;
};

/// Strip swept by a radius-R_sense sensor along one period of each path.
/// Revisited area is double-counted by construction.
inline CoverageReport sensing_area(const std::array<AgentTrochoid, 3>& ts, double r_sense,
                                   double rel_tol = 1e-8) {
    CoverageReport rep;
    for (int i = 0; i < 3; ++i) {
        rep.arc_length[i] = arc_length(ts[i], rel_tol);
        rep.area[i] = 2.0 * r_sense * rep.arc_length[i];
        rep.total += rep.area[i];
    }
    return rep;
}

struct TrajectorySample {
    double t = 0.0;
    std::array<Vec2, 3> position{};
    std::array<double, 3> speed{};
    std::array<double, 3> turn_rate{};
};

inline TrajectorySample sample_trajectory(const std::array<AgentTrochoid, 3>& ts, double time) {
    TrajectorySample s;
    s.t = time;
    for (int i = 0; i < 3; ++i) {
        s.position[i] = trochoid_position(ts[i], time);
        s.speed[i] = speed_at(ts[i], time);
        s.turn_rate[i] = turn_rate_at(ts[i], time);
    }
    return s;
}

}  // namespace troch
