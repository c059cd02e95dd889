#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "troch/design.hpp"
#include "troch/detail/minimize.hpp"
#include "troch/errors.hpp"
#include "troch/geometry.hpp"
#include "troch/trajectory.hpp"

namespace troch {

enum class Integrator { Rk4, Euler };

struct SimConfig {
    double dt = 1e-3;
    double duration = 0.0;  // 0 -> one period where a reference is known
    double k_p = 4.0;       // heading proportional gain [1/s]
    double k_i = 0.5;       // heading integral gain [1/s^2]
    double v_max = std::numeric_limits<double>::infinity();
    double omega_max = std::numeric_limits<double>::infinity();
    Integrator integrator = Integrator::Rk4;
    double scale = 1.0;     // triple-scaling factor applied by the caller
};

using SwarmState = std::array<Vec2, 3>;

namespace detail {

/// Consensus input u_i = S * sum_j beta_i L_ij x_j with S the 2-D
/// quarter-turn matrix.
inline SwarmState cp_input(const std::array<double, 3>& beta, const SwarmState& x) {
    const Mat3 L = build_line_laplacian();
    SwarmState u;
    for (int i = 0; i < 3; ++i) {
        Vec2 acc{};
        for (int j = 0; j < 3; ++j) acc += x[j] * (beta[i] * L[i][j]);
        u[i] = {-acc.y, acc.x};
    }
    return u;
}

inline SwarmState axpy(const SwarmState& x, const SwarmState& d, double h) {
    SwarmState y;
    for (int i = 0; i < 3; ++i) y[i] = x[i] + d[i] * h;
    return y;
}

}  // namespace detail

struct CpTrace {
    std::vector<double> t;
    std::vector<SwarmState> x;
};

/// Integrates the consensus protocol on single integrators from arbitrary
/// initial positions.
inline CpTrace integrate_cp(const std::array<double, 3>& beta, const SwarmState& x0,
                            const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    const long steps = std::lround(cfg.duration / cfg.dt);
    CpTrace trace;
    trace.t.reserve(steps + 1);
    trace.x.reserve(steps + 1);
    SwarmState x = x0;
    trace.t.push_back(0.0);
    trace.x.push_back(x);
    for (long n = 0; n < steps; ++n) {
        if (cfg.integrator == Integrator::Euler) {
            x = detail::axpy(x, detail::cp_input(beta, x), cfg.dt);
        } else {
            const SwarmState k1 = detail::cp_input(beta, x);
            const SwarmState k2 = detail::cp_input(beta, detail::axpy(x, k1, 0.5 * cfg.dt));
            const SwarmState k3 = detail::cp_input(beta, detail::axpy(x, k2, 0.5 * cfg.dt));
            const SwarmState k4 = detail::cp_input(beta, detail::axpy(x, k3, cfg.dt));
            for (int i = 0; i < 3; ++i)
                x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (cfg.dt / 6.0);
        }
        for (const Vec2& p : x)
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw NonFiniteStateError("consensus integration diverged");
        trace.t.push_back((n + 1) * cfg.dt);
        trace.x.push_back(x);
    }
    return trace;
}

struct ControlOutput {
    double v = 0.0;
    double gamma_ref = 0.0;
    bool heading_valid = false;  // false when the input vanishes; hold the previous heading
};

/// Linear speed and reference heading each robot extracts from the
/// consensus input at the current positions.
inline std::array<ControlOutput, 3> cp_control_outputs(const std::array<double, 3>& beta,
                                                       const SwarmState& x) {
    const SwarmState u = detail::cp_input(beta, x);
    double scale = 0.0;
    for (const Vec2& ui : u) scale += std::abs(ui.x) + std::abs(ui.y);
    std::array<ControlOutput, 3> out;
    for (int i = 0; i < 3; ++i) {
        out[i].v = u[i].norm();
        if (out[i].v > 1e-15 * scale + 1e-300) {
            out[i].gamma_ref = std::atan2(u[i].y, u[i].x);
            out[i].heading_valid = true;
        }
    }
    return out;
}

struct UnicycleState {
    double x = 0.0;
    double y = 0.0;
    double gamma = 0.0;          // heading, wrapped to (-pi, pi]
    double error_integral = 0.0; // integral of heading error [rad s]
};

struct TrackResult {
    std::vector<double> t;
    std::vector<UnicycleState> states;
    double max_err = 0.0;
    double rms_err = 0.0;
    double peak_v = 0.0;      // largest commanded linear speed
    double peak_omega = 0.0;  // largest commanded turn-rate magnitude
    bool omega_saturated = false;
    bool v_saturated = false;
};

/// Tracks a closed-form reference with a PI heading controller plus
/// analytic feed-forward.  Inputs are held over each step; the integral
/// is frozen while the turn-rate command saturates.
inline TrackResult unicycle_track(const AgentTrochoid& ref, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    const double duration = cfg.duration > 0.0 ? cfg.duration : ref.period();
    const long steps = std::lround(duration / cfg.dt);

    TrackResult res;
    UnicycleState s;
    {
        const Vec2 p0 = trochoid_position(ref, 0.0);
        const Vec2 v0 = trochoid_velocity(ref, 0.0);
        s.x = p0.x;
        s.y = p0.y;
        s.gamma = v0.norm() > 0.0 ? std::atan2(v0.y, v0.x) : 0.0;
    }
    res.t.push_back(0.0);
    res.states.push_back(s);

    double err_sq_sum = 0.0;
    double max_err = 0.0;
    double gamma_ref_prev = s.gamma;
    const double v_eps = 1e-12 * std::abs(ref.lambda_min) * (std::abs(ref.c_r) + std::abs(ref.c_d));

    for (long n = 0; n < steps; ++n) {
        // Heading error from time-consistent samples at the step start;
        // the held speed and feed-forward are sampled at the midpoint so
        // the hold error stays second order.
        const double t = n * cfg.dt;
        const double t_mid = t + 0.5 * cfg.dt;
        const Vec2 v_now = trochoid_velocity(ref, t);
        double gamma_ref = gamma_ref_prev;
        if (v_now.norm() > v_eps) gamma_ref = std::atan2(v_now.y, v_now.x);
        gamma_ref_prev = gamma_ref;
        const double speed_ref = trochoid_velocity(ref, t_mid).norm();
        double ff = 0.0;
        if (speed_ref > v_eps) ff = turn_rate_at(ref, t_mid);

        const double e = wrap_angle(gamma_ref - s.gamma);
        double integral_next = s.error_integral + e * cfg.dt;
        double omega = cfg.k_p * e + cfg.k_i * integral_next + ff;
        if (std::abs(omega) > cfg.omega_max) {
            res.omega_saturated = true;
            omega = std::copysign(cfg.omega_max, omega);
            integral_next = s.error_integral;  // anti-windup
        }
        double v = std::min(speed_ref, cfg.v_max);
        if (speed_ref > cfg.v_max) res.v_saturated = true;
        res.peak_v = std::max(res.peak_v, v);
        res.peak_omega = std::max(res.peak_omega, std::abs(omega));

        // Held-input step of dx = v cos(g), dy = v sin(g), dg = omega.
        if (cfg.integrator == Integrator::Euler) {
            s.x += v * std::cos(s.gamma) * cfg.dt;
            s.y += v * std::sin(s.gamma) * cfg.dt;
            s.gamma = wrap_angle(s.gamma + omega * cfg.dt);
        } else {
            const double g = s.gamma;
            auto fx = [&](double gg) { return v * std::cos(gg); };
            auto fy = [&](double gg) { return v * std::sin(gg); };
            const double g2 = g + 0.5 * omega * cfg.dt;
            const double g4 = g + omega * cfg.dt;
            s.x += cfg.dt / 6.0 * (fx(g) + 4.0 * fx(g2) + fx(g4));
            s.y += cfg.dt / 6.0 * (fy(g) + 4.0 * fy(g2) + fy(g4));
            s.gamma = wrap_angle(g4);
        }
        s.error_integral = integral_next;

        const double tn = (n + 1) * cfg.dt;
        const Vec2 p_ref = trochoid_position(ref, tn);
        const double err = std::hypot(s.x - p_ref.x, s.y - p_ref.y);
        err_sq_sum += err * err;
        max_err = std::max(max_err, err);
        res.t.push_back(tn);
        res.states.push_back(s);
    }
    res.max_err = max_err;
    res.rms_err = steps > 0 ? std::sqrt(err_sq_sum / steps) : 0.0;
    return res;
}

struct PerturbationReport {
    SwarmState base_positions{};
    SwarmState perturbed_positions{};
    TrochoidState state;                  // recovered (R_cp, d_cp, phases, centre)
    std::array<double, 3> origin_min{};   // sampled true extrema of the perturbed paths
    std::array<double, 3> origin_max{};
    std::array<double, 3> pair_min{};     // pairs (1,2), (1,3), (2,3), closed form
    std::array<double, 3> pair_max{};
    std::vector<std::string> violations;
    double cor_offset = 0.0;
    bool origin_shift_within_offset = true;  // extrema moved by no more than the centre offset
};

/// Perturbs the designed x-axis initial positions, recovers the new
/// amplitudes and centre, and re-checks every distance constraint on the
/// perturbed paths.  Violations are reported, never thrown.
inline PerturbationReport perturb_and_assess(const Eigenstructure& eig, const DesignSpec& spec,
                                             double R_c, double d_c,
                                             const std::array<double, 3>& eps,
                                             const std::array<double, 3>& psi,
                                             int samples = 4096) {
    PerturbationReport rep;
    const InitialPlacement base = initial_positions(eig, R_c, d_c);
    rep.base_positions = base.positions;
    for (int i = 0; i < 3; ++i)
        rep.perturbed_positions[i] = {base.positions[i].x + eps[i] * std::cos(psi[i]),
                                      eps[i] * std::sin(psi[i])};

    rep.state = recompute_from_positions(eig, rep.perturbed_positions);
    rep.cor_offset = rep.state.c_0;
    const auto perturbed = trochoids_from_state(eig, rep.state);
    const double T = perturbed[0].period();

    const double tol = 1e-9 * (1.0 + spec.d0_max);
    for (int i = 0; i < 3; ++i) {
        auto dist = [&](double t) { return trochoid_position(perturbed[i], t).norm(); };
        rep.origin_min[i] = detail::grid_refine_min(dist, 0.0, T, samples).second;
        rep.origin_max[i] = detail::grid_refine_max(dist, 0.0, T, samples).second;
        if (rep.origin_min[i] < spec.d0_min - tol)
            rep.violations.push_back("origin-min " + std::to_string(i + 1));
        if (rep.origin_max[i] > spec.d0_max + tol)
            rep.violations.push_back("origin-max " + std::to_string(i + 1));

        // Origin-referenced extrema differ from the centre-referenced
        // closed form by no more than the centre offset.
        const OriginExtrema centre_ext = extremal_origin_distances(perturbed[i]);
        const double shift_tol = rep.cor_offset + 1e-6 * (1.0 + spec.d0_max);
        if (std::abs(rep.origin_min[i] - centre_ext.d_min) > shift_tol ||
            std::abs(rep.origin_max[i] - centre_ext.d_max) > shift_tol)
            rep.origin_shift_within_offset = false;
    }
    int slot = 0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j, ++slot) {
            const PairExtrema pe = pairwise_extremal_distances(perturbed[i], perturbed[j]);
            rep.pair_min[slot] = pe.d_min;
            rep.pair_max[slot] = pe.d_max;
            const std::string sfx =
                " (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            if (pe.d_min < spec.d_ct - tol) rep.violations.push_back("pair-min" + sfx);
            if (pe.d_max > spec.d_cr + tol) rep.violations.push_back("pair-max" + sfx);
        }
    }
    return rep;
}

/// Seeded wrapper: draws per-agent magnitudes in [0, eps_max] and angles
/// in [0, 2pi).
inline PerturbationReport perturb_random(const Eigenstructure& eig, const DesignSpec& spec,
                                         double R_c, double d_c, double eps_max,
                                         std::mt19937& rng, int samples = 4096) {
    std::uniform_real_distribution<double> mag(0.0, eps_max);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
    std::array<double, 3> eps{mag(rng), mag(rng), mag(rng)};
    std::array<double, 3> psi{ang(rng), ang(rng), ang(rng)};
    return perturb_and_assess(eig, spec, R_c, d_c, eps, psi, samples);
}

}  // namespace troch
