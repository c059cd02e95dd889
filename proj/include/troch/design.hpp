#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "troch/errors.hpp"
#include "troch/geometry.hpp"

namespace troch {

enum class TrochoidType { Epitrochoid, Hypotrochoid };

inline std::string to_string(TrochoidType t) {
    return t == TrochoidType::Epitrochoid ? "epitrochoid" : "hypotrochoid";
}

/// Exact fraction; keeps the protocol gains free of binary rounding until
/// they are evaluated.  Denominators stay small (divisors of 2k).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d = 1) : num(n), den(d) { reduce(); }

    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    Rational operator+(const Rational& o) const {
        return Rational(num * o.den + o.num * den, den * o.den);
    }
    Rational operator*(long long s) const { return Rational(num * s, den); }
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// User-facing design inputs: protocol shape plus the distance limits the
/// resulting paths must respect.  Lengths share one consistent unit.
struct DesignSpec {
    int k = 2;                       // cusp count, >= 2
    std::array<int, 3> triple{3, 4, 5};  // (s1, s2, s3), s1^2 + s2^2 = s3^2
    TrochoidType type = TrochoidType::Epitrochoid;
    double d0_min = 0.0;             // closest allowed approach to the origin
    double d0_max = 0.0;             // farthest allowed excursion; 0 -> 0.5*d_cr
    double d_ct = 0.0;               // pairwise collision threshold
    double d_cr = 0.0;               // pairwise communication range
    double robot_radius = 0.0;       // optional; d_ct must exceed twice this
    double sense_radius = 0.0;       // optional sensing radius for coverage
    double cusp_epsilon = 0.0;       // cusp-band half width, in [0, 1)

    /// Fills defaults that depend on other fields.
    void finalize() {
        if (d0_max <= 0.0 && d_cr > 0.0) d0_max = 0.5 * d_cr;
    }

    void validate() const {
        if (k < 2) throw ConfigError("k must be >= 2");
        auto [s1, s2, s3] = triple;
        if (s1 <= 0 || s2 <= 0 || s3 <= 0)
            throw ConfigError("triple entries must be positive");
        if (static_cast<long long>(s1) * s1 + static_cast<long long>(s2) * s2 !=
            static_cast<long long>(s3) * s3)
            throw ConfigError("triple is not Pythagorean: s1^2 + s2^2 != s3^2");
        if (!(d0_min > 0.0)) throw ConfigError("d0_min must be positive");
        if (!(d_ct > 0.0)) throw ConfigError("d_ct must be positive");
        if (robot_radius > 0.0 && !(d_ct > 2.0 * robot_radius))
            throw ConfigError("d_ct must exceed twice the robot radius");
        if (cusp_epsilon < 0.0 || cusp_epsilon >= 1.0)
            throw ConfigError("cusp_epsilon must lie in [0, 1)");
        // Contradictory bounds are a feasibility outcome, not a parse error.
        if (!(d0_min < d0_max))
            throw EmptyRegionError("d0_min >= d0_max: no design can satisfy both bounds");
        if (!(d_ct < d_cr))
            throw EmptyRegionError("d_ct >= d_cr: no design can satisfy both bounds");
    }
};

/// Path-graph Laplacian of the three-agent chain 1 - 2 - 3.
inline Mat3 build_line_laplacian() {
    return {{{1.0, -1.0, 0.0}, {-1.0, 2.0, -1.0}, {0.0, -1.0, 1.0}}};
}

struct BetaParams {
    std::array<Rational, 3> exact;

    std::array<double, 3> value() const {
        return {exact[0].value(), exact[1].value(), exact[2].value()};
    }
};

/// Protocol gains from a Pythagorean triple and cusp count.  Rejects
/// combinations that leave agent 1 stationary (beta_1 = 0).
inline BetaParams design_beta(const std::array<int, 3>& triple, int k, TrochoidType type) {
    const long long s1 = triple[0], s2 = triple[1], s3 = triple[2];
    const long long two_k = 2LL * k;
    // beta_1 = (+-2 s3 - k (s2 + s1 - s3)) / (2k)
    const long long lead = type == TrochoidType::Epitrochoid ? 2 * s3 : -2 * s3;
    Rational b1(lead - k * (s2 + s1 - s3), two_k);
    if (b1.is_zero())
        throw DegenerateBetaError("beta_1 = 0: agent 1 would be stationary; pick a different (triple, k)");
    Rational b2(s2, 2);
    Rational b3 = b1 + Rational(s1);
    return BetaParams{{b1, b2, b3}};
}

inline std::array<double, 3> scale_beta(const std::array<double, 3>& beta, double s) {
    return {beta[0] * s, beta[1] * s, beta[2] * s};
}

/// Coefficient vectors mapping initial positions to the two mode
/// amplitudes and their phases.
struct GammaVectors {
    Vec3 r, d, phi_r, phi_d;
};

inline GammaVectors gamma_vectors(const std::array<double, 3>& beta) {
    const double b1 = beta[0], b2 = beta[1], b3 = beta[2];
    const double b = 0.5 * std::hypot(b1 - b3, 2.0 * b2);
    GammaVectors g;
    g.r = {b2 * (b1 + 2.0 * b2 + b3 + 2.0 * b),
           b1 * (b1 - b3 + 2.0 * b) - 2.0 * b2 * b3,
           -(b1 * b1 + 2.0 * b2 * b2 - b1 * b3 - b2 * b3 + b1 * b2 + 2.0 * b * b1 + 2.0 * b * b2)};
    g.d = {b2 * (b1 + 2.0 * b2 + b3 - 2.0 * b),
           b1 * (b1 - b3 - 2.0 * b) - 2.0 * b2 * b3,
           -(b1 * b1 + 2.0 * b2 * b2 - b1 * b3 - b2 * b3 + b1 * b2 - 2.0 * b * b1 - 2.0 * b * b2)};
    g.phi_r = {-g.r[0], -g.r[1], -g.r[2]};
    g.phi_d = {g.d[0], g.d[1], g.d[2]};
    return g;
}

/// Modal structure of the weighted Laplacian: eigenvalues, the per-agent
/// amplitude coefficients alpha, and the position-to-amplitude vectors.
struct Eigenstructure {
    std::array<double, 3> beta{};
    int k = 2;
    TrochoidType type = TrochoidType::Epitrochoid;
    double a = 0.0;        // mean of the nonzero eigenvalues
    double b = 0.0;        // half their separation
    double beta_d = 0.0;   // common alpha denominator
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Vec3 alpha_r{}, alpha_d{};
    GammaVectors gamma;

    double period() const { return 2.0 * M_PI / std::abs(lambda_min); }
};

inline Eigenstructure eigenstructure(const std::array<double, 3>& beta, int k, TrochoidType type) {
    const double b1 = beta[0], b2 = beta[1], b3 = beta[2];
    Eigenstructure e;
    e.beta = beta;
    e.k = k;
    e.type = type;
    e.a = 0.5 * b1 + b2 + 0.5 * b3;
    e.b = 0.5 * std::hypot(b1 - b3, 2.0 * b2);
    const double scale = std::abs(b1) + std::abs(b2) + std::abs(b3);
    if (e.b <= 1e-14 * scale)
        throw Error("nonzero eigenvalues coincide; the two oscillatory modes are not separable");
    e.lambda_min = e.a - e.b;
    e.lambda_max = e.a + e.b;
    e.beta_d = 4.0 * e.b * (b1 * b2 + b2 * b3 + b1 * b3);
    if (std::abs(e.beta_d) <= 1e-14 * scale * scale * scale)
        throw SingularBetaDError("beta_d = 0: amplitude coefficients are undefined");
    if (b2 == 0.0)
        throw SingularBetaDError("beta_2 = 0: amplitude coefficients are undefined");
    const double inv_bd = 1.0 / e.beta_d;
    e.alpha_r = {inv_bd * (b1 / b2) * (e.lambda_min - b2 - b3),
                 inv_bd * (b3 - e.lambda_min),
                 inv_bd * b3};
    e.alpha_d = {inv_bd * (b1 / b2) * (e.lambda_max - b2 - b3),
                 inv_bd * (b3 - e.lambda_max),
                 inv_bd * b3};
    e.gamma = gamma_vectors(beta);
    return e;
}

inline Eigenstructure eigenstructure(const BetaParams& beta, int k, TrochoidType type) {
    return eigenstructure(beta.value(), k, type);
}

/// Mode amplitudes, phases, and rotation centre recovered from (possibly
/// perturbed) initial positions.
struct TrochoidState {
    double R_c = 0.0;
    double d_c = 0.0;
    double phi_r = 0.0;
    double phi_d = 0.0;
    double c_0 = 0.0;
    double phi_0 = 0.0;
    Vec2 cor{};  // c_0 (cos phi_0, sin phi_0)
};

/// One agent's closed-form path: two rotating amplitudes plus a fixed
/// centre, with the parametric-form coefficients kept alongside.
struct AgentTrochoid {
    int agent_id = 1;  // 1..3
    double c_r = 0.0;  // slow-mode amplitude, signed
    double c_d = 0.0;  // fast-mode amplitude, signed
    double phi_r = 0.0;
    double phi_d = 0.0;
    double phi_0 = 0.0;
    double c_0 = 0.0;
    Vec2 cor{};
    // Parametric form x = (k+1) r cos(theta) - d cos((k+1) theta):
    // r_param/d_param are the magnitudes, r_signed/d_signed keep the signs.
    double r_param = 0.0;
    double d_param = 0.0;
    double r_signed = 0.0;
    double d_signed = 0.0;
    int k = 2;
    TrochoidType type = TrochoidType::Epitrochoid;
    double lambda_min = 0.0;
    double lambda_max = 0.0;

    double period() const { return 2.0 * M_PI / std::abs(lambda_min); }
};

inline std::array<AgentTrochoid, 3> trochoids_from_state(const Eigenstructure& eig,
                                                         const TrochoidState& st) {
    std::array<AgentTrochoid, 3> out;
    for (int i = 0; i < 3; ++i) {
        AgentTrochoid& t = out[i];
        t.agent_id = i + 1;
        t.c_r = eig.alpha_r[i] * st.R_c;
        t.c_d = eig.alpha_d[i] * st.d_c;
        t.phi_r = st.phi_r;
        t.phi_d = st.phi_d;
        t.phi_0 = st.phi_0;
        t.c_0 = st.c_0;
        t.cor = st.cor;
        t.k = eig.k;
        t.type = eig.type;
        t.lambda_min = eig.lambda_min;
        t.lambda_max = eig.lambda_max;
        t.r_param = std::abs(t.c_r) / (eig.k + 1);
        t.d_param = std::abs(t.c_d);
        t.r_signed = t.c_r / (eig.k + 1);
        t.d_signed = -t.c_d;
    }
    return out;
}

/// Normalized design: phases zero, rotation centre at the origin.
inline std::array<AgentTrochoid, 3> trochoid_coefficients(const Eigenstructure& eig,
                                                          double R_c, double d_c) {
    TrochoidState st;
    st.R_c = R_c;
    st.d_c = d_c;
    return trochoids_from_state(eig, st);
}

struct InitialPlacement {
    std::array<Vec2, 3> positions;  // shifted so the rotation centre is the origin
    std::array<Vec2, 3> raw;        // x-axis solution with agent 3 at the origin
    double cor_shift = 0.0;         // x-coordinate of the centre before the shift
};

/// x-coordinate of the rotation centre: zero-mode projection of the
/// positions, weighted by 1/beta_i.
inline Vec2 rotation_centre(const std::array<double, 3>& beta, const std::array<Vec2, 3>& pos) {
    double wsum = 0.0;
    Vec2 acc{};
    for (int i = 0; i < 3; ++i) {
        if (beta[i] == 0.0) throw SingularCoRError("1/beta_i undefined: beta_i = 0");
        const double w = 1.0 / beta[i];
        wsum += w;
        acc += pos[i] * w;
    }
    const double scale = std::abs(1.0 / beta[0]) + std::abs(1.0 / beta[1]) + std::abs(1.0 / beta[2]);
    if (std::abs(wsum) <= 1e-14 * scale)
        throw SingularCoRError("sum of 1/beta_i vanishes; rotation centre undefined");
    return acc / wsum;
}

/// Inverts chosen (R_c, d_c) into collinear initial positions on the
/// x-axis (agent 3 at the origin), then shifts all agents so the common
/// rotation centre is the origin.  Sign convention: gamma_r . x0 = -R_c
/// and gamma_d . x0 = +d_c, which makes both phases zero.
inline InitialPlacement initial_positions(const Eigenstructure& eig, double R_c, double d_c) {
    const Vec3& gr = eig.gamma.r;
    const Vec3& gd = eig.gamma.d;
    const double det = gr[0] * gd[1] - gr[1] * gd[0];
    const double gnorm = std::abs(gr[0]) + std::abs(gr[1]) + std::abs(gd[0]) + std::abs(gd[1]);
    if (std::abs(det) <= 1e-14 * gnorm * gnorm)
        throw SingularSystemError("gamma 2x2 system is singular; cannot place agents on the x-axis");
    const double x10 = (-R_c * gd[1] - gr[1] * d_c) / det;
    const double x20 = (gr[0] * d_c + R_c * gd[0]) / det;

    InitialPlacement p;
    p.raw = {Vec2{x10, 0.0}, Vec2{x20, 0.0}, Vec2{0.0, 0.0}};
    p.cor_shift = rotation_centre(eig.beta, p.raw).x;
    for (int i = 0; i < 3; ++i) p.positions[i] = {p.raw[i].x - p.cor_shift, 0.0};
    return p;
}

/// Forward evaluation: amplitudes, phases, and zero-mode coefficient from
/// arbitrary initial positions.  Round-trips with initial_positions.
inline TrochoidState recompute_from_positions(const Eigenstructure& eig,
                                              const std::array<Vec2, 3>& pos) {
    const Vec3 xs{pos[0].x, pos[1].x, pos[2].x};
    const Vec3 ys{pos[0].y, pos[1].y, pos[2].y};

    TrochoidState st;
    const double grx = dot(eig.gamma.r, xs), gry = dot(eig.gamma.r, ys);
    const double gdx = dot(eig.gamma.d, xs), gdy = dot(eig.gamma.d, ys);
    st.R_c = std::hypot(grx, gry);
    st.d_c = std::hypot(gdx, gdy);

    const double pos_scale = std::abs(grx) + std::abs(gry) + std::abs(gdx) + std::abs(gdy);
    const double tiny = 1e-300 + 1e-15 * pos_scale;
    // gamma_phi_r = -gamma_r and gamma_phi_d = gamma_d
    st.phi_r = st.R_c > tiny ? std::atan2(-gry, -grx) : 0.0;
    st.phi_d = st.d_c > tiny ? std::atan2(gdy, gdx) : 0.0;

    st.cor = rotation_centre(eig.beta, pos);
    st.c_0 = st.cor.norm();
    st.phi_0 = st.c_0 > tiny ? std::atan2(st.cor.y, st.cor.x) : 0.0;
    return st;
}

}  // namespace troch
