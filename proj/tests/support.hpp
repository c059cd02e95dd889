#pragma once

// Shared test oracles and random-design generators.  Everything here is
// test-only and independent of the closed-form production paths it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "troch/design.hpp"
#include "troch/geometry.hpp"
#include "troch/region.hpp"

namespace testsup {

using troch::Mat3;
using troch::Vec3;

/// Eigenvalues of a 3x3 matrix with a real spectrum, ascending, via the
/// characteristic cubic (trigonometric solution).
inline std::array<double, 3> eigenvalues3(const Mat3& m) {
    const double tr = m[0][0] + m[1][1] + m[2][2];
    const double m2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                      m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // lambda^3 - tr lambda^2 + m2 lambda - det = 0; depress with lambda = x + tr/3.
    const double p = m2 - tr * tr / 3.0;
    const double q = -2.0 * tr * tr * tr / 27.0 + tr * m2 / 3.0 - det;
    const double s = std::sqrt(std::max(0.0, -p / 3.0));
    std::array<double, 3> out{};
    if (s == 0.0) {
        out = {tr / 3.0, tr / 3.0, tr / 3.0};
    } else {
        double arg = 3.0 * q / (2.0 * p * s);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            out[k] = tr / 3.0 + 2.0 * s * std::cos(phi - 2.0 * M_PI * k / 3.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Null-space direction of (m - lambda I): largest cross product of rows.
inline Vec3 eigenvector3(const Mat3& m, double lambda) {
    Mat3 a = m;
    for (int i = 0; i < 3; ++i) a[i][i] -= lambda;
    auto cross = [](const Vec3& u, const Vec3& v) {
        return Vec3{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                    u[0] * v[1] - u[1] * v[0]};
    };
    const std::array<Vec3, 3> rows{Vec3{a[0][0], a[0][1], a[0][2]},
                                   Vec3{a[1][0], a[1][1], a[1][2]},
                                   Vec3{a[2][0], a[2][1], a[2][2]}};
    Vec3 best{};
    double best_norm = -1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const Vec3 c = cross(rows[i], rows[j]);
            const double n = std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]);
            if (n > best_norm) {
                best_norm = n;
                best = c;
            }
        }
    }
    return best;
}

inline Mat3 bl_matrix(const std::array<double, 3>& beta) {
    const Mat3 L = troch::build_line_laplacian();
    Mat3 m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = beta[i] * L[i][j];
    return m;
}

inline Mat3 transpose(const Mat3& m) {
    Mat3 t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

struct TripleDraw {
    std::array<int, 3> triple;
    int k;
    troch::TrochoidType type;
};

/// Random valid (triple, k, type): primitive Pythagorean triples from the
/// (m, n) parameterisation, optional leg swap and integer scaling,
/// excluding beta_1 = 0 degeneracies.
inline TripleDraw random_valid_draw(std::mt19937& rng, int k_max = 8, bool epi_only = false) {
    std::uniform_int_distribution<int> m_dist(2, 6);
    std::uniform_int_distribution<int> k_dist(2, k_max);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> mult_dist(1, 3);
    while (true) {
        const int m = m_dist(rng);
        std::uniform_int_distribution<int> n_dist(1, m - 1);
        const int n = n_dist(rng);
        if (std::gcd(m, n) != 1 || (m - n) % 2 == 0) continue;
        const int mult = mult_dist(rng);
        int a = (m * m - n * n) * mult, b = 2 * m * n * mult, c = (m * m + n * n) * mult;
        if (coin(rng)) std::swap(a, b);
        const int k = k_dist(rng);
        const troch::TrochoidType type = (epi_only || coin(rng) == 0)
                                             ? troch::TrochoidType::Epitrochoid
                                             : troch::TrochoidType::Hypotrochoid;
        try {
            const auto beta = troch::design_beta({a, b, c}, k, type);
            (void)troch::eigenstructure(beta, k, type);
        } catch (const troch::Error&) {
            continue;
        }
        return {{a, b, c}, k, type};
    }
}

struct RandomDesign {
    troch::DesignSpec spec;
    troch::Eigenstructure eig;
    double R_c = 0.0;
    double d_c = 0.0;
};

/// Uniform-ish interior point of a convex polygon (Dirichlet weights).
inline troch::Vec2 interior_point(const troch::ConvexPolygon& poly, std::mt19937& rng) {
    std::exponential_distribution<double> ex(1.0);
    double wsum = 0.0;
    troch::Vec2 p{};
    for (const troch::Vec2& v : poly.verts) {
        const double w = ex(rng) + 1e-9;
        wsum += w;
        p += v * w;
    }
    return p / wsum;
}

/// Draws a random design whose (R_c, d_c) lies strictly inside a feasible
/// region under canonical distance limits.
inline RandomDesign random_feasible_design(std::mt19937& rng, bool epi_only = false,
                                           int k_max = 8) {
    while (true) {
        const TripleDraw d = random_valid_draw(rng, k_max, epi_only);
        RandomDesign rd;
        rd.spec.k = d.k;
        rd.spec.triple = d.triple;
        rd.spec.type = d.type;
        rd.spec.d0_min = 1.5;
        rd.spec.d0_max = 15.0;
        rd.spec.d_cr = 15.0;
        rd.spec.d_ct = 0.5;
        rd.eig = troch::eigenstructure(troch::design_beta(d.triple, d.k, d.type), d.k, d.type);
        try {
            const auto cs = troch::constraint_halfplanes(rd.eig, rd.spec);
            const auto region = troch::enumerate_regions(cs);
            std::uniform_int_distribution<size_t> pick(0, region.polygons.size() - 1);
            const auto& poly = region.polygons[pick(rng)];
            const troch::Vec2 p = interior_point(poly, rng);
            rd.R_c = p.x;
            rd.d_c = p.y;
            return rd;
        } catch (const troch::EmptyRegionError&) {
            continue;
        }
    }
}

}  // namespace testsup
