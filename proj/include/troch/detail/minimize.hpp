#pragma once

#include <cmath>
#include <utility>

namespace troch::detail {

/// Golden-section minimisation on [a, b]; assumes a single local minimum
/// inside the bracket.  Returns (argmin, min).
template <typename F>
std::pair<double, double> golden_min(F&& f, double a, double b, int iters = 80) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

/// Grid scan over [a, b] followed by golden-section refinement around the
/// best sample.  Returns (argmin, min).
template <typename F>
std::pair<double, double> grid_refine_min(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double best_x = a, best_f = f(a);
    for (int i = 1; i <= n; ++i) {
        const double x = a + i * h;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    auto [x, v] = golden_min(f, best_x - h, best_x + h);
    return v < best_f ? std::make_pair(x, v) : std::make_pair(best_x, best_f);
}

template <typename F>
std::pair<double, double> grid_refine_max(F&& f, double a, double b, int n) {
    auto [x, v] = grid_refine_min([&](double t) { return -f(t); }, a, b, n);
    return {x, -v};
}

}  // namespace troch::detail
