#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "troch/design.hpp"
#include "troch/errors.hpp"
#include "troch/geometry.hpp"

namespace troch {

enum class ConstraintKind {
    OriginMin,
    OriginMax,
    PairMin,
    PairMax,
    NonNegative,
    CuspBand,
    Injection,
};

struct ConstraintTag {
    ConstraintKind kind = ConstraintKind::NonNegative;
    int i = 0;          // agent index (1-based) or first of a pair
    int j = 0;          // second pair index, 0 when unused
    double phi = 0.0;   // injection offset, 0 otherwise
    int branch = -1;    // 0/1 for disjunctive branches, -1 for singles

    std::string label() const {
        auto pair_sfx = [&] { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; };
        switch (kind) {
            case ConstraintKind::OriginMin: return "origin-min " + std::to_string(i);
            case ConstraintKind::OriginMax: return "origin-max " + std::to_string(i);
            case ConstraintKind::PairMin: return "pair-min " + pair_sfx();
            case ConstraintKind::PairMax: return "pair-max " + pair_sfx();
            case ConstraintKind::NonNegative: return i == 1 ? "R_c >= 0" : "d_c >= 0";
            case ConstraintKind::CuspBand: return "cusp-band " + std::to_string(i);
            case ConstraintKind::Injection:
                return "injection " + pair_sfx() + " phi=" + std::to_string(phi);
        }
        return "?";
    }
};

/// Linear constraint a*R_c + b*d_c >= c.
struct HalfPlane {
    double a = 0.0, b = 0.0, c = 0.0;
    ConstraintTag tag;

    double eval(double R, double d) const { return a * R + b * d - c; }
};

/// Two half-planes of which at least one must hold (split of |x| >= m).
struct Disjunction {
    std::array<HalfPlane, 2> branch;
};

struct ConstraintSet {
    std::vector<HalfPlane> singles;
    std::vector<Disjunction> disjunctions;
    double r_box = 0.0;  // bounding box implied by the origin-max family
    double d_box = 0.0;
};

/// Splits the distance constraints into tagged half-plane families.
/// Magnitude constraints |ar*R - ad*d| >= m become two-branch
/// disjunctions; the sum forms are single half-planes because R_c, d_c
/// are nonnegative.
inline ConstraintSet constraint_halfplanes(const Eigenstructure& eig, const DesignSpec& spec) {
    ConstraintSet cs;
    const Vec3& ar = eig.alpha_r;
    const Vec3& ad = eig.alpha_d;

    auto add_magnitude = [&](double x, double y, double m, ConstraintTag tag) {
        tag.branch = 0;
        Disjunction dj;
        dj.branch[0] = {x, -y, m, tag};
        tag.branch = 1;
        dj.branch[1] = {-x, y, m, tag};
        cs.disjunctions.push_back(dj);
    };
    auto add_upper = [&](double x, double y, double m, ConstraintTag tag) {
        cs.singles.push_back({-x, -y, -m, tag});  // x*R + y*d <= m
    };

    for (int i = 0; i < 3; ++i) {
        add_magnitude(std::abs(ar[i]), std::abs(ad[i]), spec.d0_min,
                      {ConstraintKind::OriginMin, i + 1, 0, 0.0, -1});
    }
    for (int i = 0; i < 3; ++i) {
        add_upper(std::abs(ar[i]), std::abs(ad[i]), spec.d0_max,
                  {ConstraintKind::OriginMax, i + 1, 0, 0.0, -1});
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            add_magnitude(std::abs(ar[i] - ar[j]), std::abs(ad[i] - ad[j]), spec.d_ct,
                          {ConstraintKind::PairMin, i + 1, j + 1, 0.0, -1});
        }
    }
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            add_upper(std::abs(ar[i] - ar[j]), std::abs(ad[i] - ad[j]), spec.d_cr,
                      {ConstraintKind::PairMax, i + 1, j + 1, 0.0, -1});
        }
    }
    cs.singles.push_back({1.0, 0.0, 0.0, {ConstraintKind::NonNegative, 1, 0, 0.0, -1}});
    cs.singles.push_back({0.0, 1.0, 0.0, {ConstraintKind::NonNegative, 2, 0, 0.0, -1}});

    double r_box = 0.0, d_box = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(ar[i]) > 0.0) {
            const double lim = spec.d0_max / std::abs(ar[i]);
            r_box = r_box == 0.0 ? lim : std::min(r_box, lim);
        }
        if (std::abs(ad[i]) > 0.0) {
            const double lim = spec.d0_max / std::abs(ad[i]);
            d_box = d_box == 0.0 ? lim : std::min(d_box, lim);
        }
    }
    cs.r_box = r_box > 0.0 ? r_box : 1e6;
    cs.d_box = d_box > 0.0 ? d_box : 1e6;
    return cs;
}

/// Slope d_c/R_c of the cusp ray for each agent; absent when either
/// coefficient vanishes (circle limit: no cusp at any design point).
inline std::array<std::optional<double>, 3> cusp_ray_slopes(const Eigenstructure& eig) {
    std::array<std::optional<double>, 3> slopes;
    for (int i = 0; i < 3; ++i) {
        const double nr = std::abs(eig.alpha_r[i]);
        const double nd = (eig.k + 1) * std::abs(eig.alpha_d[i]);
        if (nr > 0.0 && nd > 0.0) slopes[i] = nr / nd;
    }
    return slopes;
}

/// Exclusion band (1-eps) <= d_param/r_param <= (1+eps) around each cusp
/// ray, as a two-branch disjunction per agent (stay below or above it).
inline std::vector<Disjunction> cusp_exclusion_bands(const Eigenstructure& eig, double epsilon) {
    std::vector<Disjunction> out;
    for (int i = 0; i < 3; ++i) {
        const double nr = std::abs(eig.alpha_r[i]);
        const double nd = (eig.k + 1) * std::abs(eig.alpha_d[i]);
        if (nr == 0.0 || nd == 0.0) continue;
        Disjunction dj;
        ConstraintTag tag{ConstraintKind::CuspBand, i + 1, 0, 0.0, 0};
        dj.branch[0] = {(1.0 - epsilon) * nr, -nd, 0.0, tag};  // ratio <= 1-eps
        tag.branch = 1;
        dj.branch[1] = {-(1.0 + epsilon) * nr, nd, 0.0, tag};  // ratio >= 1+eps
        out.push_back(dj);
    }
    return out;
}

/// Hardens every origin-min branch from d0_min to d0_min + delta; other
/// constraints are left untouched.
inline ConstraintSet apply_perturbation_margin(ConstraintSet cs, double delta) {
    for (Disjunction& dj : cs.disjunctions) {
        for (HalfPlane& hp : dj.branch) {
            if (hp.tag.kind == ConstraintKind::OriginMin) hp.c += delta;
        }
    }
    return cs;
}

struct ConvexPolygon {
    std::vector<Vec2> verts;  // counterclockwise
    std::string provenance;   // branch choice per disjunction, 'A'/'B'

    double area() const {
        double s = 0.0;
        for (size_t i = 0; i < verts.size(); ++i) {
            const Vec2& p = verts[i];
            const Vec2& q = verts[(i + 1) % verts.size()];
            s += p.cross(q);
        }
        return 0.5 * s;
    }

    Vec2 centroid() const {
        double s = 0.0;
        Vec2 c{};
        for (size_t i = 0; i < verts.size(); ++i) {
            const Vec2& p = verts[i];
            const Vec2& q = verts[(i + 1) % verts.size()];
            const double w = p.cross(q);
            s += w;
            c += (p + q) * w;
        }
        if (s == 0.0) return verts.empty() ? Vec2{} : verts[0];
        return c / (3.0 * s);
    }

    bool contains(const Vec2& p, double tol) const {
        for (size_t i = 0; i < verts.size(); ++i) {
            const Vec2& a = verts[i];
            const Vec2& b = verts[(i + 1) % verts.size()];
            if ((b - a).cross(p - a) < -tol) return false;
        }
        return !verts.empty();
    }
};

struct FeasibleRegion {
    std::vector<ConvexPolygon> polygons;
    double r_box = 0.0;
    double d_box = 0.0;

    bool contains(const Vec2& p, double tol) const {
        for (const auto& poly : polygons)
            if (poly.contains(p, tol)) return true;
        return false;
    }

    double total_area() const {
        double s = 0.0;
        for (const auto& poly : polygons) s += poly.area();
        return s;
    }
};

namespace detail {

/// Clips a convex polygon against a*x + b*y >= c (Sutherland-Hodgman).
inline ConvexPolygon clip(const ConvexPolygon& poly, const HalfPlane& hp) {
    ConvexPolygon out;
    out.provenance = poly.provenance;
    const size_t n = poly.verts.size();
    if (n == 0) return out;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly.verts[i];
        const Vec2& q = poly.verts[(i + 1) % n];
        const double vp = hp.a * p.x + hp.b * p.y - hp.c;
        const double vq = hp.a * q.x + hp.b * q.y - hp.c;
        if (vp >= 0.0) out.verts.push_back(p);
        if ((vp > 0.0 && vq < 0.0) || (vp < 0.0 && vq > 0.0)) {
            const double t = vp / (vp - vq);
            out.verts.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

/// Removes consecutive duplicate vertices within tol.
inline void dedup_vertices(ConvexPolygon& poly, double tol) {
    std::vector<Vec2> cleaned;
    for (const Vec2& v : poly.verts) {
        if (cleaned.empty() || (v - cleaned.back()).norm() > tol) cleaned.push_back(v);
    }
    while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= tol)
        cleaned.pop_back();
    poly.verts = std::move(cleaned);
}

}  // namespace detail

/// Enumerates every combination of disjunctive branches, intersects the
/// chosen half-planes with the bounding box, and returns the union of the
/// surviving convex pieces.  Throws EmptyRegionError when nothing is
/// feasible.
inline FeasibleRegion enumerate_regions(const ConstraintSet& cs) {
    FeasibleRegion region;
    region.r_box = cs.r_box;
    region.d_box = cs.d_box;
    const double diag = std::hypot(cs.r_box, cs.d_box);
    const double vert_tol = 1e-9 * diag;
    const double min_area = 1e-9;

    ConvexPolygon box;
    box.verts = {{0.0, 0.0}, {cs.r_box, 0.0}, {cs.r_box, cs.d_box}, {0.0, cs.d_box}};
    for (const HalfPlane& hp : cs.singles) {
        box = detail::clip(box, hp);
        if (box.verts.size() < 3) break;
    }

    auto emit = [&](ConvexPolygon poly) {
        detail::dedup_vertices(poly, vert_tol);
        if (poly.verts.size() < 3 || poly.area() < min_area) return;
        for (const ConvexPolygon& existing : region.polygons) {
            if (std::abs(existing.area() - poly.area()) <= vert_tol * diag &&
                (existing.centroid() - poly.centroid()).norm() <= vert_tol)
                return;  // duplicate piece reached through another branch combination
        }
        region.polygons.push_back(std::move(poly));
    };

    // Depth-first over branch choices, pruning as soon as a piece dies.
    auto descend = [&](auto&& self, const ConvexPolygon& poly, size_t idx) -> void {
        if (poly.verts.size() < 3) return;
        if (idx == cs.disjunctions.size()) {
            emit(poly);
            return;
        }
        for (int br = 0; br < 2; ++br) {
            ConvexPolygon next = detail::clip(poly, cs.disjunctions[idx].branch[br]);
            next.provenance = poly.provenance + (br == 0 ? 'A' : 'B');
            self(self, next, idx + 1);
        }
    };
    descend(descend, box, 0);

    if (region.polygons.empty())
        throw EmptyRegionError("no feasible (R_c, d_c) region for these constraints");
    return region;
}

struct Classification {
    bool feasible = true;
    std::vector<ConstraintTag> violated;
};

/// Evaluates every constraint at a point; no polygons are built.
inline Classification classify_point(const ConstraintSet& cs, double R_c, double d_c) {
    Classification res;
    const double tol = 1e-9 * (1.0 + std::abs(R_c) + std::abs(d_c));
    for (const HalfPlane& hp : cs.singles) {
        if (hp.eval(R_c, d_c) < -tol) {
            res.feasible = false;
            res.violated.push_back(hp.tag);
        }
    }
    for (const Disjunction& dj : cs.disjunctions) {
        if (dj.branch[0].eval(R_c, d_c) < -tol && dj.branch[1].eval(R_c, d_c) < -tol) {
            res.feasible = false;
            ConstraintTag tag = dj.branch[0].tag;
            tag.branch = -1;
            res.violated.push_back(tag);
        }
    }
    return res;
}

/// Deepest interior point of a convex polygon: binary search on the
/// inset radius, clipping each edge inward, then the centroid of the
/// surviving sliver.
inline Vec2 deepest_point(const ConvexPolygon& poly) {
    std::vector<HalfPlane> edges;
    const size_t n = poly.verts.size();
    double diag = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = poly.verts[i];
        const Vec2& q = poly.verts[(i + 1) % n];
        Vec2 dir = q - p;
        const double len = dir.norm();
        if (len == 0.0) continue;
        const Vec2 inward{-dir.y / len, dir.x / len};  // left of a CCW edge
        edges.push_back({inward.x, inward.y, inward.dot(p), {}});
        diag = std::max(diag, len);
    }
    auto shrunk = [&](double r) {
        ConvexPolygon s;
        s.verts = poly.verts;
        for (HalfPlane hp : edges) {
            hp.c += r;
            s = detail::clip(s, hp);
            if (s.verts.size() < 3) break;
        }
        return s;
    };
    double lo = 0.0, hi = diag;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shrunk(mid).verts.size() >= 3)
            lo = mid;
        else
            hi = mid;
    }
    ConvexPolygon core = shrunk(lo);
    return core.verts.size() >= 3 ? core.centroid() : poly.centroid();
}

}  // namespace troch
