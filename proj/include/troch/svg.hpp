#pragma once

#include <algorithm>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "troch/design.hpp"
#include "troch/geometry.hpp"
#include "troch/injection.hpp"
#include "troch/region.hpp"
#include "troch/trajectory.hpp"

namespace troch {

inline constexpr std::array<const char*, 3> kAgentColors{"#1f5fd6", "#d62728", "#2ca02c"};

/// Minimal standalone-SVG canvas with a world-to-view transform.  Axes
/// get a 5% margin around the data extents.
class SvgCanvas {
  public:
    SvgCanvas(double x_lo, double x_hi, double y_lo, double y_hi, int width = 640,
              int height = 640)
        : width_(width), height_(height) {
        const double mx = 0.05 * (x_hi - x_lo + 1e-12);
        const double my = 0.05 * (y_hi - y_lo + 1e-12);
        x_lo_ = x_lo - mx;
        x_hi_ = x_hi + mx;
        y_lo_ = y_lo - my;
        y_hi_ = y_hi + my;
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                      "viewBox=\"0 0 %d %d\">\n",
                      width_, height_, width_, height_);
        body_ = buf;
        body_ += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    }

    double px(double x) const { return pad_ + (x - x_lo_) / (x_hi_ - x_lo_) * (width_ - 2 * pad_); }
    double py(double y) const {
        return height_ - pad_ - (y - y_lo_) / (y_hi_ - y_lo_) * (height_ - 2 * pad_);
    }

    void axes(const std::string& x_label, const std::string& y_label) {
        line_px(pad_, height_ - pad_, width_ - pad_, height_ - pad_, "#444", 1.0);
        line_px(pad_, height_ - pad_, pad_, pad_, "#444", 1.0);
        text_px(width_ - pad_, height_ - pad_ + 16, x_label, "end");
        text_px(pad_ - 4, pad_ - 6, y_label, "start");
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.4g", x_lo_);
        text_px(pad_, height_ - pad_ + 16, buf, "start");
        std::snprintf(buf, sizeof(buf), "%.4g", x_hi_);
        text_px(width_ - pad_, height_ - pad_ + 30, buf, "end");
        std::snprintf(buf, sizeof(buf), "%.4g", y_lo_);
        text_px(pad_ - 4, height_ - pad_, buf, "end");
        std::snprintf(buf, sizeof(buf), "%.4g", y_hi_);
        text_px(pad_ - 4, pad_ + 10, buf, "end");
    }

    void polygon(const std::vector<Vec2>& verts, const std::string& fill, double opacity,
                 const std::string& stroke) {
        std::string pts;
        for (const Vec2& v : verts) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(v.x), py(v.y));
            pts += buf;
        }
        body_ += "<polygon points=\"" + pts + "\" fill=\"" + fill + "\" fill-opacity=\"" +
                 std::to_string(opacity) + "\" stroke=\"" + stroke + "\"/>\n";
    }

    void polyline(const std::vector<Vec2>& pts, const std::string& color, double width = 1.5,
                  bool dashed = false) {
        std::string s;
        for (const Vec2& v : pts) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(v.x), py(v.y));
            s += buf;
        }
        body_ += "<polyline points=\"" + s + "\" fill=\"none\" stroke=\"" + color +
                 "\" stroke-width=\"" + std::to_string(width) + "\"" +
                 (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    }

    void line(Vec2 a, Vec2 b, const std::string& color, double width = 1.5) {
        line_px(px(a.x), py(a.y), px(b.x), py(b.y), color, width);
    }

    void circle(Vec2 c, double radius_px, const std::string& color) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.1f\" fill=\"%s\"/>\n", px(c.x),
                      py(c.y), radius_px, color.c_str());
        body_ += buf;
    }

    void annotate(const std::string& msg) {
        text_px(width_ / 2.0, height_ / 2.0, msg, "middle");
    }

    std::string finish() { return body_ + "</svg>\n"; }

  private:
    void line_px(double x1, double y1, double x2, double y2, const std::string& color,
                 double width) {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                      "stroke-width=\"%.1f\"/>\n",
                      x1, y1, x2, y2, color.c_str(), width);
        body_ += buf;
    }
    void text_px(double x, double y, const std::string& t, const std::string& anchor) {
        char buf[256];
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" font-family=\"sans-serif\" "
                      "text-anchor=\"%s\">%s</text>\n",
                      x, y, anchor.c_str(), t.c_str());
        body_ += buf;
    }

    int width_, height_;
    double pad_ = 46.0;
    double x_lo_ = 0, x_hi_ = 1, y_lo_ = 0, y_hi_ = 1;
    std::string body_;
};

/// Feasible-region plot: filled polygons, cusp rays, optional injection
/// overlay (red) and the chosen design point.
inline std::string plot_regions(const Eigenstructure& eig, const FeasibleRegion* region,
                                const FeasibleRegion* injected_region,
                                std::optional<Vec2> chosen) {
    double r_hi = 1.0, d_hi = 1.0;
    if (region) {
        r_hi = region->r_box;
        d_hi = region->d_box;
    }
    SvgCanvas svg(0.0, r_hi, 0.0, d_hi);
    svg.axes("R_c", "d_c");
    if (!region || region->polygons.empty()) {
        svg.annotate("no feasible region");
        return svg.finish();
    }
    for (const auto& poly : region->polygons) svg.polygon(poly.verts, "#1f5fd6", 0.45, "#1f5fd6");
    if (injected_region)
        for (const auto& poly : injected_region->polygons)
            svg.polygon(poly.verts, "#d62728", 0.45, "#d62728");
    const auto slopes = cusp_ray_slopes(eig);
    for (int i = 0; i < 3; ++i) {
        if (!slopes[i]) continue;
        const double s = *slopes[i];
        const Vec2 end = s * r_hi <= d_hi ? Vec2{r_hi, s * r_hi} : Vec2{d_hi / s, d_hi};
        svg.line({0.0, 0.0}, end, kAgentColors[i], 1.2);
    }
    if (chosen) svg.circle(*chosen, 4.0, "black");
    return svg.finish();
}

/// Path plot: one period per agent, start markers, rotation centre, and
/// optionally the injected start markers.
inline std::string plot_paths(const std::array<AgentTrochoid, 3>& paths,
                              const InjectionPlan* plan, int samples = 1200) {
    double lo = 0.0, hi = 0.0;
    std::array<std::vector<Vec2>, 3> lines;
    const double T = paths[0].period();
    for (int i = 0; i < 3; ++i) {
        lines[i].reserve(samples + 1);
        for (int n = 0; n <= samples; ++n) {
            const Vec2 p = trochoid_position(paths[i], n * T / samples);
            lines[i].push_back(p);
            lo = std::min({lo, p.x, p.y});
            hi = std::max({hi, p.x, p.y});
        }
    }
    SvgCanvas svg(lo, hi, lo, hi);
    svg.axes("X", "Y");
    for (int i = 0; i < 3; ++i) svg.polyline(lines[i], kAgentColors[i]);
    for (int i = 0; i < 3; ++i) svg.circle(lines[i].front(), 4.0, kAgentColors[i]);
    svg.circle(paths[0].cor, 3.0, "black");
    if (plan) {
        for (int i = 0; i < 3; ++i)
            for (double phi : plan->feasible_offsets[i])
                svg.circle(injected_position(paths[i], phi, 0.0), 4.0, kAgentColors[i]);
    }
    return svg.finish();
}

/// Speed and turn-rate profiles over one period.
inline std::string plot_speeds(const std::array<AgentTrochoid, 3>& paths, int samples = 1200) {
    const double T = paths[0].period();
    double v_hi = 0.0;
    std::array<std::vector<Vec2>, 3> vs, ws;
    double w_lo = 0.0, w_hi = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int n = 0; n <= samples; ++n) {
            const double t = n * T / samples;
            const double v = speed_at(paths[i], t);
            v_hi = std::max(v_hi, v);
            vs[i].push_back({t, v});
            double w;
            try {
                w = turn_rate_at(paths[i], t);
            } catch (const CuspSingularityError&) {
                continue;
            }
            w_lo = std::min(w_lo, w);
            w_hi = std::max(w_hi, w);
            ws[i].push_back({t, w});
        }
    }
    // two stacked panels: speeds on top, turn rates shifted below zero
    const double shift = w_hi + 0.05 * (v_hi > 0.0 ? v_hi : 1.0);
    SvgCanvas svg(0.0, T, w_lo - shift, v_hi);
    svg.axes("t", "V (top, solid) / omega (bottom, dashed)");
    for (int i = 0; i < 3; ++i) svg.polyline(vs[i], kAgentColors[i]);
    for (int i = 0; i < 3; ++i) {
        auto shifted = ws[i];
        for (Vec2& p : shifted) p.y -= shift;
        svg.polyline(shifted, kAgentColors[i], 1.5, true);
    }
    return svg.finish();
}

}  // namespace troch
