#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "troch/design.hpp"
#include "troch/region.hpp"
#include "troch/sim.hpp"
#include "troch/trajectory.hpp"

namespace troch {

namespace detail {
inline std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}
}  // namespace detail

inline const char* kTrajectoryCsvHeader =
    "t,x1,y1,x2,y2,x3,y3,V1,omega1,V2,omega2,V3,omega3";

/// One CSV row of the trajectory schema; turn rates at cusps are emitted
/// as nan rather than aborting the export.
inline std::string trajectory_csv_row(const std::array<AgentTrochoid, 3>& paths, double t) {
    std::string row = detail::fmt9(t);
    for (int i = 0; i < 3; ++i) {
        const Vec2 p = trochoid_position(paths[i], t);
        row += "," + detail::fmt9(p.x) + "," + detail::fmt9(p.y);
    }
    for (int i = 0; i < 3; ++i) {
        row += "," + detail::fmt9(speed_at(paths[i], t));
        double w;
        try {
            w = turn_rate_at(paths[i], t);
        } catch (const CuspSingularityError&) {
            w = std::numeric_limits<double>::quiet_NaN();
        }
        row += "," + detail::fmt9(w);
    }
    return row;
}

/// Closed-form trajectory sampled over one period.
inline std::string trajectory_csv(const std::array<AgentTrochoid, 3>& paths, int samples,
                                  double duration = 0.0) {
    std::string out = kTrajectoryCsvHeader;
    out += "\n";
    if (duration <= 0.0) duration = paths[0].period();
    if (samples < 1) return out;
    for (int n = 0; n <= samples; ++n)
        out += trajectory_csv_row(paths, n * duration / samples) + "\n";
    return out;
}

/// Integrated swarm trace in the same schema: speeds from the protocol
/// input, turn rates from the closed-form reference.
inline std::string trace_csv(const CpTrace& trace, const std::array<double, 3>& beta,
                             const std::array<AgentTrochoid, 3>& reference) {
    std::string out = kTrajectoryCsvHeader;
    out += "\n";
    for (size_t n = 0; n < trace.t.size(); ++n) {
        std::string row = detail::fmt9(trace.t[n]);
        for (int i = 0; i < 3; ++i)
            row += "," + detail::fmt9(trace.x[n][i].x) + "," + detail::fmt9(trace.x[n][i].y);
        const auto out_i = cp_control_outputs(beta, trace.x[n]);
        for (int i = 0; i < 3; ++i) {
            row += "," + detail::fmt9(out_i[i].v);
            double w;
            try {
                w = turn_rate_at(reference[i], trace.t[n]);
            } catch (const CuspSingularityError&) {
                w = std::numeric_limits<double>::quiet_NaN();
            }
            row += "," + detail::fmt9(w);
        }
        out += row + "\n";
    }
    return out;
}

/// Region polygons as vertex lists.
inline std::string region_csv(const FeasibleRegion& region) {
    std::string out = "polygon,vertex,R_c,d_c\n";
    for (size_t p = 0; p < region.polygons.size(); ++p) {
        const auto& poly = region.polygons[p];
        for (size_t v = 0; v < poly.verts.size(); ++v) {
            out += std::to_string(p) + "," + std::to_string(v) + "," +
                   detail::fmt9(poly.verts[v].x) + "," + detail::fmt9(poly.verts[v].y) + "\n";
        }
    }
    return out;
}

}  // namespace troch
