// Scene-wise criticality metrics: time to collision and required
// acceleration, in the standard closing-gap forms. The statistics layer
// treats series as opaque, so swapping definitions is a one-function change.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "critrec/config.hpp"
#include "critrec/scenario.hpp"

namespace critrec {

namespace metrics_detail {

struct Approach {
    double gap;     // meters, >= 0
    double closing; // m/s along the line of centers, > 0 when approaching
};

inline std::optional<Approach> approach(const Entity& a, const Entity& b, const Config& cfg) {
    if (!a.geometry || !b.geometry || !a.kinematics || !b.kinematics) return std::nullopt;
    const geom::Point ca = geom::centroid(*a.geometry);
    const geom::Point cb = geom::centroid(*b.geometry);
    const geom::Point d = cb - ca;
    const double center_dist = d.norm();
    if (center_dist <= geom::kEps) return std::nullopt;
    const geom::Point u = d * (1.0 / center_dist);
    const geom::Point va = geom::unit_from_deg(a.kinematics->yaw_deg) * a.kinematics->speed;
    const geom::Point vb = geom::unit_from_deg(b.kinematics->yaw_deg) * b.kinematics->speed;
    const double closing = (va - vb).dot(u);
    const double gap = cfg.gap_mode == "centroid" ? center_dist
                                                  : geom::polygon_distance(*a.geometry, *b.geometry);
    return Approach{gap, closing};
}

} // namespace metrics_detail

// Gap along the line of centers divided by the closing speed; undefined when
// the gap is not closing.
inline std::optional<double> ttc(const Entity& a, const Entity& b, const Config& cfg) {
    const auto ap = metrics_detail::approach(a, b, cfg);
    if (!ap || !(ap->closing > 0)) return std::nullopt;
    if (ap->gap <= geom::kEps) return 0.0;
    return ap->gap / ap->closing;
}

// Deceleration needed to avoid closing the remaining gap: -v_rel^2 / (2 gap).
// Zero when not closing; undefined on contact.
inline std::optional<double> a_req(const Entity& a, const Entity& b, const Config& cfg) {
    const auto ap = metrics_detail::approach(a, b, cfg);
    if (!ap) return std::nullopt;
    if (!(ap->closing > 0)) return 0.0;
    if (ap->gap <= geom::kEps) return std::nullopt;
    return -(ap->closing * ap->closing) / (2.0 * ap->gap);
}

struct MetricSeries {
    std::string metric; // "ttc" | "a_req"
    std::string subject, object; // persistent ids
    std::vector<std::optional<double>> samples; // one per scene
};

// One sample per scene; undefined where either entity is absent or the
// metric's precondition fails.
inline MetricSeries metric_series(const Scenario& sc, const std::string& metric,
                                  const std::string& pid_a, const std::string& pid_b,
                                  const Config& cfg) {
    MetricSeries out{metric, pid_a, pid_b, {}};
    out.samples.reserve(sc.scenes.size());
    for (const Scene& s : sc.scenes) {
        const Entity* a = sc.dynamic_in_scene(s.index, pid_a);
        const Entity* b = sc.dynamic_in_scene(s.index, pid_b);
        if (!a) a = sc.static_by_id(pid_a);
        if (!b) b = sc.static_by_id(pid_b);
        if (!a || !b) {
            out.samples.push_back(std::nullopt);
            continue;
        }
        out.samples.push_back(metric == "a_req" ? a_req(*a, *b, cfg) : ttc(*a, *b, cfg));
    }
    return out;
}

} // namespace critrec
