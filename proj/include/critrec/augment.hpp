// Concrete-domain lifters. Each augmenter reads scenario geometry and
// kinematics through the world registry, and adds abstract assertions to the
// A-Box it is handed. All augmenters are additive, idempotent and
// deterministic; scene-scoped ones pair only members of the same scene.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "critrec/config.hpp"
#include "critrec/convert.hpp"
#include "critrec/geometry.hpp"
#include "critrec/world.hpp"

namespace critrec {

struct Augmenter {
    enum class Scope { Scene, Scenario };
    std::string name;
    Scope scope = Scope::Scene;
    std::set<std::string> reads;  // concept/role names consumed
    std::set<std::string> writes; // concept/role names produced
    std::function<long(World&, dl::ABox&, const Config&)> run;
};

// ---------------------------------------------------------------------------
// spatial grid pruning

namespace aug_detail {

struct BBox {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    static BBox of(const geom::Polygon& g) {
        BBox b{g[0].x, g[0].y, g[0].x, g[0].y};
        for (const geom::Point& p : g.pts) {
            b.xmin = std::min(b.xmin, p.x);
            b.ymin = std::min(b.ymin, p.y);
            b.xmax = std::max(b.xmax, p.x);
            b.ymax = std::max(b.ymax, p.y);
        }
        return b;
    }
    double gap(const BBox& o) const {
        const double dx = std::max({0.0, o.xmin - xmax, xmin - o.xmax});
        const double dy = std::max({0.0, o.ymin - ymax, ymin - o.ymax});
        return std::hypot(dx, dy);
    }
};

// candidate index pairs (i < j) whose bounding boxes are within `radius`,
// found through a uniform grid; purely a pruning step
inline std::vector<std::pair<int, int>> candidate_pairs(const std::vector<BBox>& boxes, double radius) {
    std::vector<std::pair<int, int>> out;
    double extent = 1.0;
    for (const BBox& b : boxes)
        extent = std::max({extent, b.xmax - b.xmin, b.ymax - b.ymin});
    const double cell = std::max(radius, extent);
    std::unordered_map<std::uint64_t, std::vector<int>> grid;
    const auto key = [](long ix, long iy) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
               static_cast<std::uint32_t>(iy);
    };
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BBox& b = boxes[i];
        const long x0 = static_cast<long>(std::floor((b.xmin - radius / 2) / cell));
        const long x1 = static_cast<long>(std::floor((b.xmax + radius / 2) / cell));
        const long y0 = static_cast<long>(std::floor((b.ymin - radius / 2) / cell));
        const long y1 = static_cast<long>(std::floor((b.ymax + radius / 2) / cell));
        for (long x = x0; x <= x1; ++x)
            for (long y = y0; y <= y1; ++y) grid[key(x, y)].push_back(static_cast<int>(i));
    }
    std::unordered_set<std::uint64_t> seen;
    for (const auto& [k, items] : grid) {
        for (std::size_t a = 0; a < items.size(); ++a)
            for (std::size_t b = a + 1; b < items.size(); ++b) {
                int i = items[a], j = items[b];
                if (i > j) std::swap(i, j);
                const std::uint64_t pk = (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j);
                if (!seen.insert(pk).second) continue;
                if (boxes[i].gap(boxes[j]) <= radius) out.emplace_back(i, j);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// members of a scene that have geometry, with their entities
struct SpatialMember {
    int ind;
    const Entity* entity;
};

inline std::vector<SpatialMember> spatial_members(const World& w, const dl::ABox& abox, int scene_ind) {
    std::vector<SpatialMember> out;
    for (const int ind : w.members_of(abox, scene_ind)) {
        const Entity* e = w.entity_of(ind);
        if (e && e->geometry) out.push_back({ind, e});
    }
    return out;
}

inline std::vector<SpatialMember> kinematic_members(const World& w, const dl::ABox& abox, int scene_ind) {
    std::vector<SpatialMember> out;
    for (const int ind : w.members_of(abox, scene_ind)) {
        const Entity* e = w.entity_of(ind);
        if (e && e->geometry && e->kinematics) out.push_back({ind, e});
    }
    return out;
}

inline long add_symmetric(dl::ABox& abox, int role, int a, int b) {
    long n = 0;
    n += abox.add_role(role, a, b) ? 1 : 0;
    n += abox.add_role(role, b, a) ? 1 : 0;
    return n;
}

} // namespace aug_detail

// ---------------------------------------------------------------------------
// intersects / is_near

inline Augmenter make_intersects_augmenter() {
    Augmenter a;
    a.name = "intersects";
    a.reads = {"Scene", "has_traffic_entity"};
    a.writes = {"intersects"};
    a.run = [](World& w, dl::ABox& abox, const Config&) -> long {
        const int role = w.syms.role_id("intersects");
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto members = aug_detail::spatial_members(w, abox, scene_ind);
            std::vector<aug_detail::BBox> boxes;
            boxes.reserve(members.size());
            for (const auto& m : members) boxes.push_back(aug_detail::BBox::of(*m.entity->geometry));
            for (const auto& [i, j] : aug_detail::candidate_pairs(boxes, 0.0)) {
                if (geom::polygons_intersect(*members[i].entity->geometry, *members[j].entity->geometry))
                    added += aug_detail::add_symmetric(abox, role, members[i].ind, members[j].ind);
            }
        }
        return added;
    };
    return a;
}

inline Augmenter make_is_near_augmenter() {
    Augmenter a;
    a.name = "is_near";
    a.reads = {"Scene", "has_traffic_entity"};
    a.writes = {"is_near"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int role = w.syms.role_id("is_near");
        const double near = cfg.thresholds.is_near_m;
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto members = aug_detail::spatial_members(w, abox, scene_ind);
            std::vector<aug_detail::BBox> boxes;
            boxes.reserve(members.size());
            for (const auto& m : members) boxes.push_back(aug_detail::BBox::of(*m.entity->geometry));
            for (const auto& [i, j] : aug_detail::candidate_pairs(boxes, near)) {
                const double d =
                    geom::polygon_distance(*members[i].entity->geometry, *members[j].entity->geometry);
                if (d < near) // strict
                    added += aug_detail::add_symmetric(abox, role, members[i].ind, members[j].ind);
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// occlusion

namespace aug_detail {

struct Shadow {
    geom::Polygon wedge;    // arc points plus the two extreme vertices
    geom::Polygon occluder; // the occluder polygon itself
    std::pair<double, double> span{0, 0}; // angular interval of the wedge
};

// Shadow cast by `g` from viewpoint `c` onto a field of view of radius r.
// Handles the angular wraparound by remapping angles below 180 when the
// occluder straddles the zero direction.
inline std::optional<Shadow> shadow_of(const geom::Point& c, double r, const geom::Polygon& g,
                                       double arc_step_deg) {
    // a viewpoint inside the occluder leaves the extreme angles undefined;
    // such an occluder casts no shadow here (others still do)
    if (geom::point_in_polygon(c, g)) return std::nullopt;
    std::vector<double> angles;
    angles.reserve(g.size());
    double ymin = g[0].y, ymax = g[0].y;
    bool lo_quadrant = false, hi_quadrant = false;
    for (const geom::Point& p : g.pts) {
        const double a = geom::rel_angle_deg(c, p);
        angles.push_back(a);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
        if (a >= 0 && a < 90) lo_quadrant = true;
        if (a >= 270 && a < 360) hi_quadrant = true;
    }
    const bool wrap = c.y >= ymin && c.y <= ymax && lo_quadrant && hi_quadrant;
    if (wrap)
        for (double& a : angles)
            if (a < 180) a += 360;
    std::size_t il = 0, ir = 0;
    for (std::size_t k = 1; k < angles.size(); ++k) {
        if (angles[k] < angles[il]) il = k;
        if (angles[k] > angles[ir]) ir = k;
    }
    const double span = angles[ir] - angles[il];
    if (span <= 1e-9 || span >= 360.0 - 1e-9) return std::nullopt;
    const std::size_t n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(span / arc_step_deg)) + 1);
    std::vector<geom::Point> ring = geom::circular_segment_points(
        c, r, geom::normalize_deg(angles[il]), geom::normalize_deg(angles[ir]), n);
    const geom::Point pl = g[il], pr = g[ir];
    if (geom::dist(ring.back(), pr) > geom::kEps) ring.push_back(pr);
    if (geom::dist(ring.front(), pl) > geom::kEps) ring.push_back(pl);
    try {
        return Shadow{geom::make_polygon(std::move(ring)), g, {angles[il], angles[ir]}};
    } catch (const std::invalid_argument&) {
        return std::nullopt; // degenerate sliver
    }
}

// angular interval of a polygon's vertices as seen from c, wraparound
// handled like shadow_of; the whole polygon (and its shadow) lies inside it
inline std::optional<std::pair<double, double>> angular_span(const geom::Point& c,
                                                             const geom::Polygon& g) {
    if (geom::point_in_polygon(c, g)) return std::nullopt;
    double ymin = g[0].y, ymax = g[0].y;
    bool lo_q = false, hi_q = false;
    std::vector<double> angles;
    angles.reserve(g.size());
    for (const geom::Point& p : g.pts) {
        const double a = geom::rel_angle_deg(c, p);
        angles.push_back(a);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
        if (a >= 0 && a < 90) lo_q = true;
        if (a >= 270 && a < 360) hi_q = true;
    }
    if (c.y >= ymin && c.y <= ymax && lo_q && hi_q)
        for (double& a : angles)
            if (a < 180) a += 360;
    double lo = angles[0], hi = angles[0];
    for (const double a : angles) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    return std::make_pair(lo, hi);
}

inline bool angular_intervals_overlap(std::pair<double, double> a, std::pair<double, double> b) {
    for (const double shift : {-360.0, 0.0, 360.0})
        if (a.first <= b.second + shift && b.first + shift <= a.second) return true;
    return false;
}

inline geom::Polygon fov_polygon(const geom::Point& c, double r, double arc_step_deg) {
    const std::size_t n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(360.0 / arc_step_deg)));
    std::vector<geom::Point> pts;
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        pts.push_back(c + geom::unit_from_deg(360.0 * static_cast<double>(k) / static_cast<double>(n)) * r);
    return geom::make_polygon(std::move(pts));
}

} // namespace aug_detail

inline Augmenter make_occlusion_augmenter() {
    Augmenter a;
    a.name = "occlusion";
    a.scope = Augmenter::Scope::Scene;
    a.reads = {"Scene", "has_traffic_entity", "Spatial_Object"};
    a.writes = {"Is_Occlusion", "is_occluded_for", "is_occluded_by", "is_occluded",
                "has_occlusion_rate"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int c_occ = w.syms.concept_id("Is_Occlusion");
        const int r_for = w.syms.role_id("is_occluded_for");
        const int r_by = w.syms.role_id("is_occluded_by");
        const int r_target = w.syms.role_id("is_occluded");
        const int a_rate = w.syms.attr_id("has_occlusion_rate");
        const double r = cfg.visibility_range_m;
        long added = 0;
        for (const auto& [scene_idx, scene_ind] : w.scenes_in(abox)) {
            const auto spatial = aug_detail::spatial_members(w, abox, scene_ind);
            for (const auto& obs : spatial) {
                if (!obs.entity->kinematics) continue; // observers need a heading
                const geom::Point c = sensing_point(*obs.entity);
                const geom::Polygon fov = aug_detail::fov_polygon(c, r, cfg.arc_step_deg);
                // shadows per occluder, computed once per observer
                std::map<int, std::optional<aug_detail::Shadow>> shadows;
                for (const auto& occ : spatial) {
                    if (occ.ind == obs.ind) continue;
                    if (!occ.entity->height || !(*occ.entity->height > 0)) continue;
                    if (geom::point_polygon_distance(c, *occ.entity->geometry) > r) continue;
                    shadows[occ.ind] = aug_detail::shadow_of(c, r, *occ.entity->geometry, cfg.arc_step_deg);
                }
                // inscribed radius of the polygonized field of view: targets
                // entirely inside it need no clipping
                const double fov_inner = r * std::cos(geom::kPi / static_cast<double>(fov.size()));
                for (const auto& tgt : spatial) {
                    if (tgt.ind == obs.ind) continue;
                    double far_vertex = 0.0;
                    for (const geom::Point& p : tgt.entity->geometry->pts)
                        far_vertex = std::max(far_vertex, geom::dist(c, p));
                    const double in_view =
                        far_vertex <= fov_inner
                            ? geom::polygon_area(*tgt.entity->geometry)
                            : geom::polygon_intersection_area(*tgt.entity->geometry, fov);
                    if (in_view <= geom::kSliverArea) continue; // outside the field of view
                    const auto tgt_span = aug_detail::angular_span(c, *tgt.entity->geometry);
                    std::vector<int> occluders;
                    std::vector<const geom::Polygon*> parts;
                    for (const auto& [occ_ind, shadow] : shadows) {
                        if (occ_ind == tgt.ind || !shadow) continue;
                        // a shadow stays inside its occluder's angular wedge
                        if (tgt_span &&
                            !aug_detail::angular_intervals_overlap(*tgt_span, shadow->span))
                            continue;
                        const double contrib = geom::clipped_union_area(
                            *tgt.entity->geometry, {&shadow->wedge, &shadow->occluder});
                        if (contrib > geom::kSliverArea) occluders.push_back(occ_ind);
                    }
                    if (occluders.empty()) continue;
                    for (const int occ_ind : occluders) {
                        parts.push_back(&shadows[occ_ind]->wedge);
                        parts.push_back(&shadows[occ_ind]->occluder);
                    }
                    const double covered = geom::clipped_union_area(*tgt.entity->geometry, parts);
                    const double rate = std::min(1.0, covered / in_view);
                    if (!(rate > 1e-9)) continue;
                    const std::string name = "::occl:" + std::to_string(scene_idx) + ":" +
                                             w.persistent_of(obs.ind) + ":" + w.persistent_of(tgt.ind);
                    const int rec = w.register_individual(
                        name, {IndividualInfo::Kind::Synthetic, scene_idx,
                               "occl:" + w.persistent_of(obs.ind) + ":" + w.persistent_of(tgt.ind),
                               -1, -1});
                    added += abox.add_concept(c_occ, rec) ? 1 : 0;
                    added += abox.add_role(r_for, rec, obs.ind) ? 1 : 0;
                    added += abox.add_role(r_target, rec, tgt.ind) ? 1 : 0;
                    for (const int occ_ind : occluders)
                        added += abox.add_role(r_by, rec, occ_ind) ? 1 : 0;
                    added += abox.add_data(a_rate, rec, rate) ? 1 : 0;
                    added += abox.add_role(w.r_has_traffic_entity, scene_ind, rec) ? 1 : 0;
                    added += abox.add_role(w.r_in_scene, rec, scene_ind) ? 1 : 0;
                    added += abox.add_role(w.r_in_traffic_model, rec, scene_ind) ? 1 : 0;
                    added += abox.add_role(w.r_has_traffic_entity, w.scenario_ind, rec) ? 1 : 0;
                    added += abox.add_role(w.r_in_traffic_model, rec, w.scenario_ind) ? 1 : 0;
                }
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// relevant area (small distance)

namespace aug_detail {

struct ReachPrimitive {
    enum class Kind { Poly, Segment, Point } kind = Kind::Point;
    geom::Polygon poly;
    geom::Point a, b;
    BBox box; // bounds of the primitive, for pair rejection

    void set_box() {
        switch (kind) {
            case Kind::Poly: box = BBox::of(poly); break;
            case Kind::Segment:
                box = {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
                       std::max(a.y, b.y)};
                break;
            case Kind::Point: box = {a.x, a.y, a.x, a.y}; break;
        }
    }
};

inline double heading_at(double yaw_deg, double max_yaw_deg, double omega, double t) {
    if (std::abs(omega * t) > max_yaw_deg)
        return yaw_deg + (omega > 0 ? 1.0 : -1.0) * max_yaw_deg * t -
               max_yaw_deg * max_yaw_deg / (2.0 * omega);
    return yaw_deg + omega * t * t / 2.0;
}

inline geom::Point reach_pos(const geom::Point& p, double speed, double yaw_deg, double max_yaw_deg,
                             double omega, double t) {
    const double th = heading_at(yaw_deg, max_yaw_deg, omega, t);
    return p + geom::unit_from_deg(th) * (speed * t);
}

// Positions reachable from the front corners within the horizon, swept over
// the yaw-rate range; one convex hull per (rate, corner) path. A zero rate
// bound degenerates to the two straight segments from the front corners.
inline std::vector<ReachPrimitive> relevant_area(const Entity& e, const Config& cfg) {
    const OrientedBox box = front_back_points(e);
    const Kinematics& k = *e.kinematics;
    const double tH = cfg.thresholds.relevant_area_horizon_s;
    std::vector<double> omegas;
    if (k.max_yaw_rate_deg_s <= 0 || cfg.relevant_area_omega_samples == 1) {
        omegas.push_back(0.0);
    } else {
        const int n = cfg.relevant_area_omega_samples;
        for (int i = 0; i < n; ++i)
            omegas.push_back(-k.max_yaw_rate_deg_s +
                             2.0 * k.max_yaw_rate_deg_s * static_cast<double>(i) / (n - 1));
    }
    std::vector<ReachPrimitive> out;
    for (const double omega : omegas) {
        for (const geom::Point& corner : {box.fl, box.fr}) {
            std::vector<geom::Point> pts;
            pts.reserve(cfg.relevant_area_t_samples);
            for (int i = 0; i < cfg.relevant_area_t_samples; ++i) {
                const double t = tH * static_cast<double>(i) / (cfg.relevant_area_t_samples - 1);
                pts.push_back(reach_pos(corner, k.speed, k.yaw_deg, k.max_yaw_deg, omega, t));
            }
            std::vector<geom::Point> hull = geom::convex_hull(pts);
            ReachPrimitive prim;
            if (hull.size() >= 3) {
                try {
                    prim.kind = ReachPrimitive::Kind::Poly;
                    prim.poly = geom::make_polygon(hull);
                    prim.set_box();
                    out.push_back(std::move(prim));
                    continue;
                } catch (const std::invalid_argument&) {
                    // collinear path, fall through to a segment
                }
            }
            if (hull.size() >= 2) {
                prim.kind = ReachPrimitive::Kind::Segment;
                prim.a = hull.front();
                prim.b = hull.back();
            } else if (hull.size() == 1) {
                prim.kind = ReachPrimitive::Kind::Point;
                prim.a = hull.front();
            } else {
                continue;
            }
            prim.set_box();
            out.push_back(std::move(prim));
        }
    }
    return out;
}

inline bool primitives_intersect(const ReachPrimitive& x, const ReachPrimitive& y) {
    using K = ReachPrimitive::Kind;
    const auto poly_seg = [](const geom::Polygon& g, const geom::Point& a, const geom::Point& b) {
        if (geom::point_in_polygon(a, g) || geom::point_in_polygon(b, g)) return true;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (geom::segments_intersect(g[i], g[(i + 1) % g.size()], a, b)) return true;
        return false;
    };
    if (x.kind == K::Poly && y.kind == K::Poly) return geom::polygons_intersect(x.poly, y.poly);
    if (x.kind == K::Poly && y.kind == K::Segment) return poly_seg(x.poly, y.a, y.b);
    if (x.kind == K::Segment && y.kind == K::Poly) return poly_seg(y.poly, x.a, x.b);
    if (x.kind == K::Poly && y.kind == K::Point) return geom::point_in_polygon(y.a, x.poly);
    if (x.kind == K::Point && y.kind == K::Poly) return geom::point_in_polygon(x.a, y.poly);
    if (x.kind == K::Segment && y.kind == K::Segment) return geom::segments_intersect(x.a, x.b, y.a, y.b);
    if (x.kind == K::Segment && y.kind == K::Point) return geom::on_segment(y.a, x.a, x.b);
    if (x.kind == K::Point && y.kind == K::Segment) return geom::on_segment(x.a, y.a, y.b);
    return geom::dist(x.a, y.a) <= geom::kEps;
}

inline bool regions_overlap(const std::vector<ReachPrimitive>& a, const std::vector<ReachPrimitive>& b) {
    for (const ReachPrimitive& x : a)
        for (const ReachPrimitive& y : b) {
            if (x.box.gap(y.box) > 0) continue; // disjoint bounds cannot touch
            if (primitives_intersect(x, y)) return true;
        }
    return false;
}

} // namespace aug_detail

inline Augmenter make_relevant_area_augmenter() {
    Augmenter a;
    a.name = "relevant_area";
    a.reads = {"Scene", "has_traffic_entity", "Dynamical_Object"};
    a.writes = {"object_CP_150"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int role = w.syms.role_id("object_CP_150");
        const double tH = cfg.thresholds.relevant_area_horizon_s;
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto members = aug_detail::kinematic_members(w, abox, scene_ind);
            std::vector<std::vector<aug_detail::ReachPrimitive>> regions;
            std::vector<aug_detail::BBox> boxes;
            double max_reach = 0.0;
            regions.reserve(members.size());
            for (const auto& m : members) {
                regions.push_back(aug_detail::relevant_area(*m.entity, cfg));
                boxes.push_back(aug_detail::BBox::of(*m.entity->geometry));
                max_reach = std::max(max_reach, m.entity->kinematics->speed * tH);
            }
            for (const auto& [i, j] : aug_detail::candidate_pairs(boxes, 2.0 * max_reach)) {
                if (aug_detail::regions_overlap(regions[i], regions[j]))
                    added += aug_detail::add_symmetric(abox, role, members[i].ind, members[j].ind);
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// intersecting planned paths

inline Augmenter make_intersecting_paths_augmenter() {
    Augmenter a;
    a.name = "intersecting_paths";
    a.reads = {"Scene", "has_traffic_entity", "Dynamical_Object"};
    a.writes = {"has_intersecting_path"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int role = w.syms.role_id("has_intersecting_path");
        const double tau1 = cfg.thresholds.tau1_s;
        const double tau2 = cfg.thresholds.tau2_s;
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto members = aug_detail::kinematic_members(w, abox, scene_ind);
            for (std::size_t i = 0; i < members.size(); ++i) {
                const Kinematics& ki = *members[i].entity->kinematics;
                if (!(ki.speed > 0)) continue; // undefined arrival time
                for (std::size_t j = i + 1; j < members.size(); ++j) {
                    const Kinematics& kj = *members[j].entity->kinematics;
                    if (!(kj.speed > 0)) continue;
                    const geom::Point pi = geom::centroid(*members[i].entity->geometry);
                    const geom::Point pj = geom::centroid(*members[j].entity->geometry);
                    const auto hit = geom::ray_intersection(geom::Ray(pi, ki.yaw_deg),
                                                            geom::Ray(pj, kj.yaw_deg));
                    if (!hit) continue;
                    const double t1 = geom::dist(pi, *hit) / ki.speed;
                    const double t2 = geom::dist(pj, *hit) / kj.speed;
                    if (t1 + t2 < tau1 && std::abs(t1 - t2) < tau2)
                        added += aug_detail::add_symmetric(abox, role, members[i].ind, members[j].ind);
                }
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// high relative speed

inline Augmenter make_relative_speed_augmenter() {
    Augmenter a;
    a.name = "relative_speed";
    a.reads = {"Scene", "has_traffic_entity", "Dynamical_Object"};
    a.writes = {"object_CP_163"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int role = w.syms.role_id("object_CP_163");
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto members = aug_detail::kinematic_members(w, abox, scene_ind);
            for (const auto& mi : members) {
                const Kinematics& ki = *mi.entity->kinematics;
                const auto rule_limit = mi.entity->attr("max_allowed_speed");
                if (!rule_limit) {
                    ++w.skipped_attributes["max_allowed_speed"];
                    continue;
                }
                double capability;
                if (const auto cap = mi.entity->attr("max_speed_capability")) {
                    capability = *cap;
                } else {
                    const auto it = cfg.default_max_speed_capability.find(to_string(mi.entity->kind));
                    capability = it != cfg.default_max_speed_capability.end() ? it->second : 60.0;
                }
                const double denom = std::min(*rule_limit, capability);
                if (!(denom > 0)) continue;
                const geom::Point vi = geom::unit_from_deg(ki.yaw_deg) * ki.speed;
                for (const auto& mj : members) {
                    if (mj.ind == mi.ind) continue;
                    const Kinematics& kj = *mj.entity->kinematics;
                    const geom::Point vj = geom::unit_from_deg(kj.yaw_deg) * kj.speed;
                    const double rel = (vi - vj).norm();
                    if (rel / denom >= cfg.thresholds.relative_speed_ratio)
                        added += abox.add_role(role, mi.ind, mj.ind) ? 1 : 0;
                }
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// relational frames (in_front_of / behind / is_in_proximity)

inline Augmenter make_relational_frames_augmenter() {
    Augmenter a;
    a.name = "relational_frames";
    a.reads = {"Scene", "has_traffic_entity"};
    a.writes = {"in_front_of", "behind", "is_in_proximity"};
    a.run = [](World& w, dl::ABox& abox, const Config& cfg) -> long {
        const int r_front = w.syms.role_id("in_front_of");
        const int r_behind = w.syms.role_id("behind");
        const int r_prox = w.syms.role_id("is_in_proximity");
        long added = 0;
        for (const auto& [idx, scene_ind] : w.scenes_in(abox)) {
            const auto subjects = aug_detail::kinematic_members(w, abox, scene_ind);
            const auto all = aug_detail::spatial_members(w, abox, scene_ind);
            for (const auto& subj : subjects) {
                const geom::Point sc = geom::centroid(*subj.entity->geometry);
                const geom::Point u = geom::unit_from_deg(subj.entity->kinematics->yaw_deg);
                const geom::Point n{-u.y, u.x};
                for (const auto& tgt : all) {
                    if (tgt.ind == subj.ind) continue;
                    if (!kind_is_traffic_participant(tgt.entity->kind)) continue;
                    const geom::Point d = geom::centroid(*tgt.entity->geometry) - sc;
                    const double lon = d.dot(u);
                    const double lat = d.dot(n);
                    if (d.norm() < cfg.proximity_radius_m)
                        added += abox.add_role(r_prox, tgt.ind, subj.ind) ? 1 : 0;
                    if (std::abs(lat) < cfg.lateral_window_m) {
                        if (lon > 0) added += abox.add_role(r_front, tgt.ind, subj.ind) ? 1 : 0;
                        else if (lon < 0) added += abox.add_role(r_behind, tgt.ind, subj.ind) ? 1 : 0;
                    }
                }
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// pass activities (finite look-back over the merged scenario A-Box)

inline Augmenter make_pass_activity_augmenter() {
    Augmenter a;
    a.name = "pass_activity";
    a.scope = Augmenter::Scope::Scenario;
    a.reads = {"Scene", "has_traffic_entity", "is_in_proximity", "behind", "in_front_of",
               "identical_to"};
    a.writes = {"Pass", "conducted_by", "has_participant", "has_pass_start", "has_pass_end"};
    a.run = [](World& w, dl::ABox& abox, const Config&) -> long {
        const int c_pass = w.syms.concept_id("Pass");
        const int r_conducted = w.syms.role_id("conducted_by");
        const int r_participant = w.syms.role_id("has_participant");
        const int a_start = w.syms.attr_id("has_pass_start");
        const int a_end = w.syms.attr_id("has_pass_end");
        const int r_front = w.syms.role_id("in_front_of");
        const int r_behind = w.syms.role_id("behind");
        const int r_prox = w.syms.role_id("is_in_proximity");
        long added = 0;
        const auto scenes = w.scenes_in(abox);
        // previous identity along the adjacency chain
        const auto prev_of = [&](int ind) -> int {
            const auto& objs = abox.role_objects(w.r_identical_to, ind);
            return objs.empty() ? -1 : objs.front();
        };
        for (const auto& [scene_idx, scene_ind] : scenes) {
            const auto drivers = aug_detail::kinematic_members(w, abox, scene_ind);
            const auto all = aug_detail::spatial_members(w, abox, scene_ind);
            for (const auto& drv : drivers) {
                const EntityKind dk = drv.entity->kind;
                if (dk != EntityKind::Vehicle && dk != EntityKind::MotorizedRoadVehicle) continue;
                for (const auto& obj : all) {
                    if (obj.ind == drv.ind) continue;
                    if (!kind_is_traffic_participant(obj.entity->kind)) continue;
                    if (!abox.has_role(r_behind, obj.ind, drv.ind)) continue;
                    if (!abox.has_role(r_prox, obj.ind, drv.ind)) continue;
                    // walk the identity chains backwards; every intermediate
                    // scene must keep the object beside (neither in front nor
                    // behind) and in proximity
                    int ak = prev_of(drv.ind), ok = prev_of(obj.ind);
                    int found = -1;
                    while (ak >= 0 && ok >= 0) {
                        if (!abox.has_role(r_prox, ok, ak)) break;
                        if (abox.has_role(r_front, ok, ak)) {
                            found = w.scene_index_of(ak);
                            break;
                        }
                        if (abox.has_role(r_behind, ok, ak)) break;
                        ak = prev_of(ak);
                        ok = prev_of(ok);
                    }
                    if (found < 0) continue;
                    const std::string name = "::pass:" + std::to_string(scene_idx) + ":" +
                                             w.persistent_of(drv.ind) + ":" + w.persistent_of(obj.ind);
                    const int rec = w.register_individual(
                        name, {IndividualInfo::Kind::Synthetic, scene_idx,
                               "pass:" + w.persistent_of(drv.ind) + ":" + w.persistent_of(obj.ind),
                               -1, -1});
                    added += abox.add_concept(c_pass, rec) ? 1 : 0;
                    added += abox.add_role(r_conducted, rec, drv.ind) ? 1 : 0;
                    added += abox.add_role(r_participant, rec, obj.ind) ? 1 : 0;
                    added += abox.add_data(a_start, rec, found) ? 1 : 0;
                    added += abox.add_data(a_end, rec, scene_idx) ? 1 : 0;
                    added += abox.add_role(w.r_has_traffic_entity, scene_ind, rec) ? 1 : 0;
                    added += abox.add_role(w.r_in_scene, rec, scene_ind) ? 1 : 0;
                    added += abox.add_role(w.r_in_traffic_model, rec, scene_ind) ? 1 : 0;
                    added += abox.add_role(w.r_has_traffic_entity, w.scenario_ind, rec) ? 1 : 0;
                    added += abox.add_role(w.r_in_traffic_model, rec, w.scenario_ind) ? 1 : 0;
                }
            }
        }
        return added;
    };
    return a;
}

// ---------------------------------------------------------------------------
// registry

struct AugmenterRegistry {
    std::vector<Augmenter> augmenters;

    long run_all(World& w, dl::ABox& abox, const Config& cfg,
                 std::map<std::string, long>* per_augmenter = nullptr) const {
        long total = 0;
        for (const Augmenter& a : augmenters) {
            const long n = a.run(w, abox, cfg);
            if (per_augmenter) (*per_augmenter)[a.name] += n;
            total += n;
        }
        return total;
    }

    // each augmenter's names act as one pseudo-axiom in the temporal
    // reachability analysis
    std::vector<std::set<std::string>> name_groups() const {
        std::vector<std::set<std::string>> out;
        for (const Augmenter& a : augmenters) {
            std::set<std::string> g = a.reads;
            g.insert(a.writes.begin(), a.writes.end());
            out.push_back(std::move(g));
        }
        return out;
    }
};

inline AugmenterRegistry default_augmenters() {
    AugmenterRegistry reg;
    reg.augmenters = {make_intersects_augmenter(),        make_is_near_augmenter(),
                      make_occlusion_augmenter(),         make_relevant_area_augmenter(),
                      make_intersecting_paths_augmenter(), make_relative_speed_augmenter(),
                      make_relational_frames_augmenter(), make_pass_activity_augmenter()};
    return reg;
}

} // namespace critrec
