// 2D Euclidean kernel: points, rays, simple polygons, boolean areas.
// All coordinates are double-precision meters in one global frame; angles
// are degrees. Boundary contact counts as intersection (closed sets).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace critrec::geom {

inline constexpr double kEps = 1e-9;        // snapping tolerance, meters
inline constexpr double kSliverArea = 1e-6; // areas below this are noise, m^2
inline constexpr double kPi = 3.14159265358979323846;

struct Point {
    double x = 0.0;
    double y = 0.0;

    Point operator+(const Point& p) const { return {x + p.x, y + p.y}; }
    Point operator-(const Point& p) const { return {x - p.x, y - p.y}; }
    Point operator*(double s) const { return {x * s, y * s}; }
    double dot(const Point& p) const { return x * p.x + y * p.y; }
    double cross(const Point& p) const { return x * p.y - y * p.x; }
    double norm() const { return std::hypot(x, y); }
};

inline bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline double dist(const Point& a, const Point& b) { return (b - a).norm(); }

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Normalizes an angle in degrees to [0, 360).
inline double normalize_deg(double d) {
    double r = std::fmod(d, 360.0);
    if (r < 0) r += 360.0;
    if (r >= 360.0) r = 0.0; // fmod can land exactly on 360 after the add
    return r;
}

inline Point unit_from_deg(double deg) {
    const double r = deg_to_rad(deg);
    return {std::cos(r), std::sin(r)};
}

// Relative angle of p as seen from c, in [0, 360).
inline double rel_angle_deg(const Point& c, const Point& p) {
    return normalize_deg(rad_to_deg(std::atan2(p.y - c.y, p.x - c.x)));
}

struct Ray {
    Point origin;
    double angle_deg = 0.0; // normalized to [0, 360)

    Ray() = default;
    Ray(Point o, double a) : origin(o), angle_deg(normalize_deg(a)) {}
    Point direction() const { return unit_from_deg(angle_deg); }
};

struct Circle {
    Point center;
    double radius = 1.0;

    Circle(Point c, double r) : center(c), radius(r) {
        if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("circle radius must be > 0");
    }
};

// ---------------------------------------------------------------------------
// segments

inline double point_segment_distance(const Point& p, const Point& a, const Point& b) {
    const Point ab = b - a;
    const double len2 = ab.dot(ab);
    if (len2 <= kEps * kEps) return dist(p, a);
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + ab * t);
}

inline int orientation(const Point& a, const Point& b, const Point& c) {
    const double v = (b - a).cross(c - a);
    const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y),
                                   std::abs(c.x), std::abs(c.y)});
    if (std::abs(v) <= kEps * scale) return 0;
    return v > 0 ? 1 : -1;
}

inline bool on_segment(const Point& p, const Point& a, const Point& b) {
    return point_segment_distance(p, a, b) <= kEps;
}

// Closed-set test: touching endpoints count.
inline bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(c, a, b)) || (o2 == 0 && on_segment(d, a, b)) ||
           (o3 == 0 && on_segment(a, c, d)) || (o4 == 0 && on_segment(b, c, d));
}

// Strict interior crossing (shared endpoints and touches excluded). Used by
// the simplicity check for non-adjacent edges.
inline bool segments_cross_or_touch(const Point& a, const Point& b, const Point& c, const Point& d) {
    return segments_intersect(a, b, c, d);
}

inline double segment_segment_distance(const Point& a, const Point& b, const Point& c, const Point& d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// ---------------------------------------------------------------------------
// polygons

struct Polygon {
    std::vector<Point> pts; // exterior ring, CCW after make()

    std::size_t size() const { return pts.size(); }
    const Point& operator[](std::size_t i) const { return pts[i]; }
};

inline double signed_area(const std::vector<Point>& pts) {
    double s = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        s += a.cross(b);
    }
    return s / 2.0;
}

inline bool polygon_is_simple(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        if (dist(a, b) <= kEps) return false; // repeated vertex
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            const Point& c = pts[j];
            const Point& d = pts[(j + 1) % n];
            if (segments_cross_or_touch(a, b, c, d)) return false;
        }
    }
    return true;
}

// Validates and normalizes a polygon: >=3 vertices, finite, simple,
// positive area, CCW winding.
inline Polygon make_polygon(std::vector<Point> pts) {
    if (pts.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (const Point& p : pts)
        if (!finite(p)) throw std::invalid_argument("polygon vertex is not finite");
    const double a = signed_area(pts);
    if (std::abs(a) <= kSliverArea) throw std::invalid_argument("degenerate polygon (zero area)");
    if (!polygon_is_simple(pts)) throw std::invalid_argument("polygon is self-intersecting");
    if (a < 0) std::reverse(pts.begin(), pts.end());
    return Polygon{std::move(pts)};
}

inline double polygon_area(const Polygon& g) { return std::abs(signed_area(g.pts)); }

inline Point centroid(const Polygon& g) {
    double cx = 0.0, cy = 0.0;
    const double a = signed_area(g.pts);
    const std::size_t n = g.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = g.pts[i];
        const Point& q = g.pts[(i + 1) % n];
        const double w = p.cross(q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

inline double polygon_diameter(const Polygon& g) {
    double d = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) d = std::max(d, dist(g[i], g[j]));
    return d;
}

// Closed-set membership: boundary points are inside.
inline bool point_in_polygon(const Point& p, const Polygon& g) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        if (point_segment_distance(p, g[i], g[(i + 1) % n]) <= kEps) return true;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = g[i];
        const Point& b = g[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

// points(g1) ∩ points(g2) != ∅ over the closed regions.
inline bool polygons_intersect(const Polygon& g1, const Polygon& g2) {
    const std::size_t n1 = g1.size(), n2 = g2.size();
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            if (segments_intersect(g1[i], g1[(i + 1) % n1], g2[j], g2[(j + 1) % n2])) return true;
    return point_in_polygon(g1[0], g2) || point_in_polygon(g2[0], g1);
}

inline double polygon_distance(const Polygon& g1, const Polygon& g2) {
    if (polygons_intersect(g1, g2)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    const std::size_t n1 = g1.size(), n2 = g2.size();
    for (std::size_t i = 0; i < n1; ++i)
        for (std::size_t j = 0; j < n2; ++j)
            d = std::min(d, segment_segment_distance(g1[i], g1[(i + 1) % n1], g2[j], g2[(j + 1) % n2]));
    return d;
}

inline double point_polygon_distance(const Point& p, const Polygon& g) {
    if (point_in_polygon(p, g)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i)
        d = std::min(d, point_segment_distance(p, g[i], g[(i + 1) % g.size()]));
    return d;
}

// ---------------------------------------------------------------------------
// rays

// Unique point on both half-lines, if any. Collinear overlap returns the
// common point nearest to r1.origin.
inline std::optional<Point> ray_intersection(const Ray& r1, const Ray& r2) {
    const Point d1 = r1.direction();
    const Point d2 = r2.direction();
    const Point o1 = r1.origin;
    const Point o2 = r2.origin;
    const double denom = d1.cross(d2);
    const auto point_on_ray = [](const Point& p, const Ray& r) {
        const Point d = r.direction();
        const Point v = p - r.origin;
        if (std::abs(v.cross(d)) > kEps * std::max(1.0, v.norm())) return false;
        return v.dot(d) >= -kEps;
    };
    if (std::abs(denom) <= kEps) {
        // parallel; overlap only when collinear
        if (std::abs((o2 - o1).cross(d1)) > kEps * std::max(1.0, (o2 - o1).norm())) return std::nullopt;
        if (point_on_ray(o1, r2)) return o1;
        if (point_on_ray(o2, r1)) return o2;
        return std::nullopt;
    }
    const Point w = o2 - o1;
    const double t = w.cross(d2) / denom;
    const double u = w.cross(d1) / denom;
    if (t < -kEps || u < -kEps) return std::nullopt;
    return o1 + d1 * std::max(t, 0.0);
}

// ---------------------------------------------------------------------------
// arcs

// n points on the circle around c from angle_l to angle_r (degrees, CCW).
// angle_l == angle_r yields the single point repeated n times.
inline std::vector<Point> circular_segment_points(const Point& c, double r, double angle_l,
                                                  double angle_r, std::size_t n) {
    if (!(r > 0)) throw std::invalid_argument("arc radius must be > 0");
    if (n < 2) throw std::invalid_argument("arc needs n >= 2");
    double span = angle_r - angle_l;
    if (std::abs(span) <= kEps) span = 0.0;
    else if (span < 0) span += 360.0;
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = angle_l + span * static_cast<double>(k) / static_cast<double>(n - 1);
        out.push_back(c + unit_from_deg(a) * r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// convex hull (monotone chain, CCW, collinear points dropped)

inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point& a, const Point& b) { return dist(a, b) <= kEps; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= kEps) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= kEps) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

// ---------------------------------------------------------------------------
// boolean areas by vertical decomposition
//
// Areas of unions/intersections are computed exactly by slicing the plane at
// every vertex x and every pairwise edge crossing x. Inside a slab no two
// active edges cross, so the covered measure is linear in x and the slab
// contributes a trapezoid. No clipped polygons are ever materialized.

namespace detail {

struct SweepEdge {
    double x1, y1, x2, y2; // x1 < x2
    int group;             // 0 = clip side, 1 = subject side
    double y_at(double x) const { return y1 + (y2 - y1) * (x - x1) / (x2 - x1); }
};

inline void collect_edges(const Polygon& g, int group, std::vector<SweepEdge>& edges,
                          std::vector<double>& xs) {
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point a = g[i];
        Point b = g[(i + 1) % n];
        xs.push_back(a.x);
        if (std::abs(a.x - b.x) <= 1e-12) continue; // vertical edges carry no area
        if (a.x > b.x) std::swap(a, b);
        edges.push_back({a.x, a.y, b.x, b.y, group});
    }
}

inline void add_crossing_xs(const std::vector<SweepEdge>& edges, std::vector<double>& xs) {
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const SweepEdge& e = edges[i];
            const SweepEdge& f = edges[j];
            const double lo = std::max(e.x1, f.x1);
            const double hi = std::min(e.x2, f.x2);
            if (lo >= hi) continue;
            // solve e.y(x) == f.y(x)
            const double me = (e.y2 - e.y1) / (e.x2 - e.x1);
            const double mf = (f.y2 - f.y1) / (f.x2 - f.x1);
            if (std::abs(me - mf) <= 1e-15) continue;
            const double x = (f.y1 - f.x1 * mf - e.y1 + e.x1 * me) / (me - mf);
            if (x > lo && x < hi) xs.push_back(x);
        }
    }
}

using Intervals = std::vector<std::pair<double, double>>;

// Coverage of one polygon group at abscissa x (even-odd per polygon, then
// union across polygons of the group).
inline Intervals coverage_at(const std::vector<const Polygon*>& polys, double x) {
    Intervals out;
    std::vector<double> ys;
    for (const Polygon* g : polys) {
        ys.clear();
        const std::size_t n = g->size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = g->pts[i];
            const Point& b = g->pts[(i + 1) % n];
            if (std::abs(a.x - b.x) <= 1e-12) continue;
            const double lo = std::min(a.x, b.x);
            const double hi = std::max(a.x, b.x);
            // half-open span so shared vertices are counted once
            if (x >= lo && x < hi) ys.push_back(a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x));
        }
        std::sort(ys.begin(), ys.end());
        for (std::size_t i = 0; i + 1 < ys.size(); i += 2) out.emplace_back(ys[i], ys[i + 1]);
    }
    if (out.empty()) return out;
    std::sort(out.begin(), out.end());
    Intervals merged;
    for (const auto& iv : out) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    return merged;
}

inline double measure(const Intervals& iv) {
    double m = 0.0;
    for (const auto& [lo, hi] : iv) m += hi - lo;
    return m;
}

inline double measure_intersection(const Intervals& a, const Intervals& b) {
    double m = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double lo = std::max(a[i].first, b[j].first);
        const double hi = std::min(a[i].second, b[j].second);
        if (hi > lo) m += hi - lo;
        if (a[i].second < b[j].second) ++i;
        else ++j;
    }
    return m;
}

enum class SweepMode { Union, ClipUnion };

// Union mode: area of the union of `subjects`. ClipUnion mode: area of
// clip ∩ (union of subjects); `clips` holds the clip polygons.
inline double sweep_area(SweepMode mode, const std::vector<const Polygon*>& clips,
                         const std::vector<const Polygon*>& subjects) {
    std::vector<SweepEdge> edges;
    std::vector<double> xs;
    for (const Polygon* g : clips) collect_edges(*g, 0, edges, xs);
    for (const Polygon* g : subjects) collect_edges(*g, 1, edges, xs);
    if (edges.empty()) return 0.0;
    add_crossing_xs(edges, xs);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
             xs.end());
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const double x1 = xs[k];
        const double x2 = xs[k + 1];
        const double w = x2 - x1;
        if (w <= 1e-12) continue;
        // measure is linear inside the slab, trapezoid rule is exact;
        // sample just inside to dodge boundary-vertex ambiguity
        const double eps = w * 1e-7;
        double m1, m2;
        if (mode == SweepMode::Union) {
            std::vector<const Polygon*> all = clips;
            all.insert(all.end(), subjects.begin(), subjects.end());
            m1 = measure(coverage_at(all, x1 + eps));
            m2 = measure(coverage_at(all, x2 - eps));
        } else {
            m1 = measure_intersection(coverage_at(clips, x1 + eps), coverage_at(subjects, x1 + eps));
            m2 = measure_intersection(coverage_at(clips, x2 - eps), coverage_at(subjects, x2 - eps));
        }
        area += w * (m1 + m2) / 2.0;
    }
    return area < kSliverArea ? 0.0 : area;
}

} // namespace detail

// A region is a set of possibly overlapping simple polygons understood as
// their union.
struct Region {
    std::vector<Polygon> parts;
};

inline Region polygon_union(std::vector<Polygon> gs) { return Region{std::move(gs)}; }

inline double region_area(const Region& r) {
    std::vector<const Polygon*> subjects;
    for (const Polygon& g : r.parts) subjects.push_back(&g);
    return detail::sweep_area(detail::SweepMode::Union, {}, subjects);
}

inline double polygon_intersection_area(const Polygon& g1, const Polygon& g2) {
    return detail::sweep_area(detail::SweepMode::ClipUnion, {&g1}, {&g2});
}

// area(clip ∩ (s1 ∪ s2 ∪ ...))
inline double clipped_union_area(const Polygon& clip, const std::vector<const Polygon*>& subjects) {
    return detail::sweep_area(detail::SweepMode::ClipUnion, {&clip}, subjects);
}

} // namespace critrec::geom
