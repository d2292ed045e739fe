// Typed in-memory model of scenarios, scenes and traffic entities.
// Immutable after load; everything downstream reads it concurrently.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critrec/geometry.hpp"

namespace critrec {

enum class EntityKind {
    Vehicle,
    MotorizedRoadVehicle,
    Bicycle,
    Bicyclist,
    Pedestrian,
    ParkingVehicle,
    DriveableLane,
    NonDriveableLane,
    ParkingLane,
    ParkingSpace,
    PedestrianCrossing,
    PedestrianFord,
    Kindergarten,
    School,
    RetirementHome,
    TrafficInfrastructure,
    Rain,
    Air,
    OtherSpatialObject,
};

inline const std::vector<std::pair<std::string, EntityKind>>& entity_kind_table() {
    static const std::vector<std::pair<std::string, EntityKind>> t = {
        {"vehicle", EntityKind::Vehicle},
        {"motorized_road_vehicle", EntityKind::MotorizedRoadVehicle},
        {"bicycle", EntityKind::Bicycle},
        {"bicyclist", EntityKind::Bicyclist},
        {"pedestrian", EntityKind::Pedestrian},
        {"parking_vehicle", EntityKind::ParkingVehicle},
        {"driveable_lane", EntityKind::DriveableLane},
        {"non_driveable_lane", EntityKind::NonDriveableLane},
        {"parking_lane", EntityKind::ParkingLane},
        {"parking_space", EntityKind::ParkingSpace},
        {"pedestrian_crossing", EntityKind::PedestrianCrossing},
        {"pedestrian_ford", EntityKind::PedestrianFord},
        {"kindergarten", EntityKind::Kindergarten},
        {"school", EntityKind::School},
        {"retirement_home", EntityKind::RetirementHome},
        {"traffic_infrastructure", EntityKind::TrafficInfrastructure},
        {"rain", EntityKind::Rain},
        {"air", EntityKind::Air},
        {"other_spatial_object", EntityKind::OtherSpatialObject},
    };
    return t;
}

inline std::optional<EntityKind> entity_kind_from_string(const std::string& s) {
    for (const auto& [name, kind] : entity_kind_table())
        if (name == s) return kind;
    return std::nullopt;
}

inline const std::string& to_string(EntityKind k) {
    for (const auto& [name, kind] : entity_kind_table())
        if (kind == k) return name;
    throw std::logic_error("unknown entity kind");
}

// concept name asserted for a kind ("vehicle" -> "Vehicle", ...)
inline std::string concept_name_for_kind(EntityKind k) {
    if (k == EntityKind::OtherSpatialObject) return "Spatial_Object";
    std::string s = to_string(k);
    bool up = true;
    for (char& c : s) {
        if (c == '_') { up = true; continue; }
        if (up) { c = static_cast<char>(std::toupper(c)); up = false; }
    }
    return s;
}

inline bool kind_is_traffic_participant(EntityKind k) {
    switch (k) {
        case EntityKind::Vehicle:
        case EntityKind::MotorizedRoadVehicle:
        case EntityKind::Bicycle:
        case EntityKind::Bicyclist:
        case EntityKind::Pedestrian:
        case EntityKind::ParkingVehicle: return true;
        default: return false;
    }
}

struct Kinematics {
    double yaw_deg = 0.0;      // heading, degrees
    double speed = 0.0;        // m/s, >= 0
    double acceleration = 0.0; // m/s^2 along heading, negative = braking
    double max_yaw_deg = 45.0;
    double max_yaw_rate_deg_s = 25.0;
};

struct Entity {
    std::string persistent_id; // stable across scenes of one scenario
    EntityKind kind = EntityKind::OtherSpatialObject;
    std::optional<geom::Polygon> geometry;
    std::optional<double> height; // meters, >= 0
    std::optional<Kinematics> kinematics;
    std::map<std::string, double> attributes; // named scalars (booleans as 0/1)

    bool has_attr(const std::string& k) const { return attributes.count(k) > 0; }
    std::optional<double> attr(const std::string& k) const {
        auto it = attributes.find(k);
        if (it == attributes.end()) return std::nullopt;
        return it->second;
    }
};

struct Scene {
    int index = 0;
    double timestamp = 0.0;
    std::vector<Entity> entities; // per-scene dynamic states
};

struct Scenario {
    std::string id;
    double sample_period = 1.0; // seconds, > 0
    bool night = false;
    std::string partition; // optional grouping key for batch statistics
    std::vector<Entity> statics; // temporally constant entities
    std::vector<Scene> scenes;

    const Entity* dynamic_in_scene(int scene, const std::string& pid) const {
        if (scene < 0 || scene >= static_cast<int>(scenes.size())) return nullptr;
        for (const Entity& e : scenes[scene].entities)
            if (e.persistent_id == pid) return &e;
        return nullptr;
    }
    const Entity* static_by_id(const std::string& pid) const {
        for (const Entity& e : statics)
            if (e.persistent_id == pid) return &e;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// yaw-aligned bounding rectangle

// Corners of the entity polygon's bounding rectangle aligned to the yaw,
// labeled by heading: front-left, front-right, back-right, back-left.
struct OrientedBox {
    geom::Point fl, fr, br, bl;
    double length() const { return geom::dist(bl, fl); }
    double width() const { return geom::dist(fl, fr); }
};

inline OrientedBox front_back_points(const Entity& e) {
    if (!e.geometry) throw std::invalid_argument("entity '" + e.persistent_id + "' has no geometry");
    if (!e.kinematics) throw std::invalid_argument("entity '" + e.persistent_id + "' has no yaw");
    const geom::Point u = geom::unit_from_deg(e.kinematics->yaw_deg);
    const geom::Point n{-u.y, u.x}; // left of heading
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double nmin = umin, nmax = -umin;
    for (const geom::Point& p : e.geometry->pts) {
        umin = std::min(umin, p.dot(u));
        umax = std::max(umax, p.dot(u));
        nmin = std::min(nmin, p.dot(n));
        nmax = std::max(nmax, p.dot(n));
    }
    const auto corner = [&](double a, double b) { return u * a + n * b; };
    return OrientedBox{corner(umax, nmax), corner(umax, nmin), corner(umin, nmin), corner(umin, nmax)};
}

// Assumed sensing location: centroid shifted a quarter of the left side
// length along the heading.
inline geom::Point sensing_point(const Entity& e) {
    const OrientedBox box = front_back_points(e);
    const geom::Point c = geom::centroid(*e.geometry);
    const double side = geom::dist(box.bl, box.fl);
    return c + geom::unit_from_deg(e.kinematics->yaw_deg) * (side / 4.0);
}

// ---------------------------------------------------------------------------
// cross-scene identity

struct IdentityLink {
    int scene = 0;
    std::string entity_id; // per-scene individual name, "<pid>@<scene>"
};

inline std::string scene_entity_id(const std::string& pid, int scene) {
    return pid + "@" + std::to_string(scene);
}

// Maximal runs of consecutive scenes in which the persistent object appears.
// A tracking gap splits the chain.
inline std::vector<std::vector<IdentityLink>> identity_chains(const Scenario& sc,
                                                              const std::string& pid) {
    std::vector<std::vector<IdentityLink>> chains;
    int prev = -2;
    for (const Scene& s : sc.scenes) {
        if (!sc.dynamic_in_scene(s.index, pid)) continue;
        if (s.index != prev + 1) chains.emplace_back();
        chains.back().push_back({s.index, scene_entity_id(pid, s.index)});
        prev = s.index;
    }
    return chains;
}

// All appearances in scene order (flattened chains).
inline std::vector<IdentityLink> identity_chain(const Scenario& sc, const std::string& pid) {
    std::vector<IdentityLink> flat;
    for (const auto& chain : identity_chains(sc, pid))
        for (const auto& link : chain) flat.push_back(link);
    return flat;
}

// Validates scenario invariants that do not depend on the input format:
// uniform scene spacing, unique ids within a scene, spatial kinds carrying
// geometry. Throws std::invalid_argument naming the offender.
inline void validate_scenario(const Scenario& sc) {
    if (!(sc.sample_period > 0)) throw std::invalid_argument("sample_period must be > 0");
    if (sc.scenes.empty()) throw std::invalid_argument("scenario needs at least one scene");
    for (std::size_t i = 0; i < sc.scenes.size(); ++i) {
        const Scene& s = sc.scenes[i];
        if (s.index != static_cast<int>(i))
            throw std::invalid_argument("scene " + std::to_string(i) + ": index mismatch");
        const double expected = sc.scenes[0].timestamp + sc.sample_period * static_cast<double>(i);
        if (std::abs(s.timestamp - expected) > 1e-6)
            throw std::invalid_argument("scene " + std::to_string(i) + ": timestamp " +
                                        std::to_string(s.timestamp) + " breaks uniform spacing (expected " +
                                        std::to_string(expected) + ")");
        std::map<std::string, int> seen;
        for (const Entity& e : s.entities) {
            if (++seen[e.persistent_id] > 1)
                throw std::invalid_argument("scene " + std::to_string(i) + ": duplicate entity id '" +
                                            e.persistent_id + "'");
        }
    }
    const auto check_spatial = [](const Entity& e, const std::string& where) {
        const bool weather = e.kind == EntityKind::Rain || e.kind == EntityKind::Air;
        if (!weather && !e.geometry)
            throw std::invalid_argument(where + ": spatial entity '" + e.persistent_id +
                                        "' has no geometry");
        if (e.height && *e.height < 0)
            throw std::invalid_argument(where + ": entity '" + e.persistent_id + "' has negative height");
        if (e.kinematics && e.kinematics->speed < 0)
            throw std::invalid_argument(where + ": entity '" + e.persistent_id + "' has negative speed");
    };
    for (const Entity& e : sc.statics) check_spatial(e, "statics");
    for (const Scene& s : sc.scenes)
        for (const Entity& e : s.entities) check_spatial(e, "scene " + std::to_string(s.index));
}

} // namespace critrec
