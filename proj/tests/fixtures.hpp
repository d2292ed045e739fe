// Hand-built scenarios shared by the unit and acceptance suites: the
// two-scene crossing-misuse fixture with its nine single-atom mutations, the
// parked-row conflict reconstruction, weather/night scenarios and a seeded
// random scenario generator.
#pragma once

#include <string>
#include <vector>

#include "critrec/scenario.hpp"
#include "oracles.hpp"

namespace fixtures {

using critrec::Entity;
using critrec::EntityKind;
using critrec::Kinematics;
using critrec::Scenario;
using critrec::Scene;

inline critrec::geom::Polygon rect(double x0, double y0, double x1, double y1) {
    return critrec::geom::make_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
}

inline critrec::geom::Polygon box_at(double cx, double cy, double length, double width,
                                     double yaw_deg) {
    const critrec::geom::Point c{cx, cy};
    const critrec::geom::Point u = critrec::geom::unit_from_deg(yaw_deg);
    const critrec::geom::Point n{-u.y, u.x};
    return critrec::geom::make_polygon({c + u * (length / 2) + n * (width / 2),
                                        c - u * (length / 2) + n * (width / 2),
                                        c - u * (length / 2) - n * (width / 2),
                                        c + u * (length / 2) - n * (width / 2)});
}

inline Entity static_entity(const std::string& id, EntityKind kind, critrec::geom::Polygon g) {
    Entity e;
    e.persistent_id = id;
    e.kind = kind;
    e.geometry = std::move(g);
    return e;
}

inline Entity moving(const std::string& id, EntityKind kind, double cx, double cy, double length,
                     double width, double yaw, double speed, double accel = 0.0,
                     double height = 1.5) {
    Entity e;
    e.persistent_id = id;
    e.kind = kind;
    e.geometry = box_at(cx, cy, length, width, yaw);
    e.height = height;
    Kinematics k;
    k.yaw_deg = critrec::geom::normalize_deg(yaw);
    k.speed = speed;
    k.acceleration = accel;
    e.kinematics = k;
    return e;
}

inline Scenario make_scenario(const std::string& id, int scenes, double period = 1.0) {
    Scenario sc;
    sc.id = id;
    sc.sample_period = period;
    for (int i = 0; i < scenes; ++i) {
        Scene s;
        s.index = i;
        s.timestamp = period * i;
        sc.scenes.push_back(s);
    }
    return sc;
}

// ---------------------------------------------------------------------------
// crossing-misuse fixture: bicyclist rides from the sidewalk onto a
// pedestrian crossing while a vehicle with an intersecting path approaches

enum class Cp69Mutation {
    None,
    NotABicyclist,     // bicyclist becomes a pedestrian
    BrokenIdentity,    // different track ids in the two scenes
    NotAdjacent,       // sidewalk and crossing scenes are two apart
    WalkIsDriveable,   // the sidewalk is a driveable lane
    NotOnWalk,         // scene-0 position off the sidewalk
    CrossingIsLane,    // the crossing is a plain driveable lane
    NotOnCrossing,     // scene-1 position off the crossing
    CrossingOffRoad,   // crossing does not intersect the driveable lane
    NoDriver,          // no vehicle at all
    DriverOffLane,     // vehicle not on the driveable lane
    PathsTooSlow,      // arrival times beyond the path thresholds
};

inline Scenario cp69_scenario(Cp69Mutation m = Cp69Mutation::None) {
    const bool crossing_off_road = m == Cp69Mutation::CrossingOffRoad;
    Scenario sc = make_scenario("cp69", m == Cp69Mutation::NotAdjacent ? 3 : 2);
    sc.statics.push_back(static_entity("road", EntityKind::DriveableLane, rect(-20, -3.5, 30, 3.5)));
    sc.statics.push_back(static_entity(
        "walk", m == Cp69Mutation::WalkIsDriveable ? EntityKind::DriveableLane
                                                   : EntityKind::NonDriveableLane,
        rect(-20, 3.5, 30, 6.5)));
    sc.statics.push_back(static_entity(
        "crossing", m == Cp69Mutation::CrossingIsLane ? EntityKind::DriveableLane
                                                      : EntityKind::PedestrianCrossing,
        crossing_off_road ? rect(8, 4.5, 12, 6.5) : rect(8, -3.5, 12, 4.5)));

    const EntityKind bike_kind =
        m == Cp69Mutation::NotABicyclist ? EntityKind::Pedestrian : EntityKind::Bicyclist;
    const std::string bike0 = m == Cp69Mutation::BrokenIdentity ? "bike_a" : "bike";
    const std::string bike1 = m == Cp69Mutation::BrokenIdentity ? "bike_b" : "bike";

    // scene 0: on the sidewalk
    {
        const double y0 = m == Cp69Mutation::NotOnWalk ? 8.5 : 5.5;
        sc.scenes[0].entities.push_back(moving(bike0, bike_kind, 10, y0, 1.8, 0.6, 270, 3, 0, 1.6));
    }
    const int last = static_cast<int>(sc.scenes.size()) - 1;
    if (m == Cp69Mutation::NotAdjacent)
        sc.scenes[1].entities.push_back(moving("bike", bike_kind, 20, 1.0, 1.8, 0.6, 270, 3, 0, 1.6));
    // final scene: on the crossing
    {
        double x = 10, y = 1.0;
        if (m == Cp69Mutation::NotOnCrossing) x = 20;
        if (crossing_off_road) y = 5.5;
        sc.scenes[last].entities.push_back(moving(bike1, bike_kind, x, y, 1.8, 0.6, 270, 3, 0, 1.6));
    }
    if (m != Cp69Mutation::NoDriver) {
        const double speed = m == Cp69Mutation::PathsTooSlow ? 0.5 : 7.0;
        double cx = 2, cy = 0, yaw = 0;
        if (m == Cp69Mutation::DriverOffLane) {
            cx = 2;
            cy = -6;
            yaw = 36.8699; // still aimed at the conflict point
        }
        for (int i = 0; i <= last; ++i) {
            const double x = cx - speed * (last - i);
            sc.scenes[i].entities.push_back(moving("car", EntityKind::Vehicle, x, cy, 4.5, 2.0, yaw,
                                                   speed, 0, 1.5));
        }
    }
    critrec::validate_scenario(sc);
    return sc;
}

inline std::vector<Cp69Mutation> cp69_mutations() {
    return {Cp69Mutation::NotABicyclist, Cp69Mutation::BrokenIdentity, Cp69Mutation::NotAdjacent,
            Cp69Mutation::WalkIsDriveable, Cp69Mutation::NotOnCrossing, Cp69Mutation::CrossingOffRoad,
            Cp69Mutation::NoDriver, Cp69Mutation::DriverOffLane, Cp69Mutation::PathsTooSlow};
}

// ---------------------------------------------------------------------------
// parked-row conflict: one moving vehicle, one pedestrian stepping out from
// behind eight parked vehicles

inline Scenario conflict_scenario() {
    Scenario sc = make_scenario("conflict", 8);
    sc.statics.push_back(static_entity("road", EntityKind::DriveableLane, rect(-40, -3.5, 50, 3.5)));
    sc.statics.push_back(
        static_entity("parking", EntityKind::ParkingLane, rect(0, -6.2, 46, -3.8)));

    const double veh_x[8] = {-30, -20, -10, -2, 4, 9, 13, 17};
    const double veh_v[8] = {10, 10, 9, 7, 5, 4, 4, 4};
    const double veh_a[8] = {0, -0.5, -1, -2, -2, -1, 0, 0};
    const double park_x[8] = {2, 8, 14, 20, 26, 32, 38, 44};

    for (int i = 0; i < 8; ++i) {
        Entity veh = moving("ego", EntityKind::Vehicle, veh_x[i], 0, 4.5, 2.0, 0, veh_v[i], veh_a[i]);
        veh.attributes["max_allowed_speed"] = 13.89;
        sc.scenes[i].entities.push_back(veh);

        Entity ped = moving("ped", EntityKind::Pedestrian, 20, -6.5 + i, 0.6, 0.6, 90, 1, 0, 1.7);
        sc.scenes[i].entities.push_back(ped);

        for (int k = 0; k < 8; ++k) {
            // half the row is typed directly, half derives from speed 0 on
            // the parking lane
            const bool typed = k % 2 == 0;
            Entity parked =
                typed ? moving("park" + std::to_string(k), EntityKind::ParkingVehicle, park_x[k],
                               -5, 4.0, 2.0, 0, 0, 0)
                      : moving("park" + std::to_string(k), EntityKind::Vehicle, park_x[k], -5, 4.0,
                               2.0, 0, 0, 0);
            if (typed) parked.kinematics.reset();
            sc.scenes[i].entities.push_back(parked);
        }
    }
    critrec::validate_scenario(sc);
    return sc;
}

// ---------------------------------------------------------------------------
// weather and night fixtures

inline Scenario weather_scenario(double intensity, double temperature) {
    Scenario sc = make_scenario("weather", 1);
    Entity rain;
    rain.persistent_id = "rain";
    rain.kind = EntityKind::Rain;
    rain.attributes["precipitation_intensity"] = intensity;
    sc.statics.push_back(rain);
    Entity air;
    air.persistent_id = "air";
    air.kind = EntityKind::Air;
    air.attributes["temperature"] = temperature;
    sc.statics.push_back(air);
    sc.scenes[0].entities.push_back(moving("car", EntityKind::Vehicle, 0, 0, 4.5, 2, 0, 5));
    critrec::validate_scenario(sc);
    return sc;
}

// headlights: 1 = on, 0 = off, -1 = attribute absent
inline Scenario night_scenario(int headlights, bool night = true) {
    Scenario sc = make_scenario("night", 2);
    sc.night = night;
    for (int i = 0; i < 2; ++i) {
        Entity car = moving("car", EntityKind::Vehicle, 5.0 * i, 0, 4.5, 2, 0, 5);
        if (headlights >= 0) car.attributes["headlights_on"] = headlights;
        sc.scenes[i].entities.push_back(car);
    }
    critrec::validate_scenario(sc);
    return sc;
}

// ---------------------------------------------------------------------------
// seeded random scenarios (slicing-soundness workload)

inline Scenario random_scenario(oracle::Rng& rng, int index) {
    const int n_scenes = rng.uniform_int(1, 3);
    Scenario sc = make_scenario("rand" + std::to_string(index), n_scenes);
    sc.night = rng.uniform_int(0, 3) == 0;

    // at most ten entities: up to three statics, one weather, six dynamics
    const int n_statics = rng.uniform_int(1, 3);
    for (int k = 0; k < n_statics; ++k) {
        static const EntityKind kinds[] = {EntityKind::DriveableLane, EntityKind::NonDriveableLane,
                                           EntityKind::PedestrianCrossing, EntityKind::ParkingLane,
                                           EntityKind::Kindergarten, EntityKind::School,
                                           EntityKind::ParkingSpace, EntityKind::TrafficInfrastructure};
        const double x = rng.uniform(-25, 25);
        const double y = rng.uniform(-25, 25);
        Entity e = static_entity("s" + std::to_string(k), kinds[rng.uniform_int(0, 7)],
                                 rect(x, y, x + rng.uniform(3, 20), y + rng.uniform(2, 8)));
        if (rng.uniform_int(0, 1)) e.height = rng.uniform(0.0, 3.0);
        sc.statics.push_back(e);
    }
    if (rng.uniform_int(0, 2) == 0) {
        Entity rain;
        rain.persistent_id = "rain";
        rain.kind = EntityKind::Rain;
        rain.attributes["precipitation_intensity"] = rng.uniform(0, 60);
        sc.statics.push_back(rain);
    }

    const int n_dyn = rng.uniform_int(1, 6);
    for (int k = 0; k < n_dyn; ++k) {
        static const EntityKind kinds[] = {EntityKind::Vehicle, EntityKind::MotorizedRoadVehicle,
                                           EntityKind::Bicyclist, EntityKind::Pedestrian,
                                           EntityKind::Bicycle, EntityKind::ParkingVehicle};
        const EntityKind kind = kinds[rng.uniform_int(0, 5)];
        const std::string pid = "d" + std::to_string(k);
        double x = rng.uniform(-20, 20);
        double y = rng.uniform(-20, 20);
        const double yaw = rng.uniform(0, 360);
        const double speed = rng.uniform_int(0, 3) == 0 ? 0.0 : rng.uniform(0.5, 14);
        const double accel = rng.uniform(-6, 2);
        const int first = rng.uniform_int(0, n_scenes - 1);
        int last = rng.uniform_int(first, n_scenes - 1);
        for (int i = first; i <= last; ++i) {
            Entity e = moving(pid, kind, x, y, rng.uniform(0.6, 5), rng.uniform(0.5, 2.2), yaw,
                              speed, accel, rng.uniform(0, 2));
            if (rng.uniform_int(0, 1)) e.attributes["max_allowed_speed"] = rng.uniform(5, 20);
            if (sc.night && rng.uniform_int(0, 1)) e.attributes["headlights_on"] = rng.uniform_int(0, 1);
            sc.scenes[i].entities.push_back(e);
            x += speed * std::cos(critrec::geom::deg_to_rad(yaw));
            y += speed * std::sin(critrec::geom::deg_to_rad(yaw));
        }
    }
    critrec::validate_scenario(sc);
    return sc;
}

} // namespace fixtures
