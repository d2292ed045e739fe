#include <doctest.h>

#include "critrec/augment.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace critrec;

namespace {

struct Harness {
    Config cfg;
    World world;
    dl::ABox abox;

    explicit Harness(const Scenario& sc, Config c = Config{}) : cfg(std::move(c)) {
        abox = convert_scenario(world, sc);
    }
    long run(const Augmenter& a) { return a.run(world, abox, cfg); }
    bool role(const std::string& r, const std::string& a, const std::string& b) const {
        const int rid = world.syms.find_role(r);
        const int ia = world.syms.find_individual(a);
        const int ib = world.syms.find_individual(b);
        if (rid < 0 || ia < 0 || ib < 0) return false;
        return abox.has_role(rid, ia, ib);
    }
    bool concept_on(const std::string& c, const std::string& i) const {
        const int cid = world.syms.find_concept(c);
        const int ii = world.syms.find_individual(i);
        if (cid < 0 || ii < 0) return false;
        return abox.has_concept(cid, ii);
    }
};

Scenario two_entity_scene(const Entity& a, const Entity& b) {
    Scenario sc = fixtures::make_scenario("pair", 1);
    sc.scenes[0].entities.push_back(a);
    sc.scenes[0].entities.push_back(b);
    validate_scenario(sc);
    return sc;
}

} // namespace

TEST_CASE("intersects augmenter") {
    SUBCASE("overlapping polygons get the role in both directions") {
        Scenario sc = fixtures::make_scenario("s", 1);
        sc.statics.push_back(
            fixtures::static_entity("lane", EntityKind::DriveableLane, fixtures::rect(-5, -2, 5, 2)));
        sc.scenes[0].entities.push_back(
            fixtures::moving("ped", EntityKind::Pedestrian, 0, 0, 0.6, 0.6, 90, 1));
        Harness h(sc);
        CHECK(h.run(make_intersects_augmenter()) == 2);
        CHECK(h.role("intersects", "ped@0", "lane"));
        CHECK(h.role("intersects", "lane", "ped@0"));
    }
    SUBCASE("disjoint entities get nothing") {
        const Scenario sc = two_entity_scene(
            fixtures::moving("a", EntityKind::Vehicle, 0, 0, 2, 1, 0, 1),
            fixtures::moving("b", EntityKind::Vehicle, 50, 0, 2, 1, 0, 1));
        Harness h(sc);
        CHECK(h.run(make_intersects_augmenter()) == 0);
    }
    SUBCASE("random scene agrees with the exhaustive pairwise oracle") {
        oracle::Rng rng(301);
        for (int trial = 0; trial < 10; ++trial) {
            Scenario sc = fixtures::make_scenario("r", 1);
            std::vector<Entity> all;
            for (int k = 0; k < 20; ++k) {
                Entity e = fixtures::moving("e" + std::to_string(k), EntityKind::Vehicle,
                                            rng.uniform(-15, 15), rng.uniform(-15, 15),
                                            rng.uniform(0.5, 6), rng.uniform(0.5, 3),
                                            rng.uniform(0, 360), 1);
                sc.scenes[0].entities.push_back(e);
                all.push_back(e);
            }
            validate_scenario(sc);
            Harness h(sc);
            h.run(make_intersects_augmenter());
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = 0; j < all.size(); ++j) {
                    if (i == j) continue;
                    const bool expected =
                        geom::polygons_intersect(*all[i].geometry, *all[j].geometry);
                    CHECK(h.role("intersects", all[i].persistent_id + "@0",
                                 all[j].persistent_id + "@0") == expected);
                }
        }
    }
}

TEST_CASE("is_near threshold is strict at 4 m") {
    const auto gap_case = [](double gap) {
        // a spans [-0.5, 0.5], b spans [0.5 + gap, ...]
        return two_entity_scene(
            fixtures::moving("a", EntityKind::Pedestrian, 0, 0, 1, 1, 0, 1),
            fixtures::moving("b", EntityKind::Vehicle, 0.5 + gap + 1.0, 0, 2, 1, 0, 1));
    };
    {
        // boxes [−0.5,0.5] and [gap+0.5, ...]: polygon gap exactly as stated
        Scenario sc = gap_case(3.9);
        Harness h(sc);
        h.run(make_is_near_augmenter());
        CHECK(h.role("is_near", "a@0", "b@0"));
        CHECK(h.role("is_near", "b@0", "a@0"));
    }
    {
        Scenario sc = gap_case(4.0);
        Harness h(sc);
        h.run(make_is_near_augmenter());
        CHECK(!h.role("is_near", "a@0", "b@0"));
    }
}

// ---------------------------------------------------------------------------
// occlusion

namespace {
} // namespace

TEST_CASE("occlusion augmenter") {
    SUBCASE("aligned squares are fully shadowed") {
        Scenario sc = fixtures::make_scenario("occ", 1);
        sc.scenes[0].entities.push_back(
            fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 0.5, 0.5, 0, 1));
        sc.scenes[0].entities.push_back(
            fixtures::moving("wall", EntityKind::Vehicle, 5, 0, 1, 1, 0, 0, 0, 1.5));
        sc.scenes[0].entities.push_back(
            fixtures::moving("tgt", EntityKind::Pedestrian, 10, 0, 1, 1, 0, 0, 0, 1.7));
        Config cfg;
        cfg.visibility_range_m = 50;
        Harness h(sc, cfg);
        h.run(make_occlusion_augmenter());
        const std::string rec = "::occl:0:obs:tgt";
        CHECK(h.concept_on("Is_Occlusion", rec));
        CHECK(h.role("is_occluded_for", rec, "obs@0"));
        CHECK(h.role("is_occluded", rec, "tgt@0"));
        CHECK(h.role("is_occluded_by", rec, "wall@0"));
        const int rate_attr = h.world.syms.find_attr("has_occlusion_rate");
        const int rec_ind = h.world.syms.find_individual(rec);
        REQUIRE(rate_attr >= 0);
        REQUIRE(rec_ind >= 0);
        const auto& vals = h.abox.data_values(rate_attr, rec_ind);
        REQUIRE(vals.size() == 1);
        CHECK(vals[0] == doctest::Approx(1.0).epsilon(0.02));
    }
    SUBCASE("no occluders, no record") {
        Scenario sc = two_entity_scene(
            fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 1, 1, 0, 1),
            fixtures::moving("tgt", EntityKind::Pedestrian, 10, 0, 1, 1, 0, 0));
        Harness h(sc);
        h.run(make_occlusion_augmenter());
        CHECK(h.world.syms.find_concept("Is_Occlusion") >= 0);
        CHECK(h.abox.individuals_of(h.world.syms.find_concept("Is_Occlusion")).empty());
    }
    SUBCASE("zero-height occluders are excluded") {
        Scenario sc = fixtures::make_scenario("occ0", 1);
        sc.scenes[0].entities.push_back(
            fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 0.5, 0.5, 0, 1));
        sc.scenes[0].entities.push_back(
            fixtures::moving("marking", EntityKind::Vehicle, 5, 0, 1, 1, 0, 0, 0, 0.0));
        sc.scenes[0].entities.push_back(
            fixtures::moving("tgt", EntityKind::Pedestrian, 10, 0, 1, 1, 0, 0, 0, 1.7));
        Harness h(sc);
        h.run(make_occlusion_augmenter());
        CHECK(h.abox.individuals_of(h.world.syms.find_concept("Is_Occlusion")).empty());
    }
    SUBCASE("target outside the field of view gets no record") {
        Scenario sc = fixtures::make_scenario("far", 1);
        sc.scenes[0].entities.push_back(
            fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 0.5, 0.5, 0, 1));
        sc.scenes[0].entities.push_back(
            fixtures::moving("wall", EntityKind::Vehicle, 5, 0, 1, 1, 0, 0, 0, 1.5));
        sc.scenes[0].entities.push_back(
            fixtures::moving("tgt", EntityKind::Pedestrian, 300, 0, 1, 1, 0, 0, 0, 1.7));
        Harness h(sc); // default range 100 m
        h.run(make_occlusion_augmenter());
        CHECK(h.abox.individuals_of(h.world.syms.find_concept("Is_Occlusion")).empty());
    }
    SUBCASE("rate within the invariant bounds") {
        oracle::Rng rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            Scenario sc = fixtures::make_scenario("rnd", 1);
            sc.scenes[0].entities.push_back(
                fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 1, 1, rng.uniform(0, 360), 1));
            const int n_occ = rng.uniform_int(1, 3);
            for (int k = 0; k < n_occ; ++k)
                sc.scenes[0].entities.push_back(fixtures::moving(
                    "w" + std::to_string(k), EntityKind::Vehicle, rng.uniform(3, 9),
                    rng.uniform(-4, 4), rng.uniform(1, 3), rng.uniform(1, 2), rng.uniform(0, 360),
                    0, 0, 1.5));
            sc.scenes[0].entities.push_back(fixtures::moving(
                "tgt", EntityKind::Pedestrian, rng.uniform(10, 16), rng.uniform(-5, 5), 1.2, 1.2,
                0, 0, 0, 1.7));
            validate_scenario(sc);
            Harness h(sc);
            h.run(make_occlusion_augmenter());
            const int rate_attr = h.world.syms.find_attr("has_occlusion_rate");
            for (const auto& [attr, ind, value] : h.abox.data()) {
                if (attr != rate_attr) continue;
                CHECK(value > 0.0);
                CHECK(value <= 1.0);
            }
        }
    }
    SUBCASE("rate agrees with a 1 cm rasterization oracle") {
        oracle::Rng rng(88);
        int compared = 0;
        for (int trial = 0; trial < 12; ++trial) {
            Scenario sc = fixtures::make_scenario("ras", 1);
            Entity obs = fixtures::moving("obs", EntityKind::Vehicle, 0, 0, 1, 0.8, 0, 1);
            sc.scenes[0].entities.push_back(obs);
            std::vector<Entity> walls;
            const int n_occ = rng.uniform_int(1, 3);
            for (int k = 0; k < n_occ; ++k) {
                Entity w = fixtures::moving("w" + std::to_string(k), EntityKind::Vehicle,
                                            rng.uniform(3, 8), rng.uniform(-3, 3),
                                            rng.uniform(1, 3), rng.uniform(1, 2),
                                            rng.uniform(0, 360), 0, 0, 1.5);
                walls.push_back(w);
                sc.scenes[0].entities.push_back(w);
            }
            Entity tgt = fixtures::moving("tgt", EntityKind::Pedestrian, rng.uniform(9, 14),
                                          rng.uniform(-4, 4), 1.5, 1.5, 0, 0, 0, 1.7);
            sc.scenes[0].entities.push_back(tgt);
            validate_scenario(sc);
            Config cfg;
            cfg.visibility_range_m = 40;
            Harness h(sc, cfg);
            h.run(make_occlusion_augmenter());

            oracle::raster::RasterOracle oracle_delta(sensing_point(obs), 40);
            for (const Entity& w : walls) oracle_delta.add_occluder(*w.geometry);
            const double expected = oracle_delta.delta(*tgt.geometry);

            const int rate_attr = h.world.syms.find_attr("has_occlusion_rate");
            const int rec = h.world.syms.find_individual("::occl:0:obs:tgt");
            double got = 0.0;
            if (rec >= 0 && !h.abox.data_values(rate_attr, rec).empty())
                got = h.abox.data_values(rate_attr, rec).front();
            CHECK(got == doctest::Approx(std::max(0.0, expected)).epsilon(0.0).scale(1).epsilon(0.02));
            ++compared;
        }
        CHECK(compared == 12);
    }
}

// ---------------------------------------------------------------------------
// relevant area

TEST_CASE("reach position follows the two-case heading formula") {
    using aug_detail::reach_pos;
    SUBCASE("zero rate is a straight ray") {
        const geom::Point p = reach_pos({1, 2}, 4, 30, 45, 0, 0.5);
        CHECK(p.x == doctest::Approx(1 + 4 * 0.5 * std::cos(geom::deg_to_rad(30))));
        CHECK(p.y == doctest::Approx(2 + 4 * 0.5 * std::sin(geom::deg_to_rad(30))));
    }
    SUBCASE("below saturation the heading grows quadratically") {
        const geom::Point p = reach_pos({0, 0}, 2, 0, 90, 10, 1);
        const double th = 10.0 * 1 * 1 / 2; // 5 degrees
        CHECK(p.x == doctest::Approx(2 * std::cos(geom::deg_to_rad(th))));
        CHECK(p.y == doctest::Approx(2 * std::sin(geom::deg_to_rad(th))));
    }
    SUBCASE("the two cases join continuously at the saturation point") {
        const double max_yaw = 20, omega = 30;
        const double t_sat = max_yaw / omega;
        const geom::Point below = reach_pos({0, 0}, 3, 0, max_yaw, omega, t_sat - 1e-9);
        const geom::Point above = reach_pos({0, 0}, 3, 0, max_yaw, omega, t_sat + 1e-9);
        CHECK(geom::dist(below, above) < 1e-6);
    }
    SUBCASE("zero max yaw keeps the heading straight for any rate") {
        const geom::Point p = reach_pos({0, 0}, 5, 90, 0, 12, 0.7);
        CHECK(p.x == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(p.y == doctest::Approx(3.5));
    }
}

TEST_CASE("relevant area region") {
    Config cfg;
    SUBCASE("zero yaw-rate bound degenerates to the two corner segments") {
        Entity e = fixtures::moving("e", EntityKind::Vehicle, 0, 0, 4, 2, 0, 10);
        e.kinematics->max_yaw_rate_deg_s = 0;
        const auto region = aug_detail::relevant_area(e, cfg);
        REQUIRE(region.size() == 2);
        for (const auto& prim : region) {
            CHECK(prim.kind == aug_detail::ReachPrimitive::Kind::Segment);
            CHECK(geom::dist(prim.a, prim.b) == doctest::Approx(10.0));
            CHECK(prim.a.x == doctest::Approx(2.0)); // front corners
        }
    }
    SUBCASE("stationary entity collapses to its front corner points") {
        const Entity e = fixtures::moving("e", EntityKind::Vehicle, 0, 0, 4, 2, 0, 0);
        const auto region = aug_detail::relevant_area(e, cfg);
        for (const auto& prim : region)
            CHECK(prim.kind == aug_detail::ReachPrimitive::Kind::Point);
    }
}

TEST_CASE("relevant area overlap (small distance)") {
    SUBCASE("follower reaches a stationary leader five meters ahead") {
        // follower front corners 5 m behind the leader's rear; 10 m/s over 1 s
        const Scenario sc = two_entity_scene(
            fixtures::moving("leader", EntityKind::Vehicle, 0, 0, 4.5, 2, 0, 0),
            fixtures::moving("follower", EntityKind::Vehicle, -9.5, 0, 4.5, 2, 0, 10));
        Harness h(sc);
        h.run(make_relevant_area_augmenter());
        CHECK(h.role("object_CP_150", "follower@0", "leader@0"));
        CHECK(h.role("object_CP_150", "leader@0", "follower@0")); // symmetric
    }
    SUBCASE("far slow entities do not overlap") {
        const Scenario sc = two_entity_scene(
            fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 1),
            fixtures::moving("b", EntityKind::Vehicle, 100, 0, 4, 2, 180, 1));
        Harness h(sc);
        h.run(make_relevant_area_augmenter());
        CHECK(!h.role("object_CP_150", "a@0", "b@0"));
    }
    SUBCASE("pairs with missing kinematics are skipped") {
        Scenario sc = fixtures::make_scenario("skip", 1);
        sc.scenes[0].entities.push_back(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 10));
        Entity b = fixtures::moving("b", EntityKind::ParkingVehicle, 6, 0, 4, 2, 0, 0);
        b.kinematics.reset();
        sc.scenes[0].entities.push_back(b);
        validate_scenario(sc);
        Harness h(sc);
        CHECK(h.run(make_relevant_area_augmenter()) == 0);
    }
    SUBCASE("agrees with a dense sweep-sampling oracle away from boundaries") {
        oracle::Rng rng(404);
        Config cfg;
        int checked = 0;
        for (int trial = 0; trial < 60; ++trial) {
            const Entity a = fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, rng.uniform(0, 360),
                                              rng.uniform(0, 12));
            const Entity b = fixtures::moving("b", EntityKind::Vehicle, rng.uniform(-20, 20),
                                              rng.uniform(-20, 20), 4, 2, rng.uniform(0, 360),
                                              rng.uniform(0, 12));
            const Scenario sc = two_entity_scene(a, b);
            Harness h(sc, cfg);
            h.run(make_relevant_area_augmenter());
            const bool got = h.role("object_CP_150", "a@0", "b@0");

            // dense cloud: same rate samples, 10x finer time sampling
            Config fine = cfg;
            fine.relevant_area_t_samples = 200;
            const auto cloud = [&](const Entity& e) {
                std::vector<geom::Point> pts;
                const OrientedBox box = front_back_points(e);
                const Kinematics& k = *e.kinematics;
                for (int i = 0; i < fine.relevant_area_omega_samples; ++i) {
                    const double w = -k.max_yaw_rate_deg_s +
                                     2 * k.max_yaw_rate_deg_s * i /
                                         (fine.relevant_area_omega_samples - 1);
                    for (const geom::Point& corner : {box.fl, box.fr})
                        for (int s = 0; s < fine.relevant_area_t_samples; ++s)
                            pts.push_back(aug_detail::reach_pos(
                                corner, k.speed, k.yaw_deg, k.max_yaw_deg, w,
                                s * cfg.thresholds.relevant_area_horizon_s /
                                    (fine.relevant_area_t_samples - 1)));
                }
                return pts;
            };
            const auto ca = cloud(a);
            const auto cb = cloud(b);
            double min_d = 1e300;
            for (const geom::Point& p : ca)
                for (const geom::Point& q : cb) min_d = std::min(min_d, geom::dist(p, q));
            if (min_d > 0.3) {
                CHECK(!got);
                ++checked;
            } else if (min_d < 1e-3) {
                CHECK(got);
                ++checked;
            } // boundary band skipped: discretizations legitimately differ
        }
        CHECK(checked > 20);
    }
}

// ---------------------------------------------------------------------------
// intersecting paths

TEST_CASE("intersecting paths") {
    const auto crossing_case = [](double bx, double by, double bspeed) {
        return two_entity_scene(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 2, 1, 0, 5),
                                fixtures::moving("b", EntityKind::Vehicle, bx, by, 2, 1, 90, bspeed));
    };
    SUBCASE("symmetric crossing within thresholds") {
        Scenario sc = crossing_case(10, -10, 5);
        Harness h(sc);
        h.run(make_intersecting_paths_augmenter());
        CHECK(h.role("has_intersecting_path", "a@0", "b@0"));
        CHECK(h.role("has_intersecting_path", "b@0", "a@0"));
    }
    SUBCASE("slow arrival misses tau1") {
        Scenario sc = crossing_case(10, -10, 0.5); // sum 2 + 20 > 8
        Harness h(sc);
        h.run(make_intersecting_paths_augmenter());
        CHECK(!h.role("has_intersecting_path", "a@0", "b@0"));
    }
    SUBCASE("tau1 boundary is strict") {
        // both arrive after 4 s: sum exactly 8
        Scenario sc = two_entity_scene(
            fixtures::moving("a", EntityKind::Vehicle, 0, 0, 2, 1, 0, 5),
            fixtures::moving("b", EntityKind::Vehicle, 20, -20, 2, 1, 90, 5));
        Harness h(sc);
        h.run(make_intersecting_paths_augmenter());
        CHECK(!h.role("has_intersecting_path", "a@0", "b@0"));
    }
    SUBCASE("tau2 boundary is strict") {
        // a arrives at 1 s, b at exactly 4 s: diff 3
        Scenario sc = two_entity_scene(
            fixtures::moving("a", EntityKind::Vehicle, 15, -5, 2, 1, 90, 5),
            fixtures::moving("b", EntityKind::Vehicle, 0, 0, 2, 1, 0, 5));
        // a: distance 5 at 5 m/s = 1 s; b: distance 15 at 5 m/s = 3 s -> diff 2 (ok)
        Harness h(sc);
        h.run(make_intersecting_paths_augmenter());
        CHECK(h.role("has_intersecting_path", "a@0", "b@0"));
        Scenario sc2 = two_entity_scene(
            fixtures::moving("a", EntityKind::Vehicle, 20, -5, 2, 1, 90, 5),
            fixtures::moving("b", EntityKind::Vehicle, 0, 0, 2, 1, 0, 5));
        // a: 5/5 = 1 s; b: 20/5 = 4 s -> diff exactly 3: rejected
        Harness h2(sc2);
        h2.run(make_intersecting_paths_augmenter());
        CHECK(!h2.role("has_intersecting_path", "a@0", "b@0"));
    }
    SUBCASE("zero speed skips the pair") {
        Scenario sc = crossing_case(10, -10, 0);
        Harness h(sc);
        CHECK(h.run(make_intersecting_paths_augmenter()) == 0);
    }
    SUBCASE("random configurations agree with a time-stepping oracle") {
        oracle::Rng rng(505);
        Config cfg;
        int checked = 0;
        for (int trial = 0; trial < 300; ++trial) {
            const Entity a = fixtures::moving("a", EntityKind::Vehicle, rng.uniform(-30, 30),
                                              rng.uniform(-30, 30), 2, 1, rng.uniform(0, 360),
                                              rng.uniform(0.5, 14));
            const Entity b = fixtures::moving("b", EntityKind::Vehicle, rng.uniform(-30, 30),
                                              rng.uniform(-30, 30), 2, 1, rng.uniform(0, 360),
                                              rng.uniform(0.5, 14));
            // advance both along their headings in 10 ms steps; conflict iff
            // some pair of visited points coincides within thresholds
            const geom::Point pa = geom::centroid(*a.geometry);
            const geom::Point pb = geom::centroid(*b.geometry);
            const geom::Point da = geom::unit_from_deg(a.kinematics->yaw_deg);
            const geom::Point db = geom::unit_from_deg(b.kinematics->yaw_deg);
            const double sa = a.kinematics->speed;
            const double sb = b.kinematics->speed;
            bool oracle_hit = false;
            double margin = 1e300;
            const double dt = 0.01;
            for (double t1 = 0; t1 <= 8.5 && !oracle_hit; t1 += dt) {
                const geom::Point qa = pa + da * (sa * t1);
                // closest time on b's path to qa
                const double t2 = std::max(0.0, (qa - pb).dot(db) / sb);
                const geom::Point qb = pb + db * (sb * t2);
                if (geom::dist(qa, qb) < sa * dt + sb * dt + 1e-3) {
                    const double sum = t1 + t2;
                    const double diff = std::abs(t1 - t2);
                    margin = std::min({margin, std::abs(sum - cfg.thresholds.tau1_s),
                                       std::abs(diff - cfg.thresholds.tau2_s)});
                    if (sum < cfg.thresholds.tau1_s && diff < cfg.thresholds.tau2_s)
                        oracle_hit = true;
                }
            }
            // skip hairline threshold cases and near-parallel grazes
            const double cross = std::abs(da.cross(db));
            if (cross < 0.05 || (margin < 0.15)) continue;
            const Scenario sc = two_entity_scene(a, b);
            Harness h(sc, cfg);
            h.run(make_intersecting_paths_augmenter());
            CHECK(h.role("has_intersecting_path", "a@0", "b@0") == oracle_hit);
            ++checked;
        }
        CHECK(checked > 150);
    }
}

// ---------------------------------------------------------------------------
// relative speed

TEST_CASE("high relative speed") {
    const auto with_limit = [](Entity e, double limit) {
        e.attributes["max_allowed_speed"] = limit;
        return e;
    };
    SUBCASE("closing on a stationary object") {
        const Scenario sc = two_entity_scene(
            with_limit(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 10), 13.89),
            fixtures::moving("b", EntityKind::Vehicle, 30, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relative_speed_augmenter());
        CHECK(h.role("object_CP_163", "a@0", "b@0")); // 10 / 13.89 = 0.72
        CHECK(!h.role("object_CP_163", "b@0", "a@0")); // b has no limit attribute
        CHECK(h.world.skipped_attributes.at("max_allowed_speed") > 0);
    }
    SUBCASE("equal velocities yield ratio zero") {
        const Scenario sc = two_entity_scene(
            with_limit(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 10), 13.89),
            fixtures::moving("b", EntityKind::Vehicle, 30, 0, 4, 2, 0, 10));
        Harness h(sc);
        h.run(make_relative_speed_augmenter());
        CHECK(!h.role("object_CP_163", "a@0", "b@0"));
    }
    SUBCASE("ratio exactly at the threshold counts") {
        // 3 / min(12, 60) = 0.25 exactly
        const Scenario sc = two_entity_scene(
            with_limit(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 3), 12.0),
            fixtures::moving("b", EntityKind::Vehicle, 30, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relative_speed_augmenter());
        CHECK(h.role("object_CP_163", "a@0", "b@0"));
    }
    SUBCASE("just below the threshold does not count") {
        const Scenario sc = two_entity_scene(
            with_limit(fixtures::moving("a", EntityKind::Vehicle, 0, 0, 4, 2, 0, 2.99), 12.0),
            fixtures::moving("b", EntityKind::Vehicle, 30, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relative_speed_augmenter());
        CHECK(!h.role("object_CP_163", "a@0", "b@0"));
    }
    SUBCASE("capability caps the denominator") {
        // pedestrian capability default 4: min(20, 4) = 4; 2 m/s delta -> 0.5
        Entity ped = fixtures::moving("p", EntityKind::Pedestrian, 0, 0, 0.6, 0.6, 0, 2);
        ped.attributes["max_allowed_speed"] = 20.0;
        const Scenario sc = two_entity_scene(
            ped, fixtures::moving("b", EntityKind::Vehicle, 30, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relative_speed_augmenter());
        CHECK(h.role("object_CP_163", "p@0", "b@0"));
    }
}

// ---------------------------------------------------------------------------
// relational frames and passes

TEST_CASE("relational frames") {
    const auto subject = fixtures::moving("s", EntityKind::Vehicle, 0, 0, 4, 2, 0, 5);
    SUBCASE("five meters ahead is in front") {
        const Scenario sc = two_entity_scene(
            subject, fixtures::moving("t", EntityKind::Vehicle, 5, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relational_frames_augmenter());
        CHECK(h.role("in_front_of", "t@0", "s@0"));
        CHECK(!h.role("behind", "t@0", "s@0"));
        CHECK(h.role("is_in_proximity", "t@0", "s@0"));
    }
    SUBCASE("five meters behind") {
        const Scenario sc = two_entity_scene(
            subject, fixtures::moving("t", EntityKind::Vehicle, -5, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relational_frames_augmenter());
        CHECK(h.role("behind", "t@0", "s@0"));
        CHECK(!h.role("in_front_of", "t@0", "s@0"));
    }
    SUBCASE("outside the default proximity radius") {
        const Scenario sc = two_entity_scene(
            subject, fixtures::moving("t", EntityKind::Vehicle, 25, 0, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relational_frames_augmenter());
        CHECK(!h.role("is_in_proximity", "t@0", "s@0"));
        CHECK(h.role("in_front_of", "t@0", "s@0")); // frames have no range bound
    }
    SUBCASE("wide lateral offset is neither front nor behind") {
        const Scenario sc = two_entity_scene(
            subject, fixtures::moving("t", EntityKind::Vehicle, 5, 12, 4, 2, 0, 0));
        Harness h(sc);
        h.run(make_relational_frames_augmenter());
        CHECK(!h.role("in_front_of", "t@0", "s@0"));
        CHECK(!h.role("behind", "t@0", "s@0"));
    }
}

namespace {

Scenario overtake_scenario(bool always_front, bool vanish_mid) {
    Scenario sc = fixtures::make_scenario("pass", 3);
    const double xs[3] = {-5, 0, 5};
    for (int i = 0; i < 3; ++i)
        sc.scenes[i].entities.push_back(
            fixtures::moving("drv", EntityKind::Vehicle, xs[i], 0, 4, 2, 0, 5));
    for (int i = 0; i < 3; ++i) {
        if (vanish_mid && i == 1) continue;
        const double x = always_front ? 30 : 0;
        Entity parked = fixtures::moving("obj", EntityKind::ParkingVehicle, x, 3, 4, 2, 0, 0);
        parked.kinematics.reset();
        sc.scenes[i].entities.push_back(parked);
    }
    validate_scenario(sc);
    return sc;
}

} // namespace

TEST_CASE("pass activities") {
    Config cfg;
    const auto run_pass = [&](const Scenario& sc, Harness& h) {
        h.run(make_relational_frames_augmenter());
        // merge-style identity links between adjacent appearances
        for (const std::string pid : {"drv", "obj"}) {
            const auto chains = identity_chains(*h.world.scenario, pid);
            for (const auto& chain : chains)
                for (std::size_t k = 1; k < chain.size(); ++k)
                    h.abox.add_role(h.world.r_identical_to,
                                    h.world.syms.individual_id(chain[k].entity_id),
                                    h.world.syms.individual_id(chain[k - 1].entity_id));
        }
        (void)sc;
        return h.run(make_pass_activity_augmenter());
    };
    SUBCASE("front, beside, behind yields exactly one pass") {
        const Scenario sc = overtake_scenario(false, false);
        Harness h(sc, cfg);
        run_pass(sc, h);
        const int c_pass = h.world.syms.find_concept("Pass");
        REQUIRE(c_pass >= 0);
        const auto recs = h.abox.individuals_of(c_pass);
        REQUIRE(recs.size() == 1);
        CHECK(h.world.syms.individual_name(recs[0]) == "::pass:2:drv:obj");
        CHECK(h.role("conducted_by", "::pass:2:drv:obj", "drv@2"));
        CHECK(h.role("has_participant", "::pass:2:drv:obj", "obj@2"));
        const int a_start = h.world.syms.find_attr("has_pass_start");
        CHECK(h.abox.data_values(a_start, recs[0]).front() == doctest::Approx(0));
    }
    SUBCASE("object always in front yields none") {
        const Scenario sc = overtake_scenario(true, false);
        Harness h(sc, cfg);
        run_pass(sc, h);
        CHECK(h.abox.individuals_of(h.world.syms.find_concept("Pass")).empty());
    }
    SUBCASE("object vanishing mid-window breaks the chain") {
        const Scenario sc = overtake_scenario(false, true);
        Harness h(sc, cfg);
        run_pass(sc, h);
        CHECK(h.abox.individuals_of(h.world.syms.find_concept("Pass")).empty());
    }
}

TEST_CASE("all augmenters are idempotent on a dense fixture") {
    const Scenario sc = fixtures::conflict_scenario();
    Harness h(sc);
    const AugmenterRegistry reg = default_augmenters();
    // identity links so the pass augmenter has chains to walk
    for (const Entity& e : sc.scenes[0].entities) {
        const auto chains = identity_chains(sc, e.persistent_id);
        for (const auto& chain : chains)
            for (std::size_t k = 1; k < chain.size(); ++k)
                h.abox.add_role(h.world.r_identical_to,
                                h.world.syms.individual_id(chain[k].entity_id),
                                h.world.syms.individual_id(chain[k - 1].entity_id));
    }
    const long first = reg.run_all(h.world, h.abox, h.cfg);
    CHECK(first > 0);
    const long second = reg.run_all(h.world, h.abox, h.cfg);
    CHECK(second == 0);
}
