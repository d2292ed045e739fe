// Conversion of a scenario into the base A-Box: kind concepts, scene and
// scenario membership roles, kinematic and named attributes as data
// assertions. Absent optional attributes are skipped silently (open world)
// and counted for the audit trail.
#pragma once

#include <string>

#include "critrec/world.hpp"

namespace critrec {

inline constexpr const char* kScenarioInd = "::scenario";
inline constexpr const char* kNightInd = "::night";

inline std::string scene_individual_name(int index) { return "::scene:" + std::to_string(index); }

// Builds the world registry and the base A-Box for one scenario.
inline dl::ABox convert_scenario(World& world, const Scenario& sc) {
    world.scenario = &sc;
    world.init_structural();
    dl::ABox abox;

    const int c_spatial = world.syms.concept_id("Spatial_Object");
    const int c_dynamical = world.syms.concept_id("Dynamical_Object");
    const int c_night_env = world.syms.concept_id("Night_Environment");
    const int a_speed = world.syms.attr_id("has_speed");
    const int a_accel = world.syms.attr_id("has_acceleration");

    world.scenario_ind = world.register_individual(
        kScenarioInd, {IndividualInfo::Kind::Scenario, -1, sc.id, -1, -1});
    abox.add_concept(world.c_scenario, world.scenario_ind);

    // scenes and adjacency
    std::vector<int> scene_inds;
    for (const Scene& s : sc.scenes) {
        const int si = world.register_individual(
            scene_individual_name(s.index),
            {IndividualInfo::Kind::Scene, s.index, scene_individual_name(s.index), -1, -1});
        abox.add_concept(world.c_scene, si);
        scene_inds.push_back(si);
    }
    for (std::size_t i = 1; i < scene_inds.size(); ++i)
        abox.add_role(world.r_directly_after, scene_inds[i], scene_inds[i - 1]);

    const auto scenario_membership = [&](int ind) {
        abox.add_role(world.r_has_traffic_entity, world.scenario_ind, ind);
        abox.add_role(world.r_in_traffic_model, ind, world.scenario_ind);
    };
    const auto scene_membership = [&](int scene_ind, int ind) {
        abox.add_role(world.r_has_traffic_entity, scene_ind, ind);
        abox.add_role(world.r_in_scene, ind, scene_ind);
        abox.add_role(world.r_in_traffic_model, ind, scene_ind);
    };

    const auto assert_entity = [&](int ind, const Entity& e) {
        abox.add_concept(world.syms.concept_id(concept_name_for_kind(e.kind)), ind);
        if (e.geometry) abox.add_concept(c_spatial, ind);
        if (e.kinematics) {
            abox.add_concept(c_dynamical, ind);
            abox.add_data(a_speed, ind, e.kinematics->speed);
            abox.add_data(a_accel, ind, e.kinematics->acceleration);
            if (e.kind == EntityKind::Vehicle || e.kind == EntityKind::MotorizedRoadVehicle)
                abox.add_role(world.r_drives, ind, ind); // vehicles are self-driven
        }
        for (const auto& [key, value] : e.attributes)
            abox.add_data(world.syms.attr_id("has_" + key), ind, value);
        if (sc.night &&
            (e.kind == EntityKind::Vehicle || e.kind == EntityKind::MotorizedRoadVehicle) &&
            !e.has_attr("headlights_on"))
            ++world.skipped_attributes["headlights_on"];
    };

    // temporally constant entities, referenced by every scene
    std::vector<int> constant_inds;
    for (std::size_t k = 0; k < sc.statics.size(); ++k) {
        const Entity& e = sc.statics[k];
        const int ind = world.register_individual(
            e.persistent_id,
            {IndividualInfo::Kind::Static, -1, e.persistent_id, static_cast<int>(k), -1});
        assert_entity(ind, e);
        scenario_membership(ind);
        constant_inds.push_back(ind);
    }
    if (sc.night) {
        const int night = world.register_individual(
            kNightInd, {IndividualInfo::Kind::Synthetic, -1, kNightInd, -1, -1});
        abox.add_concept(c_night_env, night);
        scenario_membership(night);
        constant_inds.push_back(night);
    }

    for (const Scene& s : sc.scenes) {
        const int si = scene_inds[s.index];
        for (const int ind : constant_inds) scene_membership(si, ind);
        for (std::size_t k = 0; k < s.entities.size(); ++k) {
            const Entity& e = s.entities[k];
            const int ind = world.register_individual(
                scene_entity_id(e.persistent_id, s.index),
                {IndividualInfo::Kind::Dynamic, s.index, e.persistent_id, -1, static_cast<int>(k)});
            assert_entity(ind, e);
            scene_membership(si, ind);
            scenario_membership(ind);
        }
    }
    return abox;
}

} // namespace critrec
