// The shipped phenomena catalog in the declarative rules format.
// ${...} placeholders are threshold values filled from the configuration at
// load, so overrides reach rule literals too. Dump with `critrec rules`.
#pragma once

namespace critrec {

inline const char* default_rules_text() {
    return R"catalog(# criticality phenomena catalog, format v1

# --- data attributes -------------------------------------------------------
attribute has_speed
attribute has_acceleration
attribute has_precipitation_intensity
attribute has_temperature
attribute has_headlights_on
attribute has_max_allowed_speed
attribute has_max_speed_capability
attribute has_occlusion_rate
attribute has_pass_start
attribute has_pass_end

# --- taxonomy ---------------------------------------------------------------
axiom tax_mrv: Motorized_Road_Vehicle <= Vehicle
axiom tax_parking_vehicle: Parking_Vehicle <= Vehicle
axiom tax_bicycle: Bicycle <= Vehicle
axiom tax_driveable: Driveable_Lane <= Lane
axiom tax_non_driveable: Non_Driveable_Lane <= Lane
axiom tax_parking_lane: Parking_Lane <= Lane
axiom tax_lane_infra: Lane <= Traffic_Infrastructure
axiom tax_crossing_infra: Pedestrian_Crossing <= Traffic_Infrastructure
axiom tax_ford_infra: Pedestrian_Ford <= Traffic_Infrastructure
axiom tax_parking_lane_area: Parking_Lane <= Parking_Area
axiom tax_parking_space_area: Parking_Space <= Parking_Area

axiom def_vru: VRU == Bicyclist | Pedestrian
axiom def_bicyclist: Bicyclist == Human & exists rides . Bicycle
ria rides_mounted: rides == mounted
axiom def_driver: Driver == exists drives . Vehicle
axiom def_night: Night_Scenario == Scenario & exists has_traffic_entity . Night_Environment

rule non_moving: Dynamical_Object(v), has_speed(v, s), s = 0 -> Non_Moving_Dynamical_Object(v)
rule parked: Vehicle(v), Non_Moving_Dynamical_Object(v), intersects(v, p), Parking_Area(p)
    -> Parking_Vehicle(v)

# --- CP 117: pedestrian crossing / ford -------------------------------------
axiom cp117: CP_117 == Pedestrian_Crossing | Pedestrian_Ford

# --- CP 181: buildings for unpredictable road users near a road --------------
axiom cp181: CP_181 >= (Kindergarten | Retirement_Home | School) & exists is_near . Driveable_Lane

# --- CP 82: pedestrian on roadway --------------------------------------------
# Pedestrian is asserted directly from the input kind (its textbook definition
# uses a negated existential and is outside the Horn fragment).
axiom cp82: CP_82 == Pedestrian & exists intersects . Driveable_Lane

# --- CP 113: vulnerable road user with road access (alias 114) ---------------
axiom cp113: CP_113 == VRU & exists is_near . Driveable_Lane

# --- CP 91: passing of parking vehicle ---------------------------------------
axiom cp91: CP_91 == Pass & exists conducted_by . Driver & exists has_participant . Parking_Vehicle
rule cp91_obj_participant: CP_91(p), has_participant(p, x) -> object_CP_91(p, x)
rule cp91_obj_conductor: CP_91(p), conducted_by(p, d) -> object_CP_91(p, d)

# --- CP 293: intersecting planned paths --------------------------------------
rule cp293: Dynamical_Object(a), has_intersecting_path(a, b), Dynamical_Object(b)
    -> CP_293(a), object_CP_293(a, b)

# --- CP 295: heavy rain -------------------------------------------------------
rule heavy_rain: Rain(r), has_precipitation_intensity(r, x),
    x >= ${heavy_rain}, x < ${extremely_heavy_rain} -> Heavy_Rain(r)
rule extremely_heavy_rain: Rain(r), has_precipitation_intensity(r, x),
    x >= ${extremely_heavy_rain} -> Extremely_Heavy_Rain(r)
axiom cp295: CP_295 == Extremely_Heavy_Rain | Heavy_Rain

# --- CP 294: freezing temperatures --------------------------------------------
rule freezing: Air(a), has_temperature(a, t), t < ${freezing} -> Freezing_Air(a)
axiom cp294: CP_294 == Freezing_Air

# --- CP 150: small distance (alias 83) -----------------------------------------
rule cp150: object_CP_150(a, b), Spatial_Object(b) -> CP_150(a)

# --- CP 103: strong braking maneuver -------------------------------------------
rule cp103_motorized: Motorized_Road_Vehicle(v), has_acceleration(v, a),
    a < ${braking_motorized} -> CP_103(v)
rule cp103_bicycle: Bicycle(v), has_acceleration(v, a), a < ${braking_bicycle} -> CP_103(v)

# --- CP 163: high relative speed -------------------------------------------------
rule cp163: object_CP_163(a, b) -> CP_163(a)

# --- CP 25: occlusion (reified n-ary relation) -----------------------------------
axiom cp25: CP_25 == Is_Occlusion
rule cp25_obj_observer: Is_Occlusion(n), is_occluded_for(n, a) -> object_CP_25(n, a)
rule cp25_obj_occluder: Is_Occlusion(n), is_occluded_by(n, o) -> object_CP_25(n, o)
rule cp25_obj_target: Is_Occlusion(n), is_occluded(n, o) -> object_CP_25(n, o)

# --- CP 160: occluded pedestrian (alias 157) --------------------------------------
axiom cp160: CP_160 == Is_Occlusion & exists is_occluded . Pedestrian
rule cp160_obj: CP_160(n), object_CP_25(n, x) -> object_CP_160(n, x)

# --- CP 265: occluded traffic infrastructure ---------------------------------------
axiom cp265: CP_265 == Is_Occlusion & exists is_occluded . Traffic_Infrastructure
rule cp265_obj: CP_265(n), object_CP_25(n, x) -> object_CP_265(n, x)

# --- CP 69: bicyclist illegitimately riding over a pedestrian crossing -------------
rule cp69: Scene(s1), Scene(s2), has_traffic_entity(s1, b1), has_traffic_entity(s2, b2),
    identical_to(b2, b1), Bicyclist(b1), Bicyclist(b2), directly_after(s2, s1),
    Non_Driveable_Lane(w), has_traffic_entity(s1, w), intersects(b1, w),
    Pedestrian_Crossing(c), has_traffic_entity(s2, c), intersects(b2, c),
    Driveable_Lane(l), in_scene(l, s2), intersects(c, l),
    Driver(d), drives(d, v), in_scene(d, s2), intersects(d, l),
    has_intersecting_path(v, b2)
    -> CP_69(b2)

# --- CP 143: misconduct --------------------------------------------------------------
rule off_light: Vehicle(v), has_headlights_on(v, h), h = 0 -> Off_Light_Vehicle(v)
axiom cp143_night: CP_143 >= Off_Light_Vehicle & exists in_traffic_model . Night_Scenario
axiom cp143_69: CP_143 >= CP_69

# --- phenomenon bindings --------------------------------------------------------------
phenomenon 25 "Occlusion" exact subject CP_25 objects object_CP_25
    display is_occluded
    detectors cp25 occlusion cp25_obj_observer cp25_obj_occluder cp25_obj_target
phenomenon 69 "Illegitimate Use of Pedestrian Crossing" under subject CP_69
    detectors cp69 intersects intersecting_paths
phenomenon 82 "Pedestrian on Roadway" exact subject CP_82
    detectors cp82 intersects
phenomenon 91 "Passing of Parking Vehicle" exact subject CP_91 objects object_CP_91
    display conducted_by interval has_pass_start has_pass_end
    detectors cp91 pass_activity relational_frames cp91_obj_participant cp91_obj_conductor
phenomenon 103 "Strong Braking Maneuver" exact subject CP_103
    detectors cp103_motorized cp103_bicycle
phenomenon 113 "Vulnerable Road User with Road Access" over subject CP_113 aliases 114
    detectors cp113 is_near
phenomenon 117 "Pedestrian Crossing or Ford" exact subject CP_117
    detectors cp117
phenomenon 143 "Misconduct" under subject CP_143
    detectors off_light cp143_night cp143_69
phenomenon 150 "Small Distance" under subject CP_150 aliases 83 objects object_CP_150
    detectors cp150 relevant_area
phenomenon 160 "Occluded Pedestrian" exact subject CP_160 aliases 157 objects object_CP_160
    display is_occluded
    detectors cp160 occlusion cp160_obj
phenomenon 163 "High Relative Speed" exact subject CP_163 objects object_CP_163
    detectors cp163 relative_speed
phenomenon 181 "Building for Unpredictable Road Users near Road" under subject CP_181
    detectors cp181 is_near
phenomenon 265 "Occluded Traffic Infrastructure" exact subject CP_265 objects object_CP_265
    display is_occluded
    detectors cp265 occlusion cp265_obj
phenomenon 293 "Intersecting Planned Paths" under subject CP_293 objects object_CP_293
    detectors cp293 intersecting_paths
phenomenon 294 "Freezing Temperatures" exact subject CP_294
    detectors freezing cp294
phenomenon 295 "Heavy Rain" exact subject CP_295
    detectors heavy_rain extremely_heavy_rain cp295
)catalog";
}

} // namespace critrec
