// Engine configuration. Defaults are the shipped target values; a JSON
// config file and `--set dotted.key=value` overrides take precedence.
#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace critrec {

struct Thresholds {
    double is_near_m = 4.0;                 // strict <
    double heavy_rain_mm_h = 10.0;          // >=
    double extremely_heavy_rain_mm_h = 50.0;// >=
    double freezing_c = 0.0;                // strict <
    double tau1_s = 8.0;                    // strict <, sum of arrival times
    double tau2_s = 3.0;                    // strict <, arrival time difference
    double relevant_area_horizon_s = 1.0;
    double braking_motorized_ms2 = -4.61;   // strict <
    double braking_bicycle_ms2 = -3.3;      // strict <
    double relative_speed_ratio = 0.25;     // >=
};

struct Config {
    Thresholds thresholds;
    double visibility_range_m = 100.0; // field-of-view radius
    double arc_step_deg = 2.0;         // arc polygonization resolution
    int relevant_area_omega_samples = 21;
    int relevant_area_t_samples = 20;
    double lateral_window_m = 10.0;    // in_front_of / behind lateral bound
    double proximity_radius_m = 20.0;  // is_in_proximity bound
    int iteration_cap = 100;           // augmentation/reasoning loop bound
    long assertion_budget = 1000000;   // per-inference A-Box size bound
    std::string gap_mode = "polygon";  // metric gap: "polygon" | "centroid"
    double default_max_yaw_deg = 45.0;
    double default_max_yaw_rate_deg_s = 25.0;

    // per-kind default maximum speed capability (m/s), used by the
    // relative-speed check when the attribute is absent
    std::map<std::string, double> default_max_speed_capability = {
        {"vehicle", 60.0},          {"motorized_road_vehicle", 60.0}, {"parking_vehicle", 60.0},
        {"bicycle", 12.0},          {"bicyclist", 12.0},              {"pedestrian", 4.0},
    };

    void apply_override(const std::string& key, double value);
    double* numeric_field(const std::string& key);
};

inline double* Config::numeric_field(const std::string& key) {
    static const std::string tp = "thresholds.";
    if (key.rfind(tp, 0) == 0) {
        const std::string k = key.substr(tp.size());
        if (k == "is_near_m") return &thresholds.is_near_m;
        if (k == "heavy_rain_mm_h") return &thresholds.heavy_rain_mm_h;
        if (k == "extremely_heavy_rain_mm_h") return &thresholds.extremely_heavy_rain_mm_h;
        if (k == "freezing_c") return &thresholds.freezing_c;
        if (k == "tau1_s") return &thresholds.tau1_s;
        if (k == "tau2_s") return &thresholds.tau2_s;
        if (k == "relevant_area_horizon_s") return &thresholds.relevant_area_horizon_s;
        if (k == "braking_motorized_ms2") return &thresholds.braking_motorized_ms2;
        if (k == "braking_bicycle_ms2") return &thresholds.braking_bicycle_ms2;
        if (k == "relative_speed_ratio") return &thresholds.relative_speed_ratio;
        return nullptr;
    }
    if (key == "visibility_range_m") return &visibility_range_m;
    if (key == "arc_step_deg") return &arc_step_deg;
    if (key == "lateral_window_m") return &lateral_window_m;
    if (key == "proximity_radius_m") return &proximity_radius_m;
    if (key == "default_max_yaw_deg") return &default_max_yaw_deg;
    if (key == "default_max_yaw_rate_deg_s") return &default_max_yaw_rate_deg_s;
    return nullptr;
}

inline void Config::apply_override(const std::string& key, double value) {
    if (double* f = numeric_field(key)) {
        *f = value;
        return;
    }
    if (key == "relevant_area_omega_samples") { relevant_area_omega_samples = static_cast<int>(value); return; }
    if (key == "relevant_area_t_samples") { relevant_area_t_samples = static_cast<int>(value); return; }
    if (key == "iteration_cap") { iteration_cap = static_cast<int>(value); return; }
    if (key == "assertion_budget") { assertion_budget = static_cast<long>(value); return; }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

inline void validate_config(const Config& c) {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0)) throw std::invalid_argument(std::string(name) + " must be > 0");
    };
    positive(c.thresholds.is_near_m, "thresholds.is_near_m");
    positive(c.thresholds.heavy_rain_mm_h, "thresholds.heavy_rain_mm_h");
    positive(c.thresholds.extremely_heavy_rain_mm_h, "thresholds.extremely_heavy_rain_mm_h");
    positive(c.thresholds.tau1_s, "thresholds.tau1_s");
    positive(c.thresholds.tau2_s, "thresholds.tau2_s");
    positive(c.thresholds.relevant_area_horizon_s, "thresholds.relevant_area_horizon_s");
    positive(c.thresholds.relative_speed_ratio, "thresholds.relative_speed_ratio");
    positive(c.visibility_range_m, "visibility_range_m");
    positive(c.arc_step_deg, "arc_step_deg");
    if (c.thresholds.braking_motorized_ms2 >= 0 || c.thresholds.braking_bicycle_ms2 >= 0)
        throw std::invalid_argument("braking thresholds must be negative");
    if (c.relevant_area_omega_samples < 1 || c.relevant_area_t_samples < 2)
        throw std::invalid_argument("relevant-area sampling too coarse");
    if (c.iteration_cap < 1) throw std::invalid_argument("iteration_cap must be >= 1");
    if (c.gap_mode != "polygon" && c.gap_mode != "centroid")
        throw std::invalid_argument("gap_mode must be 'polygon' or 'centroid'");
}

} // namespace critrec
