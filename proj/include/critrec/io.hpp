// Scenario interchange format (versioned JSON), configuration loading and
// the output writers (timeline, metric series, A-Box dump, summary).
// Serialization uses a canonical field order so round trips are byte
// identical and repeated runs produce identical output directories.
#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "critrec/config.hpp"
#include "critrec/inference.hpp"
#include "critrec/metrics.hpp"
#include "critrec/phenomena.hpp"
#include "critrec/scenario.hpp"
#include "critrec/stats.hpp"

namespace critrec::io {

using ojson = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kScenarioFormat = "critrec-scenario";
inline constexpr int kScenarioVersion = 1;

// ---------------------------------------------------------------------------
// scenario parsing

namespace io_detail {

inline geom::Polygon polygon_from_json(const ojson& j, const std::string& where) {
    if (!j.is_array() || j.size() < 3)
        throw ParseError(where + ": polygon needs an array of at least 3 [x, y] points");
    std::vector<geom::Point> pts;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError(where + ": polygon points must be [x, y] numbers");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    try {
        return geom::make_polygon(std::move(pts));
    } catch (const std::invalid_argument& e) {
        throw ParseError(where + ": " + e.what());
    }
}

inline geom::Polygon box_from_json(const ojson& j, double yaw_deg, const std::string& where) {
    if (!j.contains("center") || !j.contains("length") || !j.contains("width"))
        throw ParseError(where + ": box needs center, length, width");
    const double cx = j["center"][0].get<double>();
    const double cy = j["center"][1].get<double>();
    const double l = j["length"].get<double>();
    const double w = j["width"].get<double>();
    if (!(l > 0) || !(w > 0)) throw ParseError(where + ": box needs positive length and width");
    const geom::Point c{cx, cy};
    const geom::Point u = geom::unit_from_deg(yaw_deg);
    const geom::Point n{-u.y, u.x};
    return geom::make_polygon({c + u * (l / 2) + n * (w / 2), c - u * (l / 2) + n * (w / 2),
                               c - u * (l / 2) - n * (w / 2), c + u * (l / 2) - n * (w / 2)});
}

inline Entity entity_from_json(const ojson& j, const std::string& where, const Config& cfg) {
    Entity e;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError(where + ": entity needs a string id");
    e.persistent_id = j["id"].get<std::string>();
    if (e.persistent_id.empty() || e.persistent_id.rfind("::", 0) == 0 ||
        e.persistent_id.find_first_of("@,|\"\n\r") != std::string::npos)
        throw ParseError(where + ": entity id '" + e.persistent_id +
                         "' is empty, reserved, or contains one of @ , | \" or a line break");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParseError(where + ": entity '" + e.persistent_id + "' needs a kind");
    const auto kind = entity_kind_from_string(j["kind"].get<std::string>());
    if (!kind)
        throw ParseError(where + ": entity '" + e.persistent_id + "' has unknown kind '" +
                         j["kind"].get<std::string>() + "'");
    e.kind = *kind;
    const std::string ewhere = where + ", entity '" + e.persistent_id + "'";
    double yaw = j.value("yaw", 0.0);
    if (j.contains("polygon")) e.geometry = polygon_from_json(j["polygon"], ewhere);
    else if (j.contains("box")) e.geometry = box_from_json(j["box"], yaw, ewhere);
    if (j.contains("height")) {
        e.height = j["height"].get<double>();
        if (*e.height < 0) throw ParseError(ewhere + ": negative height");
    }
    if (j.contains("yaw") || j.contains("speed")) {
        if (!j.contains("yaw") || !j.contains("speed"))
            throw ParseError(ewhere + ": kinematics need both yaw and speed");
        Kinematics k;
        k.yaw_deg = geom::normalize_deg(yaw);
        k.speed = j["speed"].get<double>();
        if (k.speed < 0) throw ParseError(ewhere + ": negative speed");
        k.acceleration = j.value("acceleration", 0.0);
        k.max_yaw_deg = j.value("max_yaw", cfg.default_max_yaw_deg);
        k.max_yaw_rate_deg_s = j.value("max_yaw_rate", cfg.default_max_yaw_rate_deg_s);
        e.kinematics = k;
    }
    if (j.contains("attributes")) {
        if (!j["attributes"].is_object()) throw ParseError(ewhere + ": attributes must be an object");
        for (const auto& [key, value] : j["attributes"].items()) {
            if (value.is_boolean()) e.attributes[key] = value.get<bool>() ? 1.0 : 0.0;
            else if (value.is_number()) e.attributes[key] = value.get<double>();
            else throw ParseError(ewhere + ": attribute '" + key + "' must be a number or boolean");
        }
    }
    return e;
}

} // namespace io_detail

inline Scenario parse_scenario(const std::string& text, const Config& cfg = Config{}) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("not valid JSON: ") + e.what());
    }
    if (j.value("format", "") != kScenarioFormat)
        throw ParseError("missing or wrong format marker (expected \"" +
                         std::string(kScenarioFormat) + "\")");
    if (j.value("version", 0) != kScenarioVersion)
        throw ParseError("unsupported format version");
    Scenario sc;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("scenario needs a string id");
    sc.id = j["id"].get<std::string>();
    sc.sample_period = j.value("sample_period", 0.0);
    if (!(sc.sample_period > 0)) throw ParseError("sample_period must be > 0");
    sc.night = j.value("night", false);
    sc.partition = j.value("partition", "");
    std::set<std::string> static_ids;
    if (j.contains("statics")) {
        for (const auto& js : j["statics"]) {
            sc.statics.push_back(io_detail::entity_from_json(js, "statics", cfg));
            if (!static_ids.insert(sc.statics.back().persistent_id).second)
                throw ParseError("statics: duplicate id '" + sc.statics.back().persistent_id + "'");
        }
    }
    if (!j.contains("scenes") || !j["scenes"].is_array() || j["scenes"].empty())
        throw ParseError("scenario needs a non-empty scenes array");
    int index = 0;
    for (const auto& js : j["scenes"]) {
        Scene s;
        s.index = index;
        const std::string where = "scene " + std::to_string(index);
        if (!js.contains("timestamp") || !js["timestamp"].is_number())
            throw ParseError(where + ": needs a numeric timestamp");
        s.timestamp = js["timestamp"].get<double>();
        if (js.contains("entities"))
            for (const auto& je : js["entities"]) {
                s.entities.push_back(io_detail::entity_from_json(je, where, cfg));
                if (static_ids.count(s.entities.back().persistent_id))
                    throw ParseError(where + ": id '" + s.entities.back().persistent_id +
                                     "' already used by a static entity");
            }
        sc.scenes.push_back(std::move(s));
        ++index;
    }
    try {
        validate_scenario(sc);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path, const Config& cfg = Config{}) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str(), cfg);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// scenario serialization (canonical field order)

namespace io_detail {

inline ojson entity_to_json(const Entity& e) {
    ojson j;
    j["id"] = e.persistent_id;
    j["kind"] = to_string(e.kind);
    if (e.geometry) {
        ojson pts = ojson::array();
        for (const geom::Point& p : e.geometry->pts) pts.push_back({p.x, p.y});
        j["polygon"] = pts;
    }
    if (e.height) j["height"] = *e.height;
    if (e.kinematics) {
        j["yaw"] = e.kinematics->yaw_deg;
        j["speed"] = e.kinematics->speed;
        j["acceleration"] = e.kinematics->acceleration;
        j["max_yaw"] = e.kinematics->max_yaw_deg;
        j["max_yaw_rate"] = e.kinematics->max_yaw_rate_deg_s;
    }
    if (!e.attributes.empty()) {
        ojson attrs;
        for (const auto& [k, v] : e.attributes) attrs[k] = v;
        j["attributes"] = attrs;
    }
    return j;
}

} // namespace io_detail

inline std::string serialize_scenario(const Scenario& sc) {
    ojson j;
    j["format"] = kScenarioFormat;
    j["version"] = kScenarioVersion;
    j["id"] = sc.id;
    j["sample_period"] = sc.sample_period;
    if (sc.night) j["night"] = true;
    if (!sc.partition.empty()) j["partition"] = sc.partition;
    j["statics"] = ojson::array();
    for (const Entity& e : sc.statics) j["statics"].push_back(io_detail::entity_to_json(e));
    j["scenes"] = ojson::array();
    for (const Scene& s : sc.scenes) {
        ojson js;
        js["timestamp"] = s.timestamp;
        js["entities"] = ojson::array();
        for (const Entity& e : s.entities) js["entities"].push_back(io_detail::entity_to_json(e));
        j["scenes"].push_back(js);
    }
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// config

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path + ": not valid JSON: " + e.what());
    }
    Config cfg;
    const std::function<void(const ojson&, const std::string&)> walk =
        [&](const ojson& node, const std::string& prefix) {
            for (const auto& [key, value] : node.items()) {
                const std::string full = prefix.empty() ? key : prefix + "." + key;
                if (value.is_object() && full != "default_max_speed_capability") {
                    walk(value, full);
                } else if (full == "gap_mode") {
                    cfg.gap_mode = value.get<std::string>();
                } else if (full == "default_max_speed_capability") {
                    for (const auto& [kind, cap] : value.items())
                        cfg.default_max_speed_capability[kind] = cap.get<double>();
                } else if (value.is_number()) {
                    try {
                        cfg.apply_override(full, value.get<double>());
                    } catch (const std::invalid_argument& e) {
                        throw ParseError(path + ": " + e.what());
                    }
                } else {
                    throw ParseError(path + ": unsupported value for '" + full + "'");
                }
            }
        };
    walk(j, "");
    validate_config(cfg);
    return cfg;
}

// `--set key=value` override
inline void apply_cli_override(Config& cfg, const std::string& kv) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "gap_mode") {
        cfg.gap_mode = value;
        return;
    }
    try {
        cfg.apply_override(key, std::stod(value));
    } catch (const std::invalid_argument&) {
        throw ParseError("cannot apply override '" + kv + "'");
    }
}

// ---------------------------------------------------------------------------
// output writers

inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

inline std::string timeline_csv(const Catalog& cat, const std::vector<PhenomenonOccurrence>& occs) {
    std::string out =
        "scenario,cp,name,approximation,subject,subject_individual,objects,start_scene,end_scene,"
        "start_time,end_time\n";
    for (const PhenomenonOccurrence& o : occs) {
        const PhenomenonDef* def = cat.find(o.cp_id);
        out += o.scenario_id + "," + std::to_string(o.cp_id) + "," + (def ? def->name : "") + "," +
               (def ? dl::to_string(def->approx) : "") + "," + o.subject_display + "," + o.subject +
               "," + join(o.objects, "|") + "," + std::to_string(o.start_scene) + "," +
               std::to_string(o.end_scene) + "," + format_number(o.start_time) + "," +
               format_number(o.end_time) + "\n";
    }
    return out;
}

// Full A-Box dump, one assertion per line, sorted; every timeline row is
// backed by a line here.
inline std::string abox_dump(const World& world, const dl::ABox& abox) {
    std::vector<std::string> lines;
    lines.reserve(abox.size());
    for (const dl::ConceptFact& f : abox.concepts())
        lines.push_back(world.syms.concept_name(f.cls) + "(" +
                        world.syms.individual_name(f.ind) + ")");
    for (const dl::RoleFact& f : abox.roles())
        lines.push_back(world.syms.role_name(f.role) + "(" + world.syms.individual_name(f.sub) +
                        ", " + world.syms.individual_name(f.obj) + ")");
    for (const dl::DataFact& f : abox.data())
        lines.push_back(world.syms.attr_name(f.attr) + "(" + world.syms.individual_name(f.ind) +
                        ", " + format_number(f.value) + ")");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

inline std::vector<std::string> scenario_participants(const Scenario& sc) {
    std::set<std::string> pids;
    for (const Scene& s : sc.scenes)
        for (const Entity& e : s.entities)
            if (kind_is_traffic_participant(e.kind)) pids.insert(e.persistent_id);
    for (const Entity& e : sc.statics)
        if (kind_is_traffic_participant(e.kind)) pids.insert(e.persistent_id);
    return {pids.begin(), pids.end()};
}

inline std::string summary_json(const Scenario& sc, const InferenceResult& res, const World& world) {
    ojson j;
    j["scenario"] = sc.id;
    j["partition"] = sc.partition;
    j["scenes"] = sc.scenes.size();
    j["sample_period"] = sc.sample_period;
    j["participants"] = scenario_participants(sc);
    std::map<int, long> interval_counts;
    std::map<int, long> scene_counts;
    for (const PhenomenonOccurrence& o : res.occurrences) {
        ++interval_counts[o.cp_id];
        scene_counts[o.cp_id] += o.end_scene - o.start_scene + 1;
    }
    ojson occ = ojson::object();
    for (const auto& [cp, n] : interval_counts) {
        ojson row;
        row["intervals"] = n;
        row["scene_expanded"] = scene_counts[cp];
        occ[std::to_string(cp)] = row;
    }
    j["occurrences"] = occ;
    ojson stats;
    stats["iterations"] = res.stats.iterations;
    stats["augmentation_additions"] = res.stats.augmentation_additions;
    stats["rule_firings"] = res.stats.rule_firings;
    stats["rounds"] = res.stats.rounds;
    stats["binding_failures"] = res.stats.binding_failures;
    ojson per_aug = ojson::object();
    for (const auto& [name, n] : res.stats.per_augmenter) per_aug[name] = n;
    stats["per_augmenter"] = per_aug;
    ojson skipped = ojson::object();
    for (const auto& [name, n] : world.skipped_attributes) skipped[name] = n;
    stats["skipped_attributes"] = skipped;
    ojson warnings = ojson::array();
    for (const std::string& w : res.stats.warnings) warnings.push_back(w);
    stats["warnings"] = warnings;
    j["stats"] = stats;
    return j.dump(2) + "\n";
}

inline std::string metrics_csv(const std::vector<MetricSeries>& series, const Scenario& sc) {
    std::string out = "scenario,metric,subject,object,scene,time,value\n";
    for (const MetricSeries& m : series) {
        for (std::size_t i = 0; i < m.samples.size(); ++i) {
            out += sc.id + "," + m.metric + "," + m.subject + "," + m.object + "," +
                   std::to_string(i) + "," + format_number(sc.scenes[i].timestamp) + ",";
            if (m.samples[i]) out += format_number(*m.samples[i]);
            out += "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// reading inferred output directories back (for the stats subcommand)

inline ScenarioOccurrences read_run_directory(const std::string& dir) {
    ScenarioOccurrences out;
    {
        std::ifstream in(dir + "/summary.json");
        if (!in) throw ParseError("cannot open '" + dir + "/summary.json'");
        ojson j = ojson::parse(in);
        out.scenario_id = j.value("scenario", "");
        out.partition = j.value("partition", "");
        out.scene_count = j.value("scenes", 0);
        if (j.contains("participants"))
            for (const auto& p : j["participants"]) out.participants.push_back(p.get<std::string>());
    }
    std::ifstream in(dir + "/timeline.csv");
    if (!in) throw ParseError("cannot open '" + dir + "/timeline.csv'");
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::string cur;
        for (const char c : line) {
            if (c == ',') {
                cols.push_back(cur);
                cur.clear();
            } else cur += c;
        }
        cols.push_back(cur);
        if (cols.size() != 11) throw ParseError(dir + "/timeline.csv: malformed row '" + line + "'");
        PhenomenonOccurrence o;
        o.scenario_id = cols[0];
        o.cp_id = std::stoi(cols[1]);
        o.subject_display = cols[4];
        o.subject = cols[5];
        std::string obj;
        for (const char c : cols[6]) {
            if (c == '|') {
                if (!obj.empty()) o.objects.push_back(obj);
                obj.clear();
            } else obj += c;
        }
        if (!obj.empty()) o.objects.push_back(obj);
        o.start_scene = std::stoi(cols[7]);
        o.end_scene = std::stoi(cols[8]);
        o.start_time = std::stod(cols[9]);
        o.end_time = std::stod(cols[10]);
        out.occurrences.push_back(std::move(o));
    }
    return out;
}

} // namespace critrec::io
