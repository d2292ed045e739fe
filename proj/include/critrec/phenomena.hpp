// The phenomena catalog (loaded from the declarative rules format) and the
// extraction of phenomenon occurrences from a materialized A-Box.
#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "critrec/config.hpp"
#include "critrec/default_rules.hpp"
#include "critrec/rules_parser.hpp"
#include "critrec/world.hpp"

namespace critrec {

using PhenomenonDef = dl::PhenomenonSpec;

struct Catalog {
    dl::Vocabulary vocab;
    std::vector<dl::Axiom> axioms;
    std::vector<dl::Rule> rules;
    std::vector<PhenomenonDef> phenomena; // sorted by cp_id
    dl::RuleProgram program;

    const PhenomenonDef* find(int cp_or_alias) const {
        for (const PhenomenonDef& p : phenomena) {
            if (p.cp_id == cp_or_alias) return &p;
            for (const int a : p.aliases)
                if (a == cp_or_alias) return &p;
        }
        return nullptr;
    }
};

inline const std::vector<std::string>& default_augmenter_names() {
    static const std::vector<std::string> names = {
        "intersects",      "is_near",          "occlusion",         "relevant_area",
        "intersecting_paths", "relative_speed", "relational_frames", "pass_activity"};
    return names;
}

namespace detail {
inline std::string format_threshold(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}
} // namespace detail

// Parses, compiles and validates a catalog. Detector names must resolve to a
// rule, an axiom or a registered augmenter; duplicate ids are rejected.
inline Catalog load_catalog(const std::string& text, const Config& cfg,
                            const std::vector<std::string>& augmenters = default_augmenter_names()) {
    const std::map<std::string, std::string> values = {
        {"heavy_rain", detail::format_threshold(cfg.thresholds.heavy_rain_mm_h)},
        {"extremely_heavy_rain", detail::format_threshold(cfg.thresholds.extremely_heavy_rain_mm_h)},
        {"freezing", detail::format_threshold(cfg.thresholds.freezing_c)},
        {"braking_motorized", detail::format_threshold(cfg.thresholds.braking_motorized_ms2)},
        {"braking_bicycle", detail::format_threshold(cfg.thresholds.braking_bicycle_ms2)},
        {"is_near", detail::format_threshold(cfg.thresholds.is_near_m)},
    };
    dl::RulesParser parser;
    dl::RulesFile file = parser.parse(dl::substitute_placeholders(text, values));

    Catalog cat;
    cat.vocab = std::move(file.vocab);
    cat.axioms = std::move(file.axioms);
    cat.rules = std::move(file.rules);
    cat.phenomena = std::move(file.phenomena);
    std::sort(cat.phenomena.begin(), cat.phenomena.end(),
              [](const PhenomenonDef& a, const PhenomenonDef& b) { return a.cp_id < b.cp_id; });

    std::set<int> ids;
    std::set<std::string> known(augmenters.begin(), augmenters.end());
    for (const dl::Axiom& a : cat.axioms) known.insert(a.name);
    for (const dl::Rule& r : cat.rules) known.insert(r.name);
    for (const PhenomenonDef& p : cat.phenomena) {
        if (!ids.insert(p.cp_id).second)
            throw dl::CompileError("duplicate phenomenon id " + std::to_string(p.cp_id));
        for (const int a : p.aliases)
            if (!ids.insert(a).second)
                throw dl::CompileError("duplicate phenomenon alias " + std::to_string(a));
        for (const std::string& d : p.detectors)
            if (!known.count(d))
                throw dl::CompileError("phenomenon " + std::to_string(p.cp_id) +
                                       ": detector '" + d + "' does not resolve");
        if (!cat.vocab.concepts.count(p.subject_concept))
            throw dl::CompileError("phenomenon " + std::to_string(p.cp_id) +
                                   ": unknown subject concept " + p.subject_concept);
    }
    cat.program = dl::compile_tbox(cat.axioms, cat.rules);
    return cat;
}

inline Catalog default_catalog(const Config& cfg) {
    return load_catalog(default_rules_text(), cfg);
}

// ---------------------------------------------------------------------------
// occurrences

struct PhenomenonOccurrence {
    int cp_id = 0;
    std::string scenario_id;
    std::string subject;         // individual carrying the CP_X assertion
    std::string subject_display; // persistent id of the primary participant
    std::vector<std::string> objects; // persistent ids, sorted, display excluded
    int start_scene = 0;
    int end_scene = 0;
    double start_time = 0.0;
    double end_time = 0.0;
};

inline bool operator<(const PhenomenonOccurrence& a, const PhenomenonOccurrence& b) {
    return std::tie(a.cp_id, a.subject_display, a.objects, a.start_scene, a.subject) <
           std::tie(b.cp_id, b.subject_display, b.objects, b.start_scene, b.subject);
}

// Coalesces per-scene CP assertions on identity-linked subjects with equal
// object sets into maximal scene intervals.
inline std::vector<PhenomenonOccurrence> occurrences_from_abox(const Catalog& cat, const World& world,
                                                               const dl::ABox& abox) {
    std::vector<PhenomenonOccurrence> out;
    const Scenario& sc = *world.scenario;
    const int n_scenes = static_cast<int>(sc.scenes.size());

    for (const PhenomenonDef& p : cat.phenomena) {
        const int cid = world.syms.find_concept(p.subject_concept);
        if (cid < 0) continue;
        const int display_role =
            p.display_role.empty() ? -1 : world.syms.find_role(p.display_role);
        const int start_attr =
            p.interval_start_attr.empty() ? -1 : world.syms.find_attr(p.interval_start_attr);
        const int end_attr =
            p.interval_end_attr.empty() ? -1 : world.syms.find_attr(p.interval_end_attr);

        struct Key {
            std::string persistent, display;
            std::vector<std::string> objects;
            bool operator<(const Key& o) const {
                return std::tie(persistent, display, objects) <
                       std::tie(o.persistent, o.display, o.objects);
            }
        };
        // per key: covered scene intervals plus a representative individual
        std::map<Key, std::vector<std::pair<std::pair<int, int>, std::string>>> groups;

        std::vector<int> subjects = abox.individuals_of(cid);
        std::sort(subjects.begin(), subjects.end());
        for (const int s : subjects) {
            Key key;
            key.persistent = world.persistent_of(s);
            key.display = key.persistent;
            if (display_role >= 0) {
                std::vector<std::string> targets;
                for (const int t : abox.role_objects(display_role, s))
                    targets.push_back(world.persistent_of(t));
                std::sort(targets.begin(), targets.end());
                if (!targets.empty()) key.display = targets.front();
            }
            std::set<std::string> objs;
            for (const std::string& role : p.object_roles) {
                const int rid = world.syms.find_role(role);
                if (rid < 0) continue;
                for (const int t : abox.role_objects(rid, s)) objs.insert(world.persistent_of(t));
            }
            objs.erase(key.display);
            key.objects.assign(objs.begin(), objs.end());

            int lo, hi;
            if (start_attr >= 0 && !abox.data_values(start_attr, s).empty()) {
                lo = static_cast<int>(abox.data_values(start_attr, s).front());
                hi = end_attr >= 0 && !abox.data_values(end_attr, s).empty()
                         ? static_cast<int>(abox.data_values(end_attr, s).front())
                         : lo;
            } else {
                const int scene = world.scene_index_of(s);
                if (scene >= 0) { lo = hi = scene; }
                else { lo = 0; hi = n_scenes - 1; } // temporally constant subject
            }
            groups[key].push_back({{lo, hi}, world.syms.individual_name(s)});
        }

        for (auto& [key, spans] : groups) {
            std::sort(spans.begin(), spans.end());
            PhenomenonOccurrence cur;
            bool open = false;
            const auto flush = [&]() {
                if (!open) return;
                cur.start_time = sc.scenes[cur.start_scene].timestamp;
                cur.end_time = sc.scenes[cur.end_scene].timestamp;
                out.push_back(cur);
                open = false;
            };
            for (const auto& [span, ind] : spans) {
                if (open && span.first <= cur.end_scene + 1) {
                    cur.end_scene = std::max(cur.end_scene, span.second);
                    continue;
                }
                flush();
                cur = PhenomenonOccurrence{};
                cur.cp_id = p.cp_id;
                cur.scenario_id = sc.id;
                cur.subject = ind; // representative: first individual of the run
                cur.subject_display = key.display;
                cur.objects = key.objects;
                cur.start_scene = span.first;
                cur.end_scene = span.second;
                open = true;
            }
            flush();
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace critrec
