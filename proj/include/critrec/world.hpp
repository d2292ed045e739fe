// Shared context around an A-Box: the symbol table, the per-individual
// registry linking assertions back to concrete scenario data, and the ids of
// the structural vocabulary. Augmenters read concrete data through this.
#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "critrec/abox.hpp"
#include "critrec/scenario.hpp"

namespace critrec {

struct IndividualInfo {
    enum class Kind { Scenario, Scene, Static, Dynamic, Synthetic };
    Kind kind = Kind::Synthetic;
    int scene = -1;           // scene index; -1 = temporally constant
    std::string persistent;   // grouping key stable across scenes
    int static_index = -1;    // into Scenario::statics
    int entity_index = -1;    // into Scenario::scenes[scene].entities
};

struct World {
    dl::SymbolTable syms;
    std::vector<IndividualInfo> infos; // indexed by individual id
    const Scenario* scenario = nullptr;
    std::map<std::string, long> skipped_attributes; // open-world skip audit

    // structural vocabulary, interned once
    int c_scenario = -1, c_scene = -1;
    int r_has_traffic_entity = -1, r_in_scene = -1, r_in_traffic_model = -1;
    int r_identical_to = -1, r_directly_after = -1, r_drives = -1;
    int scenario_ind = -1;

    void init_structural() {
        c_scenario = syms.concept_id("Scenario");
        c_scene = syms.concept_id("Scene");
        r_has_traffic_entity = syms.role_id("has_traffic_entity");
        r_in_scene = syms.role_id("in_scene");
        r_in_traffic_model = syms.role_id("in_traffic_model");
        r_identical_to = syms.role_id("identical_to");
        r_directly_after = syms.role_id("directly_after");
        r_drives = syms.role_id("drives");
    }

    int register_individual(const std::string& name, IndividualInfo info) {
        const int id = syms.individual_id(name);
        if (static_cast<std::size_t>(id) >= infos.size()) infos.resize(id + 1);
        infos[id] = std::move(info);
        return id;
    }

    const IndividualInfo& info(int ind) const { return infos[ind]; }

    const Entity* entity_of(int ind) const {
        if (static_cast<std::size_t>(ind) >= infos.size()) return nullptr;
        const IndividualInfo& fo = infos[ind];
        if (fo.kind == IndividualInfo::Kind::Static) return &scenario->statics[fo.static_index];
        if (fo.kind == IndividualInfo::Kind::Dynamic)
            return &scenario->scenes[fo.scene].entities[fo.entity_index];
        return nullptr;
    }

    int scene_index_of(int ind) const {
        if (static_cast<std::size_t>(ind) >= infos.size()) return -1;
        return infos[ind].scene;
    }

    const std::string& persistent_of(int ind) const {
        static const std::string empty;
        if (static_cast<std::size_t>(ind) >= infos.size()) return empty;
        return infos[ind].persistent;
    }

    // scene individuals present in an A-Box, sorted by scene index
    std::vector<std::pair<int, int>> scenes_in(const dl::ABox& abox) const {
        std::vector<std::pair<int, int>> out; // (scene index, individual id)
        for (const int s : abox.individuals_of(c_scene)) {
            const int idx = scene_index_of(s);
            if (idx >= 0) out.emplace_back(idx, s);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // members of one scene in an A-Box, sorted by individual id
    std::vector<int> members_of(const dl::ABox& abox, int scene_ind) const {
        std::vector<int> out = abox.role_objects(r_has_traffic_entity, scene_ind);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

} // namespace critrec
