// The materialization pipeline: the augmentation/reasoning fixpoint, scene
// slicing, merge with temporal identity, the temporal slicing pass and the
// membership queries (scenario / individual / object level).
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "critrec/augment.hpp"
#include "critrec/convert.hpp"
#include "critrec/engine.hpp"
#include "critrec/phenomena.hpp"

namespace critrec {

struct InferenceStats {
    int iterations = 0;              // augment/reason loop passes (max over calls)
    long augmentation_additions = 0;
    long rule_firings = 0;
    long rounds = 0;
    long binding_failures = 0;
    std::map<std::string, long> per_augmenter;
    std::vector<std::string> warnings;
};

struct InferenceResult {
    dl::ABox abox;
    std::vector<PhenomenonOccurrence> occurrences;
    InferenceStats stats;
};

class Session {
public:
    Session(Scenario scenario, const Catalog& catalog, const Config& config,
            AugmenterRegistry augmenters = default_augmenters())
        : scenario_(std::move(scenario)), catalog_(&catalog), config_(&config),
          augmenters_(std::move(augmenters)) {
        base_ = convert_scenario(world_, scenario_);
        engine_ = std::make_unique<dl::Engine>(world_.syms, catalog.program, config.assertion_budget);
    }
    Session(const Session&) = delete; // the world holds pointers into the scenario

    World& world() { return world_; }
    const World& world() const { return world_; }
    const dl::ABox& base_abox() const { return base_; }
    const Catalog& catalog() const { return *catalog_; }
    const Config& config() const { return *config_; }
    const AugmenterRegistry& augmenters() const { return augmenters_; }

    // Algorithm of the augmentation/reasoning fixpoint: augment, reason,
    // repeat until a pass adds nothing. Reasoning always runs at least once.
    void do_inference(dl::ABox& abox, InferenceStats& stats) {
        long a = 1;
        int iter = 0;
        while (a > 0) {
            if (++iter > config_->iteration_cap)
                throw dl::InferenceError("augmentation loop exceeded iteration cap (" +
                                         std::to_string(config_->iteration_cap) +
                                         "); a non-idempotent augmenter is the usual cause");
            a = augmenters_.run_all(world_, abox, *config_, &stats.per_augmenter);
            stats.augmentation_additions += a;
            dl::EngineStats es;
            stats.rule_firings += engine_->materialize(abox, es);
            stats.rounds += es.rounds;
            stats.binding_failures += es.binding_failures;
            for (const std::string& wmsg : es.warnings)
                if (stats.warnings.size() < 64) stats.warnings.push_back(wmsg);
        }
        stats.iterations = std::max(stats.iterations, iter);
    }

    // Assertions whose individuals are entities of scene i, plus temporally
    // constant individuals referenced by the scene, the scene individual and
    // the scenario individual.
    dl::ABox scene_slice(const dl::ABox& abox, int scene_index) const {
        const auto scenes = world_.scenes_in(abox);
        int scene_ind = -1;
        for (const auto& [idx, ind] : scenes)
            if (idx == scene_index) scene_ind = ind;
        if (scene_ind < 0)
            throw std::out_of_range("unknown scene index " + std::to_string(scene_index));
        std::set<int> keep;
        for (const int m : world_.members_of(abox, scene_ind)) keep.insert(m);
        keep.insert(scene_ind);
        keep.insert(world_.scenario_ind);
        dl::ABox out;
        for (const dl::ConceptFact& f : abox.concepts())
            if (keep.count(f.ind)) out.add_concept(f.cls, f.ind);
        for (const dl::RoleFact& f : abox.roles())
            if (keep.count(f.sub) || keep.count(f.obj)) out.add_role(f.role, f.sub, f.obj);
        for (const dl::DataFact& f : abox.data())
            if (keep.count(f.ind)) out.add_data(f.attr, f.ind, f.value);
        return out;
    }

    // Union of the slices; temporally constant individuals deduplicate by
    // identity, conflicting constant attribute values keep the first one, and
    // identical_to links are added between consecutive appearances of each
    // persistent object (adjacent scenes only).
    dl::ABox merge(const std::vector<const dl::ABox*>& slices, InferenceStats* stats = nullptr) const {
        dl::ABox out;
        for (const dl::ABox* s : slices) {
            for (const dl::ConceptFact& f : s->concepts()) out.add_concept(f.cls, f.ind);
            for (const dl::RoleFact& f : s->roles()) out.add_role(f.role, f.sub, f.obj);
            for (const dl::DataFact& f : s->data()) {
                const bool constant = world_.scene_index_of(f.ind) < 0;
                if (constant && !out.data_values(f.attr, f.ind).empty() &&
                    out.data_values(f.attr, f.ind).front() != f.value) {
                    if (stats && stats->warnings.size() < 64)
                        stats->warnings.push_back(
                            "conflicting value for " + world_.syms.attr_name(f.attr) + "(" +
                            world_.syms.individual_name(f.ind) + "); first wins");
                    continue;
                }
                out.add_data(f.attr, f.ind, f.value);
            }
        }
        // individuals present in the union
        std::set<int> present;
        for (const dl::ConceptFact& f : out.concepts()) present.insert(f.ind);
        for (const dl::RoleFact& f : out.roles()) {
            present.insert(f.sub);
            present.insert(f.obj);
        }
        for (const dl::DataFact& f : out.data()) present.insert(f.ind);
        // temporal identity between adjacent appearances
        std::set<std::string> pids;
        for (const Scene& s : world_.scenario->scenes)
            for (const Entity& e : s.entities) pids.insert(e.persistent_id);
        for (const std::string& pid : pids) {
            for (const auto& chain : identity_chains(*world_.scenario, pid)) {
                for (std::size_t k = 1; k < chain.size(); ++k) {
                    const int earlier = world_.syms.find_individual(chain[k - 1].entity_id);
                    const int later = world_.syms.find_individual(chain[k].entity_id);
                    if (earlier < 0 || later < 0) continue;
                    if (present.count(earlier) && present.count(later))
                        out.add_role(world_.r_identical_to, later, earlier);
                }
            }
        }
        return out;
    }

    // Assertions whose individuals are instances of a concept from the
    // temporal name set.
    dl::ABox slice_by_concepts(const dl::ABox& abox, const std::set<std::string>& names) const {
        std::set<int> selected;
        for (const std::string& n : names) {
            const int cid = world_.syms.find_concept(n);
            if (cid < 0) continue;
            for (const int i : abox.individuals_of(cid)) selected.insert(i);
        }
        dl::ABox out;
        for (const dl::ConceptFact& f : abox.concepts())
            if (selected.count(f.ind)) out.add_concept(f.cls, f.ind);
        for (const dl::RoleFact& f : abox.roles())
            if (selected.count(f.sub) || selected.count(f.obj)) out.add_role(f.role, f.sub, f.obj);
        for (const dl::DataFact& f : abox.data())
            if (selected.count(f.ind)) out.add_data(f.attr, f.ind, f.value);
        return out;
    }

    std::set<std::string> temporal_name_set() const {
        return dl::temporal_concepts(catalog_->axioms, catalog_->rules, dl::default_temporal_seed(),
                                     augmenters_.name_groups());
    }

    // Per-scene inference, merge, temporal slicing, scenario-level inference,
    // merge back. Scene-level phenomena are found before merging; temporal
    // ones on the slice.
    dl::ABox do_temporal_reasoning(InferenceStats& stats, bool scene_level_only = false) {
        const int n = static_cast<int>(world_.scenario->scenes.size());
        std::vector<dl::ABox> slices;
        slices.reserve(n);
        for (int i = 0; i < n; ++i) {
            slices.push_back(scene_slice(base_, i));
            do_inference(slices.back(), stats);
        }
        std::vector<const dl::ABox*> ptrs;
        for (const dl::ABox& s : slices) ptrs.push_back(&s);
        dl::ABox merged = merge(ptrs, &stats);
        if (scene_level_only) return merged;
        dl::ABox sliced = slice_by_concepts(merged, temporal_name_set());
        do_inference(sliced, stats);
        return merge({&merged, &sliced}, &stats);
    }

    // Reference route without slicing: merge everything, then one inference
    // pass over the whole scenario A-Box.
    dl::ABox naive_whole_inference(InferenceStats& stats) {
        const int n = static_cast<int>(world_.scenario->scenes.size());
        std::vector<dl::ABox> slices;
        slices.reserve(n);
        for (int i = 0; i < n; ++i) slices.push_back(scene_slice(base_, i));
        std::vector<const dl::ABox*> ptrs;
        for (const dl::ABox& s : slices) ptrs.push_back(&s);
        dl::ABox merged = merge(ptrs, &stats);
        do_inference(merged, stats);
        return merged;
    }

    InferenceResult run(bool scene_level_only = false) {
        InferenceResult res;
        res.abox = do_temporal_reasoning(res.stats, scene_level_only);
        res.occurrences = occurrences_from_abox(*catalog_, world_, res.abox);
        return res;
    }

private:
    Scenario scenario_;
    World world_;
    dl::ABox base_;
    const Catalog* catalog_;
    const Config* config_;
    AugmenterRegistry augmenters_;
    std::unique_ptr<dl::Engine> engine_;
};

// ---------------------------------------------------------------------------
// competency queries

// A1: criticality phenomena with an occurrence among the scenario's entities.
inline std::set<int> query_a1(const Catalog& cat, const World& world, const dl::ABox& abox) {
    std::set<int> out;
    for (const PhenomenonDef& p : cat.phenomena) {
        const int cid = world.syms.find_concept(p.subject_concept);
        if (cid < 0) continue;
        for (const int i : abox.individuals_of(cid)) {
            if (abox.has_role(world.r_has_traffic_entity, world.scenario_ind, i)) {
                out.insert(p.cp_id);
                break;
            }
        }
    }
    return out;
}

// A2: phenomena asserted on the given individual.
inline std::set<int> query_a2(const Catalog& cat, const World& world, const dl::ABox& abox,
                              const std::string& individual) {
    const int ind = world.syms.find_individual(individual);
    if (ind < 0) throw std::out_of_range("unknown individual '" + individual + "'");
    std::set<int> out;
    for (const PhenomenonDef& p : cat.phenomena) {
        const int cid = world.syms.find_concept(p.subject_concept);
        if (cid >= 0 && abox.has_concept(cid, ind)) out.insert(p.cp_id);
    }
    return out;
}

// A3: occurrences in which the individual appears as an object. Accepts a
// per-scene individual name or a persistent id.
inline std::vector<std::pair<int, PhenomenonOccurrence>> query_a3(
    const World& world, const std::vector<PhenomenonOccurrence>& occurrences,
    const std::string& individual) {
    std::string pid = individual;
    const int ind = world.syms.find_individual(individual);
    if (ind >= 0) pid = world.persistent_of(ind);
    else {
        bool known = false;
        for (const IndividualInfo& fo : world.infos)
            if (fo.persistent == pid) { known = true; break; }
        if (!known) throw std::out_of_range("unknown individual '" + individual + "'");
    }
    std::vector<std::pair<int, PhenomenonOccurrence>> out;
    for (const PhenomenonOccurrence& occ : occurrences) {
        for (const std::string& obj : occ.objects)
            if (obj == pid) {
                out.emplace_back(occ.cp_id, occ);
                break;
            }
    }
    return out;
}

} // namespace critrec
