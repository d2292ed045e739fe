// Batch analyses over recognized occurrences: contingency association (phi),
// start-offset statistics between phenomena, and per-participant-per-scene
// occurrence rates.
#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "critrec/phenomena.hpp"

namespace critrec {

struct ContingencyTable {
    long n11 = 0; // A present, B present
    long n10 = 0; // A present, B absent
    long n01 = 0; // A absent, B present
    long n00 = 0; // neither
};

// Four-marginal phi coefficient; undefined when a marginal is zero.
inline std::optional<double> phi(const ContingencyTable& t) {
    const double r1 = static_cast<double>(t.n11) + t.n10;
    const double r0 = static_cast<double>(t.n01) + t.n00;
    const double c1 = static_cast<double>(t.n11) + t.n01;
    const double c0 = static_cast<double>(t.n10) + t.n00;
    if (r1 <= 0 || r0 <= 0 || c1 <= 0 || c0 <= 0) return std::nullopt;
    const double num = static_cast<double>(t.n11) * t.n00 - static_cast<double>(t.n10) * t.n01;
    return num / std::sqrt(r1 * r0 * c1 * c0);
}

// ---------------------------------------------------------------------------
// pair presence over scenario batches

// One unit of observation per (ordered entity pair, scenario); a phenomenon
// is present for the pair when some occurrence has the first entity as its
// subject and the second among its objects.
struct ScenarioOccurrences {
    std::string scenario_id;
    std::string partition;
    int scene_count = 0;
    std::vector<std::string> participants; // persistent ids of traffic participants
    std::vector<PhenomenonOccurrence> occurrences;
};

inline ContingencyTable pair_contingency(const std::vector<ScenarioOccurrences>& batch, int cp_a,
                                         int cp_b) {
    ContingencyTable t;
    for (const ScenarioOccurrences& sc : batch) {
        std::set<std::pair<std::string, std::string>> has_a, has_b;
        for (const PhenomenonOccurrence& occ : sc.occurrences) {
            if (occ.cp_id != cp_a && occ.cp_id != cp_b) continue;
            for (const std::string& obj : occ.objects) {
                if (occ.cp_id == cp_a) has_a.insert({occ.subject_display, obj});
                if (occ.cp_id == cp_b) has_b.insert({occ.subject_display, obj});
            }
        }
        for (const std::string& x : sc.participants) {
            for (const std::string& y : sc.participants) {
                if (x == y) continue;
                const bool a = has_a.count({x, y}) > 0;
                const bool b = has_b.count({x, y}) > 0;
                if (a && b) ++t.n11;
                else if (a) ++t.n10;
                else if (b) ++t.n01;
                else ++t.n00;
            }
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// start offsets

struct OffsetStats {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n-1)
    int count = 0;
};

// B start minus A start, one sample per ordered (subject, object) pair that
// carries both phenomena; each pair contributes its earliest starts.
inline std::optional<OffsetStats> start_offsets(const std::vector<ScenarioOccurrences>& batch,
                                                int cp_a, int cp_b) {
    std::vector<double> diffs;
    for (const ScenarioOccurrences& sc : batch) {
        std::map<std::pair<std::string, std::string>, double> first_a, first_b;
        for (const PhenomenonOccurrence& occ : sc.occurrences) {
            if (occ.cp_id != cp_a && occ.cp_id != cp_b) continue;
            for (const std::string& obj : occ.objects) {
                auto& dst = occ.cp_id == cp_a ? first_a : first_b;
                const std::pair<std::string, std::string> key{occ.subject_display, obj};
                auto it = dst.find(key);
                if (it == dst.end() || occ.start_time < it->second) dst[key] = occ.start_time;
                if (cp_a == cp_b) {
                    auto& other = occ.cp_id == cp_a ? first_b : first_a;
                    auto jt = other.find(key);
                    if (jt == other.end() || occ.start_time < jt->second) other[key] = occ.start_time;
                }
            }
        }
        for (const auto& [key, ta] : first_a) {
            auto it = first_b.find(key);
            if (it != first_b.end()) diffs.push_back(it->second - ta);
        }
    }
    if (diffs.empty()) return std::nullopt;
    OffsetStats out;
    out.count = static_cast<int>(diffs.size());
    double sum = 0;
    for (const double d : diffs) sum += d;
    out.mean = sum / out.count;
    if (out.count > 1) {
        double ss = 0;
        for (const double d : diffs) ss += (d - out.mean) * (d - out.mean);
        out.stddev = std::sqrt(ss / (out.count - 1));
    }
    return out;
}

// ---------------------------------------------------------------------------
// occurrence rates

struct RateRow {
    std::string partition;
    int cp_id = 0;
    long scene_expanded_count = 0; // occurrences counted once per covered scene
    long scene_participant_units = 0; // sum of scenes * participants
    double rate = 0.0;
};

// count(CP occurrences, scene-expanded) / (scene count * participant count),
// grouped by partition key; additive over batches when re-weighted.
inline std::vector<RateRow> cp_per_tp_per_scene(const std::vector<ScenarioOccurrences>& batch) {
    std::map<std::pair<std::string, int>, RateRow> rows;
    std::map<std::string, long> units;
    for (const ScenarioOccurrences& sc : batch) {
        units[sc.partition] +=
            static_cast<long>(sc.scene_count) * static_cast<long>(sc.participants.size());
        for (const PhenomenonOccurrence& occ : sc.occurrences) {
            RateRow& r = rows[{sc.partition, occ.cp_id}];
            r.partition = sc.partition;
            r.cp_id = occ.cp_id;
            r.scene_expanded_count += occ.end_scene - occ.start_scene + 1;
        }
    }
    std::vector<RateRow> out;
    for (auto& [key, row] : rows) {
        row.scene_participant_units = units[key.first];
        row.rate = row.scene_participant_units > 0
                       ? static_cast<double>(row.scene_expanded_count) / row.scene_participant_units
                       : 0.0;
        out.push_back(row);
    }
    return out;
}

} // namespace critrec
