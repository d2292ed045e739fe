// Assertional store: interned symbols, concept/role/data assertions with
// incremental indexes. Grows monotonically during a run; iteration orders
// follow insertion order so results are deterministic.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace critrec::dl {

class SymbolTable {
public:
    int concept_id(const std::string& name) { return intern(concepts_, concept_ids_, name); }
    int role_id(const std::string& name) { return intern(roles_, role_ids_, name); }
    int attr_id(const std::string& name) { return intern(attrs_, attr_ids_, name); }
    int individual_id(const std::string& name) { return intern(inds_, ind_ids_, name); }

    int find_concept(const std::string& name) const { return find(concept_ids_, name); }
    int find_role(const std::string& name) const { return find(role_ids_, name); }
    int find_attr(const std::string& name) const { return find(attr_ids_, name); }
    int find_individual(const std::string& name) const { return find(ind_ids_, name); }

    const std::string& concept_name(int id) const { return concepts_[id]; }
    const std::string& role_name(int id) const { return roles_[id]; }
    const std::string& attr_name(int id) const { return attrs_[id]; }
    const std::string& individual_name(int id) const { return inds_[id]; }

    std::size_t individual_count() const { return inds_.size(); }
    const std::vector<std::string>& individuals() const { return inds_; }

private:
    static int intern(std::vector<std::string>& names, std::unordered_map<std::string, int>& ids,
                      const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        const int id = static_cast<int>(names.size());
        names.push_back(name);
        ids.emplace(name, id);
        return id;
    }
    static int find(const std::unordered_map<std::string, int>& ids, const std::string& name) {
        auto it = ids.find(name);
        return it == ids.end() ? -1 : it->second;
    }

    std::vector<std::string> concepts_, roles_, attrs_, inds_;
    std::unordered_map<std::string, int> concept_ids_, role_ids_, attr_ids_, ind_ids_;
};

struct ConceptFact {
    int cls;
    int ind;
};
struct RoleFact {
    int role;
    int sub;
    int obj;
};
struct DataFact {
    int attr;
    int ind;
    double value;
};

inline std::uint64_t pair_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

class ABox {
public:
    // returns true when the fact is new
    bool add_concept(int c, int i) {
        if (!concept_set_.insert(pair_key(c, i)).second) return false;
        concepts_.push_back({c, i});
        by_concept_[c].push_back(i);
        return true;
    }
    bool add_role(int r, int a, int b) {
        const std::uint64_t k = role_key(r, a, b); // injective packing
        if (!role_set_.insert(k).second) return false;
        roles_.push_back({r, a, b});
        role_by_sub_[pair_key(r, a)].push_back(b);
        role_by_obj_[pair_key(r, b)].push_back(a);
        role_pairs_[r].push_back({a, b});
        return true;
    }
    bool add_data(int attr, int i, double v) {
        std::vector<double>& vals = data_by_ind_[pair_key(attr, i)];
        for (const double x : vals)
            if (x == v) return false;
        vals.push_back(v);
        data_.push_back({attr, i, v});
        data_pairs_[attr].push_back({i, v});
        return true;
    }

    bool has_concept(int c, int i) const { return concept_set_.count(pair_key(c, i)) > 0; }
    bool has_role(int r, int a, int b) const { return role_set_.count(role_key(r, a, b)) > 0; }

    const std::vector<int>& individuals_of(int c) const { return vec(by_concept_, c); }
    const std::vector<int>& role_objects(int r, int a) const { return vec(role_by_sub_, pair_key(r, a)); }
    const std::vector<int>& role_subjects(int r, int b) const { return vec(role_by_obj_, pair_key(r, b)); }
    const std::vector<std::pair<int, int>>& role_pairs(int r) const { return pvec(role_pairs_, r); }
    const std::vector<double>& data_values(int attr, int i) const {
        return dvec(data_by_ind_, pair_key(attr, i));
    }
    const std::vector<std::pair<int, double>>& data_pairs(int attr) const {
        return dpvec(data_pairs_, attr);
    }

    const std::vector<ConceptFact>& concepts() const { return concepts_; }
    const std::vector<RoleFact>& roles() const { return roles_; }
    const std::vector<DataFact>& data() const { return data_; }

    std::size_t size() const { return concepts_.size() + roles_.size() + data_.size(); }

    // set-equality regardless of insertion order
    bool same_assertions(const ABox& o) const {
        if (concepts_.size() != o.concepts_.size() || roles_.size() != o.roles_.size() ||
            data_.size() != o.data_.size())
            return false;
        for (const ConceptFact& f : concepts_)
            if (!o.has_concept(f.cls, f.ind)) return false;
        for (const RoleFact& f : roles_)
            if (!o.has_role(f.role, f.sub, f.obj)) return false;
        for (const DataFact& f : data_) {
            bool found = false;
            for (const double v : o.data_values(f.attr, f.ind))
                if (v == f.value) { found = true; break; }
            if (!found) return false;
        }
        return true;
    }

    void add_all(const ABox& o) {
        for (const ConceptFact& f : o.concepts_) add_concept(f.cls, f.ind);
        for (const RoleFact& f : o.roles_) add_role(f.role, f.sub, f.obj);
        for (const DataFact& f : o.data_) add_data(f.attr, f.ind, f.value);
    }

private:
    // ids are interned strings, comfortably below 2^21 at the scales this
    // engine targets; the pack stays collision-free
    static std::uint64_t role_key(int r, int a, int b) {
        if ((r | a | b) >> 21)
            throw std::length_error("symbol id exceeds packing range");
        return (static_cast<std::uint64_t>(r) << 42) | (static_cast<std::uint64_t>(a) << 21) |
               static_cast<std::uint64_t>(b);
    }
    template <typename M, typename K>
    static const std::vector<int>& vec(const M& m, K k) {
        static const std::vector<int> empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }
    template <typename M, typename K>
    static const std::vector<std::pair<int, int>>& pvec(const M& m, K k) {
        static const std::vector<std::pair<int, int>> empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }
    template <typename M, typename K>
    static const std::vector<double>& dvec(const M& m, K k) {
        static const std::vector<double> empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }
    template <typename M, typename K>
    static const std::vector<std::pair<int, double>>& dpvec(const M& m, K k) {
        static const std::vector<std::pair<int, double>> empty;
        auto it = m.find(k);
        return it == m.end() ? empty : it->second;
    }

    std::vector<ConceptFact> concepts_;
    std::vector<RoleFact> roles_;
    std::vector<DataFact> data_;
    std::unordered_set<std::uint64_t> concept_set_;
    std::unordered_set<std::uint64_t> role_set_;
    std::unordered_map<int, std::vector<int>> by_concept_;
    std::unordered_map<std::uint64_t, std::vector<int>> role_by_sub_;
    std::unordered_map<std::uint64_t, std::vector<int>> role_by_obj_;
    std::unordered_map<int, std::vector<std::pair<int, int>>> role_pairs_;
    std::unordered_map<std::uint64_t, std::vector<double>> data_by_ind_;
    std::unordered_map<int, std::vector<std::pair<int, double>>> data_pairs_;
};

} // namespace critrec::dl
