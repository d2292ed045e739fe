// Semi-naive forward chaining over the compiled rule program. Rules are
// compiled once into slot form (variables resolved to integer slots, body
// reordered greedily so bound variables propagate); evaluation restricts one
// body atom per pass to the previous round's delta.
#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critrec/abox.hpp"
#include "critrec/tbox.hpp"

namespace critrec::dl {

struct InferenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineStats {
    long rule_firings = 0;       // new assertions produced by rules
    long rounds = 0;             // semi-naive rounds across all calls
    long binding_failures = 0;   // division by zero in Binding atoms
    std::vector<std::string> warnings;
};

namespace detail {

struct SlotAtom {
    RuleAtom::Kind kind;
    int pred = -1; // concept/role/attr id; -1 for the identity predicate
    // individual positions: slot >= 0, or constant individual id when slot < 0
    int a_slot = -1, a_const = -1;
    int b_slot = -1, b_const = -1;
    // numeric positions: slot >= 0, or constant
    int x_slot = -1, y_slot = -1, z_slot = -1;
    double x_const = 0, y_const = 0, z_const = 0;
    bool x_is_const = false, y_is_const = false, z_is_const = false;
    Cmp cmp = Cmp::Eq;
    BinOp op = BinOp::Add;
    bool identity = false; // "critrec:is"
};

struct SlotRule {
    std::string name;
    std::vector<SlotAtom> body; // evaluation order
    std::vector<SlotAtom> head;
    int n_islots = 0;
    int n_nslots = 0;
    std::vector<int> delta_positions; // body indices eligible for delta restriction
};

class SlotCompiler {
public:
    SlotCompiler(SymbolTable& syms) : syms_(syms) {}

    SlotRule compile(const Rule& rule) {
        ivars_.clear();
        nvars_.clear();
        SlotRule out;
        out.name = rule.name;
        std::vector<SlotAtom> body;
        for (const RuleAtom& a : rule.body) body.push_back(lower(a, rule.name));
        for (const RuleAtom& a : rule.head) out.head.push_back(lower(a, rule.name));
        out.n_islots = static_cast<int>(ivars_.size());
        out.n_nslots = static_cast<int>(nvars_.size());
        order_body(std::move(body), out, rule.name);
        return out;
    }

private:
    int islot(const std::string& v, const std::string& rule) {
        if (nvars_.count(v))
            throw CompileError("rule '" + rule + "': variable '" + v +
                               "' used in both individual and numeric positions");
        auto it = ivars_.find(v);
        if (it != ivars_.end()) return it->second;
        const int s = static_cast<int>(ivars_.size());
        ivars_[v] = s;
        return s;
    }
    int nslot(const std::string& v, const std::string& rule) {
        if (ivars_.count(v))
            throw CompileError("rule '" + rule + "': variable '" + v +
                               "' used in both individual and numeric positions");
        auto it = nvars_.find(v);
        if (it != nvars_.end()) return it->second;
        const int s = static_cast<int>(nvars_.size());
        nvars_[v] = s;
        return s;
    }

    void lower_term(const Term& t, int& slot, int& cst, const std::string& rule) {
        if (t.is_var) slot = islot(t.name, rule);
        else cst = syms_.individual_id(t.name);
    }
    void lower_num(const NumTerm& t, int& slot, double& cst, bool& is_const, const std::string& rule) {
        if (t.is_const) { is_const = true; cst = t.value; }
        else slot = nslot(t.var, rule);
    }

    SlotAtom lower(const RuleAtom& a, const std::string& rule) {
        SlotAtom s;
        s.kind = a.kind;
        s.cmp = a.cmp;
        s.op = a.op;
        switch (a.kind) {
            case RuleAtom::Kind::Concept:
                s.pred = syms_.concept_id(a.pred);
                lower_term(a.a, s.a_slot, s.a_const, rule);
                break;
            case RuleAtom::Kind::Role:
                if (a.pred == "critrec:is") s.identity = true;
                else s.pred = syms_.role_id(a.pred);
                lower_term(a.a, s.a_slot, s.a_const, rule);
                lower_term(a.b, s.b_slot, s.b_const, rule);
                break;
            case RuleAtom::Kind::Data:
                s.pred = syms_.attr_id(a.pred);
                lower_term(a.a, s.a_slot, s.a_const, rule);
                lower_num(a.x, s.x_slot, s.x_const, s.x_is_const, rule);
                break;
            case RuleAtom::Kind::Compare:
                lower_num(a.x, s.x_slot, s.x_const, s.x_is_const, rule);
                lower_num(a.y, s.y_slot, s.y_const, s.y_is_const, rule);
                break;
            case RuleAtom::Kind::Bind:
                lower_num(a.x, s.x_slot, s.x_const, s.x_is_const, rule);
                lower_num(a.y, s.y_slot, s.y_const, s.y_is_const, rule);
                lower_num(a.z, s.z_slot, s.z_const, s.z_is_const, rule);
                if (s.x_is_const)
                    throw CompileError("rule '" + rule + "': binding target must be a variable");
                break;
        }
        return s;
    }

    // Greedy static ordering: relational atoms picked by bound-variable
    // count (concept/data first on ties); arithmetic as soon as inputs bind.
    void order_body(std::vector<SlotAtom> body, SlotRule& out, const std::string& rule) {
        std::vector<bool> ibound(out.n_islots, false), nbound(out.n_nslots, false), used(body.size(), false);
        const auto arith_ready = [&](const SlotAtom& a) {
            if (a.kind == RuleAtom::Kind::Compare)
                return (a.x_is_const || nbound[a.x_slot]) && (a.y_is_const || nbound[a.y_slot]);
            if (a.kind == RuleAtom::Kind::Bind)
                return (a.y_is_const || nbound[a.y_slot]) && (a.z_is_const || nbound[a.z_slot]);
            if (a.kind == RuleAtom::Kind::Role && a.identity)
                return a.a_slot < 0 || ibound[a.a_slot] || a.b_slot < 0;
            return false;
        };
        for (std::size_t step = 0; step < body.size(); ++step) {
            int pick = -1;
            // arithmetic and identity atoms whose inputs are ready go first
            for (std::size_t i = 0; i < body.size(); ++i) {
                if (used[i]) continue;
                const auto k = body[i].kind;
                if ((k == RuleAtom::Kind::Compare || k == RuleAtom::Kind::Bind ||
                     (k == RuleAtom::Kind::Role && body[i].identity)) &&
                    arith_ready(body[i])) {
                    pick = static_cast<int>(i);
                    break;
                }
            }
            if (pick < 0) {
                int best_score = -1;
                for (std::size_t i = 0; i < body.size(); ++i) {
                    if (used[i]) continue;
                    const SlotAtom& a = body[i];
                    if (a.kind == RuleAtom::Kind::Compare || a.kind == RuleAtom::Kind::Bind) continue;
                    if (a.kind == RuleAtom::Kind::Role && a.identity) continue;
                    int score = 0;
                    if (a.a_slot >= 0 && ibound[a.a_slot]) score += 4;
                    if (a.a_slot < 0) score += 4;
                    if (a.kind == RuleAtom::Kind::Role) {
                        if (a.b_slot >= 0 && ibound[a.b_slot]) score += 4;
                        if (a.b_slot < 0) score += 4;
                    } else {
                        score += 1; // prefer unary atoms on ties
                    }
                    if (score > best_score) {
                        best_score = score;
                        pick = static_cast<int>(i);
                    }
                }
            }
            if (pick < 0)
                throw CompileError("rule '" + rule + "': arithmetic atom over variables never bound");
            used[pick] = true;
            const SlotAtom& a = body[pick];
            if (a.a_slot >= 0) ibound[a.a_slot] = true;
            if (a.b_slot >= 0) ibound[a.b_slot] = true;
            if (a.kind == RuleAtom::Kind::Data && a.x_slot >= 0) nbound[a.x_slot] = true;
            if (a.kind == RuleAtom::Kind::Bind && a.x_slot >= 0) nbound[a.x_slot] = true;
            if (a.kind == RuleAtom::Kind::Role && a.identity && a.b_slot >= 0) ibound[a.b_slot] = true;
            out.body.push_back(a);
        }
        for (std::size_t i = 0; i < ibound.size(); ++i)
            if (!ibound[i]) throw CompileError("rule '" + rule + "': unbound individual variable");
        for (const SlotAtom& h : out.head) {
            if (h.kind == RuleAtom::Kind::Data || h.kind == RuleAtom::Kind::Compare ||
                h.kind == RuleAtom::Kind::Bind)
                throw CompileError("rule '" + rule + "': consequent atoms must be concept or role atoms");
        }
        for (std::size_t i = 0; i < out.body.size(); ++i) {
            const auto k = out.body[i].kind;
            if (k == RuleAtom::Kind::Concept || k == RuleAtom::Kind::Data ||
                (k == RuleAtom::Kind::Role && !out.body[i].identity))
                out.delta_positions.push_back(static_cast<int>(i));
        }
    }

    SymbolTable& syms_;
    std::map<std::string, int> ivars_, nvars_;
};

// per-round delta: facts added in the previous round
struct Delta {
    std::unordered_map<int, std::vector<int>> concepts;                 // concept -> inds
    std::unordered_map<int, std::vector<std::pair<int, int>>> roles;    // role -> pairs
    std::unordered_map<int, std::vector<std::pair<int, double>>> data;  // attr -> (ind, value)
    bool empty() const { return concepts.empty() && roles.empty() && data.empty(); }
    void clear() { concepts.clear(); roles.clear(); data.clear(); }
};

} // namespace detail

class Engine {
public:
    Engine(SymbolTable& syms, const RuleProgram& program, long assertion_budget = 1000000)
        : budget_(assertion_budget) {
        detail::SlotCompiler sc(syms);
        for (const Rule& r : program.rules) rules_.push_back(sc.compile(r));
    }

    // Least fixpoint of rule application over the given A-Box (in place).
    // Returns the number of assertions added.
    long materialize(ABox& abox, EngineStats& stats) {
        long added_total = 0;
        detail::Delta delta;     // previous round's additions
        detail::Delta next;      // filling up this round
        bool first = true;
        while (true) {
            ++stats.rounds;
            next.clear();
            long added = 0;
            for (const detail::SlotRule& r : rules_) {
                if (first) {
                    added += evaluate(r, abox, nullptr, -1, next, stats);
                } else {
                    for (const int pos : r.delta_positions) {
                        if (!delta_has_pred(delta, r.body[pos])) continue;
                        added += evaluate(r, abox, &delta, pos, next, stats);
                    }
                }
            }
            added_total += added;
            if (abox.size() > static_cast<std::size_t>(budget_))
                throw InferenceError("assertion budget exceeded (" + std::to_string(budget_) + ")");
            if (added == 0) break;
            std::swap(delta, next);
            first = false;
        }
        return added_total;
    }

private:
    static bool delta_has_pred(const detail::Delta& d, const detail::SlotAtom& a) {
        switch (a.kind) {
            case RuleAtom::Kind::Concept: return d.concepts.count(a.pred) > 0;
            case RuleAtom::Kind::Role: return d.roles.count(a.pred) > 0;
            case RuleAtom::Kind::Data: return d.data.count(a.pred) > 0;
            default: return false;
        }
    }

    struct Env {
        std::vector<int> ind;     // slot -> individual id (-1 unbound)
        std::vector<double> num;  // slot -> value
        std::vector<bool> numset;
    };

    long evaluate(const detail::SlotRule& r, ABox& abox, const detail::Delta* delta, int delta_pos,
                  detail::Delta& next, EngineStats& stats) {
        Env env;
        env.ind.assign(r.n_islots, -1);
        env.num.assign(r.n_nslots, 0.0);
        env.numset.assign(r.n_nslots, false);
        long added = 0;
        match(r, 0, env, abox, delta, delta_pos, next, stats, added);
        return added;
    }

    static double num_value(const Env& env, bool is_const, double cst, int slot) {
        return is_const ? cst : env.num[slot];
    }

    static bool cmp_eval(Cmp c, double a, double b) {
        switch (c) {
            case Cmp::Lt: return a < b;
            case Cmp::Le: return a <= b;
            case Cmp::Eq: return a == b;
            case Cmp::Ne: return a != b;
            case Cmp::Ge: return a >= b;
            case Cmp::Gt: return a > b;
        }
        return false;
    }

    void match(const detail::SlotRule& r, std::size_t k, Env& env, ABox& abox,
               const detail::Delta* delta, int delta_pos, detail::Delta& next, EngineStats& stats,
               long& added) {
        if (k == r.body.size()) {
            fire(r, env, abox, next, added);
            return;
        }
        const detail::SlotAtom& a = r.body[k];
        const bool restricted = delta_pos == static_cast<int>(k);
        switch (a.kind) {
            case RuleAtom::Kind::Concept: {
                const int bound = a.a_slot >= 0 ? env.ind[a.a_slot] : a.a_const;
                if (bound >= 0 || a.a_slot < 0) {
                    if (restricted) {
                        // delta-restricted but already bound: check membership in delta
                        bool in_delta = false;
                        auto it = delta->concepts.find(a.pred);
                        if (it != delta->concepts.end())
                            for (const int i : it->second)
                                if (i == bound) { in_delta = true; break; }
                        if (!in_delta) return;
                    }
                    if (abox.has_concept(a.pred, bound)) match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    return;
                }
                const std::vector<int>* source = &abox.individuals_of(a.pred);
                std::vector<int> delta_copy;
                if (restricted) {
                    auto it = delta->concepts.find(a.pred);
                    if (it == delta->concepts.end()) return;
                    delta_copy = it->second; // copy: next-round delta may reallocate
                    source = &delta_copy;
                }
                const std::vector<int> items = *source; // snapshot, abox grows during the loop
                for (const int i : items) {
                    env.ind[a.a_slot] = i;
                    match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                }
                env.ind[a.a_slot] = -1;
                return;
            }
            case RuleAtom::Kind::Role: {
                if (a.identity) {
                    const int rhs = a.b_slot >= 0 ? env.ind[a.b_slot] : a.b_const;
                    if (a.a_slot >= 0 && env.ind[a.a_slot] < 0) {
                        env.ind[a.a_slot] = rhs;
                        match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                        env.ind[a.a_slot] = -1;
                    } else {
                        const int lhs = a.a_slot >= 0 ? env.ind[a.a_slot] : a.a_const;
                        if (lhs == rhs) match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    }
                    return;
                }
                const int sa = a.a_slot >= 0 ? env.ind[a.a_slot] : a.a_const;
                const int sb = a.b_slot >= 0 ? env.ind[a.b_slot] : a.b_const;
                const bool a_bound = sa >= 0 || a.a_slot < 0;
                const bool b_bound = sb >= 0 || a.b_slot < 0;
                const bool same_slot = a.a_slot >= 0 && a.a_slot == a.b_slot;
                if (restricted) {
                    auto it = delta->roles.find(a.pred);
                    if (it == delta->roles.end()) return;
                    const std::vector<std::pair<int, int>> pairs = it->second;
                    for (const auto& [x, y] : pairs) {
                        if (a_bound && x != sa) continue;
                        if (b_bound && y != sb) continue;
                        if (same_slot && x != y) continue;
                        const int keep_a = a.a_slot >= 0 ? env.ind[a.a_slot] : -2;
                        const int keep_b = a.b_slot >= 0 ? env.ind[a.b_slot] : -2;
                        if (a.a_slot >= 0) env.ind[a.a_slot] = x;
                        if (a.b_slot >= 0) env.ind[a.b_slot] = y;
                        match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                        if (a.a_slot >= 0) env.ind[a.a_slot] = keep_a;
                        if (a.b_slot >= 0) env.ind[a.b_slot] = keep_b;
                    }
                    return;
                }
                if (a_bound && b_bound) {
                    if (abox.has_role(a.pred, sa, sb)) match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    return;
                }
                if (a_bound) {
                    const std::vector<int> objs = abox.role_objects(a.pred, sa);
                    for (const int y : objs) {
                        env.ind[a.b_slot] = y;
                        match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    }
                    env.ind[a.b_slot] = -1;
                    return;
                }
                if (b_bound) {
                    const std::vector<int> subs = abox.role_subjects(a.pred, sb);
                    for (const int x : subs) {
                        env.ind[a.a_slot] = x;
                        match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    }
                    env.ind[a.a_slot] = -1;
                    return;
                }
                const std::vector<std::pair<int, int>> pairs = abox.role_pairs(a.pred);
                for (const auto& [x, y] : pairs) {
                    if (same_slot && x != y) continue;
                    env.ind[a.a_slot] = x;
                    env.ind[a.b_slot] = y;
                    match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                }
                env.ind[a.a_slot] = -1;
                env.ind[a.b_slot] = -1;
                return;
            }
            case RuleAtom::Kind::Data: {
                const int sa = a.a_slot >= 0 ? env.ind[a.a_slot] : a.a_const;
                const bool a_bound = sa >= 0 || a.a_slot < 0;
                const auto try_value = [&](double v) {
                    if (a.x_is_const) {
                        if (v != a.x_const) return;
                    } else if (env.numset[a.x_slot]) {
                        if (env.num[a.x_slot] != v) return;
                    } else {
                        env.num[a.x_slot] = v;
                        env.numset[a.x_slot] = true;
                        match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                        env.numset[a.x_slot] = false;
                        return;
                    }
                    match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                };
                if (restricted) {
                    auto it = delta->data.find(a.pred);
                    if (it == delta->data.end()) return;
                    const std::vector<std::pair<int, double>> pairs = it->second;
                    for (const auto& [i, v] : pairs) {
                        if (a_bound) {
                            if (i == sa) try_value(v);
                        } else {
                            env.ind[a.a_slot] = i;
                            try_value(v);
                            env.ind[a.a_slot] = -1;
                        }
                    }
                    return;
                }
                if (a_bound) {
                    const std::vector<double> vals = abox.data_values(a.pred, sa);
                    for (const double v : vals) try_value(v);
                    return;
                }
                const std::vector<std::pair<int, double>> pairs = abox.data_pairs(a.pred);
                for (const auto& [i, v] : pairs) {
                    env.ind[a.a_slot] = i;
                    try_value(v);
                }
                env.ind[a.a_slot] = -1;
                return;
            }
            case RuleAtom::Kind::Compare: {
                const double x = num_value(env, a.x_is_const, a.x_const, a.x_slot);
                const double y = num_value(env, a.y_is_const, a.y_const, a.y_slot);
                if (cmp_eval(a.cmp, x, y)) match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                return;
            }
            case RuleAtom::Kind::Bind: {
                const double y = num_value(env, a.y_is_const, a.y_const, a.y_slot);
                const double z = num_value(env, a.z_is_const, a.z_const, a.z_slot);
                double v = 0;
                switch (a.op) {
                    case BinOp::Add: v = y + z; break;
                    case BinOp::Sub: v = y - z; break;
                    case BinOp::Mul: v = y * z; break;
                    case BinOp::Div:
                        if (z == 0.0) {
                            ++stats.binding_failures;
                            if (stats.warnings.size() < 32)
                                stats.warnings.push_back("rule '" + r.name + "': division by zero");
                            return;
                        }
                        v = y / z;
                        break;
                }
                if (env.numset[a.x_slot]) {
                    if (env.num[a.x_slot] == v) match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                    return;
                }
                env.num[a.x_slot] = v;
                env.numset[a.x_slot] = true;
                match(r, k + 1, env, abox, delta, delta_pos, next, stats, added);
                env.numset[a.x_slot] = false;
                return;
            }
        }
    }

    void fire(const detail::SlotRule& r, const Env& env, ABox& abox, detail::Delta& next, long& added) {
        for (const detail::SlotAtom& h : r.head) {
            if (h.kind == RuleAtom::Kind::Concept) {
                const int i = h.a_slot >= 0 ? env.ind[h.a_slot] : h.a_const;
                if (abox.add_concept(h.pred, i)) {
                    next.concepts[h.pred].push_back(i);
                    ++added;
                }
            } else {
                const int x = h.a_slot >= 0 ? env.ind[h.a_slot] : h.a_const;
                const int y = h.b_slot >= 0 ? env.ind[h.b_slot] : h.b_const;
                if (abox.add_role(h.pred, x, y)) {
                    next.roles[h.pred].push_back({x, y});
                    ++added;
                }
            }
        }
    }

    std::vector<detail::SlotRule> rules_;
    long budget_;
};

// Convenience wrapper matching the operation contract.
inline long materialize(SymbolTable& syms, const RuleProgram& program, ABox& abox,
                        EngineStats& stats, long budget = 1000000) {
    Engine engine(syms, program, budget);
    const long n = engine.materialize(abox, stats);
    stats.rule_firings += n;
    return n;
}

} // namespace critrec::dl
