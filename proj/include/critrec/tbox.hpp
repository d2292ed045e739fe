// Restricted terminology: concept expressions, axioms, Horn rules with
// arithmetic atoms, the Horn compiler, the declared-subsumption closure and
// the temporal-concept reachability analysis.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace critrec::dl {

struct CompileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// vocabulary

struct Vocabulary {
    std::set<std::string> concepts; // includes Top and Bottom
    std::set<std::string> roles;
    std::set<std::string> attributes; // data-valued roles
    std::set<std::string> individuals;

    Vocabulary() {
        concepts.insert("Top");
        concepts.insert("Bottom");
    }

    void check_disjoint() const {
        for (const std::string& c : concepts) {
            if (roles.count(c) || attributes.count(c) || individuals.count(c))
                throw CompileError("name '" + c + "' used in more than one vocabulary category");
        }
        for (const std::string& r : roles)
            if (attributes.count(r) || individuals.count(r))
                throw CompileError("name '" + r + "' used in more than one vocabulary category");
        for (const std::string& a : attributes)
            if (individuals.count(a))
                throw CompileError("name '" + a + "' used in more than one vocabulary category");
    }
};

// ---------------------------------------------------------------------------
// concept expressions

struct ConceptExpr;
using ConceptPtr = std::shared_ptr<const ConceptExpr>;

struct ConceptExpr {
    enum class Kind { Atomic, Nominal, And, Or, Exists, Not, Top, Bottom };
    Kind kind;
    std::string name;                      // Atomic; Exists: role name
    std::vector<std::string> individuals;  // Nominal
    std::vector<ConceptPtr> children;      // And/Or members, Exists/Not child
};

namespace ce {
inline ConceptPtr atomic(std::string name) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::Atomic;
    e->name = std::move(name);
    return e;
}
inline ConceptPtr top() { auto e = std::make_shared<ConceptExpr>(); e->kind = ConceptExpr::Kind::Top; return e; }
inline ConceptPtr bottom() { auto e = std::make_shared<ConceptExpr>(); e->kind = ConceptExpr::Kind::Bottom; return e; }
inline ConceptPtr nominal(std::vector<std::string> inds) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::Nominal;
    e->individuals = std::move(inds);
    return e;
}
inline ConceptPtr and_(std::vector<ConceptPtr> xs) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::And;
    e->children = std::move(xs);
    return e;
}
inline ConceptPtr or_(std::vector<ConceptPtr> xs) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::Or;
    e->children = std::move(xs);
    return e;
}
inline ConceptPtr exists(std::string role, ConceptPtr c) {
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::Exists;
    e->name = std::move(role);
    e->children = {std::move(c)};
    return e;
}
inline ConceptPtr not_(ConceptPtr c) {
    if (c->kind != ConceptExpr::Kind::Atomic)
        throw CompileError("negation is restricted to atomic concepts");
    auto e = std::make_shared<ConceptExpr>();
    e->kind = ConceptExpr::Kind::Not;
    e->children = {std::move(c)};
    return e;
}
} // namespace ce

// ---------------------------------------------------------------------------
// axioms

enum class Approximation { Exact, Under, Over };

inline const char* to_string(Approximation a) {
    switch (a) {
        case Approximation::Exact: return "exact";
        case Approximation::Under: return "under";
        case Approximation::Over: return "over";
    }
    return "?";
}

struct Axiom {
    enum class Kind { GCI, Equivalence, RIA };
    Kind kind = Kind::GCI;
    std::string name;       // reference for detector bindings
    ConceptPtr lhs, rhs;    // GCI: lhs ⊑ rhs; Equivalence: lhs ≡ rhs
    std::string lrole, rrole; // RIA sides
    Approximation approx = Approximation::Exact;
};

inline Axiom gci(std::string name, ConceptPtr lhs, ConceptPtr rhs,
                 Approximation approx = Approximation::Over) {
    Axiom a;
    a.kind = Axiom::Kind::GCI;
    a.name = std::move(name);
    a.lhs = std::move(lhs);
    a.rhs = std::move(rhs);
    a.approx = approx;
    return a;
}

inline Axiom equivalence(std::string name, ConceptPtr lhs, ConceptPtr rhs) {
    Axiom a;
    a.kind = Axiom::Kind::Equivalence;
    a.name = std::move(name);
    a.lhs = std::move(lhs);
    a.rhs = std::move(rhs);
    a.approx = Approximation::Exact;
    return a;
}

// ---------------------------------------------------------------------------
// rules

struct Term {
    bool is_var = true;
    std::string name; // variable or individual name
};

struct NumTerm {
    bool is_const = false;
    double value = 0.0;
    std::string var;
};

enum class Cmp { Lt, Le, Eq, Ne, Ge, Gt };
enum class BinOp { Add, Sub, Mul, Div };

struct RuleAtom {
    enum class Kind { Concept, Role, Data, Compare, Bind };
    Kind kind = Kind::Concept;
    std::string pred;     // concept / role / attribute name
    Term a, b;            // individual positions
    NumTerm x, y, z;      // Data: x value; Compare: x ~ y; Bind: x = y op z
    Cmp cmp = Cmp::Eq;
    BinOp op = BinOp::Add;
};

namespace atoms {
inline Term var(std::string n) { return Term{true, std::move(n)}; }
inline Term ind(std::string n) { return Term{false, std::move(n)}; }
inline NumTerm nvar(std::string n) { return NumTerm{false, 0.0, std::move(n)}; }
inline NumTerm nconst(double v) { return NumTerm{true, v, {}}; }

inline RuleAtom concept_atom(std::string c, Term t) {
    RuleAtom a;
    a.kind = RuleAtom::Kind::Concept;
    a.pred = std::move(c);
    a.a = std::move(t);
    return a;
}
inline RuleAtom role_atom(std::string r, Term s, Term o) {
    RuleAtom a;
    a.kind = RuleAtom::Kind::Role;
    a.pred = std::move(r);
    a.a = std::move(s);
    a.b = std::move(o);
    return a;
}
inline RuleAtom data_atom(std::string attr, Term s, NumTerm v) {
    RuleAtom a;
    a.kind = RuleAtom::Kind::Data;
    a.pred = std::move(attr);
    a.a = std::move(s);
    a.x = std::move(v);
    return a;
}
inline RuleAtom compare_atom(NumTerm x, Cmp cmp, NumTerm y) {
    RuleAtom a;
    a.kind = RuleAtom::Kind::Compare;
    a.x = std::move(x);
    a.cmp = cmp;
    a.y = std::move(y);
    return a;
}
inline RuleAtom bind_atom(NumTerm x, NumTerm y, BinOp op, NumTerm z) {
    RuleAtom a;
    a.kind = RuleAtom::Kind::Bind;
    a.x = std::move(x);
    a.y = std::move(y);
    a.op = op;
    a.z = std::move(z);
    return a;
}
} // namespace atoms

struct Rule {
    std::string name;
    std::vector<RuleAtom> body;
    std::vector<RuleAtom> head; // concept/role atoms over body variables
};

struct RuleProgram {
    std::vector<Rule> rules;
    std::vector<Axiom> axioms; // source axioms, kept for reports
};

// ---------------------------------------------------------------------------
// Horn compilation

namespace detail {

inline std::string kind_name(ConceptExpr::Kind k) {
    switch (k) {
        case ConceptExpr::Kind::Atomic: return "atomic concept";
        case ConceptExpr::Kind::Nominal: return "nominal";
        case ConceptExpr::Kind::And: return "intersection";
        case ConceptExpr::Kind::Or: return "union";
        case ConceptExpr::Kind::Exists: return "existential restriction";
        case ConceptExpr::Kind::Not: return "atomic negation";
        case ConceptExpr::Kind::Top: return "top concept";
        case ConceptExpr::Kind::Bottom: return "bottom concept";
    }
    return "?";
}

struct BodyAlternatives {
    // disjunction of conjunctions (Or splits multiply alternatives)
    std::vector<std::vector<RuleAtom>> alts{{}};
};

inline void cross_append(BodyAlternatives& acc, const BodyAlternatives& more) {
    std::vector<std::vector<RuleAtom>> out;
    for (const auto& a : acc.alts)
        for (const auto& b : more.alts) {
            std::vector<RuleAtom> merged = a;
            merged.insert(merged.end(), b.begin(), b.end());
            out.push_back(std::move(merged));
        }
    acc.alts = std::move(out);
}

// Translate an expression in antecedent position, rooted at variable v.
inline BodyAlternatives translate_antecedent(const ConceptExpr& e, const std::string& v, int& fresh) {
    BodyAlternatives out;
    switch (e.kind) {
        case ConceptExpr::Kind::Atomic:
            out.alts[0].push_back(atoms::concept_atom(e.name, atoms::var(v)));
            return out;
        case ConceptExpr::Kind::Not:
            // evaluated only against explicitly asserted complements, never
            // by failure (open world)
            out.alts[0].push_back(atoms::concept_atom("not:" + e.children[0]->name, atoms::var(v)));
            return out;
        case ConceptExpr::Kind::Top:
            throw CompileError("top concept as an antecedent is not range-restricted");
        case ConceptExpr::Kind::Bottom:
            throw CompileError("bottom concept cannot appear in an antecedent");
        case ConceptExpr::Kind::Nominal: {
            // one alternative per named individual; "critrec:is" is the
            // engine's identity predicate (binds or checks equality)
            out.alts.clear();
            for (const std::string& i : e.individuals) {
                std::vector<RuleAtom> alt;
                alt.push_back(atoms::role_atom("critrec:is", atoms::var(v), atoms::ind(i)));
                out.alts.push_back(std::move(alt));
            }
            if (out.alts.empty()) throw CompileError("empty nominal");
            return out;
        }
        case ConceptExpr::Kind::And: {
            for (const ConceptPtr& c : e.children) cross_append(out, translate_antecedent(*c, v, fresh));
            return out;
        }
        case ConceptExpr::Kind::Or: {
            out.alts.clear();
            for (const ConceptPtr& c : e.children) {
                BodyAlternatives sub = translate_antecedent(*c, v, fresh);
                for (auto& alt : sub.alts) out.alts.push_back(std::move(alt));
            }
            return out;
        }
        case ConceptExpr::Kind::Exists: {
            const std::string w = "_v" + std::to_string(fresh++);
            out.alts[0].push_back(atoms::role_atom(e.name, atoms::var(v), atoms::var(w)));
            if (e.children[0]->kind != ConceptExpr::Kind::Top)
                cross_append(out, translate_antecedent(*e.children[0], w, fresh));
            return out;
        }
    }
    throw CompileError("unreachable");
}

// Atomic conjuncts usable as rule heads; non-Horn parts are skipped when
// `lenient`, rejected otherwise (with a diagnostic naming the constructor).
inline std::vector<RuleAtom> translate_consequent(const ConceptExpr& e, const std::string& v,
                                                  bool lenient) {
    std::vector<RuleAtom> out;
    switch (e.kind) {
        case ConceptExpr::Kind::Atomic:
            out.push_back(atoms::concept_atom(e.name, atoms::var(v)));
            return out;
        case ConceptExpr::Kind::And: {
            for (const ConceptPtr& c : e.children) {
                auto sub = translate_consequent(*c, v, lenient);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        case ConceptExpr::Kind::Top:
            return out; // trivially satisfied
        default:
            if (lenient) return out;
            throw CompileError(kind_name(e.kind) +
                               " on the consequent side is outside the Horn fragment");
    }
}

} // namespace detail

// Compiles GCIs, equivalences and rules into an executable rule program.
//  - lhs ⊑ rhs with And/Or/Exists antecedents becomes one rule per disjunct;
//  - equivalences compile both directions where each direction is Horn: the
//    definition→membership direction, plus membership→atomic-conjuncts;
//  - C ≡ D1 ⊔ D2 compiles each disjunct into a membership rule;
//  - anything that would introduce individuals or disjunction on the
//    consequent side is rejected with a diagnostic.
inline RuleProgram compile_tbox(const std::vector<Axiom>& axioms, const std::vector<Rule>& rules) {
    RuleProgram prog;
    prog.axioms = axioms;

    const auto emit = [&prog](const std::string& name, std::vector<std::vector<RuleAtom>> bodies,
                              std::vector<RuleAtom> head) {
        if (head.empty()) return;
        int n = 0;
        for (auto& body : bodies) {
            Rule r;
            r.name = bodies.size() == 1 ? name : name + "#" + std::to_string(n++);
            r.body = std::move(body);
            r.head = head;
            prog.rules.push_back(std::move(r));
        }
    };

    int fresh = 0;
    for (const Axiom& ax : axioms) {
        if (ax.kind == Axiom::Kind::RIA) {
            // r ⊑ r' over roles: r(x,y) -> r'(x,y)
            Rule r;
            r.name = ax.name;
            r.body = {atoms::role_atom(ax.lrole, atoms::var("x"), atoms::var("y"))};
            r.head = {atoms::role_atom(ax.rrole, atoms::var("x"), atoms::var("y"))};
            prog.rules.push_back(std::move(r));
            continue;
        }
        if (ax.kind == Axiom::Kind::GCI) {
            if (ax.rhs->kind == ConceptExpr::Kind::Bottom) continue; // constraint only
            std::vector<RuleAtom> head = detail::translate_consequent(*ax.rhs, "x", false);
            auto bodies = detail::translate_antecedent(*ax.lhs, "x", fresh);
            emit(ax.name, std::move(bodies.alts), std::move(head));
            continue;
        }
        // Equivalence lhs ≡ rhs, both Horn directions.
        // rhs -> lhs (definition to membership)
        {
            std::vector<RuleAtom> head = detail::translate_consequent(*ax.lhs, "x", true);
            if (!head.empty()) {
                auto bodies = detail::translate_antecedent(*ax.rhs, "x", fresh);
                emit(ax.name + ":def", std::move(bodies.alts), std::move(head));
            }
        }
        // lhs -> atomic conjuncts of rhs (membership to conjuncts)
        {
            std::vector<RuleAtom> head = detail::translate_consequent(*ax.rhs, "x", true);
            if (!head.empty()) {
                auto bodies = detail::translate_antecedent(*ax.lhs, "x", fresh);
                emit(ax.name + ":mem", std::move(bodies.alts), std::move(head));
            }
        }
    }

    for (const Rule& r : rules) {
        // safety: consequent variables must occur in the antecedent
        std::set<std::string> bound;
        for (const RuleAtom& a : r.body) {
            if (a.kind == RuleAtom::Kind::Concept && a.a.is_var) bound.insert(a.a.name);
            if (a.kind == RuleAtom::Kind::Role) {
                if (a.a.is_var) bound.insert(a.a.name);
                if (a.b.is_var) bound.insert(a.b.name);
            }
            if (a.kind == RuleAtom::Kind::Data && a.a.is_var) bound.insert(a.a.name);
        }
        for (const RuleAtom& a : r.head) {
            if (a.kind == RuleAtom::Kind::Compare || a.kind == RuleAtom::Kind::Bind ||
                a.kind == RuleAtom::Kind::Data)
                throw CompileError("rule '" + r.name + "': arithmetic atoms may only appear in antecedents");
            if (a.a.is_var && !bound.count(a.a.name))
                throw CompileError("rule '" + r.name + "': consequent variable '" + a.a.name +
                                   "' not bound in antecedent");
            if (a.kind == RuleAtom::Kind::Role && a.b.is_var && !bound.count(a.b.name))
                throw CompileError("rule '" + r.name + "': consequent variable '" + a.b.name +
                                   "' not bound in antecedent");
        }
        prog.rules.push_back(r);
    }
    return prog;
}

// ---------------------------------------------------------------------------
// declared-subsumption closure

// Reflexive-transitive closure of atomic subsumptions declared by the axioms
// (including those implied by definitions' conjunct/disjunct structure).
struct SubsumptionClosure {
    std::vector<std::string> names;
    std::map<std::string, int> index;
    std::vector<std::vector<bool>> reach; // reach[a][b] == a ⊑ b
    std::set<std::string> inconsistent;   // concepts with C ⊑ Bottom

    bool subsumed_by(const std::string& a, const std::string& b) const {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) return a == b;
        return reach[ia->second][ib->second];
    }
};

namespace detail {

inline void atomic_conjuncts(const ConceptExpr& e, std::vector<std::string>& out) {
    if (e.kind == ConceptExpr::Kind::Atomic) out.push_back(e.name);
    else if (e.kind == ConceptExpr::Kind::And)
        for (const ConceptPtr& c : e.children) atomic_conjuncts(*c, out);
}

inline void atomic_disjuncts(const ConceptExpr& e, std::vector<std::string>& out) {
    if (e.kind == ConceptExpr::Kind::Atomic) out.push_back(e.name);
    else if (e.kind == ConceptExpr::Kind::Or)
        for (const ConceptPtr& c : e.children) atomic_disjuncts(*c, out);
}

} // namespace detail

inline SubsumptionClosure subsumption_closure(const std::vector<Axiom>& axioms) {
    std::vector<std::pair<std::string, std::string>> edges; // a ⊑ b
    const auto lhs_to_rhs = [&edges](const ConceptExpr& lhs, const ConceptExpr& rhs) {
        std::vector<std::string> subs, supers;
        detail::atomic_disjuncts(lhs, subs);
        if (lhs.kind == ConceptExpr::Kind::Atomic) subs = {lhs.name};
        detail::atomic_conjuncts(rhs, supers);
        if (rhs.kind == ConceptExpr::Kind::Bottom)
            supers = {"Bottom"};
        for (const std::string& a : subs)
            for (const std::string& b : supers) edges.emplace_back(a, b);
    };
    for (const Axiom& ax : axioms) {
        if (ax.kind == Axiom::Kind::RIA) continue;
        lhs_to_rhs(*ax.lhs, *ax.rhs);
        if (ax.kind == Axiom::Kind::Equivalence) {
            lhs_to_rhs(*ax.rhs, *ax.lhs);
            // C ≡ D1 ⊔ D2: each disjunct is subsumed by C
            if (ax.rhs->kind == ConceptExpr::Kind::Or && ax.lhs->kind == ConceptExpr::Kind::Atomic) {
                std::vector<std::string> ds;
                detail::atomic_disjuncts(*ax.rhs, ds);
                for (const std::string& d : ds) edges.emplace_back(d, ax.lhs->name);
            }
        }
    }

    SubsumptionClosure cl;
    const auto idx = [&cl](const std::string& n) {
        auto it = cl.index.find(n);
        if (it != cl.index.end()) return it->second;
        const int i = static_cast<int>(cl.names.size());
        cl.index[n] = i;
        cl.names.push_back(n);
        return i;
    };
    for (const auto& [a, b] : edges) {
        idx(a);
        idx(b);
    }
    const std::size_t n = cl.names.size();
    cl.reach.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) cl.reach[i][i] = true;
    for (const auto& [a, b] : edges) cl.reach[idx(a)][idx(b)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (!cl.reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (cl.reach[k][j]) cl.reach[i][j] = true;
        }
    auto bot = cl.index.find("Bottom");
    if (bot != cl.index.end()) {
        for (std::size_t i = 0; i < n; ++i)
            if (cl.reach[i][bot->second] && static_cast<int>(i) != bot->second)
                cl.inconsistent.insert(cl.names[i]);
    }
    return cl;
}

// ---------------------------------------------------------------------------
// temporal concepts

inline const std::vector<std::string>& default_temporal_seed() {
    static const std::vector<std::string> t = {"Interval", "Point", "Scene", "Scenario",
                                               "directly_after", "before", "after", "identical_to"};
    return t;
}

namespace detail {

inline void expr_names(const ConceptExpr& e, std::set<std::string>& out) {
    switch (e.kind) {
        case ConceptExpr::Kind::Atomic: out.insert(e.name); break;
        case ConceptExpr::Kind::Exists:
            out.insert(e.name);
            expr_names(*e.children[0], out);
            break;
        case ConceptExpr::Kind::Not: expr_names(*e.children[0], out); break;
        case ConceptExpr::Kind::Nominal:
            for (const std::string& i : e.individuals) out.insert(i);
            break;
        case ConceptExpr::Kind::And:
        case ConceptExpr::Kind::Or:
            for (const ConceptPtr& c : e.children) expr_names(*c, out);
            break;
        default: break;
    }
}

inline std::set<std::string> rule_names(const Rule& r) {
    std::set<std::string> out;
    const auto add_atom = [&out](const RuleAtom& a) {
        if (a.kind == RuleAtom::Kind::Concept || a.kind == RuleAtom::Kind::Role ||
            a.kind == RuleAtom::Kind::Data) {
            if (!a.pred.empty() && a.pred.rfind("critrec:", 0) != 0) out.insert(a.pred);
        }
    };
    for (const RuleAtom& a : r.body) add_atom(a);
    for (const RuleAtom& a : r.head) add_atom(a);
    return out;
}

} // namespace detail

// N_T: all concept/role/attribute names connected to the seed set T through
// chains of axioms/rules sharing at least one name. Extra name groups (e.g.
// augmenter read/write sets) participate as pseudo-axioms.
inline std::set<std::string> temporal_concepts(const std::vector<Axiom>& axioms,
                                               const std::vector<Rule>& rules,
                                               const std::vector<std::string>& seed,
                                               const std::vector<std::set<std::string>>& extra_groups = {}) {
    std::vector<std::set<std::string>> groups;
    for (const Axiom& ax : axioms) {
        std::set<std::string> names;
        if (ax.kind == Axiom::Kind::RIA) {
            names.insert(ax.lrole);
            names.insert(ax.rrole);
        } else {
            detail::expr_names(*ax.lhs, names);
            detail::expr_names(*ax.rhs, names);
        }
        groups.push_back(std::move(names));
    }
    for (const Rule& r : rules) groups.push_back(detail::rule_names(r));
    for (const auto& g : extra_groups) groups.push_back(g);

    std::set<std::string> known(seed.begin(), seed.end());
    std::set<std::string> result;
    std::vector<bool> used(groups.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (used[i]) continue;
            bool touches = false;
            for (const std::string& n : groups[i])
                if (known.count(n)) { touches = true; break; }
            if (!touches) continue;
            used[i] = true;
            changed = true;
            for (const std::string& n : groups[i]) {
                known.insert(n);
                result.insert(n);
            }
        }
    }
    return result;
}

} // namespace critrec::dl
