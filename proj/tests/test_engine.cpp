#include <doctest.h>

#include <algorithm>
#include <random>

#include "critrec/engine.hpp"
#include "critrec/rules_parser.hpp"
#include "oracles.hpp"

using namespace critrec::dl;

namespace {

RuleProgram parse_program(const std::string& text) {
    RulesParser p;
    RulesFile f = p.parse(text);
    return compile_tbox(f.axioms, f.rules);
}

} // namespace

TEST_CASE("materialize derives through a definition") {
    // Human(h), rides(h,b), Bicycle(b) |- Bicyclist(h)
    const RuleProgram prog =
        parse_program("axiom def: Bicyclist == Human & exists rides . Bicycle\n");
    SymbolTable syms;
    ABox abox;
    const int h = syms.individual_id("h");
    const int b = syms.individual_id("b");
    abox.add_concept(syms.concept_id("Human"), h);
    abox.add_role(syms.role_id("rides"), h, b);
    abox.add_concept(syms.concept_id("Bicycle"), b);
    EngineStats st;
    materialize(syms, prog, abox, st);
    CHECK(abox.has_concept(syms.concept_id("Bicyclist"), h));
    CHECK(!abox.has_concept(syms.concept_id("Bicyclist"), b));
}

TEST_CASE("empty rule set leaves the abox unchanged") {
    SymbolTable syms;
    ABox abox;
    abox.add_concept(syms.concept_id("A"), syms.individual_id("x"));
    const std::size_t before = abox.size();
    RuleProgram empty;
    EngineStats st;
    CHECK(materialize(syms, empty, abox, st) == 0);
    CHECK(abox.size() == before);
}

TEST_CASE("monotonicity: input assertions are preserved") {
    const RuleProgram prog = parse_program("rule r: A(x), p(x, y) -> B(y)\n");
    SymbolTable syms;
    ABox abox;
    abox.add_concept(syms.concept_id("A"), syms.individual_id("i"));
    abox.add_role(syms.role_id("p"), syms.individual_id("i"), syms.individual_id("j"));
    const ABox before = abox;
    EngineStats st;
    materialize(syms, prog, abox, st);
    for (const ConceptFact& f : before.concepts()) CHECK(abox.has_concept(f.cls, f.ind));
    for (const RoleFact& f : before.roles()) CHECK(abox.has_role(f.role, f.sub, f.obj));
    CHECK(abox.has_concept(syms.concept_id("B"), syms.individual_id("j")));
}

TEST_CASE("division by zero produces no match and is logged") {
    const RuleProgram prog = parse_program(
        "attribute has_speed\n"
        "attribute has_len\n"
        "rule r: has_len(x, l), has_speed(x, s), t = l / s, t < 100 -> Quick(x)\n");
    SymbolTable syms;
    ABox abox;
    const int i = syms.individual_id("i");
    abox.add_data(syms.attr_id("has_len"), i, 10.0);
    abox.add_data(syms.attr_id("has_speed"), i, 0.0);
    const int j = syms.individual_id("j");
    abox.add_data(syms.attr_id("has_len"), j, 10.0);
    abox.add_data(syms.attr_id("has_speed"), j, 2.0);
    EngineStats st;
    materialize(syms, prog, abox, st);
    CHECK(!abox.has_concept(syms.concept_id("Quick"), i));
    CHECK(abox.has_concept(syms.concept_id("Quick"), j));
    CHECK(st.binding_failures > 0);
    REQUIRE(!st.warnings.empty());
    CHECK(st.warnings[0].find("division by zero") != std::string::npos);
}

TEST_CASE("chained derivations reach the fixpoint") {
    const RuleProgram prog = parse_program(
        "rule r1: A(x) -> B(x)\n"
        "rule r2: B(x) -> C(x)\n"
        "rule r3: C(x), p(x, y) -> A(y)\n");
    SymbolTable syms;
    ABox abox;
    const int a = syms.individual_id("a");
    const int b = syms.individual_id("b");
    const int c = syms.individual_id("c");
    abox.add_concept(syms.concept_id("A"), a);
    abox.add_role(syms.role_id("p"), a, b);
    abox.add_role(syms.role_id("p"), b, c);
    EngineStats st;
    materialize(syms, prog, abox, st);
    for (const int i : {a, b, c}) {
        CHECK(abox.has_concept(syms.concept_id("A"), i));
        CHECK(abox.has_concept(syms.concept_id("B"), i));
        CHECK(abox.has_concept(syms.concept_id("C"), i));
    }
}

namespace {

// random program + random abox; used for the oracle and determinism checks
struct RandomCase {
    std::string text;
    std::vector<std::tuple<std::string, std::string>> concept_facts;
    std::vector<std::tuple<std::string, std::string, std::string>> role_facts;
    std::vector<std::tuple<std::string, std::string, double>> data_facts;
};

RandomCase random_case(oracle::Rng& rng) {
    RandomCase rc;
    const std::vector<std::string> concepts = {"A", "B", "C", "D"};
    const std::vector<std::string> roles = {"p", "q"};
    const std::vector<std::string> inds = {"i0", "i1", "i2", "i3", "i4"};
    rc.text = "attribute val\n";
    const int n_rules = rng.uniform_int(2, 5);
    for (int r = 0; r < n_rules; ++r) {
        std::string body;
        const int n_atoms = rng.uniform_int(1, 3);
        std::vector<std::string> vars;
        for (int a = 0; a < n_atoms; ++a) {
            const std::string v = "v" + std::to_string(a);
            vars.push_back(v);
            if (!body.empty()) body += ", ";
            if (rng.uniform_int(0, 2) == 0 && a > 0)
                body += roles[rng.uniform_int(0, 1)] + "(" + vars[rng.uniform_int(0, a - 1)] + ", " + v + ")";
            else
                body += concepts[rng.uniform_int(0, 3)] + "(" + v + ")";
        }
        if (rng.uniform_int(0, 2) == 0) {
            body += ", val(" + vars[rng.uniform_int(0, n_atoms - 1)] + ", x), x >= " +
                    std::to_string(rng.uniform_int(0, 5));
        }
        std::string head;
        if (rng.uniform_int(0, 3) == 0) // role-producing consequent
            head = roles[rng.uniform_int(0, 1)] + "(" + vars[rng.uniform_int(0, n_atoms - 1)] +
                   ", " + vars[rng.uniform_int(0, n_atoms - 1)] + ")";
        else
            head = concepts[rng.uniform_int(0, 3)] + "(" + vars[rng.uniform_int(0, n_atoms - 1)] + ")";
        rc.text += "rule r" + std::to_string(r) + ": " + body + " -> " + head + "\n";
    }
    const int n_facts = rng.uniform_int(3, 12);
    for (int f = 0; f < n_facts; ++f) {
        const int kind = rng.uniform_int(0, 2);
        if (kind == 0)
            rc.concept_facts.push_back({concepts[rng.uniform_int(0, 3)], inds[rng.uniform_int(0, 4)]});
        else if (kind == 1)
            rc.role_facts.push_back(
                {roles[rng.uniform_int(0, 1)], inds[rng.uniform_int(0, 4)], inds[rng.uniform_int(0, 4)]});
        else
            rc.data_facts.push_back(
                {"val", inds[rng.uniform_int(0, 4)], static_cast<double>(rng.uniform_int(0, 8))});
    }
    return rc;
}

void load_facts(const RandomCase& rc, SymbolTable& syms, ABox& abox) {
    for (const auto& [c, i] : rc.concept_facts)
        abox.add_concept(syms.concept_id(c), syms.individual_id(i));
    for (const auto& [r, a, b] : rc.role_facts)
        abox.add_role(syms.role_id(r), syms.individual_id(a), syms.individual_id(b));
    for (const auto& [d, i, v] : rc.data_facts)
        abox.add_data(syms.attr_id(d), syms.individual_id(i), v);
}

} // namespace

TEST_CASE("random programs equal the naive iterate-until-stable oracle") {
    oracle::Rng rng(101);
    for (int it = 0; it < 150; ++it) {
        const RandomCase rc = random_case(rng);
        SymbolTable syms;
        RulesParser parser;
        RulesFile file = parser.parse(rc.text);
        const RuleProgram prog = compile_tbox(file.axioms, file.rules);
        ABox abox;
        load_facts(rc, syms, abox);
        EngineStats st;
        materialize(syms, prog, abox, st);

        SymbolTable syms2 = syms; // same interning
        ABox abox2;
        load_facts(rc, syms2, abox2);
        oracle::NaiveEvaluator naive(syms2, prog);
        const oracle::NaiveFacts expected = naive.run(abox2);

        const oracle::NaiveFacts got = oracle::NaiveFacts::from(abox);
        CHECK(got.concepts == expected.concepts);
        CHECK(got.roles == expected.roles);
        CHECK(got.data == expected.data);
    }
}

namespace {

// name-level fact set; robust against different interning orders
std::set<std::string> fact_strings(const SymbolTable& syms, const ABox& abox) {
    std::set<std::string> out;
    for (const ConceptFact& f : abox.concepts())
        out.insert(syms.concept_name(f.cls) + "(" + syms.individual_name(f.ind) + ")");
    for (const RoleFact& f : abox.roles())
        out.insert(syms.role_name(f.role) + "(" + syms.individual_name(f.sub) + "," +
                   syms.individual_name(f.obj) + ")");
    for (const DataFact& f : abox.data())
        out.insert(syms.attr_name(f.attr) + "(" + syms.individual_name(f.ind) + "," +
                   std::to_string(f.value) + ")");
    return out;
}

} // namespace

TEST_CASE("result is independent of rule ordering") {
    oracle::Rng rng(202);
    for (int it = 0; it < 30; ++it) {
        const RandomCase rc = random_case(rng);
        RulesParser parser;
        RulesFile file = parser.parse(rc.text);

        SymbolTable syms1;
        ABox a1;
        load_facts(rc, syms1, a1);
        EngineStats st1;
        materialize(syms1, compile_tbox(file.axioms, file.rules), a1, st1);

        std::vector<Rule> shuffled = file.rules;
        std::mt19937 urbg(7 + it);
        std::shuffle(shuffled.begin(), shuffled.end(), urbg);
        SymbolTable syms2;
        ABox a2;
        load_facts(rc, syms2, a2);
        materialize(syms2, compile_tbox(file.axioms, shuffled), a2, st1);

        CHECK(fact_strings(syms1, a1) == fact_strings(syms2, a2));
    }
}

TEST_CASE("assertion budget guards against runaway growth") {
    const RuleProgram prog = parse_program("rule r: p(x, y) -> p(y, x), A(x)\n");
    SymbolTable syms;
    ABox abox;
    for (int i = 0; i < 40; ++i)
        abox.add_role(syms.role_id("p"), syms.individual_id("i" + std::to_string(i)),
                      syms.individual_id("i" + std::to_string((i + 1) % 40)));
    EngineStats st;
    Engine tiny(syms, prog, 50);
    CHECK_THROWS_AS(tiny.materialize(abox, st), InferenceError);
}

TEST_CASE("nominal antecedents bind the named individual") {
    const RuleProgram prog = parse_program("axiom a: Special >= Thing & {the_one}\n");
    SymbolTable syms;
    ABox abox;
    abox.add_concept(syms.concept_id("Thing"), syms.individual_id("the_one"));
    abox.add_concept(syms.concept_id("Thing"), syms.individual_id("other"));
    EngineStats st;
    materialize(syms, prog, abox, st);
    CHECK(abox.has_concept(syms.concept_id("Special"), syms.individual_id("the_one")));
    CHECK(!abox.has_concept(syms.concept_id("Special"), syms.individual_id("other")));
}
