// Parser for the declarative rules file: vocabulary declarations, axioms
// over the restricted concept-expression fragment, Horn rules with
// arithmetic atoms, and phenomenon bindings. Statements are line-based;
// indented lines continue the previous statement.
//
//   attribute has_speed
//   axiom cp117: CP_117 == Pedestrian_Crossing | Pedestrian_Ford
//   rule heavy_rain: Rain(r), has_precipitation_intensity(r, x),
//       x >= 10, x < 50 -> Heavy_Rain(r)
//   phenomenon 295 "Heavy Rain" exact subject CP_295 detectors cp295 heavy_rain
#pragma once

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "critrec/tbox.hpp"

namespace critrec::dl {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PhenomenonSpec {
    int cp_id = 0;
    std::string name;
    Approximation approx = Approximation::Exact;
    std::string subject_concept;
    std::vector<std::string> object_roles;
    std::vector<int> aliases;
    std::string display_role;       // occurrence subject resolves through this role
    std::string interval_start_attr; // data attrs carrying a scene interval
    std::string interval_end_attr;
    std::vector<std::string> detectors; // rule / axiom / augmenter names
};

struct RulesFile {
    Vocabulary vocab;
    std::vector<Axiom> axioms;
    std::vector<Rule> rules;
    std::vector<PhenomenonSpec> phenomena;
};

namespace parser_detail {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0;
    int line = 0;
};

class Lexer {
public:
    Lexer(const std::string& text, int line) : s_(text), line_(line) { next(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        next();
        return t;
    }
    bool at_end() const { return tok_.kind == Tok::End; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("rules file line " + std::to_string(line_) + ": " + msg);
    }

private:
    void next() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        tok_ = Token{};
        tok_.line = line_;
        if (i_ >= s_.size()) return;
        const char c = s_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i_;
            while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
            tok_ = {Tok::Ident, s_.substr(i_, j - i_), 0, line_};
            i_ = j;
            return;
        }
        const bool neg_number = c == '-' && i_ + 1 < s_.size() &&
                                (std::isdigit(static_cast<unsigned char>(s_[i_ + 1])) || s_[i_ + 1] == '.') &&
                                prev_allows_number_;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) || neg_number) {
            char* end = nullptr;
            const double v = std::strtod(s_.c_str() + i_, &end);
            tok_ = {Tok::Number, s_.substr(i_, end - (s_.c_str() + i_)), v, line_};
            i_ = static_cast<std::size_t>(end - s_.c_str());
            prev_allows_number_ = false;
            return;
        }
        if (c == '"') {
            std::size_t j = i_ + 1;
            while (j < s_.size() && s_[j] != '"') ++j;
            if (j >= s_.size()) fail("unterminated string");
            tok_ = {Tok::String, s_.substr(i_ + 1, j - i_ - 1), 0, line_};
            i_ = j + 1;
            return;
        }
        static const char* two[] = {"->", "==", "<=", ">=", "!="};
        for (const char* t : two) {
            if (s_.compare(i_, 2, t) == 0) {
                tok_ = {Tok::Punct, t, 0, line_};
                i_ += 2;
                prev_allows_number_ = true;
                return;
            }
        }
        tok_ = {Tok::Punct, std::string(1, c), 0, line_};
        ++i_;
        prev_allows_number_ = (c == '(' || c == ',' || c == '<' || c == '>' || c == '=' || c == ':' ||
                               c == '+' || c == '-' || c == '*' || c == '/');
    }

    std::string s_;
    std::size_t i_ = 0;
    int line_;
    Token tok_;
    bool prev_allows_number_ = true;
};

// name categories collected while parsing; resolved into a Vocabulary
struct NameBins {
    std::set<std::string> concepts, roles, attributes, individuals;

    void declare(const std::string& category, const std::string& name, Lexer& lx) {
        if (category == "concept") concepts.insert(name);
        else if (category == "role") roles.insert(name);
        else if (category == "attribute") attributes.insert(name);
        else if (category == "individual") individuals.insert(name);
        else lx.fail("unknown declaration '" + category + "'");
    }
    bool is_attribute(const std::string& n) const { return attributes.count(n) > 0; }
};

class ExprParser {
public:
    ExprParser(Lexer& lx, NameBins& bins) : lx_(lx), bins_(bins) {}

    ConceptPtr parse() { return parse_or(); }

private:
    ConceptPtr parse_or() {
        std::vector<ConceptPtr> xs{parse_and()};
        while (lx_.peek().kind == Tok::Punct && lx_.peek().text == "|") {
            lx_.take();
            xs.push_back(parse_and());
        }
        return xs.size() == 1 ? xs[0] : ce::or_(std::move(xs));
    }
    ConceptPtr parse_and() {
        std::vector<ConceptPtr> xs{parse_unary()};
        while (lx_.peek().kind == Tok::Punct && lx_.peek().text == "&") {
            lx_.take();
            xs.push_back(parse_unary());
        }
        return xs.size() == 1 ? xs[0] : ce::and_(std::move(xs));
    }
    ConceptPtr parse_unary() {
        const Token& t = lx_.peek();
        if (t.kind == Tok::Ident && t.text == "not") {
            lx_.take();
            ConceptPtr c = parse_unary();
            if (c->kind != ConceptExpr::Kind::Atomic) lx_.fail("negation is restricted to atomic concepts");
            return ce::not_(c);
        }
        if (t.kind == Tok::Ident && t.text == "exists") {
            lx_.take();
            const Token role = lx_.take();
            if (role.kind != Tok::Ident) lx_.fail("expected role name after 'exists'");
            if (bins_.is_attribute(role.text)) lx_.fail("'" + role.text + "' is an attribute, not a role");
            bins_.roles.insert(role.text);
            const Token dot = lx_.take();
            if (!(dot.kind == Tok::Punct && dot.text == ".")) lx_.fail("expected '.' in existential restriction");
            return ce::exists(role.text, parse_unary());
        }
        return parse_primary();
    }
    ConceptPtr parse_primary() {
        const Token t = lx_.take();
        if (t.kind == Tok::Punct && t.text == "(") {
            ConceptPtr c = parse_or();
            const Token close = lx_.take();
            if (!(close.kind == Tok::Punct && close.text == ")")) lx_.fail("expected ')'");
            return c;
        }
        if (t.kind == Tok::Punct && t.text == "{") {
            std::vector<std::string> inds;
            while (true) {
                const Token i = lx_.take();
                if (i.kind != Tok::Ident) lx_.fail("expected individual name in nominal");
                bins_.individuals.insert(i.text);
                inds.push_back(i.text);
                const Token sep = lx_.take();
                if (sep.kind == Tok::Punct && sep.text == "}") break;
                if (!(sep.kind == Tok::Punct && sep.text == ",")) lx_.fail("expected ',' or '}' in nominal");
            }
            return ce::nominal(std::move(inds));
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "Top") return ce::top();
            if (t.text == "Bottom") return ce::bottom();
            bins_.concepts.insert(t.text);
            return ce::atomic(t.text);
        }
        lx_.fail("unexpected token '" + t.text + "' in concept expression");
    }

    Lexer& lx_;
    NameBins& bins_;
};

inline Cmp cmp_from(const std::string& s) {
    if (s == "<") return Cmp::Lt;
    if (s == "<=") return Cmp::Le;
    if (s == "=") return Cmp::Eq;
    if (s == "!=") return Cmp::Ne;
    if (s == ">=") return Cmp::Ge;
    if (s == ">") return Cmp::Gt;
    throw ParseError("not a comparator: " + s);
}

} // namespace parser_detail

class RulesParser {
public:
    RulesFile parse(const std::string& text) {
        RulesFile out;
        const std::vector<std::pair<int, std::string>> stmts = split_statements(text);
        for (const auto& [line, stmt] : stmts) parse_statement(stmt, line, out);
        // resolve vocabulary; names seen in several categories fail here
        out.vocab.concepts.insert(bins_.concepts.begin(), bins_.concepts.end());
        out.vocab.roles.insert(bins_.roles.begin(), bins_.roles.end());
        out.vocab.attributes.insert(bins_.attributes.begin(), bins_.attributes.end());
        out.vocab.individuals.insert(bins_.individuals.begin(), bins_.individuals.end());
        out.vocab.check_disjoint();
        return out;
    }

private:
    static std::vector<std::pair<int, std::string>> split_statements(const std::string& text) {
        std::vector<std::pair<int, std::string>> stmts;
        int lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const bool continuation = line[0] == ' ' || line[0] == '\t';
            if (continuation && !stmts.empty()) stmts.back().second += " " + line;
            else stmts.emplace_back(lineno, line);
            if (pos > text.size()) break;
        }
        return stmts;
    }

    void parse_statement(const std::string& stmt, int line, RulesFile& out) {
        parser_detail::Lexer lx(stmt, line);
        const parser_detail::Token head = lx.take();
        if (head.kind != parser_detail::Tok::Ident) lx.fail("expected statement keyword");
        if (head.text == "concept" || head.text == "role" || head.text == "attribute" ||
            head.text == "individual") {
            const parser_detail::Token name = lx.take();
            if (name.kind != parser_detail::Tok::Ident) lx.fail("expected name after declaration");
            bins_.declare(head.text, name.text, lx);
            return;
        }
        if (head.text == "axiom") return parse_axiom(lx, out);
        if (head.text == "ria") return parse_ria(lx, out);
        if (head.text == "rule") return parse_rule(lx, out);
        if (head.text == "phenomenon") return parse_phenomenon(lx, out);
        lx.fail("unknown statement '" + head.text + "'");
    }

    void expect_punct(parser_detail::Lexer& lx, const std::string& p) {
        const parser_detail::Token t = lx.take();
        if (!(t.kind == parser_detail::Tok::Punct && t.text == p)) lx.fail("expected '" + p + "'");
    }

    void parse_axiom(parser_detail::Lexer& lx, RulesFile& out) {
        const parser_detail::Token name = lx.take();
        if (name.kind != parser_detail::Tok::Ident) lx.fail("expected axiom name");
        expect_punct(lx, ":");
        parser_detail::ExprParser ep(lx, bins_);
        ConceptPtr lhs = ep.parse();
        const parser_detail::Token op = lx.take();
        ConceptPtr rhs = ep.parse();
        if (!lx.at_end()) lx.fail("trailing tokens after axiom");
        if (op.text == "==") out.axioms.push_back(equivalence(name.text, lhs, rhs));
        else if (op.text == "<=") out.axioms.push_back(gci(name.text, lhs, rhs, Approximation::Over));
        else if (op.text == ">=") out.axioms.push_back(gci(name.text, rhs, lhs, Approximation::Under));
        else lx.fail("expected '==', '<=' or '>=' between axiom sides");
    }

    void parse_ria(parser_detail::Lexer& lx, RulesFile& out) {
        const parser_detail::Token name = lx.take();
        expect_punct(lx, ":");
        const parser_detail::Token a = lx.take();
        const parser_detail::Token op = lx.take();
        const parser_detail::Token b = lx.take();
        if (a.kind != parser_detail::Tok::Ident || b.kind != parser_detail::Tok::Ident)
            lx.fail("expected role names in role inclusion");
        bins_.roles.insert(a.text);
        bins_.roles.insert(b.text);
        const auto make = [&](const std::string& sub, const std::string& sup, const std::string& n) {
            Axiom ax;
            ax.kind = Axiom::Kind::RIA;
            ax.name = n;
            ax.lrole = sub;
            ax.rrole = sup;
            out.axioms.push_back(ax);
        };
        if (op.text == "<=") make(a.text, b.text, name.text);
        else if (op.text == "==") {
            make(a.text, b.text, name.text + ":fwd");
            make(b.text, a.text, name.text + ":bwd");
        } else lx.fail("expected '<=' or '==' in role inclusion");
    }

    // term in a rule atom position
    dl::Term parse_ind_term(const parser_detail::Token& t, parser_detail::Lexer& lx) {
        if (t.kind != parser_detail::Tok::Ident) lx.fail("expected variable or individual");
        if (bins_.individuals.count(t.text)) return atoms::ind(t.text);
        return atoms::var(t.text);
    }

    void parse_rule(parser_detail::Lexer& lx, RulesFile& out) {
        const parser_detail::Token name = lx.take();
        if (name.kind != parser_detail::Tok::Ident) lx.fail("expected rule name");
        expect_punct(lx, ":");
        Rule r;
        r.name = name.text;
        bool in_head = false;
        while (!lx.at_end()) {
            (in_head ? r.head : r.body).push_back(parse_atom(lx));
            if (lx.at_end()) break;
            const parser_detail::Token sep = lx.take();
            if (sep.kind == parser_detail::Tok::Punct && sep.text == ",") continue;
            if (sep.kind == parser_detail::Tok::Punct && sep.text == "->") {
                if (in_head) lx.fail("duplicate '->'");
                in_head = true;
                continue;
            }
            lx.fail("expected ',' or '->' between atoms");
        }
        if (!in_head || r.head.empty()) lx.fail("rule '" + r.name + "' has no consequent");
        out.rules.push_back(std::move(r));
    }

    RuleAtom parse_atom(parser_detail::Lexer& lx) {
        const parser_detail::Token first = lx.take();
        // predicate atom: Name(t) or Name(t, u)
        if (first.kind == parser_detail::Tok::Ident && lx.peek().kind == parser_detail::Tok::Punct &&
            lx.peek().text == "(") {
            lx.take();
            const parser_detail::Token t1 = lx.take();
            const parser_detail::Token sep = lx.take();
            if (sep.kind == parser_detail::Tok::Punct && sep.text == ")") {
                bins_.concepts.insert(first.text);
                return atoms::concept_atom(first.text, parse_ind_term(t1, lx));
            }
            if (!(sep.kind == parser_detail::Tok::Punct && sep.text == ",")) lx.fail("expected ',' or ')'");
            const parser_detail::Token t2 = lx.take();
            expect_punct(lx, ")");
            if (bins_.is_attribute(first.text)) {
                NumTerm v = t2.kind == parser_detail::Tok::Number ? atoms::nconst(t2.number)
                                                                  : atoms::nvar(t2.text);
                return atoms::data_atom(first.text, parse_ind_term(t1, lx), v);
            }
            bins_.roles.insert(first.text);
            return atoms::role_atom(first.text, parse_ind_term(t1, lx), parse_ind_term(t2, lx));
        }
        // arithmetic: x ~ y  |  x = y op z
        const auto num_term = [&](const parser_detail::Token& t) {
            if (t.kind == parser_detail::Tok::Number) return atoms::nconst(t.number);
            if (t.kind != parser_detail::Tok::Ident) lx.fail("expected numeric term");
            return atoms::nvar(t.text);
        };
        const NumTerm x = num_term(first);
        const parser_detail::Token op = lx.take();
        if (op.kind != parser_detail::Tok::Punct) lx.fail("expected comparator");
        const parser_detail::Token second = lx.take();
        const NumTerm y = num_term(second);
        if (op.text == "=" && lx.peek().kind == parser_detail::Tok::Punct &&
            (lx.peek().text == "+" || lx.peek().text == "-" || lx.peek().text == "*" ||
             lx.peek().text == "/")) {
            const parser_detail::Token bop = lx.take();
            const NumTerm z = num_term(lx.take());
            BinOp b = BinOp::Add;
            if (bop.text == "-") b = BinOp::Sub;
            else if (bop.text == "*") b = BinOp::Mul;
            else if (bop.text == "/") b = BinOp::Div;
            return atoms::bind_atom(x, y, b, z);
        }
        return atoms::compare_atom(x, parser_detail::cmp_from(op.text), y);
    }

    void parse_phenomenon(parser_detail::Lexer& lx, RulesFile& out) {
        PhenomenonSpec p;
        const parser_detail::Token id = lx.take();
        if (id.kind != parser_detail::Tok::Number) lx.fail("expected phenomenon id");
        p.cp_id = static_cast<int>(id.number);
        const parser_detail::Token nm = lx.take();
        if (nm.kind != parser_detail::Tok::String) lx.fail("expected quoted phenomenon name");
        p.name = nm.text;
        const parser_detail::Token ap = lx.take();
        if (ap.text == "exact") p.approx = Approximation::Exact;
        else if (ap.text == "under") p.approx = Approximation::Under;
        else if (ap.text == "over") p.approx = Approximation::Over;
        else lx.fail("expected exact|under|over");
        std::string section;
        while (!lx.at_end()) {
            const parser_detail::Token t = lx.take();
            if (t.kind == parser_detail::Tok::Ident &&
                (t.text == "subject" || t.text == "objects" || t.text == "aliases" ||
                 t.text == "display" || t.text == "interval" || t.text == "detectors")) {
                section = t.text;
                continue;
            }
            if (section == "subject" && t.kind == parser_detail::Tok::Ident) {
                p.subject_concept = t.text;
                bins_.concepts.insert(t.text);
            } else if (section == "objects" && t.kind == parser_detail::Tok::Ident) {
                p.object_roles.push_back(t.text);
                bins_.roles.insert(t.text);
            } else if (section == "aliases" && t.kind == parser_detail::Tok::Number) {
                p.aliases.push_back(static_cast<int>(t.number));
            } else if (section == "display" && t.kind == parser_detail::Tok::Ident) {
                p.display_role = t.text;
                bins_.roles.insert(t.text);
            } else if (section == "interval" && t.kind == parser_detail::Tok::Ident) {
                if (p.interval_start_attr.empty()) p.interval_start_attr = t.text;
                else p.interval_end_attr = t.text;
                bins_.attributes.insert(t.text);
            } else if (section == "detectors" && t.kind == parser_detail::Tok::Ident) {
                p.detectors.push_back(t.text);
            } else {
                lx.fail("unexpected token '" + t.text + "' in phenomenon block");
            }
        }
        if (p.subject_concept.empty()) lx.fail("phenomenon " + std::to_string(p.cp_id) + " needs a subject");
        if (p.detectors.empty()) lx.fail("phenomenon " + std::to_string(p.cp_id) + " needs detectors");
        out.phenomena.push_back(std::move(p));
    }

    parser_detail::NameBins bins_;
};

// ${name} substitution for threshold templating.
inline std::string substitute_placeholders(const std::string& text,
                                           const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '$' && i + 1 < text.size() && text[i + 1] == '{') {
            const std::size_t close = text.find('}', i + 2);
            if (close == std::string::npos) throw ParseError("unterminated ${...} placeholder");
            const std::string key = text.substr(i + 2, close - i - 2);
            auto it = values.find(key);
            if (it == values.end()) throw ParseError("unknown placeholder '${" + key + "}'");
            out += it->second;
            i = close + 1;
        } else {
            out += text[i++];
        }
    }
    return out;
}

} // namespace critrec::dl
