#include "mocheck/query.hpp"

#include "mocheck/error.hpp"
#include "mocheck/model_io.hpp"
#include "mocheck/multiobj_lp.hpp"
#include "mocheck/problem.hpp"
#include "mocheck/product.hpp"
#include "mocheck/qualitative.hpp"
#include "mocheck/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <regex>
#include <sstream>

namespace mocheck {

std::size_t PropertySet::add(std::string name, RabinAutomaton automaton) {
    if (find(name)) throw ArgumentError("property '" + name + "' declared twice");
    names.push_back(std::move(name));
    automata.push_back(std::move(automaton));
    return names.size() - 1;
}

void PropertySet::set_complement(const std::string& name, RabinAutomaton automaton) {
    if (complement.count(name)) throw ArgumentError("complement of '" + name + "' declared twice");
    complement[name] = add("~" + name, std::move(automaton));
}

std::optional<std::size_t> PropertySet::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    return std::nullopt;
}

const char* to_string(QueryComparison comparison) {
    switch (comparison) {
        case QueryComparison::Geq: return ">=";
        case QueryComparison::Gt: return ">";
        case QueryComparison::Leq: return "<=";
        case QueryComparison::Lt: return "<";
        case QueryComparison::Eq: return "=";
        case QueryComparison::Neq: return "!=";
    }
    return "?";
}

std::string Query::to_string() const {
    switch (kind) {
        case Kind::Atom:
            return "Pr(" + atom.property + ") " + mocheck::to_string(atom.comparison) + " " + mocheck::to_string(atom.bound);
        case Kind::Not:
            return "!(" + children[0].to_string() + ")";
        case Kind::And:
        case Kind::Or: {
            std::string out = "(";
            for (std::size_t i = 0; i < children.size(); ++i) {
                if (i) out += kind == Kind::And ? " & " : " | ";
                out += children[i].to_string();
            }
            return out + ")";
        }
    }
    return {};
}

namespace {

class QueryParser {
public:
    QueryParser(std::string_view text, const std::vector<std::string>& known) : text_(text), known_(known) {}

    Query parse() {
        Query q = parse_or();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return q;
    }

private:
    std::string_view text_;
    const std::vector<std::string>& known_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& message) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(message, line, column);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_).starts_with(token)) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    Query parse_or() {
        Query first = parse_and();
        if (!peek_binary('|')) return first;
        Query q;
        q.kind = Query::Kind::Or;
        q.children.push_back(std::move(first));
        while (accept("|")) q.children.push_back(parse_and());
        return q;
    }

    Query parse_and() {
        Query first = parse_unary();
        if (!peek_binary('&')) return first;
        Query q;
        q.kind = Query::Kind::And;
        q.children.push_back(std::move(first));
        while (accept("&")) q.children.push_back(parse_unary());
        return q;
    }

    bool peek_binary(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    Query parse_unary() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '!' && !text_.substr(pos_).starts_with("!=")) {
            ++pos_;
            Query q;
            q.kind = Query::Kind::Not;
            q.children.push_back(parse_unary());
            return q;
        }
        if (accept("(")) {
            Query q = parse_or();
            expect(")");
            return q;
        }
        if (accept("Pr(")) return parse_atom();
        fail(pos_ == text_.size() ? "unexpected end of query" : "expected 'Pr(', '(' or '!'");
    }

    Query parse_atom() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.' ||
                text_[pos_] == '-' || text_[pos_] == '\'')) {
            ++pos_;
        }
        std::string name(text_.substr(start, pos_ - start));
        if (name.empty()) fail("expected a property name");
        if (!known_.empty() && std::find(known_.begin(), known_.end(), name) == known_.end()) {
            pos_ = start;
            fail("unknown property '" + name + "'");
        }
        expect(")");
        Query q;
        q.atom.property = name;
        if (accept(">=")) {
            q.atom.comparison = QueryComparison::Geq;
        } else if (accept("<=")) {
            q.atom.comparison = QueryComparison::Leq;
        } else if (accept("!=")) {
            q.atom.comparison = QueryComparison::Neq;
        } else if (accept(">")) {
            q.atom.comparison = QueryComparison::Gt;
        } else if (accept("<")) {
            q.atom.comparison = QueryComparison::Lt;
        } else if (accept("=")) {
            q.atom.comparison = QueryComparison::Eq;
        } else {
            fail("expected a comparison operator");
        }
        skip_space();
        start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                       text_[pos_] == '/' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
                                       ((text_[pos_] == '-' || text_[pos_] == '+') && pos_ > start &&
                                        (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
            ++pos_;
        }
        if (start == pos_) fail("expected a probability bound");
        std::string number(text_.substr(start, pos_ - start));
        try {
            q.atom.bound = parse_rational(number);
        } catch (const ParseError& e) {
            pos_ = start;
            fail(e.what());
        }
        if (q.atom.bound < 0 || q.atom.bound > 1) {
            pos_ = start;
            fail("bound " + number + " outside [0,1]");
        }
        return q;
    }
};

using Conjunct = std::vector<Bound>;  // sorted by property
using Dnf = std::vector<Conjunct>;    // {} = false, {{}} = true

QueryComparison negate(QueryComparison c) {
    switch (c) {
        case QueryComparison::Geq: return QueryComparison::Lt;
        case QueryComparison::Gt: return QueryComparison::Leq;
        case QueryComparison::Leq: return QueryComparison::Gt;
        case QueryComparison::Lt: return QueryComparison::Geq;
        case QueryComparison::Eq: return QueryComparison::Neq;
        case QueryComparison::Neq: return QueryComparison::Eq;
    }
    return c;
}

// Conjunction of two simplified conjuncts; nullopt when unsatisfiable.
std::optional<Conjunct> conjoin(const Conjunct& a, const Conjunct& b) {
    std::map<std::size_t, std::pair<std::optional<Rational>, std::optional<Rational>>> by_property;
    for (const auto* c : {&a, &b}) {
        for (const auto& bound : *c) {
            auto& slot = bound.strict ? by_property[bound.property].second : by_property[bound.property].first;
            if (!slot || *slot < bound.value) slot = bound.value;
        }
    }
    Conjunct out;
    for (const auto& [p, pair] : by_property) {
        const auto& [geq, gt] = pair;
        if (gt && *gt >= 1) return std::nullopt;
        if (gt && (!geq || *gt >= *geq)) {
            out.push_back({p, *gt, true});
        } else if (geq && *geq > 0) {
            out.push_back({p, *geq, false});
        }
    }
    return out;
}

class Normalizer {
public:
    Normalizer(const PropertySet& properties, std::size_t cap) : properties_(properties), cap_(cap) {}

    NormalizedQuery run(const Query& query) {
        NormalizedQuery out;
        for (auto& c : dnf(query, false)) out.disjuncts.push_back({std::move(c)});
        out.complements = std::move(complements_);
        return out;
    }

private:
    const PropertySet& properties_;
    std::size_t cap_;
    std::set<std::string> complements_;

    void check(const Dnf& d) const {
        if (d.size() > cap_) throw ArgumentError("query normal form exceeds " + std::to_string(cap_) + " disjuncts");
    }

    Dnf conj(const Dnf& a, const Dnf& b) const {
        Dnf out;
        for (const auto& x : a) {
            for (const auto& y : b) {
                if (auto c = conjoin(x, y)) {
                    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(std::move(*c));
                    check(out);
                }
            }
        }
        return out;
    }

    Dnf disj(Dnf a, const Dnf& b) const {
        for (const auto& c : b) {
            if (std::find(a.begin(), a.end(), c) == a.end()) a.push_back(c);
        }
        check(a);
        return a;
    }

    std::size_t property(const std::string& name) const {
        auto p = properties_.find(name);
        if (!p) throw ArgumentError("unknown property '" + name + "'");
        return *p;
    }

    std::size_t complement(const std::string& name) {
        property(name);
        auto it = properties_.complement.find(name);
        if (it == properties_.complement.end()) {
            throw ArgumentError("upper bound on property '" + name + "' requires a declared complement");
        }
        complements_.insert(name);
        return it->second;
    }

    Dnf lower(std::size_t p, const Rational& value, bool strict) const {
        if (auto c = conjoin({}, {{p, value, strict}})) return {*c};
        return {};
    }

    Dnf atom(const Predicate& a, QueryComparison c) {
        switch (c) {
            case QueryComparison::Geq: return lower(property(a.property), a.bound, false);
            case QueryComparison::Gt: return lower(property(a.property), a.bound, true);
            case QueryComparison::Leq: return lower(complement(a.property), 1 - a.bound, false);
            case QueryComparison::Lt: return lower(complement(a.property), 1 - a.bound, true);
            case QueryComparison::Eq: return conj(atom(a, QueryComparison::Geq), atom(a, QueryComparison::Leq));
            case QueryComparison::Neq: return disj(atom(a, QueryComparison::Lt), atom(a, QueryComparison::Gt));
        }
        return {};
    }

    Dnf dnf(const Query& q, bool negated) {
        switch (q.kind) {
            case Query::Kind::Atom:
                return atom(q.atom, negated ? negate(q.atom.comparison) : q.atom.comparison);
            case Query::Kind::Not:
                return dnf(q.children.at(0), !negated);
            case Query::Kind::And:
            case Query::Kind::Or: {
                bool conjunction = (q.kind == Query::Kind::And) != negated;
                Dnf acc = conjunction ? Dnf{Conjunct{}} : Dnf{};
                for (const auto& child : q.children) {
                    Dnf d = dnf(child, negated);
                    acc = conjunction ? conj(acc, d) : disj(std::move(acc), d);
                }
                return acc;
            }
        }
        return {};
    }
};

}  // namespace

Query parse_query(std::string_view text, const std::vector<std::string>& known) {
    return QueryParser(text, known).parse();
}

bool Disjunct::qualitative() const {
    return std::all_of(bounds.begin(), bounds.end(), [](const Bound& b) {
        return (b.strict && b.value == 0) || (!b.strict && b.value == 1);
    });
}

NormalizedQuery normalize(const Query& query, const PropertySet& properties, std::size_t cap) {
    return Normalizer(properties, cap).run(query);
}

OmegaAchievability decide_omega_achievability(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                              const std::vector<Rational>& bounds, const std::vector<bool>& strict) {
    if (bounds.size() != automata.size()) throw ArgumentError("one bound per property is required");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < automata.size(); ++i) names.push_back("phi" + std::to_string(i + 1));
    ReachProblem problem = omega_problem(mdp, automata, std::move(names));
    AchievabilityResult r = decide_extended_achievability(problem.lp, bounds, strict);
    OmegaAchievability out;
    out.achievable = r.achievable;
    out.slack = r.slack;
    out.lp_values = r.values;
    if (r.achievable) out.strategy = problem.lift(*r.strategy);
    return out;
}

namespace {

QueryResult evaluate_normalized(const Mdp& mdp, const PropertySet& properties, NormalizedQuery normalized,
                                const EvaluateOptions& options) {
    QueryResult result;
    result.normalized = std::move(normalized);
    const auto& disjuncts = result.normalized.disjuncts;
    for (std::size_t d = 0; d < disjuncts.size(); ++d) {
        const Disjunct& disjunct = disjuncts[d];
        std::vector<std::size_t> used;
        std::vector<RabinAutomaton> sub;
        for (const auto& b : disjunct.bounds) {
            used.push_back(b.property);
            sub.push_back(properties.automata.at(b.property));
        }
        std::optional<FiniteMemoryStrategy> strategy;
        std::string route;
        if (used.empty()) {
            route = "trivial";
            strategy = FiniteMemoryStrategy::from_memoryless(MemorylessStrategy::first_action(mdp));
        } else if (disjunct.qualitative() && !options.force_quantitative) {
            route = "qualitative";
            QualitativeQuery q;
            for (std::size_t i = 0; i < disjunct.bounds.size(); ++i) {
                (disjunct.bounds[i].strict ? q.positive : q.sure).push_back(i);
            }
            QualitativeResult r = decide_qualitative(mdp, sub, q);
            if (r.satisfiable) strategy = std::move(r.strategy);
        } else {
            route = "quantitative";
            std::vector<Rational> values;
            std::vector<bool> strict;
            for (const auto& b : disjunct.bounds) {
                values.push_back(b.value);
                strict.push_back(b.strict);
            }
            OmegaAchievability r = decide_omega_achievability(mdp, sub, values, strict);
            if (r.achievable) strategy = std::move(r.strategy);
        }
        if (!strategy) continue;
        std::vector<Rational> actual = sub.empty() ? std::vector<Rational>{} : omega_regular_probabilities(mdp, *strategy, sub);
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const Bound& b = disjunct.bounds[i];
            if (b.strict ? !(actual[i] > b.value) : !(actual[i] >= b.value)) {
                throw Error("witness strategy for disjunct " + std::to_string(d + 1) + " fails validation on property '" +
                            properties.names[b.property] + "'");
            }
        }
        result.satisfiable = true;
        result.disjunct = d;
        result.route = route;
        result.used = std::move(used);
        result.strategy = std::move(strategy);
        result.values = std::move(actual);
        return result;
    }
    return result;
}

}  // namespace

QueryResult evaluate(const Mdp& mdp, const PropertySet& properties, const Query& query, const EvaluateOptions& options) {
    return evaluate_normalized(mdp, properties, normalize(query, properties, options.cap), options);
}

UniversalResult evaluate_universal(const Mdp& mdp, const PropertySet& properties, const Query& query,
                                   const EvaluateOptions& options) {
    Query negated;
    negated.kind = Query::Kind::Not;
    negated.children.push_back(query);
    UniversalResult out;
    out.counterexample = evaluate(mdp, properties, negated, options);
    out.holds = !out.counterexample.satisfiable;
    return out;
}

AssumeGuaranteeResult check_assume_guarantee(const Mdp& mdp, const PropertySet& properties, const std::string& phi1,
                                             const Rational& r1, const std::string& phi2, const Rational& r2) {
    auto p1 = properties.find(phi1);
    auto p2 = properties.find(phi2);
    if (!p1) throw ArgumentError("unknown property '" + phi1 + "'");
    if (!p2) throw ArgumentError("unknown property '" + phi2 + "'");
    if (!properties.complement.count(phi2)) {
        throw ArgumentError("assume-guarantee check requires a declared complement of '" + phi2 + "'");
    }
    AssumeGuaranteeResult out;
    if (r2 == 0) {
        out.holds = true;
        return out;
    }
    Query q;
    q.kind = Query::Kind::And;
    Query a;
    a.atom = {phi1, QueryComparison::Geq, r1};
    Query b;
    b.atom = {phi2, QueryComparison::Lt, r2};
    q.children = {a, b};
    QueryResult r = evaluate(mdp, properties, q);
    out.holds = !r.satisfiable;
    if (r.satisfiable) {
        out.strategy = r.strategy;
        out.values = omega_regular_probabilities(mdp, *r.strategy, {properties.automata[*p1], properties.automata[*p2]});
    }
    return out;
}

QueryFile parse_query_file(std::string_view text, const std::string& base_dir) {
    static const std::regex binding(R"re(^\s*(prop|complement)\s+([A-Za-z0-9_.'-]+)\s*=\s*(reach|avoid|buchi|automaton)\s+"([^"]*)"\s*$)re");
    QueryFile file;
    std::vector<std::pair<std::string, std::size_t>> complements;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t number = 0;
    std::size_t query_line = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string trimmed = line.substr(0, line.find('#'));
        if (trimmed.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::smatch m;
        if (std::regex_match(trimmed, m, binding)) {
            if (query_line) throw ParseError("declarations must precede the query", number, 1);
            RabinAutomaton automaton = [&] {
                std::string kind = m[3], arg = m[4];
                if (kind == "reach") return reach_automaton(arg);
                if (kind == "avoid") return avoid_automaton(arg);
                if (kind == "buchi") return buchi_automaton(arg);
                std::filesystem::path path(arg);
                if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
                try {
                    return parse_automaton(read_file(path.string()));
                } catch (const ParseError& e) {
                    throw ParseError(path.string() + ": " + e.what(), number, 1);
                }
            }();
            try {
                if (m[1] == "prop") {
                    file.properties.add(m[2], std::move(automaton));
                } else {
                    complements.emplace_back(m[2], number);
                    file.properties.set_complement(m[2], std::move(automaton));
                }
            } catch (const ArgumentError& e) {
                throw ParseError(e.what(), number, 1);
            }
            continue;
        }
        if (trimmed.find_first_not_of(" \t\r") != std::string::npos && trimmed.rfind("prop", 0) == 0) {
            throw ParseError("malformed property declaration", number, 1);
        }
        if (!query_line) query_line = number;
        file.text += trimmed + "\n";
    }
    std::vector<std::string> known;
    for (const auto& name : file.properties.names) {
        if (!name.starts_with("~")) known.push_back(name);
    }
    for (const auto& [name, at] : complements) {
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw ParseError("complement of undeclared property '" + name + "'", at, 1);
        }
    }
    if (file.text.empty()) throw ParseError("query file contains no query");
    try {
        file.query = parse_query(file.text, known);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), e.line() == 0 ? 0 : query_line + e.line() - 1, e.column());
    }
    return file;
}

}  // namespace mocheck
