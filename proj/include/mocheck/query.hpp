#pragma once

#include "mocheck/automaton.hpp"
#include "mocheck/mdp.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mocheck {

/// Named omega-regular properties, each a deterministic Rabin automaton over the MDP labels, plus
/// optional complement bindings used to rewrite upper bounds.
struct PropertySet {
    std::vector<std::string> names;
    std::vector<RabinAutomaton> automata;
    std::map<std::string, std::size_t> complement;  // property name -> index of its complement

    std::size_t add(std::string name, RabinAutomaton automaton);
    void set_complement(const std::string& name, RabinAutomaton automaton);
    std::optional<std::size_t> find(std::string_view name) const;
};

enum class QueryComparison { Geq, Gt, Leq, Lt, Eq, Neq };

const char* to_string(QueryComparison comparison);

struct Predicate {
    std::string property;
    QueryComparison comparison = QueryComparison::Geq;
    Rational bound;
};

struct Query {
    enum class Kind { And, Or, Not, Atom };
    Kind kind = Kind::Atom;
    Predicate atom;
    std::vector<Query> children;

    std::string to_string() const;
};

/// Grammar: expr := expr '&' expr | expr '|' expr | '!' expr | '(' expr ')' | 'Pr(' name ')' cmp number,
/// cmp one of >= > <= < = != ; '&' binds tighter than '|'. Names must be in `known` when it is nonempty.
Query parse_query(std::string_view text, const std::vector<std::string>& known = {});

/// One lower bound of an extended achievability query.
struct Bound {
    std::size_t property;  // index into PropertySet
    Rational value;
    bool strict = false;

    friend bool operator==(const Bound& a, const Bound& b) {
        return a.property == b.property && a.value == b.value && a.strict == b.strict;
    }
};

/// Conjunction of lower bounds; at most one non-strict and one strict bound per property.
struct Disjunct {
    std::vector<Bound> bounds;

    bool qualitative() const;  // every bound is >= 1 or > 0
};

struct NormalizedQuery {
    std::vector<Disjunct> disjuncts;      // empty: unsatisfiable; an empty disjunct: trivially true
    std::set<std::string> complements;    // properties whose complement was used
};

inline constexpr std::size_t kDefaultDisjunctCap = 4096;

/// Negation pushdown, upper bounds through complements, expansion of = and !=, DNF.
NormalizedQuery normalize(const Query& query, const PropertySet& properties, std::size_t cap = kDefaultDisjunctCap);

struct OmegaAchievability {
    bool achievable = false;
    std::optional<FiniteMemoryStrategy> strategy;  // on the source MDP
    std::optional<Rational> slack;
    std::vector<Rational> lp_values;               // Pr(reach F_i) of the LP witness
};

/// Achievability of Pr(phi_i) >= r_i (> r_i where strict) through the product reduction and the
/// multi-objective LP; the witness is lifted to the source MDP.
OmegaAchievability decide_omega_achievability(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                              const std::vector<Rational>& bounds, const std::vector<bool>& strict = {});

struct EvaluateOptions {
    bool force_quantitative = false;
    std::size_t cap = kDefaultDisjunctCap;
};

struct QueryResult {
    bool satisfiable = false;
    NormalizedQuery normalized;
    std::optional<std::size_t> disjunct;   // first satisfiable disjunct
    std::string route;                     // "qualitative", "quantitative" or "trivial"
    std::vector<std::size_t> used;         // property indices of the witness disjunct
    std::optional<FiniteMemoryStrategy> strategy;
    std::vector<Rational> values;          // exact Pr(used[i]) under the strategy
};

/// Exists sigma satisfying the query. Every witness is re-validated on its induced chain.
QueryResult evaluate(const Mdp& mdp, const PropertySet& properties, const Query& query, const EvaluateOptions& options = {});

/// For all sigma the query holds, decided as not exists sigma satisfying its negation. The result's
/// strategy is a counterexample when the query fails.
struct UniversalResult {
    bool holds = false;
    QueryResult counterexample;
};
UniversalResult evaluate_universal(const Mdp& mdp, const PropertySet& properties, const Query& query,
                                   const EvaluateOptions& options = {});

/// <phi1>_{>=r1} M <phi2>_{>=r2}: holds iff no strategy has Pr(phi1) >= r1 and Pr(phi2) < r2.
struct AssumeGuaranteeResult {
    bool holds = false;
    std::optional<FiniteMemoryStrategy> strategy;  // counterexample
    std::vector<Rational> values;                  // (Pr(phi1), Pr(phi2)) under the counterexample
};
AssumeGuaranteeResult check_assume_guarantee(const Mdp& mdp, const PropertySet& properties, const std::string& phi1,
                                             const Rational& r1, const std::string& phi2, const Rational& r2);

/// Query file: `prop NAME = reach "P"` | `avoid "P"` | `buchi "P"` | `automaton "file.hoa"`,
/// `complement NAME = <same sources>`, '#' comments, and the query expression on the remaining lines.
struct QueryFile {
    PropertySet properties;
    Query query;
    std::string text;
};
QueryFile parse_query_file(std::string_view text, const std::string& base_dir = ".");

}  // namespace mocheck
