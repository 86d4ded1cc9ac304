#include "mocheck/cli.hpp"

#include "mocheck/automaton.hpp"
#include "mocheck/error.hpp"
#include "mocheck/model_io.hpp"
#include "mocheck/oracle.hpp"
#include "mocheck/pareto.hpp"
#include "mocheck/problem.hpp"
#include "mocheck/product.hpp"
#include "mocheck/qualitative.hpp"
#include "mocheck/query.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>
#include <sstream>

namespace mocheck {
namespace {

using nlohmann::json;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kInputError = 2;

class SelfCheckError : public Error {
public:
    using Error::Error;
};

std::string show(const Rational& x) { return to_string(x) + " (" + to_decimal(x) + ")"; }

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::size_t> parse_indices(const std::string& text, std::size_t count, const std::string& flag) {
    std::vector<std::size_t> out;
    for (const auto& item : split(text)) {
        std::size_t i = 0;
        try {
            i = std::stoul(item);
        } catch (const std::exception&) {
            throw ArgumentError(flag + ": '" + item + "' is not an index");
        }
        if (i < 1 || i > count) throw ArgumentError(flag + ": index " + item + " outside 1.." + std::to_string(count));
        out.push_back(i - 1);
    }
    return out;
}

struct PropertyArg {
    std::string name;
    RabinAutomaton automaton;
};

PropertyArg parse_property_arg(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? "" : spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? spec : spec.substr(colon + 1);
    if (kind == "reach") return {"F " + arg, reach_automaton(arg)};
    if (kind == "avoid") return {"G !" + arg, avoid_automaton(arg)};
    if (kind == "buchi") return {"GF " + arg, buchi_automaton(arg)};
    if (kind == "hoa" || kind.empty()) {
        try {
            return {std::filesystem::path(arg).stem().string(), parse_automaton(read_file(arg))};
        } catch (const ParseError& e) {
            throw ParseError(arg + ": " + e.what());
        }
    }
    throw ArgumentError("unknown property kind '" + kind + "' (use reach:, avoid:, buchi: or hoa:)");
}

struct ModelArgs {
    std::string model;
    std::string targets;
    std::vector<std::string> props;
};

void add_model_args(CLI::App* cmd, ModelArgs& a, bool objectives) {
    cmd->add_option("model", a.model, "Model file (JSON)")->required()->check(CLI::ExistingFile);
    if (!objectives) return;
    cmd->add_option("--targets", a.targets, "Comma separated target labels: objectives Pr(eventually label)");
    cmd->add_option("--prop", a.props, "Property: reach:LABEL, avoid:LABEL, buchi:LABEL or hoa:FILE (repeatable)");
}

std::vector<PropertyArg> properties_of(const ModelArgs& a) {
    std::vector<PropertyArg> out;
    for (const auto& spec : a.props) out.push_back(parse_property_arg(spec));
    return out;
}

ReachProblem make_problem(const Mdp& mdp, const ModelArgs& a) {
    if (!a.targets.empty() && !a.props.empty()) throw ArgumentError("use either --targets or --prop, not both");
    if (!a.targets.empty()) return reach_problem(mdp, split(a.targets));
    if (a.props.empty()) throw ArgumentError("objectives required: --targets or --prop");
    std::vector<RabinAutomaton> automata;
    std::vector<std::string> names;
    for (auto& p : properties_of(a)) {
        names.push_back(p.name);
        automata.push_back(std::move(p.automaton));
    }
    return omega_problem(mdp, std::move(automata), std::move(names));
}

json rationals_json(const std::vector<Rational>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(rational_json(v));
    return out;
}

void emit_strategy(const Mdp& mdp, const FiniteMemoryStrategy& strategy, const std::string& path) {
    if (!path.empty()) write_file(path, strategy_to_json(mdp, strategy).dump(2) + "\n");
}

// Exact re-validation of a witness; failures are internal errors.
void self_check(const std::vector<Rational>& actual, const std::vector<Rational>& bounds, const std::vector<bool>& strict) {
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        bool s = i < strict.size() && strict[i];
        if (s ? !(actual[i] > bounds[i]) : !(actual[i] >= bounds[i])) {
            throw SelfCheckError("self-check failed on objective " + std::to_string(i + 1) + ": " + to_string(actual[i]) +
                                 (s ? " is not > " : " is not >= ") + to_string(bounds[i]));
        }
    }
}

struct Common {
    bool json_format = false;
    bool no_self_check = false;
    std::string strategy_out;
};

void add_common(CLI::App* cmd, Common& c, bool strategy) {
    cmd->add_flag("--json", c.json_format, "Structured JSON output");
    if (!strategy) return;
    cmd->add_flag("--no-self-check", c.no_self_check, "Skip exact re-validation of the witness strategy");
    cmd->add_option("--strategy-out", c.strategy_out, "Write the witness strategy to this file");
}

int cmd_validate(const ModelArgs& a, const std::vector<std::string>& automata, const Common& c, std::ostream& out) {
    Mdp mdp = parse_mdp(read_file(a.model));
    json doc{{"states", mdp.num_states()}, {"choices", mdp.num_choices()}, {"propositions", mdp.propositions()}};
    json autos = json::array();
    for (const auto& path : automata) {
        RabinAutomaton aut = parse_automaton(read_file(path));
        for (const auto& p : aut.propositions()) {
            if (!mdp.propositions().count(p)) throw ModelError(path + ": proposition '" + p + "' not in the model");
        }
        autos.push_back({{"file", path}, {"states", aut.num_states()}, {"pairs", aut.pairs().size()}});
    }
    if (!automata.empty()) doc["automata"] = autos;
    if (c.json_format) {
        out << doc.dump(2) << "\n";
    } else {
        out << "ok: " << mdp.num_states() << " states, " << mdp.num_choices() << " state-action pairs, "
            << mdp.propositions().size() << " propositions\n";
        for (const auto& aut : autos) {
            out << "ok: " << aut["file"].get<std::string>() << ": " << aut["states"] << " states, " << aut["pairs"]
                << " acceptance pairs\n";
        }
    }
    return kYes;
}

struct AchievableArgs {
    std::string bound;
    std::string strict;
    std::string lp_out;
};

int cmd_achievable(const ModelArgs& a, const AchievableArgs& x, const Common& c, std::ostream& out) {
    Mdp mdp = parse_mdp(read_file(a.model));
    ReachProblem problem = make_problem(mdp, a);
    std::vector<Rational> bounds = parse_rational_list(x.bound);
    if (bounds.size() != problem.num_objectives()) {
        throw ArgumentError("--bound has " + std::to_string(bounds.size()) + " entries for " +
                            std::to_string(problem.num_objectives()) + " objectives");
    }
    for (const auto& b : bounds) {
        if (!is_probability(b)) throw ArgumentError("bound " + to_string(b) + " outside [0,1]");
    }
    std::vector<bool> strict(bounds.size(), false);
    for (std::size_t i : parse_indices(x.strict, bounds.size(), "--strict")) strict[i] = true;
    if (!x.lp_out.empty()) {
        LinearExpr sum;
        for (const auto& o : problem.lp.objectives) sum.insert(sum.end(), o.begin(), o.end());
        write_file(x.lp_out, write_lp_file(problem.lp.program, sum));
    }
    AchievabilityResult r = decide_extended_achievability(problem.lp, bounds, strict);
    std::optional<FiniteMemoryStrategy> strategy;
    std::vector<Rational> actual;
    if (r.achievable) {
        strategy = problem.lift(*r.strategy);
        if (!c.no_self_check) {
            actual = problem.probabilities(*strategy);
            self_check(actual, bounds, strict);
        }
        emit_strategy(mdp, *strategy, c.strategy_out);
    }
    if (c.json_format) {
        json doc{{"achievable", r.achievable}, {"objectives", problem.objectives}, {"bounds", rationals_json(bounds)},
                 {"strict", strict}, {"reduction", problem.direct() ? "direct" : "product"}};
        if (r.slack) doc["slack"] = rational_json(*r.slack);
        if (r.achievable) {
            doc["lp_values"] = rationals_json(r.values);
            if (!actual.empty()) doc["validated"] = rationals_json(actual);
            doc["strategy"] = strategy_to_json(mdp, *strategy);
        }
        out << doc.dump(2) << "\n";
    } else {
        out << "achievable: " << (r.achievable ? "yes" : "no") << "\n";
        if (r.slack) out << "slack: " << show(*r.slack) << "\n";
        if (r.achievable) {
            for (std::size_t i = 0; i < bounds.size(); ++i) {
                out << problem.objectives[i] << ": " << (strict[i] ? "> " : ">= ") << to_string(bounds[i]) << ", witness "
                    << show(r.values[i]);
                if (!actual.empty()) out << ", validated " << show(actual[i]);
                out << "\n";
            }
        }
    }
    return r.achievable ? kYes : kNo;
}

struct QueryArgs {
    std::string file;
    bool force_quantitative = false;
    bool universal = false;
    std::size_t cap = kDefaultDisjunctCap;
};

int cmd_query(const ModelArgs& a, const QueryArgs& q, const Common& c, std::ostream& out) {
    Mdp mdp = parse_mdp(read_file(a.model));
    QueryFile file = parse_query_file(read_file(q.file), std::filesystem::path(q.file).parent_path().string());
    EvaluateOptions options{q.force_quantitative, q.cap};
    QueryResult r;
    bool answer = false;
    if (q.universal) {
        UniversalResult u = evaluate_universal(mdp, file.properties, file.query, options);
        r = std::move(u.counterexample);
        answer = u.holds;
    } else {
        r = evaluate(mdp, file.properties, file.query, options);
        answer = r.satisfiable;
    }
    if (r.strategy) emit_strategy(mdp, *r.strategy, c.strategy_out);
    std::vector<std::string> used;
    for (std::size_t p : r.used) used.push_back(file.properties.names[p]);
    std::string verdict = q.universal ? (answer ? "holds" : "fails") : (answer ? "sat" : "unsat");
    if (c.json_format) {
        json doc{{"query", file.query.to_string()}, {"universal", q.universal}, {"verdict", verdict},
                 {"disjuncts", r.normalized.disjuncts.size()}};
        if (r.disjunct) {
            doc["witness_disjunct"] = *r.disjunct + 1;
            doc["route"] = r.route;
            doc["properties"] = used;
            doc["values"] = rationals_json(r.values);
            doc["strategy"] = strategy_to_json(mdp, *r.strategy);
        }
        out << doc.dump(2) << "\n";
    } else {
        out << verdict << "\n";
        out << "disjuncts: " << r.normalized.disjuncts.size() << "\n";
        if (r.disjunct) {
            out << (q.universal ? "counterexample" : "witness") << " from disjunct " << *r.disjunct + 1 << " via " << r.route
                << "\n";
            for (std::size_t i = 0; i < used.size(); ++i) out << "Pr(" << used[i] << ") = " << show(r.values[i]) << "\n";
        }
    }
    return answer ? kYes : kNo;
}

struct QualitativeArgs {
    std::string sure;
    std::string positive;
};

int cmd_qualitative(const ModelArgs& a, const QualitativeArgs& x, const Common& c, std::ostream& out) {
    Mdp mdp = parse_mdp(read_file(a.model));
    std::vector<PropertyArg> props = properties_of(a);
    if (props.empty()) throw ArgumentError("qualitative queries need --prop");
    std::vector<RabinAutomaton> automata;
    for (const auto& p : props) automata.push_back(p.automaton);
    QualitativeQuery q{parse_indices(x.sure, props.size(), "--sure"), parse_indices(x.positive, props.size(), "--positive")};
    QualitativeResult r = decide_qualitative(mdp, automata, q);
    std::vector<Rational> actual;
    if (r.satisfiable) {
        if (!c.no_self_check) {
            actual = omega_regular_probabilities(mdp, *r.strategy, automata);
            for (std::size_t i : q.sure) {
                if (actual[i] != 1) throw SelfCheckError("self-check failed: Pr(" + props[i].name + ") != 1");
            }
            for (std::size_t i : q.positive) {
                if (actual[i] == 0) throw SelfCheckError("self-check failed: Pr(" + props[i].name + ") = 0");
            }
        }
        emit_strategy(mdp, *r.strategy, c.strategy_out);
    }
    if (c.json_format) {
        json names = json::array();
        for (const auto& p : props) names.push_back(p.name);
        json doc{{"satisfiable", r.satisfiable}, {"properties", names}};
        if (!actual.empty()) doc["validated"] = rationals_json(actual);
        if (r.satisfiable) doc["strategy"] = strategy_to_json(mdp, *r.strategy);
        out << doc.dump(2) << "\n";
    } else {
        out << "qualitative: " << (r.satisfiable ? "yes" : "no") << "\n";
        for (std::size_t i = 0; i < actual.size(); ++i) out << "Pr(" << props[i].name << ") = " << show(actual[i]) << "\n";
    }
    return r.satisfiable ? kYes : kNo;
}

struct ParetoArgs {
    std::string epsilon;
    bool exact2 = false;
    std::string csv_out;
    std::string out;
};

std::string pareto_csv(const ParetoResult& result, const std::vector<std::string>& objectives) {
    std::string csv;
    for (std::size_t i = 0; i < objectives.size(); ++i) csv += (i ? "," : "") + objectives[i];
    for (const auto& o : objectives) csv += "," + o + "_decimal";
    csv += "\n";
    auto values = result.values();
    if (values.empty()) values.push_back(std::vector<Rational>(objectives.size(), 0));
    for (const auto& v : values) {
        for (std::size_t i = 0; i < v.size(); ++i) csv += (i ? "," : "") + to_string(v[i]);
        for (const auto& x : v) csv += "," + to_decimal(x);
        csv += "\n";
    }
    return csv;
}

int cmd_pareto(const ModelArgs& a, const ParetoArgs& x, const Common& c, std::ostream& out, bool vertices) {
    Mdp mdp = parse_mdp(read_file(a.model));
    ReachProblem problem = make_problem(mdp, a);
    ParetoResult result;
    if (vertices || x.exact2) {
        if (problem.num_objectives() != 2) throw ArgumentError("exact vertex enumeration needs exactly 2 objectives");
        result = exact_vertices_biobjective(problem.lp);
    } else {
        if (x.epsilon.empty()) throw ArgumentError("pareto needs --epsilon or --exact2");
        result = epsilon_pareto(problem.lp, parse_rational(x.epsilon));
    }
    json points = json::array();
    for (std::size_t i = 0; i < result.points.size(); ++i) {
        const auto& p = result.points[i];
        FiniteMemoryStrategy strategy = problem.lift(result.strategy(problem.lp, i));
        if (!c.no_self_check) self_check(problem.probabilities(strategy), p.value, {});
        points.push_back({{"value", rationals_json(p.value)}, {"weight", rationals_json(p.weight)},
                          {"strategy", strategy_to_json(mdp, strategy)}});
    }
    json doc{{"objectives", problem.objectives}, {"epsilon", rational_json(result.epsilon)}, {"lp_calls", result.lp_calls},
             {"points", points}};
    std::string csv = pareto_csv(result, problem.objectives);
    if (!x.out.empty()) write_file(x.out, doc.dump(2) + "\n");
    if (!x.csv_out.empty()) write_file(x.csv_out, csv);
    if (c.json_format) {
        out << doc.dump(2) << "\n";
    } else {
        out << csv;
    }
    return kYes;
}

struct CheckArgs {
    std::string strategy;
    std::string claims;
};

int cmd_check(const ModelArgs& a, const CheckArgs& x, const Common& c, std::ostream& out) {
    Mdp mdp = parse_mdp(read_file(a.model));
    FiniteMemoryStrategy strategy = parse_strategy(mdp, read_file(x.strategy));
    std::vector<Claim> claims;
    for (const auto& item : split(x.claims)) claims.push_back(parse_claim(item));
    ValidationReport report;
    if (!a.targets.empty() && !a.props.empty()) throw ArgumentError("use either --targets or --prop, not both");
    if (!a.targets.empty()) {
        std::vector<std::string> labels = split(a.targets);
        std::vector<std::vector<StateId>> targets;
        for (const auto& l : labels) targets.push_back(mdp.states_with_label(l));
        report = validate_reach(mdp, targets, labels, strategy, claims);
    } else {
        std::vector<RabinAutomaton> automata;
        std::vector<std::string> names;
        for (auto& p : properties_of(a)) {
            names.push_back(p.name);
            automata.push_back(std::move(p.automaton));
        }
        if (automata.empty()) throw ArgumentError("objectives required: --targets or --prop");
        report = validate_omega(mdp, automata, names, strategy, claims);
    }
    if (c.json_format) {
        out << report.to_json().dump(2) << "\n";
    } else {
        for (const auto& row : report.rows) {
            out << row.objective << ": " << show(row.actual) << " " << to_string(row.claim.comparison) << " "
                << to_string(row.claim.bound) << ": " << (row.pass ? "pass" : "fail") << "\n";
        }
        out << (report.pass() ? "pass" : "fail") << "\n";
    }
    return report.pass() ? kYes : kNo;
}

struct HardArgs {
    std::size_t layers = 4;
    std::uint64_t seed = 1;
    std::size_t width = 2;
    std::string out;
};

int cmd_gen_hard(const HardArgs& x, std::ostream& out) {
    HardInstance inst = gen_hard_instance(x.layers, x.seed, x.width);
    std::string text = serialize_mdp(inst.mdp);
    if (x.out.empty()) {
        out << text;
    } else {
        write_file(x.out, text);
        out << "wrote " << x.out << ": " << inst.mdp.num_states() << " states, Pr(R) = " << to_string(inst.a) << " - "
            << to_string(inst.b) << " * c(path)\n";
    }
    return kYes;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-objective model checking of Markov decision processes", "mocheck"};
    app.require_subcommand(1);

    ModelArgs model;
    Common common;

    auto* validate = app.add_subcommand("validate", "Check a model file (and automata) for well-formedness");
    std::vector<std::string> lint_automata;
    add_model_args(validate, model, false);
    validate->add_option("--automaton", lint_automata, "HOA automaton file to check against the model");
    add_common(validate, common, false);

    auto* achievable = app.add_subcommand("achievable", "Decide whether a probability vector is achievable");
    AchievableArgs ach;
    add_model_args(achievable, model, true);
    achievable->add_option("--bound", ach.bound, "Comma separated lower bounds, e.g. 1/2,0.3")->required();
    achievable->add_option("--strict", ach.strict, "1-based indices of strict bounds");
    achievable->add_option("--lp-out", ach.lp_out, "Write the LP in LP file format");
    add_common(achievable, common, true);

    auto* query = app.add_subcommand("query", "Evaluate a boolean multi-objective query file");
    QueryArgs qa;
    add_model_args(query, model, false);
    query->add_option("query", qa.file, "Query file")->required()->check(CLI::ExistingFile);
    query->add_flag("--force-quantitative", qa.force_quantitative, "Route qualitative disjuncts through the LP");
    query->add_flag("--universal", qa.universal, "Check the query for all strategies");
    query->add_option("--cap", qa.cap, "Maximal number of disjuncts in the normal form");
    add_common(query, common, true);

    auto* qualitative = app.add_subcommand("qualitative", "Decide a Pr=1 / Pr>0 query by graph analysis");
    QualitativeArgs qual;
    add_model_args(qualitative, model, true);
    qualitative->add_option("--sure", qual.sure, "1-based property indices required with probability 1");
    qualitative->add_option("--positive", qual.positive, "1-based property indices required with positive probability");
    add_common(qualitative, common, true);

    auto* pareto = app.add_subcommand("pareto", "Compute an epsilon-approximate (or exact bi-objective) Pareto set");
    ParetoArgs par;
    add_model_args(pareto, model, true);
    pareto->add_option("--epsilon", par.epsilon, "Approximation factor, e.g. 1/100");
    pareto->add_flag("--exact2", par.exact2, "Exact vertices (two objectives)");
    pareto->add_option("--csv", par.csv_out, "Write plot data as CSV");
    pareto->add_option("--out", par.out, "Write the points with strategies as JSON");
    add_common(pareto, common, false);
    pareto->add_flag("--no-self-check", common.no_self_check, "Skip exact re-validation of the point strategies");

    auto* vertices = app.add_subcommand("vertices", "Exact Pareto vertices of a bi-objective problem");
    ParetoArgs ver;
    add_model_args(vertices, model, true);
    vertices->add_option("--csv", ver.csv_out, "Write plot data as CSV");
    vertices->add_option("--out", ver.out, "Write the points with strategies as JSON");
    add_common(vertices, common, false);
    vertices->add_flag("--no-self-check", common.no_self_check, "Skip exact re-validation of the point strategies");

    auto* check = app.add_subcommand("check-strategy", "Validate a strategy file against probability claims");
    CheckArgs chk;
    add_model_args(check, model, true);
    check->add_option("--strategy", chk.strategy, "Strategy file")->required()->check(CLI::ExistingFile);
    check->add_option("--claim", chk.claims, "Comma separated claims, e.g. >=1/2,>0")->required();
    add_common(check, common, false);

    auto* gen = app.add_subcommand("gen-hard", "Generate a layered-graph instance with many Pareto vertices");
    HardArgs hard;
    gen->add_option("--layers", hard.layers, "Number of layers n")->required();
    gen->add_option("--seed", hard.seed, "Random seed");
    gen->add_option("--width", hard.width, "Nodes per inner layer");
    gen->add_option("--out", hard.out, "Output model file (default: standard output)");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kYes : kInputError;
    }
    try {
        if (validate->parsed()) return cmd_validate(model, lint_automata, common, out);
        if (achievable->parsed()) return cmd_achievable(model, ach, common, out);
        if (query->parsed()) return cmd_query(model, qa, common, out);
        if (qualitative->parsed()) return cmd_qualitative(model, qual, common, out);
        if (pareto->parsed()) return cmd_pareto(model, par, common, out, false);
        if (vertices->parsed()) return cmd_pareto(model, ver, common, out, true);
        if (check->parsed()) return cmd_check(model, chk, common, out);
        if (gen->parsed()) return cmd_gen_hard(hard, out);
    } catch (const SelfCheckError& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace mocheck
