#include "mocheck/multiobj_lp.hpp"

#include "mocheck/error.hpp"
#include "mocheck/graph.hpp"

#include <algorithm>

namespace mocheck {

std::vector<Rational> MultiObjectiveLp::objective_values(const std::vector<Rational>& y) const {
    std::vector<Rational> out;
    for (const auto& obj : objectives) out.push_back(evaluate(obj, y));
    return out;
}

MultiObjectiveLp build_multiobj_lp(const Mdp& mdp, const InitialDistribution& alpha,
                                   const std::vector<std::vector<StateId>>& targets, const std::vector<StateId>& sinks) {
    std::size_t n = mdp.num_states();
    MultiObjectiveLp lp{mdp, alpha, targets, std::vector<bool>(n, false), std::vector<std::size_t>(n, npos),
                        std::vector<std::vector<std::size_t>>(n), {}, {}};
    std::vector<bool> in_f(n, false);
    for (const auto& set : targets) {
        for (StateId v : set) {
            if (v >= n || !mdp.is_absorbing(v)) throw ArgumentError("target states must be absorbing");
            in_f[v] = true;
            lp.absorbing[v] = true;
        }
    }
    for (StateId v : sinks) {
        if (v >= n || !mdp.is_absorbing(v)) throw ArgumentError("sink states must be absorbing");
        lp.absorbing[v] = true;
    }
    for (const auto& [v, p] : alpha.mass) {
        if (v >= n) throw ArgumentError("initial distribution names an unknown state");
        if (in_f[v]) throw ArgumentError("initial distribution must be supported outside the target states");
    }
    Adjacency forward(n);
    for (StateId v = 0; v < n; ++v) {
        for (const auto& a : mdp.state(v).actions) {
            for (const auto& t : a.transitions) forward[v].push_back(t.target);
        }
    }
    std::vector<bool> reaches = backward_reachable(forward, in_f);
    for (StateId v = 0; v < n; ++v) {
        if (!reaches[v] && !lp.absorbing[v]) {
            throw ArgumentError("model is not cleaned up: state '" + mdp.state(v).name + "' cannot reach a target");
        }
    }

    LinearProgram& program = lp.program;
    for (StateId v = 0; v < n; ++v) {
        const State& s = mdp.state(v);
        if (lp.absorbing[v]) {
            lp.state_var[v] = program.add_variable("y_" + s.name);
        } else {
            for (const auto& a : s.actions) lp.action_var[v].push_back(program.add_variable("y_" + s.name + "_" + a.name));
        }
    }
    std::vector<LinearExpr> balance(n);
    for (StateId v = 0; v < n; ++v) {
        if (lp.absorbing[v]) {
            balance[v].emplace_back(lp.state_var[v], 1);
            continue;
        }
        const State& s = mdp.state(v);
        for (std::size_t a = 0; a < s.actions.size(); ++a) {
            std::size_t var = lp.action_var[v][a];
            balance[v].emplace_back(var, 1);
            for (const auto& t : s.actions[a].transitions) balance[t.target].emplace_back(var, -t.probability);
        }
    }
    for (StateId v = 0; v < n; ++v) {
        program.add_constraint("balance_" + mdp.state(v).name, std::move(balance[v]), Relation::Equal, alpha.at(v));
    }
    for (const auto& set : targets) {
        LinearExpr obj;
        for (StateId v : set) obj.emplace_back(lp.state_var[v], 1);
        std::sort(obj.begin(), obj.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        obj.erase(std::unique(obj.begin(), obj.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                  obj.end());
        lp.objectives.push_back(std::move(obj));
    }
    return lp;
}

MemorylessStrategy extract_strategy(const MultiObjectiveLp& lp, const std::vector<Rational>& y) {
    const Mdp& mdp = lp.mdp;
    MemorylessStrategy sigma;
    sigma.choice.resize(mdp.num_states());
    for (StateId v = 0; v < mdp.num_states(); ++v) {
        Rational total = 0;
        for (std::size_t var : lp.action_var[v]) total += y[var];
        if (total > 0) {
            for (std::size_t a = 0; a < lp.action_var[v].size(); ++a) {
                const Rational& flow = y[lp.action_var[v][a]];
                if (flow > 0) sigma.choice[v].emplace_back(a, flow / total);
            }
        } else {
            sigma.choice[v] = {{0, Rational(1)}};
        }
    }
    return sigma;
}

namespace {

void check_vector(const MultiObjectiveLp& lp, const std::vector<Rational>& v, const char* what, bool probability) {
    if (v.size() != lp.num_objectives()) {
        throw ArgumentError(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                            std::to_string(lp.num_objectives()));
    }
    for (const auto& x : v) {
        if (x < 0 || (probability && x > 1)) {
            throw ArgumentError(std::string(what) + " entries must lie in " + (probability ? "[0,1]" : "[0,inf)"));
        }
    }
}

}  // namespace

AchievabilityResult decide_extended_achievability(const MultiObjectiveLp& lp, const std::vector<Rational>& bounds,
                                                  const std::vector<bool>& strict_in) {
    check_vector(lp, bounds, "bound vector", true);
    std::vector<bool> strict = strict_in;
    strict.resize(lp.num_objectives(), false);
    bool any_strict = std::any_of(strict.begin(), strict.end(), [](bool b) { return b; });
    AchievabilityResult result;
    if (!any_strict && std::all_of(bounds.begin(), bounds.end(), [](const Rational& r) { return r == 0; })) {
        result.achievable = true;
        result.strategy = MemorylessStrategy::first_action(lp.mdp);
        return result;
    }
    LinearProgram program = lp.program;
    std::size_t z = npos;
    if (any_strict) {
        z = program.add_variable("z");
        program.add_constraint("z_cap", {{z, 1}}, Relation::LessEqual, 1);
    }
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        LinearExpr row = lp.objectives[i];
        if (strict[i]) row.emplace_back(z, -1);
        program.add_constraint("bound_" + std::to_string(i + 1), std::move(row), Relation::GreaterEqual, bounds[i]);
    }
    LinearExpr objective;
    if (any_strict) objective.emplace_back(z, 1);
    result.witness = solve_lp(program, objective);
    if (!result.witness.optimal()) return result;
    result.witness.values.resize(lp.program.num_variables());
    if (any_strict) {
        result.slack = result.witness.objective;
        if (*result.slack <= 0) return result;
    }
    result.achievable = true;
    result.values = lp.objective_values(result.witness.values);
    result.strategy = extract_strategy(lp, result.witness.values);
    return result;
}

WeightedOptimum maximize_weighted(const MultiObjectiveLp& lp, const std::vector<Rational>& weights,
                                  const std::vector<Rational>& lower) {
    check_vector(lp, weights, "weight vector", false);
    LinearProgram program = lp.program;
    if (!lower.empty()) {
        check_vector(lp, lower, "lower bound vector", false);
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (lower[i] > 0) program.add_constraint("lower_" + std::to_string(i + 1), lp.objectives[i], Relation::GreaterEqual, lower[i]);
        }
    }
    LinearExpr objective;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0) continue;
        for (const auto& [v, c] : lp.objectives[i]) objective.emplace_back(v, weights[i] * c);
    }
    WeightedOptimum out;
    out.solution = solve_lp(program, objective);
    if (!out.solution.optimal()) {
        if (out.solution.status == LpStatus::Unbounded) throw Error("internal error: reachability LP reported unbounded");
        return out;
    }
    out.feasible = true;
    out.value = out.solution.objective;
    out.values = lp.objective_values(out.solution.values);
    out.strategy = extract_strategy(lp, out.solution.values);
    return out;
}

WeightedOptimum maximize_lexicographic(const MultiObjectiveLp& lp, const std::vector<std::size_t>& order,
                                       const std::vector<Rational>& lower) {
    std::vector<Rational> floor = lower.empty() ? std::vector<Rational>(lp.num_objectives(), 0) : lower;
    WeightedOptimum best;
    for (std::size_t i : order) {
        std::vector<Rational> w(lp.num_objectives(), 0);
        w[i] = 1;
        best = maximize_weighted(lp, w, floor);
        if (!best.feasible) return best;
        if (best.values[i] > floor[i]) floor[i] = best.values[i];
    }
    return best;
}

}  // namespace mocheck
