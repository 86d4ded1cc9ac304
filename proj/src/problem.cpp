#include "mocheck/problem.hpp"

#include "mocheck/chain.hpp"
#include "mocheck/error.hpp"
#include "mocheck/product.hpp"

namespace mocheck {

MemorylessStrategy restore_strategy(const CleanupReport& cleanup, const Mdp& original, const MemorylessStrategy& sigma) {
    MemorylessStrategy out = MemorylessStrategy::first_action(original);
    for (StateId v = 0; v < original.num_states(); ++v) {
        StateId k = cleanup.to_kept[v];
        if (k == npos || sigma.choice[k].empty()) continue;
        ActionDistribution dist;
        for (const auto& [a, p] : sigma.choice[k]) {
            auto oa = original.find_action(v, cleanup.kept.state(k).actions[a].name);
            if (!oa) throw ArgumentError("strategy plays an action unknown to the original MDP");
            accumulate(dist, *oa, p);
        }
        out.choice[v] = std::move(dist);
    }
    return out;
}

FiniteMemoryStrategy ReachProblem::lift(const MemorylessStrategy& sigma) const {
    if (reduced) return lift_strategy(*reduced, cleanup, source, sigma);
    return FiniteMemoryStrategy::from_memoryless(restore_strategy(cleanup, source, sigma));
}

std::vector<Rational> ReachProblem::probabilities(const FiniteMemoryStrategy& strategy) const {
    if (reduced) return omega_regular_probabilities(source, strategy, automata);
    return reach_probabilities(induced_chain(source, strategy), targets);
}

namespace {

void finish(ReachProblem& p, const Mdp& base, const std::vector<std::vector<StateId>>& targets) {
    p.cleanup = clean_up(base, targets);
    std::vector<StateId> sinks;
    if (p.cleanup.dead != npos) sinks.push_back(p.cleanup.dead);
    p.lp = build_multiobj_lp(p.cleanup.kept, p.cleanup.kept.initial(), p.cleanup.targets, sinks);
}

}  // namespace

ReachProblem reach_problem(const Mdp& mdp, const std::vector<std::string>& labels) {
    if (labels.empty()) throw ArgumentError("at least one target label is required");
    std::vector<std::vector<StateId>> targets;
    bool direct = true;
    for (const auto& label : labels) {
        if (!mdp.propositions().count(label)) throw ArgumentError("unknown proposition '" + label + "'");
        targets.push_back(mdp.states_with_label(label));
        for (StateId v : targets.back()) {
            if (!mdp.is_absorbing(v) || mdp.initial().at(v) != 0) direct = false;
        }
    }
    if (!direct) {
        std::vector<RabinAutomaton> automata;
        for (const auto& label : labels) automata.push_back(reach_automaton(label));
        return omega_problem(mdp, std::move(automata), labels);
    }
    ReachProblem p;
    p.source = mdp;
    p.objectives = labels;
    p.targets = targets;
    finish(p, mdp, targets);
    return p;
}

ReachProblem omega_problem(const Mdp& mdp, std::vector<RabinAutomaton> automata, std::vector<std::string> names) {
    if (automata.empty()) throw ArgumentError("at least one property is required");
    if (names.size() != automata.size()) throw ArgumentError("one name per property is required");
    ReachProblem p;
    p.source = mdp;
    p.objectives = std::move(names);
    p.reduced = build_reduction(mdp, automata);
    p.automata = std::move(automata);
    finish(p, p.reduced->mdp, p.reduced->targets);
    return p;
}

}  // namespace mocheck
