#pragma once

#include "mocheck/automaton.hpp"
#include "mocheck/multiobj_lp.hpp"
#include "mocheck/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mocheck {

/// A multi-objective reachability LP over a cleaned-up MDP together with the translation of its
/// memoryless strategies back to the source MDP. Label targets that are absorbing and avoided by the
/// initial distribution are solved directly; everything else goes through the product reduction.
struct ReachProblem {
    Mdp source;
    std::vector<std::string> objectives;
    std::vector<std::vector<StateId>> targets;  // source targets (direct problems)
    std::vector<RabinAutomaton> automata;       // properties (reduced problems)
    std::optional<ReducedMdp> reduced;
    CleanupReport cleanup;
    MultiObjectiveLp lp;

    bool direct() const { return !reduced.has_value(); }
    std::size_t num_objectives() const { return objectives.size(); }
    /// Strategy of the source MDP realizing at least the LP objective values of sigma.
    FiniteMemoryStrategy lift(const MemorylessStrategy& sigma) const;
    /// Exact objective probabilities of a source strategy.
    std::vector<Rational> probabilities(const FiniteMemoryStrategy& strategy) const;
};

/// Objectives Pr(eventually label_i).
ReachProblem reach_problem(const Mdp& mdp, const std::vector<std::string>& labels);
ReachProblem omega_problem(const Mdp& mdp, std::vector<RabinAutomaton> automata, std::vector<std::string> names);

/// Memoryless strategy of the original MDP playing sigma on the states kept by clean_up.
MemorylessStrategy restore_strategy(const CleanupReport& cleanup, const Mdp& original, const MemorylessStrategy& sigma);

}  // namespace mocheck
