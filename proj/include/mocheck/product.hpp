#pragma once

#include "mocheck/automaton.hpp"
#include "mocheck/mdp.hpp"

#include <cstddef>
#include <vector>

namespace mocheck {

inline constexpr const char* kDummyState = "@init";
inline constexpr const char* kDummyAction = "@init";

/// M x A_1 x ... x A_m restricted to the part reachable from a dummy initial state whose single
/// action disperses according to the source initial distribution. Automata read the label of the
/// state being entered. Product states are named "x|q1,...,qm".
struct ProductMdp {
    Mdp mdp;
    std::vector<StateId> source;                            // source state per product state; npos for the dummy
    std::vector<std::vector<std::size_t>> automaton_state;  // per product state, one entry per automaton
    StateId initial = 0;                                    // the dummy state
    std::vector<RabinAutomaton> automata;

    bool in_avoid(StateId state, std::size_t automaton, std::size_t pair) const {
        return automata[automaton].pairs()[pair].avoid[automaton_state[state][automaton]];
    }
    bool in_repeat(StateId state, std::size_t automaton, std::size_t pair) const {
        return automata[automaton].pairs()[pair].repeat[automaton_state[state][automaton]];
    }
    /// Automaton states after reading `labels`.
    std::vector<std::size_t> step(const std::vector<std::size_t>& automaton_states,
                                  const std::set<std::string>& labels) const;
    /// Product state for (source state, automaton states); npos when unreachable.
    StateId find(StateId source_state, const std::vector<std::size_t>& automaton_states) const;
};

/// Throws ModelError when an automaton reads a proposition the MDP does not declare.
ProductMdp product(const Mdp& mdp, std::vector<RabinAutomaton> automata);

/// Probability that the induced run satisfies each automaton's acceptance condition, computed on the
/// product of the strategy's induced chain with the automata (BSCC acceptance).
std::vector<Rational> omega_regular_probabilities(const Mdp& mdp, const FiniteMemoryStrategy& strategy,
                                                  const std::vector<RabinAutomaton>& automata);

/// Turns a strategy on the product into a strategy on the source MDP whose modes record the automaton
/// states together with the product strategy's mode. Runs of both have the same law.
FiniteMemoryStrategy lift_product_strategy(const ProductMdp& product, const Mdp& source,
                                           const FiniteMemoryStrategy& strategy);

}  // namespace mocheck
