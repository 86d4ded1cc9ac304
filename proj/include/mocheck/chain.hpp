#pragma once

#include "mocheck/mdp.hpp"

#include <cstddef>
#include <vector>

namespace mocheck {

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

/// Finite Markov chain with exact sparse transition rows.
struct MarkovChain {
    std::vector<SparseRow> rows;  // rows[i] sorted by column; each sums to exactly 1
    SparseRow initial;            // distribution over chain states

    std::size_t size() const noexcept { return rows.size(); }
};

/// Chain state = (MDP state, strategy mode). Memoryless strategies use mode 0 throughout.
struct ChainState {
    StateId state;
    std::size_t mode;
};

/// M^sigma. For memoryless strategies chain state i is MDP state i (P^sigma); for finite-memory
/// strategies the chain holds the (state, mode) pairs reachable from the initial distribution.
struct InducedChain : MarkovChain {
    std::vector<ChainState> states;
};

InducedChain induced_chain(const Mdp& mdp, const MemorylessStrategy& strategy);
InducedChain induced_chain(const Mdp& mdp, const FiniteMemoryStrategy& strategy);

/// Probability of ever entering each class from each chain state. `cls[i]` is the class of an
/// absorbing-by-fiat state, or npos for a free state. Solved exactly SCC by SCC.
std::vector<std::vector<Rational>> absorption_probabilities(const MarkovChain& chain, const std::vector<std::size_t>& cls,
                                                            std::size_t num_classes);

/// Per chain state probability of eventually hitting `target` (time 0 included).
std::vector<Rational> hitting_probabilities(const MarkovChain& chain, const std::vector<bool>& target);

/// Pr(eventually target_i) from the chain's initial distribution; targets are MDP state sets,
/// matched through the chain state's MDP component.
std::vector<Rational> reach_probabilities(const InducedChain& chain, const std::vector<std::vector<StateId>>& targets);

struct BsccAnalysis {
    std::vector<std::vector<std::size_t>> bsccs;  // chain-state indices, sorted
    std::vector<Rational> absorption;             // probability of ending in each BSCC
    std::vector<std::size_t> bscc_of;             // per chain state, npos when transient
};

BsccAnalysis bscc_analysis(const MarkovChain& chain);

/// Initial distribution pushed through `values`: sum_i initial(i) * values[i].
Rational expectation(const SparseRow& distribution, const std::vector<Rational>& values);

}  // namespace mocheck
