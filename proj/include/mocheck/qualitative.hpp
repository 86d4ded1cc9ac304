#pragma once

#include "mocheck/graph.hpp"
#include "mocheck/product.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace mocheck {

/// Maximal end components of the product in which, for every automaton in `subset`, some acceptance
/// pair is met (no avoid state inside, some repeat state inside). subset = {} gives all MECs.
std::vector<EndComponent> good_end_components(const ProductMdp& product, const std::vector<std::size_t>& subset);

/// States from which the controller can reach `goal` with probability 1 inside the sub-MDP.
std::vector<bool> almost_sure_reach(const Mdp& mdp, const std::vector<bool>& goal);

/// T_R: the almost-sure winning region for satisfying every property in `subset` together.
struct TargetSet {
    std::vector<std::size_t> subset;
    std::vector<bool> states;
    std::vector<EndComponent> good;

    bool contains(StateId state) const { return states[state]; }
    bool empty() const;
};

TargetSet compute_target_set(const ProductMdp& product, std::vector<std::size_t> subset);

/// mu_R on the product: mode 0 walks to a good end component along an attractor, mode 1+j stays in
/// good[j] playing its actions uniformly. Defined in mode 0 on every state of T_R.
FiniteMemoryStrategy synthesize_mu(const ProductMdp& product, const TargetSet& target);

struct QualitativeQuery {
    std::vector<std::size_t> sure;      // Phi: Pr = 1
    std::vector<std::size_t> positive;  // Psi: Pr > 0
};

struct QualitativeResult {
    bool satisfiable = false;
    ProductMdp product;
    std::vector<bool> surviving;                  // states of the pruned product
    std::optional<FiniteMemoryStrategy> product_strategy;
    std::optional<FiniteMemoryStrategy> strategy;  // lifted to the source MDP
};

/// Decides existence of a strategy with Pr(phi) = 1 for phi in Phi and Pr(psi) > 0 for psi in Psi
/// by graph analysis of the product; on success returns the two-phase witness strategy.
QualitativeResult decide_qualitative(const Mdp& mdp, const std::vector<RabinAutomaton>& automata,
                                     const QualitativeQuery& query);

}  // namespace mocheck
