#pragma once

#include "mocheck/product.hpp"
#include "mocheck/qualitative.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace mocheck {

inline constexpr const char* kDeadState = "dead";
inline constexpr std::size_t kMaxReductionProperties = 16;

/// Result of removing the states that cannot reach any target. Removed mass is redirected to an
/// explicit absorbing sink labelled "dead"; actions whose whole mass would go there are dropped.
struct CleanupReport {
    Mdp kept;
    std::vector<bool> removed;                  // by original state id
    std::vector<StateId> to_kept;               // original id -> kept id, npos when removed
    std::vector<StateId> from_kept;             // kept id -> original id, npos for the sink
    StateId dead = npos;                        // sink in `kept`, npos when nothing was redirected
    std::vector<std::vector<StateId>> targets;  // target sets renumbered into `kept`
    bool initial_all_bad = false;

    std::size_t num_removed() const;
};

/// Targets must be absorbing. Throws ArgumentError otherwise.
CleanupReport clean_up(const Mdp& mdp, const std::vector<std::vector<StateId>>& targets);

/// Reduced MDP: the product plus an absorbing s_R per used subset R, reachable through gamma_R from the states
/// of T_R for which R is maximal. F_i = { s_R : i in R }.
struct ReducedMdp {
    Mdp mdp;                                    // initial distribution = the dummy's successors
    ProductMdp product;
    std::vector<std::vector<StateId>> targets;  // F_i
    std::vector<StateId> product_state;         // per reduced state; npos for the s_R states
    std::vector<StateId> of_product;            // product state -> reduced state
    std::vector<TargetSet> target_sets;         // every nonempty R, in subset-mask order (mask - 1)

    std::size_t num_properties() const { return product.automata.size(); }
    /// Subset R encoded by a gamma_R action or s_R state name; empty when `name` is not one.
    static std::vector<std::size_t> subset_of(const std::string& name);
};

/// Computes T_R for every nonempty R over all automata of `product`.
std::vector<TargetSet> all_target_sets(const ProductMdp& product);
ReducedMdp build_reduction(ProductMdp product, std::vector<TargetSet> target_sets);
ReducedMdp build_reduction(const Mdp& mdp, const std::vector<RabinAutomaton>& automata);

/// Lifts a memoryless strategy of the cleaned-up reduced MDP to a finite-memory strategy of the source MDP:
/// it replays sigma on the product and, where sigma fires gamma_R, continues with mu_R.
FiniteMemoryStrategy lift_strategy(const ReducedMdp& reduced, const CleanupReport& cleanup, const Mdp& source,
                                   const MemorylessStrategy& sigma);

}  // namespace mocheck
